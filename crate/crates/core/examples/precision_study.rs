//! Measures how far the single- and double-accumulator kernels drift from
//! the f64 reference as vectors grow.
//!
//! ```bash
//! cargo run --release -p online-softmax --example precision_study
//! ```

use online_softmax::instrumentation::oracle::{oracle_normalizer, oracle_softmax, relative_error, ulp_distance};
use online_softmax::kernels::{online_softmax_with, safe_softmax_with};
use online_softmax::reduction::{run_chunked, run_sequential};
use online_softmax::Precision;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Clone, Copy)]
enum Dist {
    Normal,
    Uniform(f32),
}

fn sample(rng: &mut ChaCha8Rng, dist: Dist, len: usize) -> Vec<f32> {
    (0..len)
        .map(|_| match dist {
            Dist::Normal => rng.sample(StandardNormal),
            Dist::Uniform(r) => rng.random_range(-r..=r),
        })
        .collect()
}

fn max_rel(y: &[f32], oracle: &[f64]) -> f64 {
    y.iter()
        .zip(oracle)
        .filter(|(_, &o)| o > 1e-30)
        .map(|(&a, &o)| relative_error(a as f64, o))
        .fold(0.0, f64::max)
}

fn main() {
    let trials = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(2018);
    println!(
        "{:<12} {:>7} | {:>10} {:>10} | {:>10} {:>10} | {:>8} | {:>10} {:>10}",
        "inputs", "V", "safe f32", "online f32", "safe f64", "online f64", "ulps s/o", "seq d f32", "chunk d"
    );
    for (name, dist) in [
        ("normal", Dist::Normal),
        ("uniform 10", Dist::Uniform(10.0)),
        ("uniform 100", Dist::Uniform(100.0)),
    ] {
        for len in [100, 1_000, 4_096, 10_000, 100_000] {
            let mut worst = [0.0_f64; 6];
            let mut ulps = 0;
            for _ in 0..trials {
                let x = sample(&mut rng, dist, len);
                let oracle = oracle_softmax(&x).unwrap();
                let (_, d_ref) = oracle_normalizer(&x).unwrap();
                let s32 = safe_softmax_with(&x, Precision::Single).unwrap();
                let o32 = online_softmax_with(&x, Precision::Single).unwrap();
                let s64 = safe_softmax_with(&x, Precision::Double).unwrap();
                let o64 = online_softmax_with(&x, Precision::Double).unwrap();
                let seq = run_sequential::<f32>(&x).unwrap();
                let chunked = run_chunked::<f32>(&x, 64).unwrap();
                let errs = [
                    max_rel(&s32, &oracle),
                    max_rel(&o32, &oracle),
                    max_rel(&s64, &oracle),
                    max_rel(&o64, &oracle),
                    relative_error(seq.normalizer() as f64, d_ref),
                    relative_error(chunked.normalizer() as f64, seq.normalizer() as f64),
                ];
                for (w, e) in worst.iter_mut().zip(errs) {
                    *w = w.max(e);
                }
                let u = s32.iter().zip(&o32).map(|(&a, &b)| ulp_distance(a, b)).max().unwrap();
                ulps = ulps.max(u);
            }
            println!(
                "{:<12} {:>7} | {:>10.2e} {:>10.2e} | {:>10.2e} {:>10.2e} | {:>8} | {:>10.2e} {:>10.2e}",
                name, len, worst[0], worst[1], worst[2], worst[3], ulps, worst[4], worst[5]
            );
        }
    }
}
