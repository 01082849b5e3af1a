use std::collections::BTreeMap;
use std::hint::black_box;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::algorithm::Algorithm;
use crate::error::SoftmaxError;
use crate::instrumentation::{count_accesses, AccessStats};
use crate::reduction::Precision;

use super::{BenchError, SweepConfig};

/// `batch` vectors of `len` standard-normal elements, reproducible from
/// `seed`.
pub fn generate_inputs(seed: u64, batch: usize, len: usize) -> Vec<Vec<f32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..batch)
        .map(|_| (0..len).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect()
}

/// Measurements for one vector size.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub v: usize,
    /// Elements per second per timed algorithm; `None` marks a failed cell.
    /// Empty for count-only sweeps.
    pub throughput: Vec<(Algorithm, Option<f64>)>,
    pub counts: Vec<(Algorithm, AccessStats)>,
}

impl SweepRow {
    pub fn throughput_of(&self, algorithm: Algorithm) -> Option<f64> {
        self.throughput
            .iter()
            .find(|(a, _)| *a == algorithm)
            .and_then(|(_, t)| *t)
    }

    /// Throughput of `numerator` divided by throughput of `denominator`.
    pub fn speedup(&self, numerator: Algorithm, denominator: Algorithm) -> Option<f64> {
        Some(self.throughput_of(numerator)? / self.throughput_of(denominator)?)
    }

    pub fn counts_of(&self, algorithm: Algorithm) -> Option<AccessStats> {
        self.counts
            .iter()
            .find(|(a, _)| *a == algorithm)
            .map(|(_, c)| *c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub algorithm: Algorithm,
    pub v: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepReport {
    /// One row per distinct vector size, ascending.
    pub rows: Vec<SweepRow>,
    pub failures: Vec<CellFailure>,
}

/// Runs the sweep described by `cfg`.
///
/// Kernel errors fail only their own (algorithm, V) cell; the sweep goes
/// on and the failure is listed in the report.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport, BenchError> {
    cfg.validate()?;
    let pool = if cfg.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| BenchError::Config(format!("thread pool: {e}")))?;
        Some(pool)
    } else {
        None
    };

    let mut sizes = cfg.vector_sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();

    let mut report = SweepReport::default();
    for v in sizes {
        let mut counts = Vec::with_capacity(cfg.algorithms.len());
        for &algorithm in &cfg.algorithms {
            let k = algorithm.uses_topk().then_some(cfg.k);
            let stats = count_accesses(algorithm, v, k)
                .map_err(|e| BenchError::Config(format!("{algorithm} at V = {v}: {e}")))?;
            counts.push((algorithm, stats));
        }

        let throughput = if cfg.counts_only {
            Vec::new()
        } else {
            time_size(cfg, v, pool.as_ref(), &mut report.failures)
        };
        report.rows.push(SweepRow {
            v,
            throughput,
            counts,
        });
    }
    Ok(report)
}

fn time_size(
    cfg: &SweepConfig,
    v: usize,
    pool: Option<&rayon::ThreadPool>,
    failures: &mut Vec<CellFailure>,
) -> Vec<(Algorithm, Option<f64>)> {
    let inputs = generate_inputs(cfg.seed, cfg.batch, v);
    let mut samples: BTreeMap<Algorithm, Vec<f64>> = BTreeMap::new();
    let mut failed: BTreeMap<Algorithm, SoftmaxError> = BTreeMap::new();

    // Algorithms are interleaved within each repetition so slow drift in
    // machine load hits all of them alike, and the order flips every
    // repetition so none always runs right after the same neighbour.
    for rep in 0..cfg.warmup + cfg.repeats {
        let order: Vec<Algorithm> = if rep % 2 == 0 {
            cfg.algorithms.clone()
        } else {
            cfg.algorithms.iter().rev().copied().collect()
        };
        for algorithm in order {
            if failed.contains_key(&algorithm) {
                continue;
            }
            let k = algorithm.uses_topk().then_some(cfg.k);
            let start = Instant::now();
            let outcome = run_batch(algorithm, &inputs, k, pool);
            let elapsed = start.elapsed().as_secs_f64();
            match outcome {
                Ok(()) if rep >= cfg.warmup => samples.entry(algorithm).or_default().push(elapsed),
                Ok(()) => {}
                Err(e) => {
                    failed.insert(algorithm, e);
                }
            }
        }
    }

    let elements = (cfg.batch * v) as f64;
    cfg.algorithms
        .iter()
        .map(|&algorithm| {
            if let Some(e) = failed.get(&algorithm) {
                failures.push(CellFailure {
                    algorithm,
                    v,
                    message: e.to_string(),
                });
                return (algorithm, None);
            }
            let t = samples.get_mut(&algorithm).map(|s| median(s));
            (algorithm, t.map(|secs| elements / secs))
        })
        .collect()
}

fn run_batch(
    algorithm: Algorithm,
    inputs: &[Vec<f32>],
    k: Option<usize>,
    pool: Option<&rayon::ThreadPool>,
) -> Result<(), SoftmaxError> {
    let one = |x: &Vec<f32>| algorithm.run(black_box(x), k, Precision::Single).map(|out| {
        black_box(out);
    });
    match pool {
        Some(pool) => pool.install(|| inputs.par_iter().try_for_each(one)),
        None => inputs.iter().try_for_each(one),
    }
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2.0
    }
}
