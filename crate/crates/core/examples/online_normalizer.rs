//! Streams logits through the running (max, normalizer) state one element
//! at a time, then compares with the two-pass statistics.
//!
//! ```bash
//! cargo run -p online-softmax --example online_normalizer
//! ```

use online_softmax::instrumentation::oracle::oracle_normalizer;
use online_softmax::MdPair;

fn main() -> online_softmax::Result<()> {
    let x = [0.5_f32, 2.0, -1.0, 3.5, 3.5, 1.0, 7.25, -4.0];
    let mut state = MdPair::<f32>::identity();
    println!("{:>3} {:>6} {:>8} {:>10}", "j", "x_j", "m_j", "d_j");
    for (j, &v) in x.iter().enumerate() {
        state = state.absorb(v)?;
        println!("{:>3} {:>6} {:>8} {:>10.6}", j + 1, v, state.max(), state.normalizer());
    }
    let (m, d) = oracle_normalizer(&x)?;
    println!("two-pass reference: m = {m}, d = {d:.6}");
    let y: Vec<f32> = x.iter().map(|&v| state.probability(v)).collect();
    println!("softmax = {y:?}");
    Ok(())
}
