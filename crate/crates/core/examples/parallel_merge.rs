//! Splits a long vector into chunks, reduces each chunk on the rayon pool
//! and merges the partial (max, normalizer) states.
//!
//! ```bash
//! cargo run --release -p online-softmax --example parallel_merge
//! ```

use online_softmax::bench::generate_inputs;
use online_softmax::instrumentation::oracle::{oracle_normalizer, relative_error};
use online_softmax::reduction::{merge_balanced, run_chunked, run_chunked_parallel, run_sequential};
use online_softmax::MdPair;

fn main() -> online_softmax::Result<()> {
    let x = &generate_inputs(42, 1, 1 << 20)[0];
    let (m, d) = oracle_normalizer(x)?;
    let seq = run_sequential::<f64>(x)?;
    println!("oracle      m = {m:.6} d = {d:.6}");
    println!("sequential  m = {:.6} d = {:.6}", seq.max(), seq.normalizer());

    for chunk in [1 << 10, 1 << 14, 1 << 18] {
        let serial = run_chunked::<f64>(x, chunk)?;
        let parallel = run_chunked_parallel::<f64>(x, chunk)?;
        let parts: Vec<MdPair<f64>> = x.chunks(chunk).map(run_sequential::<f64>).collect::<Result<_, _>>()?;
        let tree = merge_balanced(&parts);
        println!(
            "chunk {chunk:>6}: left fold rel err {:.2e}, parallel bit-identical {}, tree rel err {:.2e}",
            relative_error(serial.normalizer(), d),
            serial == parallel,
            relative_error(tree.normalizer(), d),
        );
    }

    let f32_seq = run_sequential::<f32>(x)?;
    let f32_chunked = run_chunked::<f32>(x, 1 << 12)?;
    println!(
        "f32 accumulators: sequential rel err {:.2e}, chunked rel err {:.2e}",
        relative_error(f32_seq.normalizer() as f64, d),
        relative_error(f32_chunked.normalizer() as f64, d),
    );
    Ok(())
}
