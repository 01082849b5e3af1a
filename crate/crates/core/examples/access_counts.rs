//! Exact element loads and stores of every algorithm, measured by running
//! the kernels over counting vectors.
//!
//! ```bash
//! cargo run -p online-softmax --example access_counts
//! ```

use online_softmax::instrumentation::count_accesses;
use online_softmax::Algorithm;

fn main() -> online_softmax::Result<()> {
    let k = 5;
    for v in [100, 1000, 100_000] {
        println!("V = {v}, K = {k}");
        println!("  {:<24} {:>8} {:>8} {:>8} {:>10}", "algorithm", "loads", "stores", "result", "per elem");
        for a in Algorithm::ALL {
            let s = count_accesses(a, v, a.uses_topk().then_some(k))?;
            println!(
                "  {:<24} {:>8} {:>8} {:>8} {:>10.2}",
                a.key(),
                s.loads,
                s.stores,
                s.result_stores,
                s.per_element(v)
            );
        }
    }
    Ok(())
}
