//! The three softmax+top-k pipelines on one input: unfused, safe fused and
//! the single-pass online fused variant.
//!
//! ```bash
//! cargo run -p online-softmax --example fused_topk
//! ```

use online_softmax::bench::generate_inputs;
use online_softmax::topk::{online_softmax_topk, safe_softmax_fused_topk, safe_softmax_then_topk};

fn main() -> online_softmax::Result<()> {
    let x = &generate_inputs(7, 1, 32_000)[0];
    let k = 5;
    for (name, result) in [
        ("safe softmax then top-k", safe_softmax_then_topk(x, k)?),
        ("safe softmax fused top-k", safe_softmax_fused_topk(x, k)?),
        ("online softmax fused top-k", online_softmax_topk(x, k)?),
    ] {
        println!("{name}");
        for (v, z) in result.values.iter().zip(&result.indices) {
            println!("  y[{z:>5}] = {v:.8e}  (x = {:.5})", x[*z]);
        }
    }
    Ok(())
}
