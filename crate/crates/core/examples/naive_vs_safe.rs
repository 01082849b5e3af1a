//! Naive softmax overflows once a logit passes ln(f32::MAX) ≈ 88.7; the
//! max-subtracted kernels do not.
//!
//! ```bash
//! cargo run -p online-softmax --example naive_vs_safe
//! ```

use online_softmax::kernels::{naive_softmax, online_softmax, safe_softmax};

fn main() -> online_softmax::Result<()> {
    for x in [vec![1.0_f32, 2.0, 3.0], vec![80.0, 88.0, 88.5], vec![90.0, 100.0, 120.0], vec![-120.0, -110.0, -104.0]] {
        println!("x      = {x:?}");
        println!("naive  = {:?}", naive_softmax(&x)?);
        println!("safe   = {:?}", safe_softmax(&x)?);
        println!("online = {:?}", online_softmax(&x)?);
        println!();
    }
    Ok(())
}
