//! Double-precision reference implementations.
//!
//! These evaluate the max-subtracted softmax formula directly in `f64` and
//! select top-k by a full sort. They share no code with the kernels and
//! serve as ground truth in tests.

use crate::error::{check_input, check_k, Result};
use crate::topk::TopKResult;

/// `(max x, Σ e^{x - max})` in double precision.
pub fn oracle_normalizer(x: &[f32]) -> Result<(f64, f64)> {
    check_input(x)?;
    let m = x.iter().map(|&v| v as f64).fold(f64::NEG_INFINITY, f64::max);
    let d = x.iter().map(|&v| (v as f64 - m).exp()).sum();
    Ok((m, d))
}

/// Softmax of `x` evaluated in double precision.
pub fn oracle_softmax(x: &[f32]) -> Result<Vec<f64>> {
    let (m, d) = oracle_normalizer(x)?;
    Ok(x.iter().map(|&v| (v as f64 - m).exp() / d).collect())
}

/// Top-k by sorting all positions on (value descending, index ascending).
pub fn oracle_topk(y: &[f32], k: usize) -> Result<TopKResult> {
    check_input(y)?;
    check_k(k, y.len())?;
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| y[b].total_cmp(&y[a]).then(a.cmp(&b)));
    order.truncate(k);
    Ok(TopKResult {
        values: order.iter().map(|&i| y[i]).collect(),
        indices: order,
    })
}

/// Number of representable `f32` values between `a` and `b`.
/// `+0.0` and `-0.0` are zero apart; any NaN gives `u32::MAX`.
pub fn ulp_distance(a: f32, b: f32) -> u32 {
    if a.is_nan() || b.is_nan() {
        return u32::MAX;
    }
    fn ordinal(v: f32) -> i64 {
        let bits = v.to_bits() as i32;
        if bits < 0 {
            -((bits & i32::MAX) as i64)
        } else {
            bits as i64
        }
    }
    (ordinal(a) - ordinal(b)).unsigned_abs().min(u32::MAX as u64) as u32
}

/// `|approx - exact| / |exact|`; zero when both are zero.
pub fn relative_error(approx: f64, exact: f64) -> f64 {
    if approx == exact {
        return 0.0;
    }
    (approx - exact).abs() / exact.abs()
}
