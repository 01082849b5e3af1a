//! Whole-vector softmax.
//!
//! | kernel            | passes over `x`                    | overflow safe |
//! |-------------------|------------------------------------|---------------|
//! | [`naive_softmax`] | normalizer, output                 | no            |
//! | [`safe_softmax`]  | max, normalizer, output            | yes           |
//! | [`online_softmax`]| max and normalizer together, output| yes           |
//!
//! Every kernel returns a fresh output vector and rejects empty or
//! non-finite input.

use crate::error::{check_input, Result};
use crate::instrumentation::{Load, Store};
use crate::reduction::{fold_source, Accumulator, MdPair, Precision};

/// `y_i = e^{x_i} / Σ e^{x_j}` with no max subtraction.
///
/// Accumulates in single precision. Any `x_i` above `ln(f32::MAX) ≈ 88.72`
/// overflows the exponential and the result contains `inf` or `NaN`; the
/// output is returned as computed.
pub fn naive_softmax(x: &[f32]) -> Result<Vec<f32>> {
    check_input(x)?;
    let mut y = vec![0.0; x.len()];
    naive_into(x, &mut y[..]);
    Ok(y)
}

/// Max-subtracted softmax in three passes, single-precision accumulators.
pub fn safe_softmax(x: &[f32]) -> Result<Vec<f32>> {
    safe_softmax_in::<f32>(x)
}

pub fn safe_softmax_with(x: &[f32], precision: Precision) -> Result<Vec<f32>> {
    match precision {
        Precision::Single => safe_softmax_in::<f32>(x),
        Precision::Double => safe_softmax_in::<f64>(x),
    }
}

pub fn safe_softmax_in<A: Accumulator>(x: &[f32]) -> Result<Vec<f32>> {
    check_input(x)?;
    let mut y = vec![0.0; x.len()];
    safe_into::<A, _, _>(x, &mut y[..]);
    Ok(y)
}

/// Softmax with the max and normalizer computed in a single pass,
/// single-precision accumulators.
pub fn online_softmax(x: &[f32]) -> Result<Vec<f32>> {
    online_softmax_in::<f32>(x)
}

pub fn online_softmax_with(x: &[f32], precision: Precision) -> Result<Vec<f32>> {
    match precision {
        Precision::Single => online_softmax_in::<f32>(x),
        Precision::Double => online_softmax_in::<f64>(x),
    }
}

pub fn online_softmax_in<A: Accumulator>(x: &[f32]) -> Result<Vec<f32>> {
    check_input(x)?;
    let mut y = vec![0.0; x.len()];
    online_into::<A, _, _>(x, &mut y[..]);
    Ok(y)
}

pub(crate) fn naive_into<S, D>(x: &S, y: &mut D)
where
    S: Load + ?Sized,
    D: Store + ?Sized,
{
    let mut d = 0.0_f32;
    for j in 0..x.len() {
        d += x.load(j).exp();
    }
    for i in 0..x.len() {
        y.store(i, x.load(i).exp() / d);
    }
}

pub(crate) fn max_pass<S: Load + ?Sized>(x: &S) -> f32 {
    let mut m = f32::NEG_INFINITY;
    for k in 0..x.len() {
        m = m.max(x.load(k));
    }
    m
}

pub(crate) fn normalizer_pass<A, S>(x: &S, m: A) -> A
where
    A: Accumulator,
    S: Load + ?Sized,
{
    let mut d = A::zero();
    for j in 0..x.len() {
        d = d + (A::from_single(x.load(j)) - m).exp();
    }
    d
}

/// Max and normalizer of `x` by the two-pass route.
pub(crate) fn safe_stats<A, S>(x: &S) -> MdPair<A>
where
    A: Accumulator,
    S: Load + ?Sized,
{
    let m = A::from_single(max_pass(x));
    let d = normalizer_pass(x, m);
    MdPair::new(m, d).expect("non-empty finite input has d >= 1")
}

pub(crate) fn output_pass<A, S, D>(x: &S, y: &mut D, state: &MdPair<A>)
where
    A: Accumulator,
    S: Load + ?Sized,
    D: Store + ?Sized,
{
    for i in 0..x.len() {
        y.store(i, state.probability(x.load(i)));
    }
}

pub(crate) fn safe_into<A, S, D>(x: &S, y: &mut D)
where
    A: Accumulator,
    S: Load + ?Sized,
    D: Store + ?Sized,
{
    let state = safe_stats::<A, _>(x);
    output_pass(x, y, &state);
}

pub(crate) fn online_into<A, S, D>(x: &S, y: &mut D)
where
    A: Accumulator,
    S: Load + ?Sized,
    D: Store + ?Sized,
{
    let state = fold_source::<A, _>(x);
    output_pass(x, y, &state);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::SoftmaxError;
    use crate::instrumentation::oracle::ulp_distance;

    // e^{x_i - 3} / Σ for x = [1, 2, 3], evaluated in f64
    const SOFTMAX_123: [f64; 3] = [0.090_030_573_170_380_46, 0.244_728_471_054_797_64, 0.665_240_955_774_821_8];

    fn assert_close(y: &[f32], expected: &[f64], rel: f64) {
        assert_eq!(y.len(), expected.len());
        for (a, b) in y.iter().zip(expected) {
            let err = (*a as f64 - b).abs() / b.abs();
            assert!(err <= rel, "{a} vs {b}: rel {err}");
        }
    }

    #[test]
    fn single_element_is_one() {
        assert_eq!(naive_softmax(&[0.0]).unwrap(), vec![1.0]);
        assert_eq!(safe_softmax(&[0.0]).unwrap(), vec![1.0]);
        assert_eq!(online_softmax(&[0.0]).unwrap(), vec![1.0]);
        assert_eq!(online_softmax(&[-42.5]).unwrap(), vec![1.0]);
    }

    #[test]
    fn all_equal_is_uniform() {
        for c in [-3.0_f32, 0.0, 0.125, 10.0] {
            let x = [c; 4];
            assert_eq!(naive_softmax(&x).unwrap(), vec![0.25; 4]);
            assert_eq!(safe_softmax(&x).unwrap(), vec![0.25; 4]);
            assert_eq!(online_softmax(&x).unwrap(), vec![0.25; 4]);
        }
    }

    #[test]
    fn naive_overflows_where_safe_does_not() {
        let y = naive_softmax(&[100.0, 100.0]).unwrap();
        assert!(y.iter().all(|v| v.is_nan()), "{y:?}");
        assert_eq!(safe_softmax(&[100.0, 100.0]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(online_softmax(&[100.0, 100.0]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn one_two_three() {
        for y in [
            naive_softmax(&[1.0, 2.0, 3.0]).unwrap(),
            safe_softmax(&[1.0, 2.0, 3.0]).unwrap(),
            online_softmax(&[1.0, 2.0, 3.0]).unwrap(),
            safe_softmax_with(&[1.0, 2.0, 3.0], Precision::Double).unwrap(),
            online_softmax_with(&[1.0, 2.0, 3.0], Precision::Double).unwrap(),
        ] {
            assert_close(&y, &SOFTMAX_123, 1e-6);
        }
    }

    #[test]
    fn extreme_underflow_stays_finite() {
        // e^-87 / (1 + e^-87) = 1.6458114310822737e-38, just above f32::MIN_POSITIVE
        let y = safe_softmax(&[-87.0, 0.0]).unwrap();
        assert!(y.iter().all(|v| v.is_finite()));
        assert_eq!(y[1], 1.0);
        assert!(y[0] >= 0.0 && (y[0] as f64 - 1.645_811_431_082_273_7e-38).abs() < 1e-40);
        let y = online_softmax(&[-87.0, 0.0]).unwrap();
        assert_eq!(y[1], 1.0);
        assert!(y[0].is_finite());
    }

    #[test]
    fn online_matches_safe_on_unsorted_input() {
        let safe = safe_softmax(&[3.0, 1.0, 2.0]).unwrap();
        let online = online_softmax(&[3.0, 1.0, 2.0]).unwrap();
        for (a, b) in safe.iter().zip(&online) {
            assert!(ulp_distance(*a, *b) <= 2, "{a} vs {b}");
        }
    }

    #[test]
    fn descending_and_ascending_inputs() {
        let down: Vec<f32> = (0..50).map(|i| 10.0 - i as f32 * 0.5).collect();
        let up: Vec<f32> = down.iter().rev().copied().collect();
        for x in [&down, &up] {
            let safe = safe_softmax(x).unwrap();
            let online = online_softmax(x).unwrap();
            for (a, b) in safe.iter().zip(&online) {
                assert!(ulp_distance(*a, *b) <= 4, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        for f in [naive_softmax, safe_softmax, online_softmax] {
            assert_eq!(f(&[]), Err(SoftmaxError::EmptyInput));
            assert_eq!(
                f(&[0.0, f32::INFINITY]),
                Err(SoftmaxError::NonFiniteInput { index: 1 })
            );
            assert_eq!(
                f(&[f32::NAN]),
                Err(SoftmaxError::NonFiniteInput { index: 0 })
            );
        }
    }

    #[test]
    fn deterministic_reruns() {
        let x: Vec<f32> = (0..257).map(|i| ((i * 7919) % 613) as f32 * 0.05 - 15.0).collect();
        assert_eq!(online_softmax(&x).unwrap(), online_softmax(&x).unwrap());
        assert_eq!(safe_softmax(&x).unwrap(), safe_softmax(&x).unwrap());
    }
}
