//! Top-k selection and softmax+top-k.
//!
//! Selection keeps a [`TopKBuffer`] of `K+1` slots: the first `K` hold the
//! running top values in non-increasing order, the last receives the
//! incoming element, which is then bubbled towards the front while it is
//! strictly greater than its neighbour. Equal values never swap, so among
//! ties the element seen first (the smaller index) ranks higher.
//!
//! Three softmax+top-k pipelines are provided, in decreasing order of
//! memory traffic:
//!
//! - [`safe_softmax_then_topk`] materializes the full softmax output and
//!   selects on it.
//! - [`safe_softmax_fused_topk`] makes the safe kernel's max and normalizer
//!   passes, then selects on `e^{x_i - m} / d` in a third pass without
//!   storing it.
//! - [`online_softmax_topk`] reads each input element exactly once,
//!   updating the online normalizer and selecting on the raw logits in the
//!   same loop. Only the `K` selected outputs are ever computed.

use crate::error::{check_input, check_k, Result};
use crate::instrumentation::{Load, Store};
use crate::kernels::{safe_into, safe_stats};
use crate::reduction::{Accumulator, MdPair, Precision};

/// The `K` largest values and their 0-based positions, values
/// non-increasing, ties broken towards the smaller index.
#[derive(Debug, Clone, PartialEq)]
pub struct TopKResult {
    pub values: Vec<f32>,
    pub indices: Vec<usize>,
}

impl TopKResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Running top-k scratch: `K` sorted slots plus one for the incoming
/// element.
#[derive(Debug, Clone)]
pub struct TopKBuffer {
    values: Vec<f32>,
    indices: Vec<Option<usize>>,
}

impl TopKBuffer {
    /// Panics if `k` is zero.
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "top-k width must be at least 1");
        TopKBuffer {
            values: vec![f32::NEG_INFINITY; k + 1],
            indices: vec![None; k + 1],
        }
    }

    pub fn k(&self) -> usize {
        self.values.len() - 1
    }

    #[inline(always)]
    pub fn insert(&mut self, value: f32, index: usize) {
        let k = self.k();
        self.values[k] = value;
        self.indices[k] = Some(index);
        let mut slot = k;
        while slot >= 1 && self.values[slot - 1] < self.values[slot] {
            self.values.swap(slot - 1, slot);
            self.indices.swap(slot - 1, slot);
            slot -= 1;
        }
        debug_assert!(slot == k || self.is_sorted());
    }

    /// The first `K` values.
    pub fn values(&self) -> &[f32] {
        &self.values[..self.k()]
    }

    /// The first `K` indices; `None` marks a slot no element has reached.
    pub fn indices(&self) -> &[Option<usize>] {
        &self.indices[..self.k()]
    }

    /// Whether the first `K` slots are non-increasing.
    pub fn is_sorted(&self) -> bool {
        self.values().windows(2).all(|w| w[0] >= w[1])
    }

    fn filled_indices(&self) -> Vec<usize> {
        self.indices()
            .iter()
            .map(|p| p.expect("every slot is filled when K <= V"))
            .collect()
    }
}

/// The `k` largest elements of `y`.
pub fn topk_of(y: &[f32], k: usize) -> Result<TopKResult> {
    check_input(y)?;
    check_k(k, y.len())?;
    let mut values = vec![0.0; k];
    let indices = select_into(y, k, &mut values[..]);
    Ok(TopKResult { values, indices })
}

/// Safe softmax into a full output vector, then top-k over it.
pub fn safe_softmax_then_topk(x: &[f32], k: usize) -> Result<TopKResult> {
    safe_softmax_then_topk_in::<f32>(x, k)
}

pub fn safe_softmax_then_topk_with(x: &[f32], k: usize, precision: Precision) -> Result<TopKResult> {
    match precision {
        Precision::Single => safe_softmax_then_topk_in::<f32>(x, k),
        Precision::Double => safe_softmax_then_topk_in::<f64>(x, k),
    }
}

pub fn safe_softmax_then_topk_in<A: Accumulator>(x: &[f32], k: usize) -> Result<TopKResult> {
    check_input(x)?;
    check_k(k, x.len())?;
    let mut y = vec![0.0; x.len()];
    let mut values = vec![0.0; k];
    let indices = unfused_into::<A, _, _, _>(x, &mut y[..], k, &mut values[..]);
    Ok(TopKResult { values, indices })
}

/// Safe softmax statistics in two passes, selection in a third, without
/// storing the softmax output.
pub fn safe_softmax_fused_topk(x: &[f32], k: usize) -> Result<TopKResult> {
    safe_softmax_fused_topk_in::<f32>(x, k)
}

pub fn safe_softmax_fused_topk_with(x: &[f32], k: usize, precision: Precision) -> Result<TopKResult> {
    match precision {
        Precision::Single => safe_softmax_fused_topk_in::<f32>(x, k),
        Precision::Double => safe_softmax_fused_topk_in::<f64>(x, k),
    }
}

pub fn safe_softmax_fused_topk_in<A: Accumulator>(x: &[f32], k: usize) -> Result<TopKResult> {
    check_input(x)?;
    check_k(k, x.len())?;
    let mut values = vec![0.0; k];
    let indices = safe_fused_into::<A, _, _>(x, k, &mut values[..]);
    Ok(TopKResult { values, indices })
}

/// Single pass over `x`: online normalizer and top-k selection together.
pub fn online_softmax_topk(x: &[f32], k: usize) -> Result<TopKResult> {
    online_softmax_topk_in::<f32>(x, k)
}

pub fn online_softmax_topk_with(x: &[f32], k: usize, precision: Precision) -> Result<TopKResult> {
    match precision {
        Precision::Single => online_softmax_topk_in::<f32>(x, k),
        Precision::Double => online_softmax_topk_in::<f64>(x, k),
    }
}

pub fn online_softmax_topk_in<A: Accumulator>(x: &[f32], k: usize) -> Result<TopKResult> {
    check_input(x)?;
    check_k(k, x.len())?;
    let mut values = vec![0.0; k];
    let indices = online_fused_into::<A, _, _>(x, k, &mut values[..]);
    Ok(TopKResult { values, indices })
}

pub(crate) fn select_into<S, D>(y: &S, k: usize, values: &mut D) -> Vec<usize>
where
    S: Load + ?Sized,
    D: Store + ?Sized,
{
    let mut buffer = TopKBuffer::new(k);
    for i in 0..y.len() {
        buffer.insert(y.load(i), i);
    }
    for (slot, &v) in buffer.values().iter().enumerate() {
        values.store(slot, v);
    }
    buffer.filled_indices()
}

pub(crate) fn unfused_into<A, S, Y, D>(x: &S, y: &mut Y, k: usize, values: &mut D) -> Vec<usize>
where
    A: Accumulator,
    S: Load + ?Sized,
    Y: Load + Store + ?Sized,
    D: Store + ?Sized,
{
    safe_into::<A, _, _>(x, y);
    select_into(y, k, values)
}

pub(crate) fn safe_fused_into<A, S, D>(x: &S, k: usize, values: &mut D) -> Vec<usize>
where
    A: Accumulator,
    S: Load + ?Sized,
    D: Store + ?Sized,
{
    let state = safe_stats::<A, _>(x);
    let mut buffer = TopKBuffer::new(k);
    for i in 0..x.len() {
        buffer.insert(state.probability(x.load(i)), i);
    }
    for (slot, &v) in buffer.values().iter().enumerate() {
        values.store(slot, v);
    }
    buffer.filled_indices()
}

pub(crate) fn online_fused_into<A, S, D>(x: &S, k: usize, values: &mut D) -> Vec<usize>
where
    A: Accumulator,
    S: Load + ?Sized,
    D: Store + ?Sized,
{
    let mut state = MdPair::<A>::identity();
    let mut buffer = TopKBuffer::new(k);
    for j in 0..x.len() {
        let v = x.load(j);
        state = state.absorb_finite(v);
        buffer.insert(v, j);
    }
    for (slot, &u) in buffer.values().iter().enumerate() {
        values.store(slot, state.probability(u));
    }
    buffer.filled_indices()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::SoftmaxError;

    type Pipeline = fn(&[f32], usize) -> Result<TopKResult>;

    const PIPELINES: [(&str, Pipeline); 3] = [
        ("safe_then_topk", safe_softmax_then_topk),
        ("safe_fused_topk", safe_softmax_fused_topk),
        ("online_fused_topk", online_softmax_topk),
    ];

    #[test]
    fn buffer_starts_empty() {
        let b = TopKBuffer::new(3);
        assert_eq!(b.k(), 3);
        assert_eq!(b.values(), &[f32::NEG_INFINITY; 3]);
        assert_eq!(b.indices(), &[None; 3]);
        assert!(b.is_sorted());
    }

    #[test]
    #[should_panic]
    fn buffer_rejects_zero_width() {
        TopKBuffer::new(0);
    }

    #[test]
    fn buffer_insertion_keeps_order() {
        let mut b = TopKBuffer::new(3);
        for (i, v) in [0.5_f32, 2.0, -1.0, 2.0, 3.0, 0.0].into_iter().enumerate() {
            b.insert(v, i);
            assert!(b.is_sorted());
        }
        assert_eq!(b.values(), &[3.0, 2.0, 2.0]);
        assert_eq!(b.indices(), &[Some(4), Some(1), Some(3)]);
    }

    #[test]
    fn topk_examples() {
        let r = topk_of(&[0.1, 0.7, 0.2], 2).unwrap();
        assert_eq!(r.values, vec![0.7, 0.2]);
        assert_eq!(r.indices, vec![1, 2]);
        let r = topk_of(&[0.5, 0.5], 1).unwrap();
        assert_eq!(r.values, vec![0.5]);
        assert_eq!(r.indices, vec![0]);
    }

    #[test]
    fn topk_rejects_bad_k() {
        assert_eq!(
            topk_of(&[1.0, 2.0], 0),
            Err(SoftmaxError::InvalidK { k: 0, len: 2 })
        );
        assert_eq!(
            topk_of(&[1.0, 2.0], 3),
            Err(SoftmaxError::InvalidK { k: 3, len: 2 })
        );
        assert_eq!(topk_of(&[], 1), Err(SoftmaxError::EmptyInput));
        for (_, f) in PIPELINES {
            assert_eq!(f(&[1.0], 2), Err(SoftmaxError::InvalidK { k: 2, len: 1 }));
            assert_eq!(f(&[], 1), Err(SoftmaxError::EmptyInput));
            assert_eq!(
                f(&[1.0, f32::NAN], 1),
                Err(SoftmaxError::NonFiniteInput { index: 1 })
            );
        }
    }

    #[test]
    fn shared_examples() {
        // softmax([1,2,3]) = [0.0900305731703805, 0.2447284710547976, 0.6652409557748218]
        for (name, f) in PIPELINES {
            let r = f(&[1.0, 2.0, 3.0], 1).unwrap();
            assert_eq!(r.indices, vec![2], "{name}");
            assert!((r.values[0] as f64 - 0.665_240_955_774_821_8).abs() < 1e-6, "{name}");

            let r = f(&[1.0, 2.0, 3.0], 2).unwrap();
            assert_eq!(r.indices, vec![2, 1], "{name}");
            assert!((r.values[1] as f64 - 0.244_728_471_054_797_64).abs() < 1e-6, "{name}");

            let r = f(&[5.0], 1).unwrap();
            assert_eq!(r.values, vec![1.0], "{name}");
            assert_eq!(r.indices, vec![0], "{name}");

            let r = f(&[2.0, 2.0, 1.0], 2).unwrap();
            assert_eq!(r.indices, vec![0, 1], "{name}");

            let v = 6;
            let r = f(&[0.75; 6], v).unwrap();
            assert_eq!(r.indices, (0..v).collect::<Vec<_>>(), "{name}");
            for value in r.values {
                assert!((value - 1.0 / v as f32).abs() < 1e-7, "{name}");
            }
        }
    }

    #[test]
    fn fused_values_equal_materialized_outputs() {
        let x: Vec<f32> = (0..500).map(|i| ((i * 7919) % 997) as f32 * 0.02 - 10.0).collect();
        let y = crate::kernels::safe_softmax(&x).unwrap();
        let unfused = safe_softmax_then_topk(&x, 10).unwrap();
        let fused = safe_softmax_fused_topk(&x, 10).unwrap();
        assert_eq!(unfused, fused);
        for (v, &z) in fused.values.iter().zip(&fused.indices) {
            assert_eq!(*v, y[z]);
        }
        let online_y = crate::kernels::online_softmax(&x).unwrap();
        let online = online_softmax_topk(&x, 10).unwrap();
        assert_eq!(online.indices, fused.indices);
        for (v, &z) in online.values.iter().zip(&online.indices) {
            assert_eq!(*v, online_y[z]);
        }
    }

    #[test]
    fn selection_on_logits_matches_selection_on_probabilities() {
        let x = [0.3_f32, -2.0, 4.5, 4.5, 1.0, 9.0, -7.0];
        let on_logits = topk_of(&x, 4).unwrap();
        let fused = online_softmax_topk(&x, 4).unwrap();
        assert_eq!(on_logits.indices, fused.indices);
        assert_eq!(fused.indices, vec![5, 2, 3, 4]);
    }

    #[test]
    fn double_precision_pipelines_agree() {
        let x: Vec<f32> = (0..300).map(|i| ((i * 31) % 89) as f32 * 0.1).collect();
        let a = safe_softmax_then_topk_with(&x, 5, Precision::Double).unwrap();
        let b = safe_softmax_fused_topk_with(&x, 5, Precision::Double).unwrap();
        let c = online_softmax_topk_with(&x, 5, Precision::Double).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.indices, c.indices);
    }
}
