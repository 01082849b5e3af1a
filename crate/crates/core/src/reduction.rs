//! The running `(max, normalizer)` state behind online softmax.
//!
//! After absorbing elements `x_1..x_j` the state holds `m_j = max x_k` and
//! `d_j = Σ e^{x_k - m_j}`. Absorbing the next element rescales `d` to the
//! new maximum before adding the new term:
//!
//! ```text
//! m' = max(m, x)
//! d' = d · e^{m - m'} + e^{x - m'}
//! ```
//!
//! Two states merge the same way ([`MdPair::merge`]). The merge is
//! associative and commutative with identity `(-∞, 0)`, so a vector can be
//! split into chunks, each chunk reduced independently, and the partial
//! states combined in any bracketing.

use std::fmt::Debug;

use num_traits::Float;
use rayon::prelude::*;

use crate::error::{check_input, Result, SoftmaxError};
use crate::instrumentation::Load;

/// Floating-point type used for the running max and normalizer.
pub trait Accumulator: Float + Into<f64> + Debug + Send + Sync + 'static {
    /// Exact conversion from single precision.
    fn from_single(x: f32) -> Self;

    /// Rounds to single precision.
    fn narrow(self) -> f32;
}

impl Accumulator for f32 {
    #[inline(always)]
    fn from_single(x: f32) -> Self {
        x
    }

    #[inline(always)]
    fn narrow(self) -> f32 {
        self
    }
}

impl Accumulator for f64 {
    #[inline(always)]
    fn from_single(x: f32) -> Self {
        x as f64
    }

    #[inline(always)]
    fn narrow(self) -> f32 {
        self as f32
    }
}

/// Width of the accumulators for `m` and `d`.
///
/// Inputs and outputs are always single precision. With `Double` the
/// exponent argument `x - m`, the exponential and the normalizer are all
/// evaluated in double precision; this is needed for vectors longer than
/// single precision can count (`d ≤ V` must stay representable) and gives
/// results accurate to the final rounding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Precision {
    #[default]
    Single,
    Double,
}

/// Running maximum `m` and normalizer `d = Σ e^{x - m}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdPair<A = f32> {
    m: A,
    d: A,
}

impl<A: Accumulator> Default for MdPair<A> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<A: Accumulator> MdPair<A> {
    /// The state before any element: `(-∞, 0)`.
    #[inline]
    pub fn identity() -> Self {
        MdPair {
            m: A::neg_infinity(),
            d: A::zero(),
        }
    }

    /// Builds a state from parts. Returns `None` unless the pair is the
    /// identity or has a finite max and a finite positive normalizer.
    pub fn new(max: A, normalizer: A) -> Option<Self> {
        let identity = max == A::neg_infinity() && normalizer == A::zero();
        let valid = max.is_finite() && normalizer.is_finite() && normalizer > A::zero();
        (identity || valid).then_some(MdPair {
            m: max,
            d: normalizer,
        })
    }

    #[inline]
    pub fn max(&self) -> A {
        self.m
    }

    #[inline]
    pub fn normalizer(&self) -> A {
        self.d
    }

    pub fn is_identity(&self) -> bool {
        self.m == A::neg_infinity()
    }

    /// Absorbs one element, rejecting non-finite input.
    pub fn absorb(self, x: f32) -> Result<Self> {
        if !x.is_finite() {
            return Err(SoftmaxError::NonFiniteInput { index: 0 });
        }
        Ok(self.absorb_finite(x))
    }

    /// Absorbs one element the caller has already checked to be finite.
    ///
    /// Only one exponential is evaluated: when the max moves, the new term
    /// is `e^0 = 1`, otherwise the rescale factor is `e^0 = 1`. Absorbing
    /// into the identity gives `0 · e^{-∞} + 1 = 1`.
    #[inline(always)]
    pub fn absorb_finite(self, x: f32) -> Self {
        let x = A::from_single(x);
        if x > self.m {
            MdPair {
                m: x,
                d: self.d * (self.m - x).exp() + A::one(),
            }
        } else {
            MdPair {
                m: self.m,
                d: self.d + (x - self.m).exp(),
            }
        }
    }

    /// Combines two states as if their elements had been absorbed into one.
    ///
    /// `e^{-∞ - M}` is taken as 0, including `M = -∞`, so merging with the
    /// identity returns the other operand unchanged.
    #[inline]
    pub fn merge(self, other: Self) -> Self {
        if other.is_identity() {
            return self;
        }
        if self.is_identity() {
            return other;
        }
        if self.m >= other.m {
            MdPair {
                m: self.m,
                d: self.d + other.d * (other.m - self.m).exp(),
            }
        } else {
            MdPair {
                m: other.m,
                d: self.d * (self.m - other.m).exp() + other.d,
            }
        }
    }

    /// `e^{x - m} / d`, the softmax weight of `x` under this state.
    #[inline(always)]
    pub fn probability(&self, x: f32) -> f32 {
        ((A::from_single(x) - self.m).exp() / self.d).narrow()
    }

    pub fn widen(self) -> MdPair<f64> {
        MdPair {
            m: self.m.into(),
            d: self.d.into(),
        }
    }
}

/// Sequential single pass over any element source.
#[inline]
pub(crate) fn fold_source<A: Accumulator, S: Load + ?Sized>(x: &S) -> MdPair<A> {
    let mut state = MdPair::identity();
    for j in 0..x.len() {
        state = state.absorb_finite(x.load(j));
    }
    state
}

/// Absorbs every element of `x` in order.
pub fn run_sequential<A: Accumulator>(x: &[f32]) -> Result<MdPair<A>> {
    check_input(x)?;
    Ok(fold_source(x))
}

/// [`run_sequential`] with the accumulator width chosen at run time.
pub fn run_sequential_with(x: &[f32], precision: Precision) -> Result<MdPair<f64>> {
    match precision {
        Precision::Single => run_sequential::<f32>(x).map(MdPair::widen),
        Precision::Double => run_sequential::<f64>(x),
    }
}

fn check_chunk(chunk: usize) -> Result<()> {
    if chunk == 0 {
        return Err(SoftmaxError::InvalidChunk);
    }
    Ok(())
}

/// Reduces contiguous chunks of `chunk` elements independently and merges
/// the partial states left to right.
pub fn run_chunked<A: Accumulator>(x: &[f32], chunk: usize) -> Result<MdPair<A>> {
    check_chunk(chunk)?;
    check_input(x)?;
    Ok(x
        .chunks(chunk)
        .map(fold_source::<A, _>)
        .fold(MdPair::identity(), MdPair::merge))
}

/// Same result as [`run_chunked`], bit for bit. Chunks are reduced on the
/// rayon pool; the partial states are still merged left to right.
pub fn run_chunked_parallel<A: Accumulator>(x: &[f32], chunk: usize) -> Result<MdPair<A>> {
    check_chunk(chunk)?;
    check_input(x)?;
    let partials: Vec<MdPair<A>> = x.par_chunks(chunk).map(fold_source::<A, _>).collect();
    Ok(partials
        .into_iter()
        .fold(MdPair::identity(), MdPair::merge))
}

pub fn run_chunked_with(x: &[f32], chunk: usize, precision: Precision) -> Result<MdPair<f64>> {
    match precision {
        Precision::Single => run_chunked::<f32>(x, chunk).map(MdPair::widen),
        Precision::Double => run_chunked::<f64>(x, chunk),
    }
}

/// Merges states pairwise in a balanced tree. Empty input gives the identity.
pub fn merge_balanced<A: Accumulator>(states: &[MdPair<A>]) -> MdPair<A> {
    match states.len() {
        0 => MdPair::identity(),
        1 => states[0],
        n => {
            let (left, right) = states.split_at(n / 2);
            merge_balanced(left).merge(merge_balanced(right))
        }
    }
}
