//! Memory-access accounting and reference implementations.
//!
//! Every kernel in this crate is written once against the [`Load`] and
//! [`Store`] traits. Plain slices implement them with ordinary indexing;
//! [`CountingVec`] implements them while tallying each element access. The
//! instrumented run therefore executes the same arithmetic as the plain run
//! and produces bit-identical results.
//!
//! Only vector-element traffic is counted: reads of the input `x`, writes
//! and reads of a materialized output `y`, and writes of top-k results.
//! Scalar state (the running max and normalizer, the top-k scratch buffer)
//! is treated as register resident and is not counted. Counting it would
//! make the per-element figures below meaningless:
//!
//! | algorithm                  | loads | stores | per element |
//! |----------------------------|-------|--------|-------------|
//! | naive                      | 2V    | V      | 3           |
//! | safe                       | 3V    | V      | 4           |
//! | online                     | 2V    | V      | 3           |
//! | safe softmax, then top-k   | 4V    | V      | 5           |
//! | safe softmax fused top-k   | 3V    | 0      | 3           |
//! | online softmax fused top-k | V     | 0      | 1           |
//!
//! Top-k variants additionally write `K` result slots, reported separately
//! in [`AccessStats::result_stores`].

mod counting;
mod model;
pub mod oracle;

pub use counting::{AccessStats, CountingVec};
pub use model::{count_accesses, run_instrumented};

/// Read access to a vector of single-precision elements.
pub trait Load {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn load(&self, index: usize) -> f32;
}

/// Write access to a vector of single-precision elements.
pub trait Store {
    fn store(&mut self, index: usize, value: f32);
}

impl Load for [f32] {
    #[inline(always)]
    fn len(&self) -> usize {
        <[f32]>::len(self)
    }

    #[inline(always)]
    fn load(&self, index: usize) -> f32 {
        self[index]
    }
}

impl Store for [f32] {
    #[inline(always)]
    fn store(&mut self, index: usize, value: f32) {
        self[index] = value;
    }
}
