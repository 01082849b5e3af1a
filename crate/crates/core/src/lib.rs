//! Softmax kernels with fewer memory accesses.
//!
//! The crate provides four ways to compute softmax over single-precision
//! vectors and a set of tools to compare them:
//!
//! - [`kernels`]: naive (`e^x / Σe^x`), safe (max-subtracted, three passes)
//!   and online (max and normalizer fused into one pass) softmax.
//! - [`reduction`]: the running `(max, normalizer)` state, the associative
//!   merge operator on it, and chunked/parallel evaluation built on that
//!   operator.
//! - [`topk`]: top-k selection with a `K+1` slot insertion buffer, and
//!   softmax+top-k in unfused, safe-fused and online-fused (single pass)
//!   forms.
//! - [`instrumentation`]: a counting vector that tallies every element
//!   load and store, the per-algorithm access model built on it, and
//!   double-precision reference implementations.
//! - [`bench`]: a throughput sweep over vector sizes that reports
//!   elements/second, speedup ratios and access counts as CSV.
//!
//! All kernels reject empty input and non-finite elements. Indices are
//! 0-based.
//!
//! ```
//! use online_softmax::{kernels, topk};
//!
//! let logits = [1.0_f32, 2.0, 3.0];
//! let y = kernels::online_softmax(&logits).unwrap();
//! assert!((y[2] - 0.665_240_9).abs() < 1e-6);
//!
//! let best = topk::online_softmax_topk(&logits, 2).unwrap();
//! assert_eq!(best.indices, vec![2, 1]);
//! ```

pub mod algorithm;
pub mod bench;
pub mod error;
pub mod instrumentation;
pub mod kernels;
pub mod reduction;
pub mod topk;

pub use algorithm::{Algorithm, Output};
pub use error::{Result, SoftmaxError};
pub use instrumentation::{AccessStats, CountingVec};
pub use reduction::{Accumulator, MdPair, Precision};
pub use topk::{TopKBuffer, TopKResult};
