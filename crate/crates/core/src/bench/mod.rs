//! Throughput sweeps.
//!
//! A sweep times every configured [`Algorithm`](crate::Algorithm) over a
//! batch of random vectors for each vector size, reports elements/second
//! (`batch · V / median batch time`), derives speedup ratios, and attaches
//! the exact access counts from
//! [`count_accesses`](crate::instrumentation::count_accesses).
//!
//! Output columns are named after the algorithm keys (`NaiveSoftmax`,
//! `SafeSoftmax`, `OnlineSoftmax`, `SafeSoftmaxUnfusedTopK`,
//! `SafeSoftmaxFusedTopK`, `OnlineSoftmaxFusedTopK`).

mod config;
mod report;
mod sweep;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{log_spaced, SweepConfig};
pub use report::{
    emit_csv, emit_plot_data, parse_csv, read_csv, speedup_column, write_csv, write_plot_data, Format,
    SPEEDUPS,
};
pub use sweep::{generate_inputs, run_sweep, CellFailure, SweepReport, SweepRow};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid sweep configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
}
