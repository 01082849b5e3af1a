//! A small throughput sweep printed as CSV, with the speedup ratios.
//! `softmax-bench` runs the same sweep with every option exposed.
//!
//! ```bash
//! cargo run --release -p online-softmax --example throughput_sweep
//! ```

use online_softmax::bench::{log_spaced, run_sweep, write_csv, Format, SweepConfig};
use online_softmax::Algorithm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SweepConfig {
        vector_sizes: log_spaced(100, 100_000, 4),
        batch: 20,
        repeats: 5,
        ..SweepConfig::default()
    };
    let report = run_sweep(&cfg)?;
    write_csv(&report.rows, std::io::stdout().lock(), Format::Csv)?;
    eprintln!();
    for row in &report.rows {
        eprintln!(
            "V = {:>6}: online/safe {:.2}x, online fused top-k / unfused {:.2}x",
            row.v,
            row.speedup(Algorithm::Online, Algorithm::Safe).unwrap_or(f64::NAN),
            row.speedup(Algorithm::OnlineFusedTopK, Algorithm::SafeThenTopK).unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
