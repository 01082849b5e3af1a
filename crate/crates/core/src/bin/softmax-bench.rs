use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use online_softmax::bench::{self, BenchError, Format, SweepConfig};
use online_softmax::Algorithm;

/// Sweep softmax kernels over vector sizes and report elements/second,
/// speedup ratios and exact memory-access counts.
#[derive(Debug, Parser)]
#[command(name = "softmax-bench", version)]
struct Args {
    /// Comma-separated algorithms (naive, safe, online, safe-unfused-topk,
    /// safe-fused-topk, online-fused-topk). Defaults to all.
    #[arg(long, value_delimiter = ',')]
    algorithms: Vec<Algorithm>,

    /// Smallest vector size of the log-spaced sweep.
    #[arg(long, default_value_t = 40)]
    vmin: usize,

    /// Largest vector size of the log-spaced sweep.
    #[arg(long, default_value_t = 500_000)]
    vmax: usize,

    /// Number of log-spaced sizes.
    #[arg(long, default_value_t = 16)]
    points: usize,

    /// Explicit comma-separated vector sizes, replacing the log-spaced sweep.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["vmin", "vmax", "points"])]
    sizes: Vec<usize>,

    /// Vectors per timed measurement.
    #[arg(long, default_value_t = 100)]
    batch: usize,

    /// Top-k width.
    #[arg(long, default_value_t = 5)]
    k: usize,

    #[arg(long, default_value_t = 5)]
    repeats: usize,

    #[arg(long, default_value_t = 1)]
    warmup: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Worker threads; 1 runs single-threaded.
    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Output file; standard output when absent. A `.meta.json` file with
    /// machine and run details is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, default_value_t = Format::Csv)]
    format: Format,

    /// Skip timing and emit the access-count model only.
    #[arg(long)]
    counts_only: bool,

    /// Also write gnuplot-style (V, value) series to this file.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

impl Args {
    fn config(&self) -> SweepConfig {
        let vector_sizes = if self.sizes.is_empty() {
            bench::log_spaced(self.vmin, self.vmax, self.points)
        } else {
            self.sizes.clone()
        };
        let algorithms = if self.algorithms.is_empty() {
            Algorithm::ALL.to_vec()
        } else {
            self.algorithms.clone()
        };
        SweepConfig {
            algorithms,
            vector_sizes,
            batch: self.batch,
            k: self.k,
            repeats: self.repeats,
            warmup: self.warmup,
            seed: self.seed,
            threads: self.threads,
            counts_only: self.counts_only,
        }
    }
}

fn cpu_model() -> Option<String> {
    let info = std::fs::read_to_string("/proc/cpuinfo").ok()?;
    info.lines()
        .find(|l| l.starts_with("model name"))
        .and_then(|l| l.split_once(':'))
        .map(|(_, name)| name.trim().to_string())
}

fn write_metadata(out: &Path, cfg: &SweepConfig, format: Format) -> Result<(), BenchError> {
    let mut path = out.as_os_str().to_owned();
    path.push(".meta.json");
    let path = PathBuf::from(path);
    let meta = serde_json::json!({
        "tool": concat!("softmax-bench ", env!("CARGO_PKG_VERSION")),
        "unix_time": SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        "os": std::env::consts::OS,
        "arch": std::env::consts::ARCH,
        "cpu": cpu_model(),
        "available_parallelism": std::thread::available_parallelism().map(|n| n.get()).ok(),
        "debug_build": cfg!(debug_assertions),
        "format": format.to_string(),
        "algorithms": cfg.algorithms.iter().map(|a| a.key()).collect::<Vec<_>>(),
        "vector_sizes": cfg.vector_sizes,
        "batch": cfg.batch,
        "k": cfg.k,
        "repeats": cfg.repeats,
        "warmup": cfg.warmup,
        "seed": cfg.seed,
        "threads": cfg.threads,
        "counts_only": cfg.counts_only,
        "throughput_unit": "elements per second, batch * V / median batch time",
    });
    let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    std::fs::write(&path, text + "\n").map_err(|source| BenchError::Io { path, source })
}

fn run(args: &Args) -> Result<(), BenchError> {
    let cfg = args.config();
    let report = bench::run_sweep(&cfg)?;
    for failure in &report.failures {
        eprintln!(
            "warning: {} failed at V = {}: {}",
            failure.algorithm, failure.v, failure.message
        );
    }
    match &args.out {
        Some(path) => {
            bench::emit_csv(&report.rows, path, args.format)?;
            write_metadata(path, &cfg, args.format)?;
        }
        None => {
            let stdout = io::stdout();
            bench::write_csv(&report.rows, stdout.lock(), args.format).map_err(|message| {
                BenchError::Parse {
                    path: PathBuf::from("<stdout>"),
                    message,
                }
            })?;
            let _ = io::stdout().flush();
        }
    }
    if let Some(path) = &args.plot_data {
        bench::emit_plot_data(&report.rows, path)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ BenchError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
