use crate::algorithm::Algorithm;

use super::BenchError;

/// Parameters of a throughput sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub algorithms: Vec<Algorithm>,
    pub vector_sizes: Vec<usize>,
    /// Vectors per timed measurement.
    pub batch: usize,
    /// Top-k width for the top-k algorithms.
    pub k: usize,
    /// Timed repetitions per (algorithm, V); the median is reported.
    pub repeats: usize,
    /// Untimed repetitions before timing.
    pub warmup: usize,
    pub seed: u64,
    /// Worker threads; 1 runs the batch on the calling thread.
    pub threads: usize,
    /// Skip timing and report access counts only.
    pub counts_only: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            algorithms: Algorithm::ALL.to_vec(),
            vector_sizes: log_spaced(40, 500_000, 16),
            batch: 100,
            k: 5,
            repeats: 5,
            warmup: 1,
            seed: 0,
            threads: 1,
            counts_only: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: &str| Err(BenchError::Config(msg.to_string()));
        if self.algorithms.is_empty() {
            return bad("no algorithms selected");
        }
        if self.vector_sizes.is_empty() {
            return bad("no vector sizes");
        }
        if self.vector_sizes.contains(&0) {
            return bad("vector sizes must be positive");
        }
        if self.batch == 0 || self.repeats == 0 || self.threads == 0 || self.k == 0 {
            return bad("batch, repeats, threads and k must be positive");
        }
        let min_v = self.vector_sizes.iter().copied().min().unwrap_or(0);
        if self.algorithms.iter().any(|a| a.uses_topk()) && self.k > min_v {
            return Err(BenchError::Config(format!(
                "k = {} exceeds the smallest vector size {min_v}",
                self.k
            )));
        }
        Ok(())
    }
}

/// `points` sizes spaced evenly in log scale over `[min, max]`, rounded to
/// integers, deduplicated, ascending.
pub fn log_spaced(min: usize, max: usize, points: usize) -> Vec<usize> {
    if min == 0 || max < min || points == 0 {
        return Vec::new();
    }
    if points == 1 || min == max {
        return vec![min];
    }
    let (lo, hi) = ((min as f64).ln(), (max as f64).ln());
    let step = (hi - lo) / (points - 1) as f64;
    let mut sizes: Vec<usize> = (0..points)
        .map(|i| {
            let v = (lo + step * i as f64).exp().round() as usize;
            v.clamp(min, max)
        })
        .collect();
    sizes.dedup();
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_spacing() {
        assert_eq!(log_spaced(10, 1000, 3), vec![10, 100, 1000]);
        assert_eq!(log_spaced(40, 500_000, 16).first(), Some(&40));
        assert_eq!(log_spaced(40, 500_000, 16).last(), Some(&500_000));
        assert_eq!(log_spaced(5, 5, 4), vec![5]);
        assert_eq!(log_spaced(1, 3, 10), vec![1, 2, 3]);
        assert!(log_spaced(0, 10, 3).is_empty());
        assert!(log_spaced(10, 5, 3).is_empty());
    }

    #[test]
    fn validation() {
        assert!(SweepConfig::default().validate().is_ok());
        let mut cfg = SweepConfig {
            vector_sizes: vec![],
            ..SweepConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(BenchError::Config(_))));
        cfg.vector_sizes = vec![3];
        assert!(cfg.validate().is_err(), "k = 5 > V = 3");
        cfg.algorithms = vec![Algorithm::Safe];
        assert!(cfg.validate().is_ok());
        cfg.batch = 0;
        assert!(cfg.validate().is_err());
    }
}
