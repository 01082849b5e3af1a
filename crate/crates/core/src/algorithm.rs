use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SoftmaxError};
use crate::reduction::Precision;
use crate::topk::{self, TopKResult};
use crate::kernels;

/// The six benchmarked entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Naive,
    Safe,
    Online,
    SafeThenTopK,
    SafeFusedTopK,
    OnlineFusedTopK,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Naive,
        Algorithm::Safe,
        Algorithm::Online,
        Algorithm::SafeThenTopK,
        Algorithm::SafeFusedTopK,
        Algorithm::OnlineFusedTopK,
    ];

    /// Column name used in sweep output.
    pub fn key(self) -> &'static str {
        match self {
            Algorithm::Naive => "NaiveSoftmax",
            Algorithm::Safe => "SafeSoftmax",
            Algorithm::Online => "OnlineSoftmax",
            Algorithm::SafeThenTopK => "SafeSoftmaxUnfusedTopK",
            Algorithm::SafeFusedTopK => "SafeSoftmaxFusedTopK",
            Algorithm::OnlineFusedTopK => "OnlineSoftmaxFusedTopK",
        }
    }

    fn short_name(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Safe => "safe",
            Algorithm::Online => "online",
            Algorithm::SafeThenTopK => "safe-unfused-topk",
            Algorithm::SafeFusedTopK => "safe-fused-topk",
            Algorithm::OnlineFusedTopK => "online-fused-topk",
        }
    }

    pub fn uses_topk(self) -> bool {
        matches!(
            self,
            Algorithm::SafeThenTopK | Algorithm::SafeFusedTopK | Algorithm::OnlineFusedTopK
        )
    }

    /// Runs the algorithm on `x`. `k` must be given exactly when the
    /// algorithm selects top-k. The naive kernel always accumulates in
    /// single precision.
    pub fn run(self, x: &[f32], k: Option<usize>, precision: Precision) -> Result<Output> {
        let k = self.check_k_presence(k, x.len())?;
        Ok(match self {
            Algorithm::Naive => Output::Probabilities(kernels::naive_softmax(x)?),
            Algorithm::Safe => Output::Probabilities(kernels::safe_softmax_with(x, precision)?),
            Algorithm::Online => Output::Probabilities(kernels::online_softmax_with(x, precision)?),
            Algorithm::SafeThenTopK => {
                Output::TopK(topk::safe_softmax_then_topk_with(x, k, precision)?)
            }
            Algorithm::SafeFusedTopK => {
                Output::TopK(topk::safe_softmax_fused_topk_with(x, k, precision)?)
            }
            Algorithm::OnlineFusedTopK => {
                Output::TopK(topk::online_softmax_topk_with(x, k, precision)?)
            }
        })
    }

    /// Returns the top-k width (0 for plain softmax) after checking that
    /// `k` is present iff the algorithm needs it.
    pub(crate) fn check_k_presence(self, k: Option<usize>, len: usize) -> Result<usize> {
        match (self.uses_topk(), k) {
            (true, Some(k)) => Ok(k),
            (false, None) => Ok(0),
            (true, None) => Err(SoftmaxError::InvalidK { k: 0, len }),
            (false, Some(k)) => Err(SoftmaxError::InvalidK { k, len }),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseAlgorithmError(pub String);

impl fmt::Display for ParseAlgorithmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown algorithm `{}` (expected one of: ", self.0)?;
        let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.short_name()).collect();
        write!(f, "{})", names.join(", "))
    }
}

impl std::error::Error for ParseAlgorithmError {}

impl FromStr for Algorithm {
    type Err = ParseAlgorithmError;

    /// Accepts the short names (`online-fused-topk`) and the column keys
    /// (`OnlineSoftmaxFusedTopK`), case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_lowercase().replace('_', "-");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.short_name() == wanted || a.key().to_ascii_lowercase() == wanted)
            .ok_or_else(|| ParseAlgorithmError(s.to_string()))
    }
}

/// Result of running an [`Algorithm`].
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Probabilities(Vec<f32>),
    TopK(TopKResult),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.key().parse::<Algorithm>().unwrap(), a);
            assert_eq!(a.short_name().parse::<Algorithm>().unwrap(), a);
            assert_eq!(a.to_string(), a.key());
        }
        assert_eq!("Online_Fused_TopK".parse::<Algorithm>().unwrap(), Algorithm::OnlineFusedTopK);
        assert!("fastest".parse::<Algorithm>().is_err());
    }

    #[test]
    fn k_presence() {
        let x = [1.0_f32, 2.0];
        assert!(Algorithm::Safe.run(&x, Some(1), Precision::Single).is_err());
        assert!(Algorithm::OnlineFusedTopK.run(&x, None, Precision::Single).is_err());
        assert_eq!(
            Algorithm::OnlineFusedTopK.run(&x, Some(1), Precision::Single).unwrap(),
            Output::TopK(topk::online_softmax_topk(&x, 1).unwrap())
        );
        assert_eq!(
            Algorithm::Naive.run(&x, None, Precision::Double).unwrap(),
            Output::Probabilities(kernels::naive_softmax(&x).unwrap())
        );
    }
}
