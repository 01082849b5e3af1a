use crate::algorithm::{Algorithm, Output};
use crate::error::{check_input, check_k, Result, SoftmaxError};
use crate::kernels::{naive_into, online_into, safe_into};
use crate::reduction::{Accumulator, Precision};
use crate::topk::{online_fused_into, safe_fused_into, unfused_into, TopKResult};

use super::{AccessStats, CountingVec};

/// Exact element-access totals of `algorithm` on a vector of length `len`.
///
/// `k` must be supplied exactly when the algorithm selects top-k. The input
/// is a fixed deterministic ramp; no kernel makes data-dependent vector
/// accesses, so the counts depend only on `(algorithm, len, k)`.
pub fn count_accesses(algorithm: Algorithm, len: usize, k: Option<usize>) -> Result<AccessStats> {
    if len == 0 {
        return Err(SoftmaxError::EmptyInput);
    }
    let x: Vec<f32> = (0..len).map(|i| ((i * 37) % 101) as f32 * 0.1 - 5.0).collect();
    run_instrumented(algorithm, &x, k, Precision::Single).map(|(_, stats)| stats)
}

/// Runs `algorithm` on a counting copy of `x` and returns its output with
/// the access tally. The output is bit-identical to the uninstrumented
/// [`Algorithm::run`].
pub fn run_instrumented(
    algorithm: Algorithm,
    x: &[f32],
    k: Option<usize>,
    precision: Precision,
) -> Result<(Output, AccessStats)> {
    check_input(x)?;
    let k = algorithm.check_k_presence(k, x.len())?;
    if algorithm.uses_topk() {
        check_k(k, x.len())?;
    }
    match precision {
        Precision::Single => instrumented::<f32>(algorithm, x, k),
        Precision::Double => instrumented::<f64>(algorithm, x, k),
    }
}

/// Selection body: fills the values vector, returns indices and the
/// accesses of any intermediate vector it used.
type TopKRun<'a> = dyn Fn(&CountingVec, &mut CountingVec) -> (Vec<usize>, AccessStats) + 'a;

fn instrumented<A: Accumulator>(algorithm: Algorithm, x: &[f32], k: usize) -> Result<(Output, AccessStats)> {
    let input = CountingVec::new(x.to_vec());
    let n = x.len();

    let softmax = |run: &dyn Fn(&CountingVec, &mut CountingVec)| {
        let mut y = CountingVec::zeros(n);
        run(&input, &mut y);
        let stats = input.stats() + y.stats();
        (Output::Probabilities(y.into_inner()), stats)
    };

    let topk = |run: &TopKRun| {
        let mut values = CountingVec::zeros(k);
        let (indices, intermediate) = run(&input, &mut values);
        let stats = input.stats()
            + intermediate
            + AccessStats {
                result_stores: values.stats().stores,
                ..AccessStats::default()
            };
        let result = TopKResult {
            values: values.into_inner(),
            indices,
        };
        (Output::TopK(result), stats)
    };

    Ok(match algorithm {
        // naive never widens its accumulator
        Algorithm::Naive => softmax(&|x, y| naive_into(x, y)),
        Algorithm::Safe => softmax(&|x, y| safe_into::<A, _, _>(x, y)),
        Algorithm::Online => softmax(&|x, y| online_into::<A, _, _>(x, y)),
        Algorithm::SafeThenTopK => topk(&|x, values| {
            let mut y = CountingVec::zeros(n);
            let indices = unfused_into::<A, _, _, _>(x, &mut y, k, values);
            (indices, y.stats())
        }),
        Algorithm::SafeFusedTopK => topk(&|x, values| {
            (safe_fused_into::<A, _, _>(x, k, values), AccessStats::default())
        }),
        Algorithm::OnlineFusedTopK => topk(&|x, values| {
            (online_fused_into::<A, _, _>(x, k, values), AccessStats::default())
        }),
    })
}
