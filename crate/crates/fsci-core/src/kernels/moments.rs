//! Weighted location/dispersion and interpolated quantiles.

use alloc::vec::Vec;

// Required for no_std builds; std builds see inherent f64 methods instead.
#[allow(unused_imports)]
use num_traits::Float;

use super::KernelError;

/// Weighted arithmetic mean, `sum(w*x) / sum(w)`.
///
/// Accumulates in input order, so callers that need bit-exact agreement with
/// a different route through the same data can rely on a fixed summation
/// order. Weights must be nonnegative; an empty input has zero total weight.
pub fn weighted_mean(values: &[f64], weights: &[f64]) -> Result<f64, KernelError> {
    if values.len() != weights.len() {
        return Err(KernelError::LengthMismatch);
    }
    let mut total = 0.0;
    let mut weighted = 0.0;
    for (&x, &w) in values.iter().zip(weights) {
        total += w;
        weighted += w * x;
    }
    if !(total > 0.0) {
        return Err(KernelError::ZeroTotalWeight);
    }
    Ok(weighted / total)
}

/// Weighted sample standard deviation under the analytic-weight convention:
/// weights are rescaled to sum to the number of observations, and the sum of
/// squared deviations from the weighted mean is divided by `n - 1`.
pub fn weighted_sd(values: &[f64], weights: &[f64]) -> Result<f64, KernelError> {
    if values.len() != weights.len() {
        return Err(KernelError::LengthMismatch);
    }
    let n = values.len();
    if n < 2 {
        return Err(KernelError::NeedTwoPoints);
    }
    let mean = weighted_mean(values, weights)?;
    let total: f64 = weights.iter().sum();
    let scale = n as f64 / total;
    let mut ss = 0.0;
    for (&x, &w) in values.iter().zip(weights) {
        let d = x - mean;
        ss += w * scale * d * d;
    }
    Ok((ss / (n - 1) as f64).sqrt())
}

/// Unweighted quantiles with linear interpolation: the quantile at
/// probability `p` sits at fractional rank `h = (n - 1) * p` of the sorted
/// values. `p = 0` and `p = 1` are the minimum and maximum.
pub fn quantiles(values: &[f64], probs: &[f64]) -> Result<Vec<f64>, KernelError> {
    if values.is_empty() {
        return Err(KernelError::EmptyInput);
    }
    if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(KernelError::ProbOutOfRange);
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    let out = probs
        .iter()
        .map(|&p| {
            let h = (n - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        })
        .collect();
    Ok(out)
}
