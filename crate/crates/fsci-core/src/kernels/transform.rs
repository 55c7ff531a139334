//! Small transforms behind the composite indicators and the snapshot
//! normalizations: min-max scaling around a chosen center, geometric mean,
//! upper winsorization at the third-highest value, and top-k means.

use alloc::vec::Vec;
// Required for no_std builds; std builds see inherent f64 methods instead.
#[allow(unused_imports)]
use num_traits::Float;

use super::KernelError;

/// Scales values to `(v - center) / (max - min)`.
///
/// The center is the caller's reference point (for the GDP charts, the
/// global weighted mean), so a value equal to the center maps to 0. Requires
/// at least two distinct values.
pub fn min_max_normalize(values: &[f64], center: f64) -> Result<Vec<f64>, KernelError> {
    if values.is_empty() {
        return Err(KernelError::EmptyInput);
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if !(range > 0.0) {
        return Err(KernelError::ZeroRange);
    }
    Ok(values.iter().map(|v| (v - center) / range).collect())
}

/// Geometric mean of nonnegative values; zero if any component is zero.
pub fn geometric_mean(values: &[f64]) -> Result<f64, KernelError> {
    if values.is_empty() {
        return Err(KernelError::EmptyInput);
    }
    if values.iter().any(|&v| v < 0.0) {
        return Err(KernelError::NegativeComponent);
    }
    if values.iter().any(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let log_mean = values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64;
    Ok(log_mean.exp())
}

/// Caps values above the third-highest value (duplicates counted) at that
/// value. Order is preserved; needs at least three observations.
pub fn winsorize_upper_third(values: &[f64]) -> Result<Vec<f64>, KernelError> {
    if values.len() < 3 {
        return Err(KernelError::NeedThreePoints);
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let cap = sorted[2];
    Ok(values.iter().map(|&v| if v > cap { cap } else { v }).collect())
}

/// Mean of the `k` largest values (duplicates counted).
pub fn top_k_mean(values: &[f64], k: usize) -> Result<f64, KernelError> {
    if k == 0 || values.len() < k {
        return Err(KernelError::TooFewPoints);
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(sorted[..k].iter().sum::<f64>() / k as f64)
}
