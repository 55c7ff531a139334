//! Numeric kernels: weighted moments, quantiles, grouped weighted least
//! squares with robust covariance, tail probabilities, local regression, and
//! the small transforms used by the composite indicators.
//!
//! Kernels are deterministic: accumulation order is the caller's input order,
//! ties break on explicit keys, and nothing allocates behind a hasher.

mod dist;
mod linalg;
mod loess;
mod moments;
mod transform;
mod wls;

pub use dist::{ln_gamma, reg_inc_beta, tail_probability, TailDist};
pub use loess::{loess, LoessFit};
pub use moments::{quantiles, weighted_mean, weighted_sd};
pub use transform::{geometric_mean, min_max_normalize, top_k_mean, winsorize_upper_third};
pub use wls::{
    cluster_covariance, cluster_robust_f, significance_stars, wls_group_fit, FTestResult,
    GroupFit,
};

pub(crate) use linalg::solve_dense;

use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelError {
    /// Parallel slices differ in length.
    LengthMismatch,
    /// Weights sum to zero (or the input is empty).
    ZeroTotalWeight,
    /// Dispersion needs at least two observations.
    NeedTwoPoints,
    EmptyInput,
    /// Quantile probability outside [0, 1].
    ProbOutOfRange,
    /// A group index in `0..n_groups` has no observations.
    EmptyGroup(usize),
    /// A group's weights sum to zero.
    ZeroGroupWeight(usize),
    /// Not enough residual degrees of freedom (n <= k, or fewer than two
    /// clusters).
    DegenerateDof,
    /// Degrees of freedom must be positive and finite.
    InvalidDof,
    /// Fewer points than the operation can use.
    TooFewPoints,
    /// Smoothing span outside (0, 1].
    InvalidSpan,
    /// Local polynomial degree outside {1, 2}.
    InvalidDegree,
    /// All values equal where a spread is required.
    ZeroRange,
    /// Geometric mean input below zero.
    NegativeComponent,
    /// Winsorization needs at least three observations.
    NeedThreePoints,
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelError::LengthMismatch => write!(f, "input slices have different lengths"),
            KernelError::ZeroTotalWeight => write!(f, "weights sum to zero"),
            KernelError::NeedTwoPoints => write!(f, "need at least two observations"),
            KernelError::EmptyInput => write!(f, "empty input"),
            KernelError::ProbOutOfRange => write!(f, "probability outside [0, 1]"),
            KernelError::EmptyGroup(g) => write!(f, "group {g} has no observations"),
            KernelError::ZeroGroupWeight(g) => write!(f, "group {g} has zero total weight"),
            KernelError::DegenerateDof => write!(f, "not enough degrees of freedom"),
            KernelError::InvalidDof => write!(f, "degrees of freedom must be positive"),
            KernelError::TooFewPoints => write!(f, "too few points"),
            KernelError::InvalidSpan => write!(f, "span must be in (0, 1]"),
            KernelError::InvalidDegree => write!(f, "degree must be 1 or 2"),
            KernelError::ZeroRange => write!(f, "values have zero range"),
            KernelError::NegativeComponent => write!(f, "component below zero"),
            KernelError::NeedThreePoints => write!(f, "need at least three observations"),
        }
    }
}

impl core::error::Error for KernelError {}
