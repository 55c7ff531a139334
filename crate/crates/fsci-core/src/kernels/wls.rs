//! Weighted least squares on a full set of group dummies (no intercept),
//! with HC1 heteroskedasticity-robust standard errors and a cluster-robust
//! joint F test.
//!
//! With one dummy per group the design is orthogonal, so everything has a
//! closed form: the coefficient for a group is its weighted mean of the
//! response, and the sandwich matrices are assembled from per-group sums
//! without materializing the design matrix.

use alloc::vec;
use alloc::vec::Vec;
// Required for no_std builds; std builds see inherent f64 methods instead.
#[allow(unused_imports)]
use num_traits::Float;

use super::{solve_dense, tail_probability, KernelError, TailDist};

/// Fitted grouped WLS with HC1 inference.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFit {
    /// Per-group coefficients (the group weighted means of the response).
    pub coefficients: Vec<f64>,
    /// HC1 robust standard errors.
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    /// Two-sided p-values on `dof` degrees of freedom.
    pub p_values: Vec<f64>,
    pub stars: Vec<&'static str>,
    /// Observations per group.
    pub group_n: Vec<usize>,
    /// Residual degrees of freedom, `n - k`.
    pub dof: usize,
}

/// Joint significance test across all group coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FTestResult {
    Computed {
        statistic: f64,
        p_value: f64,
        df_num: usize,
        df_den: usize,
    },
    /// Some cluster has fewer than two observations; the test is not run.
    Insufficient,
}

/// Significance markers at the conventional strict thresholds:
/// `***` p < 0.001, `**` p < 0.01, `*` p < 0.05.
pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

struct GroupSums {
    weight: Vec<f64>,
    weighted_y: Vec<f64>,
    count: Vec<usize>,
}

/// Accumulates per-group totals in input order and validates the grouping.
/// Group indices must lie in `0..n_groups` (checked by the caller's types in
/// practice; out-of-range indices panic).
fn group_sums(
    y: &[f64],
    groups: &[usize],
    n_groups: usize,
    weights: &[f64],
) -> Result<GroupSums, KernelError> {
    if y.len() != groups.len() || y.len() != weights.len() {
        return Err(KernelError::LengthMismatch);
    }
    let mut sums = GroupSums {
        weight: vec![0.0; n_groups],
        weighted_y: vec![0.0; n_groups],
        count: vec![0; n_groups],
    };
    for ((&yi, &g), &w) in y.iter().zip(groups).zip(weights) {
        assert!(g < n_groups, "group index {g} out of range");
        sums.weight[g] += w;
        sums.weighted_y[g] += w * yi;
        sums.count[g] += 1;
    }
    for g in 0..n_groups {
        if sums.count[g] == 0 {
            return Err(KernelError::EmptyGroup(g));
        }
        if !(sums.weight[g] > 0.0) {
            return Err(KernelError::ZeroGroupWeight(g));
        }
    }
    Ok(sums)
}

/// Fits the response on a full set of group dummies by weighted least
/// squares and reports HC1 robust inference per coefficient.
///
/// The coefficient for group `g` accumulates over exactly the observations
/// of `g` in input order, so it is bit-identical to [`super::weighted_mean`]
/// applied to that subsequence. Inference uses the HC1 sandwich
/// `(X'WX)^-1 X'W diag(e^2) WX (X'WX)^-1 * n/(n-k)`, which is diagonal for
/// this design, and two-sided t tails on `n - k` degrees of freedom. A zero
/// standard error yields `t = 0, p = 1` for a zero coefficient and
/// `t = +/-inf, p = 0` otherwise.
pub fn wls_group_fit(
    y: &[f64],
    groups: &[usize],
    n_groups: usize,
    weights: &[f64],
) -> Result<GroupFit, KernelError> {
    let sums = group_sums(y, groups, n_groups, weights)?;
    let n = y.len();
    if n <= n_groups {
        return Err(KernelError::DegenerateDof);
    }
    let dof = n - n_groups;

    let coefficients: Vec<f64> = (0..n_groups)
        .map(|g| sums.weighted_y[g] / sums.weight[g])
        .collect();

    // Meat of the HC1 sandwich, per group: sum of (w_i * e_i)^2.
    let mut meat = vec![0.0; n_groups];
    for ((&yi, &g), &w) in y.iter().zip(groups).zip(weights) {
        let e = yi - coefficients[g];
        let we = w * e;
        meat[g] += we * we;
    }
    let small_sample = n as f64 / dof as f64;

    let mut std_errors = Vec::with_capacity(n_groups);
    let mut t_stats = Vec::with_capacity(n_groups);
    let mut p_values = Vec::with_capacity(n_groups);
    let mut stars = Vec::with_capacity(n_groups);
    for g in 0..n_groups {
        let se = (small_sample * meat[g] / (sums.weight[g] * sums.weight[g])).sqrt();
        let (t, p) = if se > 0.0 {
            let t = coefficients[g] / se;
            (t, tail_probability(TailDist::StudentT { df: dof as f64 }, t)?)
        } else if coefficients[g] == 0.0 {
            (0.0, 1.0)
        } else {
            (f64::INFINITY.copysign(coefficients[g]), 0.0)
        };
        std_errors.push(se);
        t_stats.push(t);
        p_values.push(p);
        stars.push(significance_stars(p));
    }

    Ok(GroupFit {
        coefficients,
        std_errors,
        t_stats,
        p_values,
        stars,
        group_n: sums.count,
        dof,
    })
}

// Within-cluster score sums cancel to rounding noise when the clusters
// coincide with the regression groups; anything this far below the absolute
// sum of its own terms is treated as an exact zero.
const SCORE_CANCEL_TOL: f64 = 1e-12;

/// CR1 cluster-robust covariance of the group-dummy WLS coefficients for an
/// arbitrary cluster assignment.
///
/// The bread is `(X'WX)^-1 = diag(1/sum_g w)`; the meat sums per-cluster
/// score outer products, where the score of cluster `c` has component `g`
/// equal to `sum of w_i e_i over observations of c in group g`. The
/// small-sample factor is `G/(G-1) * (n-1)/(n-k)`. Score components that
/// cancel to rounding noise (relative to the absolute sum of their terms)
/// are snapped to zero so exact algebraic cancellation survives floating
/// point.
pub fn cluster_covariance(
    y: &[f64],
    groups: &[usize],
    n_groups: usize,
    weights: &[f64],
    clusters: &[usize],
    n_clusters: usize,
) -> Result<Vec<Vec<f64>>, KernelError> {
    if clusters.len() != y.len() {
        return Err(KernelError::LengthMismatch);
    }
    let sums = group_sums(y, groups, n_groups, weights)?;
    let n = y.len();
    if n <= n_groups || n_clusters < 2 {
        return Err(KernelError::DegenerateDof);
    }
    let coefficients: Vec<f64> = (0..n_groups)
        .map(|g| sums.weighted_y[g] / sums.weight[g])
        .collect();

    let mut score = vec![vec![0.0; n_groups]; n_clusters];
    let mut score_abs = vec![vec![0.0; n_groups]; n_clusters];
    for (i, &yi) in y.iter().enumerate() {
        let (g, c, w) = (groups[i], clusters[i], weights[i]);
        assert!(c < n_clusters, "cluster index {c} out of range");
        let we = w * (yi - coefficients[g]);
        score[c][g] += we;
        score_abs[c][g] += we.abs();
    }
    for c in 0..n_clusters {
        for g in 0..n_groups {
            if score[c][g].abs() <= SCORE_CANCEL_TOL * score_abs[c][g] {
                score[c][g] = 0.0;
            }
        }
    }

    let g_f = n_clusters as f64;
    let factor = g_f / (g_f - 1.0) * (n as f64 - 1.0) / ((n - n_groups) as f64);
    let mut cov = vec![vec![0.0; n_groups]; n_groups];
    for (a, row) in cov.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            let mut meat = 0.0;
            for s in &score {
                meat += s[a] * s[b];
            }
            *entry = factor * meat / (sums.weight[a] * sums.weight[b]);
        }
    }
    Ok(cov)
}

/// Joint F test that all group coefficients are zero, with CR1 standard
/// errors clustered on the groups themselves.
///
/// Clustering on the regression's own grouping makes within-cluster score
/// sums vanish identically, so for fully computable inputs the covariance
/// collapses to zero and the statistic is reported under the zero-variance
/// rule: statistic 0, p-value 1. The test is still worth running for its
/// guard rails: any group with fewer than two observations yields
/// [`FTestResult::Insufficient`], and a future change of cluster assignment
/// gets the full Wald machinery (`W = b' V^-1 b`, `F = W/k` on
/// `(k, G - 1)` degrees of freedom).
pub fn cluster_robust_f(
    y: &[f64],
    groups: &[usize],
    n_groups: usize,
    weights: &[f64],
) -> Result<FTestResult, KernelError> {
    let sums = group_sums(y, groups, n_groups, weights)?;
    if sums.count.iter().any(|&c| c < 2) {
        return Ok(FTestResult::Insufficient);
    }
    let n = y.len();
    if n <= n_groups {
        return Err(KernelError::DegenerateDof);
    }
    let cov = cluster_covariance(y, groups, n_groups, weights, groups, n_groups)?;
    let coefficients: Vec<f64> = (0..n_groups)
        .map(|g| sums.weighted_y[g] / sums.weight[g])
        .collect();

    let df_num = n_groups;
    let df_den = n_groups - 1;
    let zero_cov = cov
        .iter()
        .all(|row| row.iter().all(|&v| v == 0.0));
    let statistic = if zero_cov {
        0.0
    } else {
        match solve_dense(cov.clone(), coefficients.clone()) {
            // Singular nonzero covariance: some combination of coefficients
            // has zero estimated variance, so the Wald form is undefined;
            // fall back to the zero-variance report.
            None => 0.0,
            Some(solved) => {
                let wald: f64 = coefficients.iter().zip(&solved).map(|(b, s)| b * s).sum();
                wald / df_num as f64
            }
        }
    };
    let p_value = if statistic == 0.0 {
        1.0
    } else {
        tail_probability(
            TailDist::FisherF {
                df1: df_num as f64,
                df2: df_den as f64,
            },
            statistic,
        )?
    };
    Ok(FTestResult::Computed {
        statistic,
        p_value,
        df_num,
        df_den,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::weighted_mean;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn coefficients_are_group_weighted_means() {
        let y = [2.0, 4.0, 10.0];
        let groups = [0, 0, 1];
        let weights = [1.0, 1.0, 2.0];
        let fit = wls_group_fit(&y, &groups, 2, &weights).unwrap();
        assert_eq!(fit.coefficients, vec![3.0, 10.0]);
        assert_eq!(fit.group_n, vec![2, 1]);
        assert_eq!(fit.dof, 1);
    }

    #[test]
    fn hc1_hand_computed_example() {
        // Two groups of two equal-weight observations.
        let y = [1.0, 2.0, 4.0, 8.0];
        let groups = [0, 0, 1, 1];
        let weights = [1.0; 4];
        let fit = wls_group_fit(&y, &groups, 2, &weights).unwrap();
        assert_eq!(fit.coefficients, vec![1.5, 6.0]);
        // HC1: n/(n-k) = 2; SE_0 = sqrt(2 * 0.5 / 4), SE_1 = sqrt(2 * 8 / 4).
        assert_relative_eq!(fit.std_errors[0], 0.5, max_relative = 1e-12);
        assert_relative_eq!(fit.std_errors[1], 2.0, max_relative = 1e-12);
        assert_relative_eq!(fit.t_stats[0], 3.0, max_relative = 1e-12);
        assert_relative_eq!(fit.t_stats[1], 3.0, max_relative = 1e-12);
        // Two-sided t(2) tail at 3.
        assert_relative_eq!(fit.p_values[0], 0.09546597, epsilon = 1e-6);
        assert_eq!(fit.stars[0], "");
    }

    #[test]
    fn perfect_fit_has_zero_pvalues() {
        let y = [1.0, 1.0, -1.0, -1.0];
        let groups = [0, 0, 1, 1];
        let weights = [1.0; 4];
        let fit = wls_group_fit(&y, &groups, 2, &weights).unwrap();
        assert_eq!(fit.coefficients, vec![1.0, -1.0]);
        assert_eq!(fit.std_errors, vec![0.0, 0.0]);
        assert_eq!(fit.p_values, vec![0.0, 0.0]);
        assert_eq!(fit.stars, vec!["***", "***"]);
        assert_eq!(fit.t_stats[0], f64::INFINITY);
        assert_eq!(fit.t_stats[1], f64::NEG_INFINITY);
    }

    #[test]
    fn degenerate_inputs_error() {
        assert_eq!(
            wls_group_fit(&[1.0, 2.0], &[0, 1], 2, &[1.0, 1.0]),
            Err(KernelError::DegenerateDof)
        );
        assert_eq!(
            wls_group_fit(&[1.0, 2.0, 3.0], &[0, 0, 0], 2, &[1.0; 3]),
            Err(KernelError::EmptyGroup(1))
        );
        assert_eq!(
            wls_group_fit(&[1.0, 2.0, 3.0], &[0, 0, 1], 2, &[1.0, 1.0, 0.0]),
            Err(KernelError::ZeroGroupWeight(1))
        );
        assert_eq!(
            wls_group_fit(&[1.0, 2.0], &[0, 0], 1, &[1.0]),
            Err(KernelError::LengthMismatch)
        );
    }

    #[test]
    fn cluster_covariance_hand_computed() {
        // Clusters cut across the groups, so the scores do not cancel.
        let y = [1.0, 2.0, 4.0, 8.0];
        let groups = [0, 0, 1, 1];
        let clusters = [0, 1, 0, 1];
        let weights = [1.0; 4];
        let cov = cluster_covariance(&y, &groups, 2, &weights, &clusters, 2).unwrap();
        // Scores: c0 = (-0.5, -2), c1 = (0.5, 2); factor = 2 * 3/2 = 3.
        assert_relative_eq!(cov[0][0], 0.375, max_relative = 1e-12);
        assert_relative_eq!(cov[0][1], 1.5, max_relative = 1e-12);
        assert_relative_eq!(cov[1][0], 1.5, max_relative = 1e-12);
        assert_relative_eq!(cov[1][1], 6.0, max_relative = 1e-12);
    }

    #[test]
    fn self_clustered_f_collapses_to_zero() {
        // Clustering on the groups makes the scores cancel exactly: the
        // covariance is zero and the statistic reports (0, 1).
        let y = [1.0, 2.0, 4.0, 8.0, 3.0, 5.0];
        let groups = [0, 0, 1, 1, 2, 2];
        let weights = [1.0, 2.0, 1.0, 0.5, 1.5, 1.0];
        let f = cluster_robust_f(&y, &groups, 3, &weights).unwrap();
        assert_eq!(
            f,
            FTestResult::Computed {
                statistic: 0.0,
                p_value: 1.0,
                df_num: 3,
                df_den: 2,
            }
        );
    }

    #[test]
    fn singleton_group_is_insufficient() {
        let y = [1.0, 2.0, 4.0];
        let groups = [0, 0, 1];
        let f = cluster_robust_f(&y, &groups, 2, &[1.0; 3]).unwrap();
        assert_eq!(f, FTestResult::Insufficient);
    }

    #[test]
    fn identically_zero_response_reports_zero_statistic() {
        let y = [0.0; 6];
        let groups = [0, 0, 0, 1, 1, 1];
        let f = cluster_robust_f(&y, &groups, 2, &[1.0; 6]).unwrap();
        assert!(matches!(
            f,
            FTestResult::Computed { statistic, p_value, .. }
                if statistic == 0.0 && p_value == 1.0
        ));
    }

    #[test]
    fn star_thresholds_are_strict() {
        assert_eq!(significance_stars(0.0009), "***");
        assert_eq!(significance_stars(0.001), "**");
        assert_eq!(significance_stars(0.009), "**");
        assert_eq!(significance_stars(0.01), "*");
        assert_eq!(significance_stars(0.049), "*");
        assert_eq!(significance_stars(0.05), "");
        assert_eq!(significance_stars(1.0), "");
    }

    proptest! {
        /// The closed-form coefficients are bit-identical to weighted means
        /// over each group's subsequence.
        #[test]
        fn coefficient_identity_is_exact(
            data in proptest::collection::vec(
                (-1e3f64..1e3, 0usize..4, 0.01f64..10.0),
                8..60,
            ),
        ) {
            let y: Vec<f64> = data.iter().map(|d| d.0).collect();
            let groups: Vec<usize> = data.iter().map(|d| d.1).collect();
            let weights: Vec<f64> = data.iter().map(|d| d.2).collect();
            let n_groups = 4;
            prop_assume!((0..n_groups).all(|g| groups.iter().filter(|&&x| x == g).count() > 0));
            let fit = wls_group_fit(&y, &groups, n_groups, &weights).unwrap();
            for g in 0..n_groups {
                let ys: Vec<f64> = y.iter().zip(&groups).filter(|(_, &gi)| gi == g).map(|(&v, _)| v).collect();
                let ws: Vec<f64> = weights.iter().zip(&groups).filter(|(_, &gi)| gi == g).map(|(&v, _)| v).collect();
                let mean = weighted_mean(&ys, &ws).unwrap();
                // Exact, not approximate: same accumulation order.
                prop_assert_eq!(fit.coefficients[g], mean);
            }
        }

        /// The CR1 covariance is symmetric with nonnegative diagonal.
        #[test]
        fn cluster_covariance_is_symmetric_psd_diag(
            data in proptest::collection::vec(
                (-1e3f64..1e3, 0usize..3, 0.01f64..10.0, 0usize..5),
                10..50,
            ),
        ) {
            let y: Vec<f64> = data.iter().map(|d| d.0).collect();
            let groups: Vec<usize> = data.iter().map(|d| d.1).collect();
            let weights: Vec<f64> = data.iter().map(|d| d.2).collect();
            let clusters: Vec<usize> = data.iter().map(|d| d.3).collect();
            prop_assume!((0..3).all(|g| groups.contains(&g)));
            prop_assume!(clusters.iter().collect::<std::collections::BTreeSet<_>>().len() >= 2);
            let n_clusters = clusters.iter().max().unwrap() + 1;
            let cov = cluster_covariance(&y, &groups, 3, &weights, &clusters, n_clusters).unwrap();
            for a in 0..3 {
                prop_assert!(cov[a][a] >= 0.0);
                for b in 0..3 {
                    prop_assert!((cov[a][b] - cov[b][a]).abs() <= 1e-12 * cov[a][b].abs().max(1.0));
                }
            }
        }
    }
}
