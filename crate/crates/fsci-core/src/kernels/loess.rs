//! Locally weighted polynomial regression (loess) with tricube weights and
//! no robustness iterations.
//!
//! Conventions, fixed so independent reimplementations can match bit-for-bit
//! decisions: the neighborhood of a target point holds the
//! `q = min(max(ceil(span * n), degree + 2), n)` nearest points by absolute
//! distance, ties broken by (distance, x, input index); distances are scaled
//! by the largest distance in the neighborhood, so the farthest neighbor
//! gets tricube weight zero; the local fit solves the weighted normal
//! equations in coordinates centered on the target.

use alloc::vec::Vec;
// Required for no_std builds; std builds see inherent f64 methods instead.
#[allow(unused_imports)]
use num_traits::Float;

use super::{solve_dense, KernelError};

/// Fitted values at the input points, in input order.
#[derive(Debug, Clone)]
pub struct LoessFit {
    pub fitted: Vec<f64>,
    /// Indices where the neighborhood could not support the requested
    /// degree (coincident x values) and the fit fell back to a lower-order
    /// local fit, ultimately the neighborhood mean.
    pub degenerate: Vec<usize>,
}

fn tricube(u: f64) -> f64 {
    if u >= 1.0 {
        return 0.0;
    }
    let t = 1.0 - u * u * u;
    t * t * t
}

/// Smooths `y` over `x` and returns fitted values at each input point.
///
/// `span` is the fraction of points in each local neighborhood (0 < span
/// <= 1); `degree` is the local polynomial degree, 1 or 2. Inputs need not
/// be sorted. A neighborhood whose points all share one x value cannot
/// support a sloped fit; such points fall back to the weighted neighborhood
/// mean and are reported in [`LoessFit::degenerate`].
pub fn loess(x: &[f64], y: &[f64], span: f64, degree: usize) -> Result<LoessFit, KernelError> {
    if x.len() != y.len() {
        return Err(KernelError::LengthMismatch);
    }
    let n = x.len();
    if n < 3 {
        return Err(KernelError::TooFewPoints);
    }
    if !(span > 0.0 && span <= 1.0) {
        return Err(KernelError::InvalidSpan);
    }
    if !(1..=2).contains(&degree) {
        return Err(KernelError::InvalidDegree);
    }
    // Widen very small neighborhoods toward degree + 2 points for stability,
    // but never past n itself (n = 3 with degree 2 is legal; the local fit
    // degrades its degree when the system is singular).
    let q = ((span * n as f64).ceil() as usize).max(degree + 2).min(n);

    let mut fitted = Vec::with_capacity(n);
    let mut degenerate = Vec::new();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let x0 = x[i];
        order.clear();
        order.extend(0..n);
        order.sort_unstable_by(|&a, &b| {
            (x[a] - x0)
                .abs()
                .total_cmp(&(x[b] - x0).abs())
                .then(x[a].total_cmp(&x[b]))
                .then(a.cmp(&b))
        });
        let neighbors = &order[..q];
        let h = (x[neighbors[q - 1]] - x0).abs();

        if h == 0.0 {
            // Every neighbor sits on the target's x: plain mean.
            let mean = neighbors.iter().map(|&j| y[j]).sum::<f64>() / q as f64;
            fitted.push(mean);
            degenerate.push(i);
            continue;
        }

        let weights: Vec<f64> = neighbors
            .iter()
            .map(|&j| tricube((x[j] - x0).abs() / h))
            .collect();

        match local_fit(x, y, neighbors, &weights, x0, degree) {
            (value, true) => fitted.push(value),
            (value, false) => {
                fitted.push(value);
                degenerate.push(i);
            }
        }
    }
    Ok(LoessFit { fitted, degenerate })
}

/// Weighted polynomial fit in centered coordinates; returns the fitted value
/// at the center and whether the requested degree was achieved. Degrades one
/// degree at a time when the normal equations are singular.
fn local_fit(
    x: &[f64],
    y: &[f64],
    neighbors: &[usize],
    weights: &[f64],
    x0: f64,
    degree: usize,
) -> (f64, bool) {
    for deg in (1..=degree).rev() {
        let dim = deg + 1;
        let mut a = alloc::vec![alloc::vec![0.0; dim]; dim];
        let mut b = alloc::vec![0.0; dim];
        for (&j, &w) in neighbors.iter().zip(weights) {
            if w == 0.0 {
                continue;
            }
            let z = x[j] - x0;
            let mut pow = alloc::vec![1.0; 2 * deg + 1];
            for p in 1..=2 * deg {
                pow[p] = pow[p - 1] * z;
            }
            for r in 0..dim {
                for c in 0..dim {
                    a[r][c] += w * pow[r + c];
                }
                b[r] += w * pow[r] * y[j];
            }
        }
        if let Some(beta) = solve_dense(a, b) {
            return (beta[0], deg == degree);
        }
    }
    // Degree zero: weighted neighborhood mean; equal weights if the tricube
    // weights all vanished (every neighbor exactly at the cutoff distance).
    let wsum: f64 = weights.iter().sum();
    let value = if wsum > 0.0 {
        neighbors
            .iter()
            .zip(weights)
            .map(|(&j, &w)| w * y[j])
            .sum::<f64>()
            / wsum
    } else {
        neighbors.iter().map(|&j| y[j]).sum::<f64>() / neighbors.len() as f64
    };
    (value, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            loess(&[1.0, 2.0, 3.0], &[1.0, 2.0], 0.5, 1),
            Err(KernelError::LengthMismatch)
        ));
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [1.0, 2.0, 3.0, 4.0];
        assert!(matches!(
            loess(&x[..2], &y[..2], 0.5, 1),
            Err(KernelError::TooFewPoints)
        ));
        assert!(matches!(loess(&x, &y, 0.0, 1), Err(KernelError::InvalidSpan)));
        assert!(matches!(loess(&x, &y, 1.1, 1), Err(KernelError::InvalidSpan)));
        assert!(matches!(loess(&x, &y, 0.5, 0), Err(KernelError::InvalidDegree)));
        assert!(matches!(loess(&x, &y, 0.5, 3), Err(KernelError::InvalidDegree)));
    }

    #[test]
    fn reproduces_lines_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let n = rng.random_range(5..40);
            let slope: f64 = rng.random_range(-5.0..5.0);
            let intercept: f64 = rng.random_range(-10.0..10.0);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
            let y: Vec<f64> = x.iter().map(|v| intercept + slope * v).collect();
            for span in [0.3, 0.75, 1.0] {
                let fit = loess(&x, &y, span, 1).unwrap();
                for (f, t) in fit.fitted.iter().zip(&y) {
                    assert_relative_eq!(f, t, epsilon = 1e-9, max_relative = 1e-9);
                }
                assert!(fit.degenerate.is_empty());
            }
        }
    }

    #[test]
    fn degree_two_reproduces_quadratics() {
        let x: Vec<f64> = (0..25).map(|i| i as f64 / 3.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 0.5 * v + 0.25 * v * v).collect();
        for span in [0.3, 0.5, 0.75, 1.0] {
            let fit = loess(&x, &y, span, 2).unwrap();
            for (f, t) in fit.fitted.iter().zip(&y) {
                assert_relative_eq!(f, t, epsilon = 1e-9, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn three_points_fit_with_degraded_degree() {
        // The minimum legal input cannot support a local quadratic (the
        // farthest neighbor always carries zero weight), so every point
        // degrades; with distinct x the fit still lands on the data.
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 1.0, 4.0];
        let fit = loess(&x, &y, 0.75, 2).unwrap();
        assert_eq!(fit.degenerate, vec![0, 1, 2]);
        for (f, t) in fit.fitted.iter().zip(&y) {
            assert_relative_eq!(f, t, epsilon = 1e-12);
        }
    }

    #[test]
    fn coincident_x_falls_back_to_neighborhood_mean() {
        let x = [1.0, 1.0, 1.0, 5.0, 6.0];
        let y = [2.0, 4.0, 6.0, 1.0, 1.0];
        // Span small enough that the first three points see only each other.
        let fit = loess(&x, &y, 0.3, 1).unwrap();
        for i in 0..3 {
            assert!(fit.degenerate.contains(&i));
            assert_relative_eq!(fit.fitted[i], 4.0, max_relative = 1e-12);
        }
        assert!(!fit.degenerate.contains(&3));
    }

    /// Straightforward reimplementation: per point, sort by distance with
    /// the same tie-break, solve the raw-basis normal equations with
    /// Cramer's rule.
    fn oracle_fit(x: &[f64], y: &[f64], span: f64, degree: usize, i: usize) -> f64 {
        let n = x.len();
        let q = ((span * n as f64).ceil() as usize).max(degree + 2).min(n);
        let x0 = x[i];
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| {
            (x[a] - x0)
                .abs()
                .total_cmp(&(x[b] - x0).abs())
                .then(x[a].total_cmp(&x[b]))
                .then(a.cmp(&b))
        });
        let neighbors = &idx[..q];
        let h = (x[neighbors[q - 1]] - x0).abs();
        let w: Vec<f64> = neighbors
            .iter()
            .map(|&j| {
                let u = (x[j] - x0).abs() / h;
                if u >= 1.0 {
                    0.0
                } else {
                    (1.0 - u.powi(3)).powi(3)
                }
            })
            .collect();
        // Raw-basis moments: s[p] = sum w x^p, t[p] = sum w x^p y.
        let mut s = [0.0f64; 5];
        let mut t = [0.0f64; 3];
        for (&j, &wj) in neighbors.iter().zip(&w) {
            for (p, sp) in s.iter_mut().enumerate() {
                *sp += wj * x[j].powi(p as i32);
            }
            for (p, tp) in t.iter_mut().enumerate() {
                *tp += wj * x[j].powi(p as i32) * y[j];
            }
        }
        match degree {
            1 => {
                let det = s[0] * s[2] - s[1] * s[1];
                let b0 = (t[0] * s[2] - t[1] * s[1]) / det;
                let b1 = (s[0] * t[1] - s[1] * t[0]) / det;
                b0 + b1 * x0
            }
            2 => {
                let det = s[0] * (s[2] * s[4] - s[3] * s[3]) - s[1] * (s[1] * s[4] - s[2] * s[3])
                    + s[2] * (s[1] * s[3] - s[2] * s[2]);
                let d0 = t[0] * (s[2] * s[4] - s[3] * s[3]) - s[1] * (t[1] * s[4] - t[2] * s[3])
                    + s[2] * (t[1] * s[3] - t[2] * s[2]);
                let d1 = s[0] * (t[1] * s[4] - t[2] * s[3]) - t[0] * (s[1] * s[4] - s[2] * s[3])
                    + s[2] * (s[1] * t[2] - s[2] * t[1]);
                let d2 = s[0] * (s[2] * t[2] - s[3] * t[1]) - s[1] * (s[1] * t[2] - s[2] * t[1])
                    + t[0] * (s[1] * s[3] - s[2] * s[2]);
                (d0 + d1 * x0 + d2 * x0 * x0) / det
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn agrees_with_per_point_normal_equation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 40;
        let x: Vec<f64> = (0..n).map(|i| i as f64 * 0.15).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| v.sin() + 0.1 * rng.random_range(-1.0..1.0))
            .collect();
        for degree in [1, 2] {
            for span in [0.4, 0.75, 1.0] {
                let fit = loess(&x, &y, span, degree).unwrap();
                assert!(fit.degenerate.is_empty());
                for i in 0..n {
                    let expect = oracle_fit(&x, &y, span, degree, i);
                    assert_relative_eq!(fit.fitted[i], expect, epsilon = 1e-9, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn unsorted_input_matches_sorted_input() {
        let x_sorted: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let y_sorted: Vec<f64> = x_sorted.iter().map(|v| (v * 0.4).cos()).collect();
        let fit_sorted = loess(&x_sorted, &y_sorted, 0.6, 2).unwrap();

        // Reverse the input order; fitted values must follow the points.
        let x_rev: Vec<f64> = x_sorted.iter().rev().cloned().collect();
        let y_rev: Vec<f64> = y_sorted.iter().rev().cloned().collect();
        let fit_rev = loess(&x_rev, &y_rev, 0.6, 2).unwrap();
        for i in 0..20 {
            assert_relative_eq!(
                fit_sorted.fitted[i],
                fit_rev.fitted[19 - i],
                epsilon = 1e-10,
                max_relative = 1e-10
            );
        }
    }
}
