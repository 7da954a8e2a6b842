//! Ensemble statistics and the two hypothesis tests the comparison reports
//! use. No external statistics dependency: the critical machinery is the
//! asymptotic Kolmogorov distribution and fixed normal critical values.
//!
//! Documented critical values (standard normal):
//! one-sided 95% -> 1.645, one-sided 99% -> 2.326, two-sided 95% -> 1.960.

use serde::{Deserialize, Serialize};

pub const Z_ONE_SIDED_95: f64 = 1.645;
pub const Z_ONE_SIDED_99: f64 = 2.326;
pub const Z_TWO_SIDED_95: f64 = 1.960;

/// Mean, sample standard deviation, and the 95% CI half-width
/// 1.96·std/√replicas.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub ci95_half_width: f64,
}

impl Summary {
    /// Needs at least two values for any CI.
    pub fn of(values: &[f64]) -> Summary {
        assert!(values.len() >= 2, "summary needs >= 2 replicas for a CI");
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let std = var.sqrt();
        Summary {
            n,
            mean,
            std,
            ci95_half_width: Z_TWO_SIDED_95 * std / (n as f64).sqrt(),
        }
    }

    pub fn ci_contains(&self, value: f64) -> bool {
        (self.mean - value).abs() <= self.ci95_half_width
    }
}

/// Two-sample Kolmogorov-Smirnov test. Returns the statistic D and the
/// asymptotic p-value Q_KS(λ) with the Stephens small-sample correction
/// λ = D(√N + 0.12 + 0.11/√N), N = mn/(m+n).
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert!(!xs.is_empty() && !ys.is_empty());
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(|p, q| p.partial_cmp(q).unwrap());
    b.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (m, n) = (a.len(), b.len());
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < m && j < n {
        let x = a[i].min(b[j]);
        while i < m && a[i] <= x {
            i += 1;
        }
        while j < n && b[j] <= x {
            j += 1;
        }
        let diff = (i as f64 / m as f64 - j as f64 / n as f64).abs();
        if diff > d {
            d = diff;
        }
    }
    let ne = (m as f64 * n as f64) / (m as f64 + n as f64);
    let sqrt_ne = ne.sqrt();
    let lambda = d * (sqrt_ne + 0.12 + 0.11 / sqrt_ne);
    (d, kolmogorov_q(lambda))
}

/// Asymptotic Kolmogorov survival function Q(λ) = 2 Σ_{j>=1} (−1)^{j−1}
/// e^{−2 j² λ²}.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = (-2.0 * (j as f64 * lambda).powi(2)).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-14 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Welch's t statistic for the difference of two means (positive when the
/// first sample is larger). With the replica counts used here (>= 50) the
/// statistic is compared against normal critical values.
pub fn welch_t(a: &Summary, b: &Summary) -> f64 {
    let se = (a.std.powi(2) / a.n as f64 + b.std.powi(2) / b.n as f64).sqrt();
    (a.mean - b.mean) / se
}

/// One-sample t statistic for `mean > 0` on paired differences.
pub fn paired_t(diffs: &[f64]) -> f64 {
    let s = Summary::of(diffs);
    s.mean / (s.std / (s.n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{exp_time, rng_from_seed};
    use approx::assert_abs_diff_eq;

    #[test]
    fn summary_basics() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_abs_diff_eq!(s.mean, 2.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.std, (5.0f64 / 3.0).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            s.ci95_half_width,
            1.96 * s.std / 2.0,
            epsilon = 1e-12
        );
        assert!(s.ci_contains(2.5));
        assert!(!s.ci_contains(10.0));
    }

    #[test]
    fn kolmogorov_q_reference_points() {
        // Q(0.83) ~ 0.4993, Q(1.36) ~ 0.0489 (classic table values).
        assert_abs_diff_eq!(kolmogorov_q(0.828), 0.5, epsilon = 0.01);
        assert_abs_diff_eq!(kolmogorov_q(1.358), 0.05, epsilon = 0.003);
        assert_eq!(kolmogorov_q(0.0), 1.0);
        assert!(kolmogorov_q(3.0) < 1e-6);
    }

    #[test]
    fn ks_same_distribution_has_high_p() {
        let mut rng = rng_from_seed(4);
        let xs: Vec<f64> = (0..300).map(|_| exp_time(&mut rng, 1.0)).collect();
        let ys: Vec<f64> = (0..300).map(|_| exp_time(&mut rng, 1.0)).collect();
        let (_, p) = ks_two_sample(&xs, &ys);
        assert!(p > 0.01, "p = {p}");
    }

    #[test]
    fn ks_detects_shifted_distribution() {
        let mut rng = rng_from_seed(5);
        let xs: Vec<f64> = (0..300).map(|_| exp_time(&mut rng, 1.0)).collect();
        let ys: Vec<f64> = (0..300).map(|_| 0.5 + exp_time(&mut rng, 1.0)).collect();
        let (d, p) = ks_two_sample(&xs, &ys);
        assert!(d > 0.2);
        assert!(p < 1e-6, "p = {p}");
    }

    #[test]
    fn welch_separates_means() {
        let a = Summary::of(&vec![1.0, 1.1, 0.9, 1.05, 0.95]);
        let b = Summary::of(&vec![2.0, 2.1, 1.9, 2.05, 1.95]);
        assert!(welch_t(&b, &a) > Z_ONE_SIDED_99);
        assert!(welch_t(&a, &b) < -Z_ONE_SIDED_99);
    }
}
