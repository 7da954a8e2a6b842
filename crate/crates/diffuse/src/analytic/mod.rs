//! Closed-form and ODE limit objects: the logistic timing of adoption on
//! complete graphs, the generalized timing on random k-regular graphs and its
//! inverse, mean-field comparison curves, exploration-process fluid limits,
//! cycle and early-adoption limits, and exact finite-n expected times.
//!
//! All functions here are pure and reentrant.

mod ode;

pub use ode::ode_generalized;

use crate::curve::{CurveMeta, CurveSeries};
use crate::{Error, Result};

fn check_fraction(what: &'static str, s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(what, s, "in the open interval (0, 1)"));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "a positive finite rate"));
    }
    Ok(())
}

fn check_k(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::domain("k", k as f64, ">= 3"));
    }
    Ok(())
}

/// Complete-graph timing limit: θ(s) = (1/β) ln(s/(1−s)), centered so
/// θ(1/2) = 0. The time to grow the adopter fraction from α to γ converges
/// to θ(γ) − θ(α).
pub fn theta(s: f64, beta: f64) -> Result<f64> {
    check_fraction("s", s)?;
    check_beta(beta)?;
    Ok((s / (1.0 - s)).ln() / beta)
}

/// Inverse of [`theta`]: the logistic curve s(t) = e^{βt}/(1 + e^{βt}).
pub fn logistic_s(t: f64, beta: f64) -> f64 {
    1.0 / (1.0 + (-beta * t).exp())
}

/// Random k-regular timing limit
/// θ̃(s) = k/(β(k−2)) · [ln(1 − (1−s)^{2/k−1}) − ln(1 − 2^{1−2/k})].
///
/// Both logarithm arguments in that printed form are negative reals for
/// k >= 3, so the function is evaluated on the ratio
/// ((1−s)^{2/k−1} − 1) / (2^{1−2/k} − 1), the numerically valid branch.
/// Normalized so θ̃(1/2) = 0.
pub fn theta_tilde(s: f64, k: usize, beta: f64) -> Result<f64> {
    check_fraction("s", s)?;
    check_k(k)?;
    check_beta(beta)?;
    let kf = k as f64;
    let num = (1.0 - s).powf(2.0 / kf - 1.0) - 1.0;
    let den = 2f64.powf(1.0 - 2.0 / kf) - 1.0;
    Ok(kf / (beta * (kf - 2.0)) * (num / den).ln())
}

/// Inverse of [`theta_tilde`]:
/// s̃(t) = 1 − (1 + c·e^{β(k−2)t/k})^{−k/(k−2)} with c = 2^{1−2/k} − 1.
/// Evaluated in log space so large |t| cannot overflow.
pub fn s_tilde(t: f64, k: usize, beta: f64) -> f64 {
    let kf = k as f64;
    let c = 2f64.powf(1.0 - 2.0 / kf) - 1.0;
    let u = beta * (kf - 2.0) * t / kf;
    // ln(1 + c e^u), stable for both signs of u.
    let log1p_ce_u = if u > 700.0 {
        c.ln() + u
    } else {
        (c * u.exp()).ln_1p()
    };
    -(-kf / (kf - 2.0) * log1p_ce_u).exp_m1()
}

/// The mean-field timing approximation (k/((k−1)β)) ln(s/(1−s)): logistic
/// timing rescaled by k/(k−1). It underestimates the true adoption time on
/// random regular graphs.
pub fn mean_field_theta(s: f64, k: usize, beta: f64) -> Result<f64> {
    check_k(k)?;
    let kf = k as f64;
    theta(s, beta * (kf - 1.0) / kf)
}

/// Mean-field jump rate λ̃ᴹ_i = β(k−1)/k · i(n−i)/(n−2).
pub fn mean_field_rate(i: usize, n: usize, k: usize, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    check_k(k)?;
    if n < 3 {
        return Err(Error::domain("n", n as f64, ">= 3"));
    }
    if i < 1 || i > n - 1 {
        return Err(Error::domain("i", i as f64, "in [1, n-1]"));
    }
    let (i, n, kf) = (i as f64, n as f64, k as f64);
    Ok(beta * (kf - 1.0) / kf * i * (n - i) / (n - 2.0))
}

/// Fluid limit of the sleeping-node fraction: f(x) = (1 − 2x/k)^{k/2},
/// the unique solution of f'(x) = −k f/(k − 2x) with f(0) = 1.
pub fn f_sleep(x: f64, k: usize) -> Result<f64> {
    check_k(k)?;
    let kf = k as f64;
    if !(0.0..=kf / 2.0).contains(&x) {
        return Err(Error::domain("x", x, "in [0, k/2]"));
    }
    Ok((1.0 - 2.0 * x / kf).powf(kf / 2.0))
}

/// Fluid limit of the active-clone fraction: g(x) = k(1 − f(x)) − 2x.
pub fn g_active(x: f64, k: usize) -> Result<f64> {
    let kf = k as f64;
    Ok(kf * (1.0 - f_sleep(x, k)?) - 2.0 * x)
}

/// Scaled iteration count at which a fraction α of nodes is awake:
/// j_α = f⁻¹(1−α) = (k/2)(1 − (1−α)^{2/k}), so f(j_α) = 1 − α.
pub fn j_alpha(alpha: f64, k: usize) -> Result<f64> {
    check_fraction("alpha", alpha)?;
    check_k(k)?;
    let kf = k as f64;
    Ok(kf / 2.0 * (1.0 - (1.0 - alpha).powf(2.0 / kf)))
}

/// Exact finite-n expectation of Δ_n(αn, γn) on the complete graph:
/// the sum of 1/λ_i over i = ⌈αn⌉ .. ⌈γn⌉−1 with λ_i = β i(n−i)/(n−1).
pub fn expected_delta_complete(n: usize, alpha: f64, gamma: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    check_fraction("alpha", alpha)?;
    check_fraction("gamma", gamma)?;
    if gamma < alpha {
        return Err(Error::domain("gamma", gamma, ">= alpha"));
    }
    let from = (alpha * n as f64).ceil() as usize;
    let to = (gamma * n as f64).ceil() as usize;
    if from < 1 || to > n {
        return Err(Error::domain("alpha*n", from as f64, "in [1, n]"));
    }
    let nf = n as f64;
    let mut total = 0.0;
    for i in from..to {
        let i = i as f64;
        total += (nf - 1.0) / (beta * i * (nf - i));
    }
    Ok(total)
}

/// Graph family for the early-adoption expectations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EarlyFamily {
    Complete,
    Regular { k: usize },
}

/// Exact expected time of the m-th adoption, T_n(m), in the early regime.
///
/// Complete graph: Σ_{i=1}^{m−1} 1/λ_i with λ_i = β i(n−i)/(n−1).
/// Random k-regular: under the tree assumption the active-clone count after
/// i pairings is A(i) = k + i(k−2) and every pairing wakes a node, so
/// T_n(m) = (k/β) Σ_{i=0}^{m−2} 1/(k + i(k−2)).
/// Both give T(1) = 0 (the seed adopts at time zero).
///
/// Valid in the m = O(log n) regime; logs a warning once m reaches √n, where
/// the tree assumption degrades.
pub fn expected_early_time(family: EarlyFamily, n: usize, m: usize, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if m < 1 || m > n {
        return Err(Error::domain("m", m as f64, "in [1, n]"));
    }
    if (m * m) >= n {
        log::warn!("early-adoption sum with m = {m} >= sqrt(n = {n}): tree assumption degrades");
    }
    match family {
        EarlyFamily::Complete => {
            let nf = n as f64;
            Ok((1..m)
                .map(|i| {
                    let i = i as f64;
                    (nf - 1.0) / (beta * i * (nf - i))
                })
                .sum())
        }
        EarlyFamily::Regular { k } => {
            check_k(k)?;
            let kf = k as f64;
            Ok((0..m.saturating_sub(1))
                .map(|i| kf / (beta * (kf + i as f64 * (kf - 2.0))))
                .sum())
        }
    }
}

/// Cycle limit: Δ_n(αn, γn)/n → (γ − α)/β.
pub fn cycle_limit(alpha: f64, gamma: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    check_fraction("alpha", alpha)?;
    check_fraction("gamma", gamma)?;
    if gamma < alpha {
        return Err(Error::domain("gamma", gamma, ">= alpha"));
    }
    Ok((gamma - alpha) / beta)
}

/// Deviation |[1 − (1−s)^{1−2/k}] − s|: how far the regular-graph contact
/// factor sits from its large-k limit s. O(1/k) for fixed s.
pub fn large_k_limit_check(s: f64, k: usize) -> Result<f64> {
    check_fraction("s", s)?;
    if k < 1 {
        return Err(Error::domain("k", k as f64, ">= 1"));
    }
    let kf = k as f64;
    Ok(((1.0 - (1.0 - s).powf(1.0 - 2.0 / kf)) - s).abs())
}

/// Parameter bundle exposing the k-regular limit functions.
#[derive(Clone, Copy, Debug)]
pub struct LimitFns {
    pub k: usize,
    pub beta: f64,
}

impl LimitFns {
    pub fn new(k: usize, beta: f64) -> Result<Self> {
        check_k(k)?;
        check_beta(beta)?;
        Ok(Self { k, beta })
    }

    pub fn theta_tilde(&self, s: f64) -> Result<f64> {
        theta_tilde(s, self.k, self.beta)
    }

    pub fn s_tilde(&self, t: f64) -> f64 {
        s_tilde(t, self.k, self.beta)
    }

    pub fn f(&self, x: f64) -> Result<f64> {
        f_sleep(x, self.k)
    }

    pub fn g(&self, x: f64) -> Result<f64> {
        g_active(x, self.k)
    }

    pub fn j_alpha(&self, alpha: f64) -> Result<f64> {
        j_alpha(alpha, self.k)
    }

    /// θ̃(γ) − θ̃(α): the limit of Δ_n(αn, γn).
    pub fn span(&self, alpha: f64, gamma: f64) -> Result<f64> {
        Ok(self.theta_tilde(gamma)? - self.theta_tilde(alpha)?)
    }
}

/// Closed-form timing models exportable as curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimingModel {
    /// Complete graph (classic Bass): θ.
    Bass,
    /// Random k-regular: θ̃.
    GenBass { k: usize },
    /// Mean-field approximation: (k/(k−1))θ.
    MeanField { k: usize },
}

impl TimingModel {
    pub fn label(&self) -> &'static str {
        match self {
            TimingModel::Bass => "bass",
            TimingModel::GenBass { .. } => "genbass",
            TimingModel::MeanField { .. } => "meanfield",
        }
    }

    pub fn k_label(&self) -> String {
        match self {
            TimingModel::Bass => "-".to_string(),
            TimingModel::GenBass { k } | TimingModel::MeanField { k } => k.to_string(),
        }
    }

    pub fn eval(&self, s: f64, beta: f64) -> Result<f64> {
        match *self {
            TimingModel::Bass => theta(s, beta),
            TimingModel::GenBass { k } => theta_tilde(s, k, beta),
            TimingModel::MeanField { k } => mean_field_theta(s, k, beta),
        }
    }
}

/// Samples t(s) = model(s) − model(anchor) over a fraction grid, producing a
/// `(s, t)` curve table.
pub fn timing_curve(
    model: TimingModel,
    beta: f64,
    s_grid: &[f64],
    anchor: f64,
) -> Result<CurveSeries> {
    let shift = model.eval(anchor, beta)?;
    let mut points = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        points.push((s, model.eval(s, beta)? - shift));
    }
    CurveSeries::new(
        "s",
        "t",
        points,
        CurveMeta::new(model.label(), &model.k_label(), beta, Some(anchor)),
    )
}

/// Samples s(t) over a time grid for the closed-form adoption curves,
/// shifted so the fraction `anchor` sits at t = 0.
pub fn adoption_curve_analytic(
    model: TimingModel,
    beta: f64,
    t_grid: &[f64],
    anchor: f64,
) -> Result<CurveSeries> {
    let shift = model.eval(anchor, beta)?;
    let eval_s = |t: f64| -> f64 {
        match model {
            TimingModel::Bass => logistic_s(t + shift, beta),
            TimingModel::GenBass { k } => s_tilde(t + shift, k, beta),
            TimingModel::MeanField { k } => logistic_s(t + shift, beta * (k as f64 - 1.0) / k as f64),
        }
    };
    let points: Vec<(f64, f64)> = t_grid.iter().map(|&t| (t, eval_s(t))).collect();
    CurveSeries::new(
        "t",
        "s",
        points,
        CurveMeta::new(model.label(), &model.k_label(), beta, Some(anchor)),
    )
}
