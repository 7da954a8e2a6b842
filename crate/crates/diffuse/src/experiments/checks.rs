//! The named acceptance checks: seeded, threshold-pinned verifications that
//! the stochastic processes reproduce the analytic limits. Every check is a
//! pure function of its pinned base seed, so a pass/fail outcome is
//! deterministic. The CLI exposes them via `experiment --check <name>`; the
//! `acceptance` integration test runs them all.

use rayon::prelude::*;

use crate::analytic::{
    j_alpha, mean_field_theta, theta, theta_tilde, EarlyFamily, TimingModel,
};
use crate::explore::{coupled_run, coupled_run_innovators, fluid_deviation, tree_check_run};
use crate::graph::{cycle_graph, sample_simple_connected, DegreeSpec, DEFAULT_MAX_TRIES};
use crate::numerics::integrate;
use crate::rng::derive_seed;
use crate::sim::{simulate, simulate_complete_exact, ModelParams, Stop};
use crate::stats::{paired_t, welch_t, Summary, Z_ONE_SIDED_95, Z_ONE_SIDED_99, Z_TWO_SIDED_95};
use crate::{Error, Result};

/// One asserted condition inside a check.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of one named acceptance check.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: &'static str,
    pub title: &'static str,
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }
}

fn push(lines: &mut Vec<CheckLine>, label: impl Into<String>, passed: bool, detail: String) {
    lines.push(CheckLine {
        label: label.into(),
        passed,
        detail,
    });
}

/// All check names, in criterion order.
pub const CHECK_NAMES: [&str; 13] = [
    "analytic-consistency",
    "inverse-ode",
    "complete-major",
    "regular-major",
    "cross-simulator",
    "fluid-limit",
    "meanfield-gap",
    "asymmetry",
    "cycle",
    "early-adoption",
    "tree-likeness",
    "figure3",
    "innovators",
];

/// Base seed namespace for the checks; check i uses `SEED_BASE + i`.
const SEED_BASE: u64 = 20_260_809;

/// Runs one named check.
pub fn run_check(name: &str) -> Result<CheckReport> {
    match name {
        "analytic-consistency" => check_analytic_consistency(),
        "inverse-ode" => check_inverse_ode(),
        "complete-major" => check_complete_major(),
        "regular-major" => check_regular_major(),
        "cross-simulator" => check_cross_simulator(),
        "fluid-limit" => check_fluid_limit(),
        "meanfield-gap" => check_meanfield_gap(),
        "asymmetry" => check_asymmetry(),
        "cycle" => check_cycle(),
        "early-adoption" => check_early_adoption(),
        "tree-likeness" => check_tree_likeness(),
        "figure3" => check_figure3(),
        "innovators" => check_innovators(),
        other => Err(Error::Params(format!(
            "unknown check `{other}`; known: {}",
            CHECK_NAMES.join(", ")
        ))),
    }
}

/// Criterion 1: θ̃ spans agree with both independent integral routes to 1e-8.
fn check_analytic_consistency() -> Result<CheckReport> {
    let mut lines = Vec::new();
    let beta = 1.0;
    for k in [3usize, 4, 5, 10] {
        let kf = k as f64;
        let grid: Vec<f64> = (1..20).map(|i| i as f64 * 0.05).collect();
        let mut worst_rate = 0.0f64;
        let mut worst_expl = 0.0f64;
        for (i, &a) in grid.iter().enumerate() {
            for &g in &grid[i..] {
                let closed = theta_tilde(g, k, beta)? - theta_tilde(a, k, beta)?;
                let by_rate = integrate(
                    |s| 1.0 / (beta * (1.0 - (1.0 - s).powf(1.0 - 2.0 / kf)) * (1.0 - s)),
                    a,
                    g,
                    1e-10,
                )?;
                let by_exploration = integrate(
                    |x| kf / (beta * crate::analytic::g_active(x, k).unwrap()),
                    j_alpha(a, k)?,
                    j_alpha(g, k)?,
                    1e-10,
                )?;
                worst_rate = worst_rate.max((closed - by_rate).abs());
                worst_expl = worst_expl.max((closed - by_exploration).abs());
            }
        }
        push(
            &mut lines,
            format!("k={k}: span vs quadrature of 1/(ds/dt)"),
            worst_rate <= 1e-8,
            format!("max |diff| = {worst_rate:.3e} (tol 1e-8)"),
        );
        push(
            &mut lines,
            format!("k={k}: span vs (k/beta) int dx/g(x)"),
            worst_expl <= 1e-8,
            format!("max |diff| = {worst_expl:.3e} (tol 1e-8)"),
        );
    }
    Ok(CheckReport {
        name: "analytic-consistency",
        title: "criterion 1: analytic self-consistency",
        lines,
    })
}

/// Criterion 2: inverse pairs to 1e-10 and ODE residuals below 1e-6.
fn check_inverse_ode() -> Result<CheckReport> {
    let mut lines = Vec::new();
    let beta = 1.0;
    for k in [3usize, 4, 5, 10] {
        let kf = k as f64;
        let mut worst_inv = 0.0f64;
        for i in 0..=1000 {
            let s = 1e-4 + (1.0 - 2e-4) * i as f64 / 1000.0;
            let t = theta_tilde(s, k, beta)?;
            worst_inv = worst_inv.max((crate::analytic::s_tilde(t, k, beta) - s).abs());
        }
        push(
            &mut lines,
            format!("k={k}: s_tilde(theta_tilde(s)) = s"),
            worst_inv <= 1e-10,
            format!("max |diff| = {worst_inv:.3e} (tol 1e-10)"),
        );

        let t_lo = theta_tilde(0.001, k, beta)?;
        let t_hi = theta_tilde(0.999, k, beta)?;
        let h = 1e-5;
        let mut worst_res = 0.0f64;
        for i in 0..1000 {
            let t = t_lo + (t_hi - t_lo) * i as f64 / 999.0;
            let s = crate::analytic::s_tilde(t, k, beta);
            let fd = (crate::analytic::s_tilde(t + h, k, beta)
                - crate::analytic::s_tilde(t - h, k, beta))
                / (2.0 * h);
            let rhs = beta * (1.0 - (1.0 - s).powf(1.0 - 2.0 / kf)) * (1.0 - s);
            worst_res = worst_res.max((fd - rhs).abs());
        }
        push(
            &mut lines,
            format!("k={k}: generalized ODE residual"),
            worst_res < 1e-6,
            format!("max residual = {worst_res:.3e} (tol 1e-6)"),
        );
    }
    // classic Bass ODE residual
    let h = 1e-5;
    let t_lo = theta(0.001, 1.0)?;
    let t_hi = theta(0.999, 1.0)?;
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let t = t_lo + (t_hi - t_lo) * i as f64 / 999.0;
        let s = crate::analytic::logistic_s(t, 1.0);
        let fd =
            (crate::analytic::logistic_s(t + h, 1.0) - crate::analytic::logistic_s(t - h, 1.0))
                / (2.0 * h);
        worst = worst.max((fd - s * (1.0 - s)).abs());
    }
    push(
        &mut lines,
        "logistic ODE residual",
        worst < 1e-6,
        format!("max residual = {worst:.3e} (tol 1e-6)"),
    );
    Ok(CheckReport {
        name: "inverse-ode",
        title: "criterion 2: inverse and ODE checks",
        lines,
    })
}

/// Criterion 3: complete graph, n = 1e5, 50 seeds, mean quartile span within
/// 2% of 2 ln 3.
fn check_complete_major() -> Result<CheckReport> {
    let base = SEED_BASE + 3;
    let n = 100_000;
    let values: Vec<f64> = (0..50u64)
        .into_par_iter()
        .map(|r| {
            let tr = simulate_complete_exact(n, 1.0, derive_seed(base, r), Stop::Count(75_000))?;
            tr.delta(0.25, 0.75)
        })
        .collect::<Result<_>>()?;
    let s = Summary::of(&values);
    let target = 2.0 * 3f64.ln();
    let rel = (s.mean - target).abs() / target;
    let mut lines = Vec::new();
    push(
        &mut lines,
        "mean Delta(0.25n, 0.75n) within 2% of 2 ln 3",
        rel <= 0.02,
        format!("mean = {:.5} vs {:.5}, rel err {:.4}%", s.mean, target, rel * 100.0),
    );
    Ok(CheckReport {
        name: "complete-major",
        title: "criterion 3: complete graph major regime",
        lines,
    })
}

fn regular5_traces(base: u64, n: usize, replicas: u64, stop: Stop) -> Result<Vec<crate::sim::AdoptionTrace>> {
    (0..replicas)
        .into_par_iter()
        .map(|r| {
            let rep = derive_seed(base, r);
            let sample = sample_simple_connected(
                &DegreeSpec::regular(5),
                n,
                derive_seed(rep, 0),
                DEFAULT_MAX_TRIES,
            )?;
            simulate(&sample.graph, &ModelParams::si(1.0), derive_seed(rep, 1), stop)
        })
        .collect()
}

/// Criterion 4: random 5-regular, n = 2e4, 50 seeds on simple connected
/// samples: mean quartile span within 3% of 3.2169 and mean curve within
/// 0.02 sup-norm of the analytic limit after 1% anchoring.
fn check_regular_major() -> Result<CheckReport> {
    let base = SEED_BASE + 4;
    let n = 20_000;
    let traces = regular5_traces(base, n, 50, Stop::All)?;
    let values: Vec<f64> = traces
        .iter()
        .map(|t| t.delta(0.25, 0.75))
        .collect::<Result<_>>()?;
    let s = Summary::of(&values);
    let target = 3.2169;
    let rel = (s.mean - target).abs() / target;

    let mut lines = Vec::new();
    push(
        &mut lines,
        "mean Delta(0.25n, 0.75n) within 3% of 3.2169",
        rel <= 0.03,
        format!("mean = {:.5} vs {target}, rel err {:.4}%", s.mean, rel * 100.0),
    );

    let t_hi = theta_tilde(0.995, 5, 1.0)? - theta_tilde(0.01, 5, 1.0)?;
    let grid: Vec<f64> = (0..200).map(|i| t_hi * i as f64 / 199.0).collect();
    let meta = crate::curve::CurveMeta::new("sim", "5", 1.0, Some(0.01));
    let (mean_curve, _std) = super::aligned_mean_curve(&traces, 0.01, &grid, meta)?;
    let limit = crate::analytic::adoption_curve_analytic(TimingModel::GenBass { k: 5 }, 1.0, &grid, 0.01)?;
    let sup = mean_curve.sup_distance(&limit)?;
    push(
        &mut lines,
        "mean curve within 0.02 sup-norm of the analytic limit",
        sup <= 0.02,
        format!("sup deviation = {sup:.5} (tol 0.02)"),
    );
    Ok(CheckReport {
        name: "regular-major",
        title: "criterion 4: random 5-regular major regime",
        lines,
    })
}

/// Criterion 5: coupled exploration vs graph simulation, n = 1e4, k = 3,
/// 200 + 200 runs: two-sample KS on the quartile span with p > 0.01.
fn check_cross_simulator() -> Result<CheckReport> {
    let base = SEED_BASE + 5;
    let n = 10_000;
    let stop = Stop::Count(7_500);
    let explored: Vec<f64> = (0..200u64)
        .into_par_iter()
        .map(|r| {
            let tr = coupled_run(
                n,
                &DegreeSpec::regular(3),
                &ModelParams::si(1.0),
                derive_seed(base, r),
                stop,
            )?;
            tr.delta(0.25, 0.75)
        })
        .collect::<Result<_>>()?;
    let simulated: Vec<f64> = (0..200u64)
        .into_par_iter()
        .map(|r| {
            let rep = derive_seed(base ^ 0xFF, r);
            let sample = sample_simple_connected(
                &DegreeSpec::regular(3),
                n,
                derive_seed(rep, 0),
                DEFAULT_MAX_TRIES,
            )?;
            let tr = simulate(&sample.graph, &ModelParams::si(1.0), derive_seed(rep, 1), stop)?;
            tr.delta(0.25, 0.75)
        })
        .collect::<Result<_>>()?;
    let (d, p) = crate::stats::ks_two_sample(&explored, &simulated);
    let mut lines = Vec::new();
    push(
        &mut lines,
        "two-sample KS on Delta(0.25n, 0.75n): p > 0.01",
        p > 0.01,
        format!("D = {d:.4}, p = {p:.4}"),
    );
    Ok(CheckReport {
        name: "cross-simulator",
        title: "criterion 5: cross-simulator equivalence",
        lines,
    })
}

/// Criterion 6: fluid limit, n = 1e6, k = 5, 100 seeds: sup deviation of
/// N(j)/n from f(j/n) at most 0.01 in at least 99 seeds.
fn check_fluid_limit() -> Result<CheckReport> {
    let base = SEED_BASE + 6;
    let devs: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|r| fluid_deviation(1_000_000, 5, derive_seed(base, r)))
        .collect::<Result<_>>()?;
    let ok = devs.iter().filter(|&&d| d <= 0.01).count();
    let worst = devs.iter().cloned().fold(0.0f64, f64::max);
    let mut lines = Vec::new();
    push(
        &mut lines,
        "sup_j |N(j)/n - f(j/n)| <= 0.01 in >= 99/100 seeds",
        ok >= 99,
        format!("{ok}/100 within band; worst deviation = {worst:.5}"),
    );
    Ok(CheckReport {
        name: "fluid-limit",
        title: "criterion 6: fluid limit of the exploration process",
        lines,
    })
}

/// Criterion 7: the mean-field approximation underestimates the adoption
/// time: analytic ordering at every grid point, and the simulated 1%-99%
/// span exceeds the mean-field prediction while sitting within 5% of the
/// true limit.
fn check_meanfield_gap() -> Result<CheckReport> {
    let mut lines = Vec::new();
    for k in [3usize, 5, 10] {
        let mut ordered = true;
        let mut min_gap = f64::INFINITY;
        for i in 2..=99 {
            let s = i as f64 / 100.0;
            let mf = mean_field_theta(s, k, 1.0)? - mean_field_theta(0.01, k, 1.0)?;
            let tt = theta_tilde(s, k, 1.0)? - theta_tilde(0.01, k, 1.0)?;
            min_gap = min_gap.min(tt - mf);
            if mf >= tt {
                ordered = false;
            }
        }
        push(
            &mut lines,
            format!("k={k}: mean-field span < generalized span at every grid s"),
            ordered,
            format!("min gap = {min_gap:.5}"),
        );
    }

    let base = SEED_BASE + 7;
    let n = 20_000;
    let traces = regular5_traces(base, n, 50, Stop::Count(19_800))?;
    let values: Vec<f64> = traces
        .iter()
        .map(|t| t.delta(0.01, 0.99))
        .collect::<Result<_>>()?;
    let s = Summary::of(&values);
    let mf = 11.488;
    let tt = 13.010;
    push(
        &mut lines,
        "simulated mean Delta(0.01n, 0.99n) exceeds mean-field 11.488",
        s.mean > mf,
        format!("mean = {:.4}", s.mean),
    );
    let rel = (s.mean - tt).abs() / tt;
    push(
        &mut lines,
        "simulated mean within 5% of 13.010",
        rel <= 0.05,
        format!("mean = {:.4} vs {tt}, rel err {:.3}%", s.mean, rel * 100.0),
    );
    Ok(CheckReport {
        name: "meanfield-gap",
        title: "criterion 7: mean-field underestimates adoption time",
        lines,
    })
}

/// Criterion 8: asymmetry of the generalized curve; symmetric complete-graph
/// halves; simulated orderings at 95% confidence.
fn check_asymmetry() -> Result<CheckReport> {
    let mut lines = Vec::new();
    for k in [3usize, 5, 10] {
        let mut ordered = true;
        for i in 1..10 {
            let a = i as f64 * 0.05;
            let first = -theta_tilde(a, k, 1.0)?;
            let second = theta_tilde(1.0 - a, k, 1.0)?;
            if first <= second {
                ordered = false;
            }
        }
        push(
            &mut lines,
            format!("k={k}: first half slower than second at every grid alpha"),
            ordered,
            String::new(),
        );
    }

    // simulated 5-regular at alpha = 0.25
    let base = SEED_BASE + 8;
    let traces = regular5_traces(base, 20_000, 50, Stop::Count(15_000))?;
    let rows = super::asymmetry_from_traces(&traces, 0.25)?;
    let diffs: Vec<f64> = rows.iter().map(|r| r.first_half - r.second_half).collect();
    let t = paired_t(&diffs);
    push(
        &mut lines,
        "simulated 5-regular ordering at 95% confidence",
        t >= Z_ONE_SIDED_95,
        format!("paired t = {t:.2} (critical {Z_ONE_SIDED_95})"),
    );

    // complete graph: halves equal within CI
    let comp: Vec<f64> = (0..50u64)
        .into_par_iter()
        .map(|r| {
            let tr = simulate_complete_exact(10_000, 1.0, derive_seed(base ^ 0xAB, r), Stop::Count(7_500))?;
            Ok(tr.delta(0.25, 0.5)? - tr.delta(0.5, 0.75)?)
        })
        .collect::<Result<_>>()?;
    let t = paired_t(&comp);
    push(
        &mut lines,
        "complete-graph halves equal within CI",
        t.abs() <= Z_TWO_SIDED_95,
        format!("paired t = {t:.2} (|t| <= {Z_TWO_SIDED_95})"),
    );
    Ok(CheckReport {
        name: "asymmetry",
        title: "criterion 8: asymmetry of the adoption curve",
        lines,
    })
}

/// Criterion 9: cycle, n = 1e5, 20 seeds: per-seed Delta/n within 2% of 0.5.
fn check_cycle() -> Result<CheckReport> {
    let base = SEED_BASE + 9;
    let n = 100_000;
    let graph = cycle_graph(n)?;
    let scaled: Vec<f64> = (0..20u64)
        .into_par_iter()
        .map(|r| {
            let tr = simulate(&graph, &ModelParams::si(1.0), derive_seed(base, r), Stop::Count(75_000))?;
            Ok(tr.delta(0.25, 0.75)? / n as f64)
        })
        .collect::<Result<_>>()?;
    let worst = scaled
        .iter()
        .map(|v| (v - 0.5).abs())
        .fold(0.0f64, f64::max);
    let all_in = scaled.iter().all(|v| (v - 0.5).abs() <= 0.01);
    let mut lines = Vec::new();
    push(
        &mut lines,
        "per-seed Delta(0.25n, 0.75n)/n within 2% of 0.5",
        all_in,
        format!("worst |dev| = {worst:.5} over 20 seeds (tol 0.01)"),
    );
    Ok(CheckReport {
        name: "cycle",
        title: "criterion 9: cycle graph scaling",
        lines,
    })
}

/// Criterion 10: early adoption, T(ceil(3 log n)) against the exact finite
/// sums for complete and 3-regular families, plus the ratio trend toward
/// k/(k-2) = 3.
fn check_early_adoption() -> Result<CheckReport> {
    let base = SEED_BASE + 10;
    let n_grid = [1_000usize, 10_000, 100_000];
    let replicas = 200;
    let complete = super::early_adoption_study(&n_grid, 3.0, EarlyFamily::Complete, 1.0, replicas, base)?;
    let regular = super::early_adoption_study(
        &n_grid,
        3.0,
        EarlyFamily::Regular { k: 3 },
        1.0,
        replicas,
        base ^ 0xEE,
    )?;
    let mut lines = Vec::new();
    for (family, rows) in [("complete", &complete), ("3-regular", &regular)] {
        for row in rows {
            push(
                &mut lines,
                format!(
                    "{family} n={}: mean T({}) within 95% CI of the exact sum",
                    row.n, row.m
                ),
                row.empirical.ci_contains(row.predicted),
                format!(
                    "mean = {:.4} +- {:.4}, predicted = {:.4}",
                    row.empirical.mean, row.empirical.ci95_half_width, row.predicted
                ),
            );
        }
    }
    let ratios: Vec<f64> = regular
        .iter()
        .zip(complete.iter())
        .map(|(r, c)| r.predicted / c.predicted)
        .collect();
    let monotone = ratios.windows(2).all(|w| w[1] > w[0]);
    let below_limit = ratios.iter().all(|&r| r < 3.0);
    push(
        &mut lines,
        "predicted regular/complete ratio trends monotonically toward 3",
        monotone && below_limit,
        format!("ratios = {ratios:.4?}"),
    );
    Ok(CheckReport {
        name: "early-adoption",
        title: "criterion 10: early adoption timing",
        lines,
    })
}

/// Criterion 11: tree-likeness, k = 3, n = 1e5, j = ceil(3 log n), 1000
/// seeds: the revealed component is a tree in at least 95%.
fn check_tree_likeness() -> Result<CheckReport> {
    let base = SEED_BASE + 11;
    let n = 100_000;
    let j = (3.0 * (n as f64).ln()).ceil() as u64;
    let trees: usize = (0..1000u64)
        .into_par_iter()
        .map(|r| tree_check_run(n, 3, j, derive_seed(base, r)).map(usize::from))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let mut lines = Vec::new();
    push(
        &mut lines,
        format!("revealed component is a tree after j = {j} iterations in >= 95%"),
        trees >= 950,
        format!("{trees}/1000 tree"),
    );
    Ok(CheckReport {
        name: "tree-likeness",
        title: "criterion 11: locally tree-like exploration",
        lines,
    })
}

/// Criterion 12: heterogeneity reproduction at n = 5e4, 50 replicas:
/// same-start behavior (time-to-half within 5% across families), strict
/// tail ordering at 99% confidence, and the 5-regular curve matching its
/// analytic limit within 0.02.
fn check_figure3() -> Result<CheckReport> {
    let base = SEED_BASE + 12;
    let families = super::figure_heterogeneity(50_000, 50, base, 14.0, 281)?;
    let mut lines = Vec::new();

    let t50: Vec<f64> = families.iter().map(|f| f.time_to_half.mean).collect();
    let max = t50.iter().cloned().fold(f64::MIN, f64::max);
    let min = t50.iter().cloned().fold(f64::MAX, f64::min);
    push(
        &mut lines,
        "times to s = 0.5 within 5% across families",
        (max - min) / min <= 0.05,
        format!("means = {t50:.4?}, spread = {:.2}%", (max - min) / min * 100.0),
    );

    let by_label = |l: &str| families.iter().find(|f| f.label == l).unwrap();
    let reg = by_label("5-regular");
    let mix46 = by_label("4-6");
    let mix37 = by_label("3-7");
    let t_37_46 = welch_t(&mix37.time_to_95, &mix46.time_to_95);
    let t_46_reg = welch_t(&mix46.time_to_95, &reg.time_to_95);
    push(
        &mut lines,
        "time to s = 0.95 ordered 3-7 > 4-6 > 5-regular at 99% confidence",
        t_37_46 >= Z_ONE_SIDED_99 && t_46_reg >= Z_ONE_SIDED_99,
        format!(
            "means = [{:.4}, {:.4}, {:.4}], welch t = ({t_37_46:.1}, {t_46_reg:.1})",
            mix37.time_to_95.mean, mix46.time_to_95.mean, reg.time_to_95.mean
        ),
    );

    let t_hi = (theta_tilde(0.995, 5, 1.0)? - theta_tilde(0.01, 5, 1.0)?).min(14.0);
    let grid: Vec<f64> = (0..200).map(|i| t_hi * i as f64 / 199.0).collect();
    let limit = crate::analytic::adoption_curve_analytic(TimingModel::GenBass { k: 5 }, 1.0, &grid, 0.01)?;
    let sup = reg.mean_curve().sup_distance(&limit)?;
    push(
        &mut lines,
        "5-regular mean curve within 0.02 sup-norm of the analytic limit",
        sup <= 0.02,
        format!("sup deviation = {sup:.5}"),
    );
    Ok(CheckReport {
        name: "figure3",
        title: "criterion 12: degree-heterogeneity reproduction",
        lines,
    })
}

/// Criterion 13: innovators: β′ = 0 reduces to the plain coupled run
/// seed-for-seed, and the mean time to half adoption strictly decreases in
/// β′ over {0, 0.01, 0.1}.
fn check_innovators() -> Result<CheckReport> {
    let base = SEED_BASE + 13;
    let mut lines = Vec::new();

    let mut identical = true;
    for r in 0..5u64 {
        let seed = derive_seed(base, r);
        let plain = coupled_run(
            2_000,
            &DegreeSpec::regular(5),
            &ModelParams::si(1.0),
            seed,
            Stop::Count(1_500),
        )?;
        let innov = coupled_run_innovators(2_000, 5, 1.0, 0.0, seed, Stop::Count(1_500))?;
        if plain != innov {
            identical = false;
        }
    }
    push(
        &mut lines,
        "beta' = 0 reduces to the plain coupled run seed-for-seed",
        identical,
        String::new(),
    );

    let n = 10_000;
    let mut means = Vec::new();
    for (i, bp) in [0.0, 0.01, 0.1].into_iter().enumerate() {
        let vals: Vec<f64> = (0..50u64)
            .into_par_iter()
            .map(|r| {
                let tr = coupled_run_innovators(
                    n,
                    5,
                    1.0,
                    bp,
                    derive_seed(base ^ ((i as u64) << 16), r),
                    Stop::Count(n / 2),
                )?;
                tr.time_of_adoption(n / 2)
            })
            .collect::<Result<_>>()?;
        means.push(Summary::of(&vals).mean);
    }
    let decreasing = means.windows(2).all(|w| w[1] < w[0]);
    push(
        &mut lines,
        "mean T(n/2) strictly decreasing in beta' over {0, 0.01, 0.1}",
        decreasing,
        format!("means = {means:.4?}"),
    );
    Ok(CheckReport {
        name: "innovators",
        title: "criterion 13: innovators extension",
        lines,
    })
}
