//! Seeded Monte Carlo orchestration: ensembles over derived per-replica
//! seeds, curve alignment and averaging, simulated-vs-analytic comparison
//! reports, the early-adoption scaling study, and the named acceptance
//! checks.
//!
//! Replicas execute concurrently (rayon) on independent derived seeds;
//! aggregation is order-independent, so results do not depend on the thread
//! count. An entire experiment output is a pure function of its config,
//! including the base seed.

pub mod checks;
mod config;

pub use config::{
    ClockConfig, CurveMeasure, EngineKind, EnsembleConfig, GraphConfig, MeasureConfig,
    ParamsConfig, StopConfig, VariantConfig,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{expected_early_time, EarlyFamily};
use crate::curve::{CurveMeta, CurveSeries};
use crate::explore::coupled_run;
use crate::graph::{complete_graph, cycle_graph, sample_simple_connected, DegreeSpec, Graph};
use crate::rng::derive_seed;
use crate::sim::{simulate, simulate_complete_exact, AdoptionTrace, ModelParams, Stop};
use crate::stats::Summary;
use crate::{Error, Result};

/// Time at which the linearly-interpolated adoption fraction of a trace
/// crosses `level` (interpolating between adoption events; exact whenever
/// `level * n` lands on an integer count).
pub fn crossing_time(trace: &AdoptionTrace, level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain("level", level, "in (0, 1)"));
    }
    let n = trace.n() as f64;
    let x = level * n;
    if x <= 1.0 {
        return trace.time_of_adoption(1);
    }
    let hi = x.ceil() as usize;
    let t_hi = trace.time_of_adoption(hi)?;
    if (hi as f64 - x).abs() < 1e-12 {
        return Ok(t_hi);
    }
    let t_lo = trace.time_of_adoption(hi - 1)?;
    Ok(t_lo + (t_hi - t_lo) * (x - (hi - 1) as f64))
}

/// A trace with its time axis shifted so the `anchor` crossing sits at 0,
/// readable as a piecewise-linear adoption fraction.
pub struct AlignedTrace {
    times: Vec<f64>,
    n: f64,
}

impl AlignedTrace {
    pub fn new(trace: &AdoptionTrace, anchor: f64) -> Result<AlignedTrace> {
        let t0 = crossing_time(trace, anchor)?;
        let times = (1..=trace.adoptions())
            .map(|i| trace.time_of_adoption(i).unwrap() - t0)
            .collect();
        Ok(AlignedTrace {
            times,
            n: trace.n() as f64,
        })
    }

    /// Linear interpolation between adoption events, clamped to the trace's
    /// observed range.
    pub fn fraction_at(&self, t: f64) -> f64 {
        let m = self.times.len();
        if t <= self.times[0] {
            return 1.0 / self.n;
        }
        if t >= self.times[m - 1] {
            return m as f64 / self.n;
        }
        let i = self.times.partition_point(|&x| x <= t);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let frac = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
        (i as f64 + frac) / self.n
    }
}

/// Pointwise mean and sample std of aligned traces over a time grid.
pub fn aligned_mean_curve(
    traces: &[AdoptionTrace],
    anchor: f64,
    t_grid: &[f64],
    meta: CurveMeta,
) -> Result<(CurveSeries, Vec<f64>)> {
    if traces.len() < 2 {
        return Err(Error::Params("mean curve needs >= 2 replicas".into()));
    }
    let aligned: Vec<AlignedTrace> = traces
        .iter()
        .map(|t| AlignedTrace::new(t, anchor))
        .collect::<Result<_>>()?;
    let r = aligned.len() as f64;
    let mut points = Vec::with_capacity(t_grid.len());
    let mut stds = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let vals: Vec<f64> = aligned.iter().map(|a| a.fraction_at(t)).collect();
        let mean = vals.iter().sum::<f64>() / r;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0);
        points.push((t, mean));
        stds.push(var.sqrt());
    }
    Ok((CurveSeries::new("t", "s", points, meta)?, stds))
}

/// Sup-norm deviation and per-point z-scores of an ensemble mean curve
/// against an analytic limit curve, on the overlap of their supports.
#[derive(Clone, Debug, Serialize)]
pub struct LimitComparison {
    pub sup_deviation: f64,
    pub z_scores: Vec<f64>,
    pub max_abs_z: f64,
}

pub fn compare_to_limit(
    mean_curve: &CurveSeries,
    point_std: &[f64],
    replicas: usize,
    limit: &CurveSeries,
) -> Result<LimitComparison> {
    if point_std.len() != mean_curve.len() {
        return Err(Error::Params("std vector must match the curve grid".into()));
    }
    let sup_deviation = mean_curve.sup_distance(limit)?;
    let sqrt_r = (replicas as f64).sqrt();
    let (lo, hi) = (
        limit.points[0].0.max(mean_curve.points[0].0),
        limit.points[limit.len() - 1]
            .0
            .min(mean_curve.points[mean_curve.len() - 1].0),
    );
    let mut z_scores = Vec::new();
    let mut max_abs_z = 0.0f64;
    for (&(t, m), &sd) in mean_curve.points.iter().zip(point_std) {
        if t < lo || t > hi {
            continue;
        }
        let dev = m - limit.eval(t);
        let se = sd / sqrt_r;
        let z = if se > 0.0 {
            dev / se
        } else if dev.abs() > 0.0 {
            f64::INFINITY * dev.signum()
        } else {
            0.0
        };
        z_scores.push(z);
        max_abs_z = max_abs_z.max(z.abs());
    }
    Ok(LimitComparison {
        sup_deviation,
        z_scores,
        max_abs_z,
    })
}

/// Per-α durations of the first and second halves of the major regime:
/// Δ(αn, n/2) and Δ(n/2, (1−α)n).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AsymmetryRow {
    pub alpha: f64,
    pub first_half: f64,
    pub second_half: f64,
}

/// Analytic asymmetry pairs from a timing function.
pub fn asymmetry_analytic(
    model: crate::analytic::TimingModel,
    beta: f64,
    alpha_grid: &[f64],
) -> Result<Vec<AsymmetryRow>> {
    let mid = model.eval(0.5, beta)?;
    alpha_grid
        .iter()
        .map(|&alpha| {
            if !(alpha > 0.0 && alpha < 0.5) {
                return Err(Error::domain("alpha", alpha, "in (0, 1/2)"));
            }
            Ok(AsymmetryRow {
                alpha,
                first_half: mid - model.eval(alpha, beta)?,
                second_half: model.eval(1.0 - alpha, beta)? - mid,
            })
        })
        .collect()
}

/// Per-replica asymmetry pairs measured from traces.
pub fn asymmetry_from_traces(traces: &[AdoptionTrace], alpha: f64) -> Result<Vec<AsymmetryRow>> {
    traces
        .iter()
        .map(|tr| {
            Ok(AsymmetryRow {
                alpha,
                first_half: tr.delta(alpha, 0.5)?,
                second_half: tr.delta(0.5, 1.0 - alpha)?,
            })
        })
        .collect()
}

/// One row of the early-adoption scaling study.
#[derive(Clone, Debug, Serialize)]
pub struct EarlyStudyRow {
    pub n: usize,
    pub m: usize,
    pub empirical: Summary,
    pub predicted: f64,
}

/// Empirical mean of T(⌈C log n⌉) against the exact finite-sum prediction,
/// per n. The complete family runs the exact jump chain; the regular family
/// simulates on rejection-sampled simple connected graphs.
pub fn early_adoption_study(
    n_grid: &[usize],
    c: f64,
    family: EarlyFamily,
    beta: f64,
    replicas: usize,
    base_seed: u64,
) -> Result<Vec<EarlyStudyRow>> {
    n_grid
        .iter()
        .map(|&n| {
            let m = (c * (n as f64).ln()).ceil() as usize;
            if (m as f64) > (n as f64).sqrt() {
                return Err(Error::Params(format!(
                    "early regime violated: m = {m} > sqrt({n})"
                )));
            }
            let values: Vec<f64> = (0..replicas)
                .into_par_iter()
                .map(|r| {
                    let rep_seed = derive_seed(base_seed ^ n as u64, r as u64);
                    let trace = match family {
                        EarlyFamily::Complete => {
                            simulate_complete_exact(n, beta, rep_seed, Stop::Count(m))?
                        }
                        EarlyFamily::Regular { k } => {
                            let graph_seed = derive_seed(rep_seed, 0);
                            let sim_seed = derive_seed(rep_seed, 1);
                            let sample = sample_simple_connected(
                                &DegreeSpec::regular(k),
                                n,
                                graph_seed,
                                crate::graph::DEFAULT_MAX_TRIES,
                            )?;
                            simulate(
                                &sample.graph,
                                &ModelParams::si(beta),
                                sim_seed,
                                Stop::Count(m),
                            )?
                        }
                    };
                    trace.time_of_adoption(m)
                })
                .collect::<Result<_>>()?;
            Ok(EarlyStudyRow {
                n,
                m,
                empirical: Summary::of(&values),
                predicted: expected_early_time(family, n, m, beta)?,
            })
        })
        .collect()
}

/// Result of one ensemble run: per-replica scalars plus their summaries, and
/// the aligned mean curve when requested.
#[derive(Clone, Debug, Serialize)]
pub struct EnsembleSummary {
    pub config: EnsembleConfig,
    pub replicas_ok: usize,
    pub failures: Vec<(usize, String)>,
    pub delta: Vec<DeltaSummary>,
    pub time_to: Vec<TimeToSummary>,
    pub early: Option<EarlySummary>,
    pub curve: Option<CurveSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaSummary {
    pub alpha: f64,
    pub gamma: f64,
    pub values: Vec<f64>,
    pub summary: Summary,
}

#[derive(Clone, Debug, Serialize)]
pub struct TimeToSummary {
    pub level: f64,
    pub values: Vec<f64>,
    pub summary: Summary,
}

#[derive(Clone, Debug, Serialize)]
pub struct EarlySummary {
    pub m: usize,
    pub values: Vec<f64>,
    pub summary: Summary,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveSummary {
    pub t_grid: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl EnsembleSummary {
    /// The aligned mean curve as a `CurveSeries` (when measured).
    pub fn mean_curve(&self) -> Option<CurveSeries> {
        let c = self.curve.as_ref()?;
        let meta = CurveMeta::new(
            "sim",
            &self.config.graph.label(),
            self.config.params.beta,
            Some(self.config.measure.anchor),
        );
        let points = c.t_grid.iter().copied().zip(c.mean.iter().copied()).collect();
        CurveSeries::new("t", "s", points, meta).ok()
    }
}

fn run_replica(cfg: &EnsembleConfig, replica: usize) -> Result<AdoptionTrace> {
    let rep_seed = derive_seed(cfg.seed, replica as u64);
    let params = cfg.params.to_model();
    let stop = cfg.stop.to_stop();
    match cfg.engine {
        EngineKind::CompleteExact => {
            // Thinning folds p into the rate.
            simulate_complete_exact(cfg.graph.n(), params.beta * params.p, rep_seed, stop)
        }
        EngineKind::Exploration => {
            let spec = cfg.graph.degree_spec().expect("validated");
            coupled_run(cfg.graph.n(), &spec, &params, rep_seed, stop)
        }
        EngineKind::Graph => {
            let graph: Graph = match &cfg.graph {
                GraphConfig::Complete { n } => complete_graph(*n)?,
                GraphConfig::Cycle { n } => cycle_graph(*n)?,
                _ => {
                    let spec = cfg.graph.degree_spec().expect("validated");
                    let graph_seed = derive_seed(rep_seed, 0);
                    sample_simple_connected(&spec, cfg.graph.n(), graph_seed, cfg.graph.max_tries())?
                        .graph
                }
            };
            let sim_seed = derive_seed(rep_seed, 1);
            simulate(&graph, &params, sim_seed, stop)
        }
    }
}

/// Runs every replica (failures are recorded, never silently resampled; the
/// ensemble errors out when more than 10% fail) and aggregates the requested
/// measurements. Deterministic given the config, independent of thread count.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleSummary> {
    cfg.validate()?;
    let results: Vec<(usize, Result<AdoptionTrace>)> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| (r, run_replica(cfg, r)))
        .collect();

    let mut traces = Vec::new();
    let mut failures = Vec::new();
    for (r, res) in results {
        match res {
            Ok(tr) => traces.push(tr),
            Err(e) => failures.push((r, e.to_string())),
        }
    }
    if failures.len() * 10 > cfg.replicas {
        let first = failures[0].1.clone();
        return Err(Error::EnsembleFailure {
            failed: failures.len(),
            total: cfg.replicas,
            first,
        });
    }

    let mut delta = Vec::new();
    for &(a, g) in &cfg.measure.delta {
        let values: Vec<f64> = traces.iter().map(|t| t.delta(a, g)).collect::<Result<_>>()?;
        delta.push(DeltaSummary {
            alpha: a,
            gamma: g,
            summary: Summary::of(&values),
            values,
        });
    }

    let anchor = cfg.measure.anchor;
    let mut time_to = Vec::new();
    for &level in &cfg.measure.time_to {
        let values: Vec<f64> = traces
            .iter()
            .map(|t| Ok(crossing_time(t, level)? - crossing_time(t, anchor)?))
            .collect::<Result<_>>()?;
        time_to.push(TimeToSummary {
            level,
            summary: Summary::of(&values),
            values,
        });
    }

    let early = match cfg.measure.early_m {
        Some(m) => {
            let values: Vec<f64> = traces
                .iter()
                .map(|t| t.time_of_adoption(m))
                .collect::<Result<_>>()?;
            Some(EarlySummary {
                m,
                summary: Summary::of(&values),
                values,
            })
        }
        None => None,
    };

    let curve = match cfg.measure.curve {
        Some(cm) => {
            let t_grid: Vec<f64> = (0..cm.points)
                .map(|i| cm.t_max * i as f64 / (cm.points - 1) as f64)
                .collect();
            let meta = CurveMeta::new("sim", &cfg.graph.label(), cfg.params.beta, Some(anchor));
            let (mean, std) = aligned_mean_curve(&traces, anchor, &t_grid, meta)?;
            Some(CurveSummary {
                t_grid,
                mean: mean.points.iter().map(|p| p.1).collect(),
                std,
            })
        }
        None => None,
    };

    Ok(EnsembleSummary {
        config: cfg.clone(),
        replicas_ok: traces.len(),
        failures,
        delta,
        time_to,
        early,
        curve,
    })
}

/// The three graph families of the heterogeneity comparison: 5-regular,
/// a 4/6 mixture and a 3/7 mixture, all with mean degree 5.
pub fn heterogeneity_families() -> Vec<(&'static str, DegreeSpec)> {
    vec![
        ("5-regular", DegreeSpec::regular(5)),
        ("4-6", DegreeSpec::distribution(vec![(4, 0.5), (6, 0.5)])),
        ("3-7", DegreeSpec::distribution(vec![(3, 0.5), (7, 0.5)])),
    ]
}

/// Per-family outcome of the heterogeneity reproduction.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyCurves {
    pub label: String,
    pub time_to_half: Summary,
    pub time_to_95: Summary,
    pub curve: CurveSummary,
}

impl FamilyCurves {
    pub fn mean_curve(&self) -> CurveSeries {
        let points = self
            .curve
            .t_grid
            .iter()
            .copied()
            .zip(self.curve.mean.iter().copied())
            .collect();
        CurveSeries::new(
            "t",
            "s",
            points,
            CurveMeta::new("sim", &self.label, 1.0, Some(0.01)),
        )
        .expect("grid is strictly increasing")
    }
}

/// Simulates the three mean-degree-5 families (node clocks, simple connected
/// samples, β = 1) and reports aligned mean curves plus the times from the
/// 1% anchor to 50% and 95% adoption.
pub fn figure_heterogeneity(
    n: usize,
    replicas: usize,
    base_seed: u64,
    t_max: f64,
    points: usize,
) -> Result<Vec<FamilyCurves>> {
    if n < 10_000 {
        return Err(Error::Params(format!(
            "heterogeneity study needs n >= 10^4, got {n}"
        )));
    }
    heterogeneity_families()
        .into_iter()
        .enumerate()
        .map(|(fi, (label, spec))| {
            let traces: Vec<AdoptionTrace> = (0..replicas)
                .into_par_iter()
                .map(|r| {
                    let rep_seed = derive_seed(base_seed ^ ((fi as u64) << 32), r as u64);
                    let graph_seed = derive_seed(rep_seed, 0);
                    let sim_seed = derive_seed(rep_seed, 1);
                    // Mixtures with heavy degree spread have simple-graph
                    // rates of order 1e-4, so the budget is far above the
                    // regular-family default.
                    let sample = sample_simple_connected(&spec, n, graph_seed, 1_000_000)?;
                    simulate(&sample.graph, &ModelParams::si(1.0), sim_seed, Stop::All)
                })
                .collect::<Result<_>>()?;
            let anchor = 0.01;
            let t50: Vec<f64> = traces
                .iter()
                .map(|t| Ok(crossing_time(t, 0.5)? - crossing_time(t, anchor)?))
                .collect::<Result<_>>()?;
            let t95: Vec<f64> = traces
                .iter()
                .map(|t| Ok(crossing_time(t, 0.95)? - crossing_time(t, anchor)?))
                .collect::<Result<_>>()?;
            let t_grid: Vec<f64> = (0..points)
                .map(|i| t_max * i as f64 / (points - 1) as f64)
                .collect();
            let meta = CurveMeta::new("sim", &spec.label(), 1.0, Some(anchor));
            let (mean, std) = aligned_mean_curve(&traces, anchor, &t_grid, meta)?;
            Ok(FamilyCurves {
                label: label.to_string(),
                time_to_half: Summary::of(&t50),
                time_to_95: Summary::of(&t95),
                curve: CurveSummary {
                    t_grid,
                    mean: mean.points.iter().map(|p| p.1).collect(),
                    std,
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::TimingModel;
    use approx::assert_abs_diff_eq;

    fn chain_trace(seed: u64) -> AdoptionTrace {
        simulate_complete_exact(1000, 1.0, seed, Stop::All).unwrap()
    }

    #[test]
    fn crossing_time_matches_exact_counts() {
        let tr = chain_trace(3);
        assert_eq!(
            crossing_time(&tr, 0.5).unwrap(),
            tr.time_of_adoption(500).unwrap()
        );
        let c = crossing_time(&tr, 0.5005).unwrap();
        assert!(c > tr.time_of_adoption(500).unwrap());
        assert!(c < tr.time_of_adoption(501).unwrap());
    }

    #[test]
    fn aligned_trace_interpolates_and_clamps() {
        let tr = chain_trace(4);
        let a = AlignedTrace::new(&tr, 0.01).unwrap();
        assert_abs_diff_eq!(a.fraction_at(0.0), 0.01, epsilon = 1e-9);
        assert_eq!(a.fraction_at(-1e9), 1.0 / 1000.0);
        assert_eq!(a.fraction_at(1e9), 1.0);
        let mut prev = 0.0;
        for i in -50..200 {
            let v = a.fraction_at(i as f64 * 0.1);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn mean_curve_identical_paths_collapse_band() {
        let tr = chain_trace(5);
        let grid: Vec<f64> = (0..50).map(|i| i as f64 * 0.2).collect();
        let meta = CurveMeta::new("sim", "-", 1.0, Some(0.01));
        let (mean, std) = aligned_mean_curve(&[tr.clone(), tr.clone()], 0.01, &grid, meta).unwrap();
        assert!(std.iter().all(|&s| s == 0.0));
        assert_eq!(mean.len(), 50);
    }

    #[test]
    fn compare_curve_to_itself_is_zero() {
        let grid: Vec<f64> = (0..100).map(|i| -5.0 + 0.1 * i as f64).collect();
        let c = crate::analytic::adoption_curve_analytic(TimingModel::GenBass { k: 5 }, 1.0, &grid, 0.5)
            .unwrap();
        let stds = vec![0.0; c.len()];
        let cmp = compare_to_limit(&c, &stds, 10, &c).unwrap();
        assert_eq!(cmp.sup_deviation, 0.0);
        assert_eq!(cmp.max_abs_z, 0.0);
    }

    #[test]
    fn analytic_asymmetry_pairs() {
        let rows = asymmetry_analytic(TimingModel::Bass, 1.0, &[0.1, 0.25, 0.4]).unwrap();
        for r in &rows {
            assert_abs_diff_eq!(r.first_half, r.second_half, epsilon = 1e-10);
        }
        let rows = asymmetry_analytic(TimingModel::GenBass { k: 5 }, 1.0, &[0.25]).unwrap();
        assert_abs_diff_eq!(rows[0].first_half, 1.6783021084465815, epsilon = 1e-12);
        assert_abs_diff_eq!(rows[0].second_half, 1.5375961334534718, epsilon = 1e-12);
        assert!(rows[0].first_half > rows[0].second_half);
    }

    #[test]
    fn ensemble_runner_deterministic_and_summarized() {
        let cfg = EnsembleConfig::from_json(
            r#"{
                "name": "t",
                "seed": 11,
                "replicas": 8,
                "graph": {"family": "complete", "n": 2000},
                "engine": "complete-exact",
                "stop": {"kind": "count", "x": 1600},
                "measure": {"delta": [[0.25, 0.75]], "time_to": [0.5],
                            "curve": {"t_max": 6.0, "points": 40}}
            }"#,
        )
        .unwrap();
        let a = run_ensemble(&cfg).unwrap();
        let b = run_ensemble(&cfg).unwrap();
        assert_eq!(a.delta[0].values, b.delta[0].values);
        assert_eq!(a.replicas_ok, 8);
        assert!(a.failures.is_empty());
        let s = &a.delta[0].summary;
        assert_abs_diff_eq!(s.ci95_half_width, 1.96 * s.std / 8f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.mean, 2.1972, epsilon = 0.15);
        assert!(a.curve.is_some());
        assert!(a.mean_curve().is_some());
    }

    #[test]
    fn ensemble_failure_policy() {
        // Exploration to exhaustion on tiny 3-regular specs dies often; the
        // failures must be recorded, and past 10% the ensemble errors.
        let cfg = EnsembleConfig::from_json(
            r#"{
                "name": "t",
                "seed": 3,
                "replicas": 20,
                "graph": {"family": "regular", "n": 6, "k": 3},
                "engine": "exploration",
                "stop": {"kind": "all"},
                "measure": {}
            }"#,
        )
        .unwrap();
        match run_ensemble(&cfg) {
            Err(Error::EnsembleFailure { failed, total, .. }) => {
                assert_eq!(total, 20);
                assert!(failed > 2);
            }
            Ok(summary) => {
                assert!(summary.failures.len() * 10 <= 20);
            }
            Err(other) => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn early_study_complete_rows() {
        let rows = early_adoption_study(&[1000], 3.0, EarlyFamily::Complete, 1.0, 60, 5).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.m, 21);
        assert!(
            (row.empirical.mean - row.predicted).abs() <= row.empirical.ci95_half_width,
            "mean {} vs predicted {} +- {}",
            row.empirical.mean,
            row.predicted,
            row.empirical.ci95_half_width
        );
    }
}
