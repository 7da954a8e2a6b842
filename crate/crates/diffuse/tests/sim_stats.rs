//! Statistical invariants that cut across modules: simulator-equivalence
//! oracles, sampling uniformity, and the soundness of the ensemble CIs.

use std::collections::HashMap;

use diffuse::analytic::expected_delta_complete;
use diffuse::graph::{pair_configuration, DegreeSpec};
use diffuse::rng::derive_seed;
use diffuse::sim::{simulate, simulate_complete_exact, ModelParams, Stop};
use diffuse::stats::{ks_two_sample, Summary};

/// On complete graphs the explicit-contact engine and the exact jump chain
/// must be statistically indistinguishable: two-sample KS on the quartile
/// span, 200 + 200 runs at n = 2000, p > 0.01.
#[test]
fn complete_engines_are_exchangeable() {
    let n = 2000;
    let graph = diffuse::graph::complete_graph(n).unwrap();
    let params = ModelParams::si(1.0);
    let direct: Vec<f64> = (0..200u64)
        .map(|r| {
            simulate(&graph, &params, derive_seed(800, r), Stop::Count(1500))
                .unwrap()
                .delta(0.25, 0.75)
                .unwrap()
        })
        .collect();
    let chain: Vec<f64> = (0..200u64)
        .map(|r| {
            simulate_complete_exact(n, 1.0, derive_seed(801, r), Stop::Count(1500))
                .unwrap()
                .delta(0.25, 0.75)
                .unwrap()
        })
        .collect();
    let (d, p) = ks_two_sample(&direct, &chain);
    assert!(p > 0.01, "KS D = {d}, p = {p}");
}

/// Conditioned on simplicity, configuration-model pairings are uniform over
/// labeled simple graphs: for n = 6, k = 3 there are exactly 70 labeled
/// cubic graphs, and each must appear at its share within 3 sigma over 1e5
/// trials.
#[test]
fn pairing_uniformity_over_labeled_cubic_graphs() {
    let spec = DegreeSpec::regular(3);
    let trials = 100_000;
    let mut counts: HashMap<Vec<(u32, u32)>, usize> = HashMap::new();
    let mut simple = 0usize;
    for seed in 0..trials {
        let g = pair_configuration(&spec, 6, derive_seed(900, seed)).unwrap();
        if g.check().0 {
            simple += 1;
            let mut edges = g.edges();
            edges.sort_unstable();
            *counts.entry(edges).or_insert(0) += 1;
        }
    }
    assert_eq!(counts.len(), 70, "expected all 70 labeled cubic graphs on 6 nodes");
    let p = 1.0 / 70.0;
    let mean = simple as f64 * p;
    let sigma = (simple as f64 * p * (1.0 - p)).sqrt();
    for (edges, count) in &counts {
        assert!(
            (*count as f64 - mean).abs() <= 3.0 * sigma,
            "graph {edges:?}: count {count}, expected {mean:.1} +- {:.1}",
            3.0 * sigma
        );
    }
}

/// The empirical simple-graph rate of 3-regular pairings is stable in n
/// (within 0.03 absolute across n in {500, 1000, 2000}, 1e4 trials each).
#[test]
fn simple_rate_stable_across_n() {
    let spec = DegreeSpec::regular(3);
    let mut rates = Vec::new();
    for (i, n) in [500usize, 1000, 2000].into_iter().enumerate() {
        let trials = 10_000u64;
        let mut simple = 0usize;
        for seed in 0..trials {
            let g = pair_configuration(&spec, n, derive_seed(910 + i as u64, seed)).unwrap();
            if g.check().0 {
                simple += 1;
            }
        }
        rates.push(simple as f64 / trials as f64);
    }
    let max = rates.iter().cloned().fold(f64::MIN, f64::max);
    let min = rates.iter().cloned().fold(f64::MAX, f64::min);
    assert!(max - min < 0.03, "simple rates {rates:?} vary by {}", max - min);
}

/// Among simple 3-regular pairings at n = 1000, fewer than 1% are
/// disconnected (1e3 simple samples).
#[test]
fn disconnection_is_rare_given_simple() {
    let spec = DegreeSpec::regular(3);
    let mut simple = 0usize;
    let mut disconnected = 0usize;
    let mut seed = 0u64;
    while simple < 1000 {
        let g = pair_configuration(&spec, 1000, derive_seed(920, seed)).unwrap();
        seed += 1;
        let (is_simple, is_connected) = g.check();
        if is_simple {
            simple += 1;
            if !is_connected {
                disconnected += 1;
            }
        }
    }
    let rate = disconnected as f64 / simple as f64;
    assert!(rate < 0.01, "disconnected-given-simple rate {rate}");
}

/// Statistical soundness: for the exactly-known complete-graph chain, the
/// 95% CI over 40 replicas covers the exact finite-n mean in 90-99 of 100
/// independent ensembles.
#[test]
fn ci_coverage_is_calibrated() {
    let n = 2000;
    let exact = expected_delta_complete(n, 0.25, 0.75, 1.0).unwrap();
    let mut covered = 0usize;
    for e in 0..100u64 {
        let vals: Vec<f64> = (0..40u64)
            .map(|r| {
                simulate_complete_exact(n, 1.0, derive_seed(930 + e, r), Stop::Count(1500))
                    .unwrap()
                    .delta(0.25, 0.75)
                    .unwrap()
            })
            .collect();
        if Summary::of(&vals).ci_contains(exact) {
            covered += 1;
        }
    }
    assert!(
        (90..=99).contains(&covered),
        "95% CI covered the exact mean in {covered}/100 ensembles"
    );
}

/// Concentration: the replica std of the quartile span shrinks as n grows
/// through {1e3, 1e4, 1e5}.
#[test]
fn quartile_span_concentrates_with_n() {
    let mut stds = Vec::new();
    for (i, n) in [1_000usize, 10_000, 100_000].into_iter().enumerate() {
        let vals: Vec<f64> = (0..50u64)
            .map(|r| {
                simulate_complete_exact(n, 1.0, derive_seed(940 + i as u64, r), Stop::Count(3 * n / 4))
                    .unwrap()
                    .delta(0.25, 0.75)
                    .unwrap()
            })
            .collect();
        stds.push(Summary::of(&vals).std);
    }
    assert!(
        stds[0] > stds[1] && stds[1] > stds[2],
        "stds should decrease with n: {stds:?}"
    );
}
