//! Configuration-model generators.

use rand::Rng;

use super::{cycle_graph, DegreeSpec, Graph};
use crate::rng::{rng_from_seed, SimRng};
use crate::{Error, Result};

/// Default rejection budget for [`sample_simple_connected`]. For k >= 3 the
/// simple-graph rate is bounded away from zero, so the budget never binds in
/// practice.
pub const DEFAULT_MAX_TRIES: u64 = 10_000;

/// Uniform configuration-model pairing: realizes the degree sequence, then
/// pairs all clones (half-edges) uniformly at random. The result is a
/// multigraph with exactly (sum of degrees)/2 edges; whether it is simple or
/// connected is unknown until checked.
pub fn pair_configuration(spec: &DegreeSpec, n: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Params(format!("configuration model needs n >= 2, got {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let degrees = spec.realize(n, &mut rng)?;
    let edges = uniform_matching(&degrees, &mut rng);
    Ok(csr_from_pairs(n, &degrees, &edges))
}

/// Result of rejection sampling, with the rejection counts split by cause.
#[derive(Clone, Debug)]
pub struct SampleOutcome {
    pub graph: Graph,
    pub rejected_non_simple: u64,
    pub rejected_disconnected: u64,
    /// Set when a 2-regular request was rerouted to the deterministic cycle.
    pub used_cycle_fallback: bool,
}

/// Uniform sample over *simple connected* graphs with the given degree
/// sequence, by rejection from uniform configuration-model pairings. The
/// degree sequence is realized once; every pairing try conditions on it.
///
/// Simplicity is tested first (a cheap incremental scan that aborts a pairing
/// at the first violation, which discards only pairings that would be
/// rejected anyway), then connectivity by traversal. `regular(2)` with
/// connectivity requested is rerouted to [`cycle_graph`]: almost all
/// 2-regular pairings are unions of short cycles, so rejection would loop
/// badly, and the cycle is the only connected 2-regular graph.
pub fn sample_simple_connected(
    spec: &DegreeSpec,
    n: usize,
    seed: u64,
    max_tries: u64,
) -> Result<SampleOutcome> {
    spec.validate()?;
    if max_tries < 1 {
        return Err(Error::Params("max_tries must be >= 1".into()));
    }
    if let DegreeSpec::Regular { k: 2 } = spec {
        log::warn!("regular(2) with connectivity rerouted to the deterministic cycle graph");
        return Ok(SampleOutcome {
            graph: cycle_graph(n)?,
            rejected_non_simple: 0,
            rejected_disconnected: 0,
            used_cycle_fallback: true,
        });
    }
    if n < 2 {
        return Err(Error::Params(format!("sampling needs n >= 2, got {n}")));
    }

    let mut rng = rng_from_seed(seed);
    let degrees = spec.realize(n, &mut rng)?;
    let mut clones: Vec<u32> = Vec::with_capacity(degrees.iter().sum());
    for (v, &d) in degrees.iter().enumerate() {
        clones.extend(std::iter::repeat(v as u32).take(d));
    }

    let mut rejected_non_simple = 0u64;
    let mut rejected_disconnected = 0u64;
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    // A rejected try touches only a prefix of the pairing, so it is undone
    // with a swap journal instead of restoring the whole clone array.
    let mut journal: Vec<(usize, usize)> = Vec::new();

    for _ in 0..max_tries {
        journal.clear();
        let completed = try_simple_pairing(&mut clones, &mut adj, &mut rng, &mut journal);
        if completed {
            if connected(&adj) {
                let mut graph = csr_from_adj(&adj);
                graph.set_flags(Some(true), Some(true));
                return Ok(SampleOutcome {
                    graph,
                    rejected_non_simple,
                    rejected_disconnected,
                    used_cycle_fallback: false,
                });
            }
            rejected_disconnected += 1;
        } else {
            rejected_non_simple += 1;
        }
        // Positions 0..2p hold the nodes paired this try (the aborted pair
        // placed no edge); clear their rows before unswapping.
        let placed = journal.len() - usize::from(!completed);
        for i in (0..2 * placed).step_by(2) {
            adj[clones[i] as usize].clear();
            adj[clones[i + 1] as usize].clear();
        }
        for &(a, b) in journal.iter().rev() {
            clones.swap(a, b);
        }
    }
    Err(Error::SamplingFailure {
        tries: max_tries,
        rejected_non_simple,
        rejected_disconnected,
    })
}

/// Uniform perfect matching on the clone multiset, as consecutive pairs of a
/// uniformly shuffled clone array.
fn uniform_matching(degrees: &[usize], rng: &mut SimRng) -> Vec<(u32, u32)> {
    let mut clones: Vec<u32> = Vec::with_capacity(degrees.iter().sum());
    for (v, &d) in degrees.iter().enumerate() {
        clones.extend(std::iter::repeat(v as u32).take(d));
    }
    let len = clones.len();
    debug_assert_eq!(len % 2, 0);
    // Fisher-Yates
    for i in (1..len).rev() {
        let j = rng.gen_range(0..=i);
        clones.swap(i, j);
    }
    clones.chunks_exact(2).map(|c| (c[0], c[1])).collect()
}

/// Sequentially matches the clone array uniformly in place, aborting at the
/// first self-loop or parallel edge. Conditioned on completion, the matching
/// is uniform over simple pairings. Fills `adj` and records every swap in
/// `journal` so the caller can undo a rejected try.
fn try_simple_pairing(
    clones: &mut [u32],
    adj: &mut [Vec<u32>],
    rng: &mut SimRng,
    journal: &mut Vec<(usize, usize)>,
) -> bool {
    let len = clones.len();
    let mut i = 0;
    while i < len {
        let j = rng.gen_range(i + 1..len);
        clones.swap(i + 1, j);
        journal.push((i + 1, j));
        let u = clones[i];
        let v = clones[i + 1];
        if u == v || adj[u as usize].contains(&v) {
            return false;
        }
        adj[u as usize].push(v);
        adj[v as usize].push(u);
        i += 2;
    }
    true
}

fn connected(adj: &[Vec<u32>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1usize;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            let w = w as usize;
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

fn csr_from_pairs(n: usize, degrees: &[usize], pairs: &[(u32, u32)]) -> Graph {
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0usize);
    for v in 0..n {
        offsets.push(offsets[v] + degrees[v]);
    }
    let mut cursor = offsets.clone();
    let mut neighbors = vec![0u32; 2 * pairs.len()];
    for &(u, v) in pairs {
        neighbors[cursor[u as usize]] = v;
        cursor[u as usize] += 1;
        neighbors[cursor[v as usize]] = u;
        cursor[v as usize] += 1;
    }
    Graph::from_csr(n, offsets, neighbors)
}

fn csr_from_adj(adj: &[Vec<u32>]) -> Graph {
    let n = adj.len();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0usize);
    for row in adj {
        offsets.push(offsets.last().unwrap() + row.len());
    }
    let mut neighbors = Vec::with_capacity(*offsets.last().unwrap());
    for row in adj {
        neighbors.extend_from_slice(row);
    }
    Graph::from_csr(n, offsets, neighbors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_has_exact_edge_count_and_degrees() {
        // nk/2 edges, and every clone paired exactly once: realized degree of
        // each node equals the requested degree.
        let g = pair_configuration(&DegreeSpec::regular(3), 4, 7).unwrap();
        assert_eq!(g.edge_count(), 6);
        for v in 0..4 {
            assert_eq!(g.degree(v), 3);
        }
        assert_eq!(g.is_simple(), None);
    }

    #[test]
    fn two_nodes_degree_three_cannot_be_simple() {
        // Pigeonhole: 2 nodes of degree 3 force a self-loop or multi-edge.
        for seed in 0..20 {
            let g = pair_configuration(&DegreeSpec::regular(3), 2, seed).unwrap();
            let (simple, _) = g.check();
            assert!(!simple);
        }
    }

    #[test]
    fn explicit_spec_roundtrip() {
        let spec = DegreeSpec::Explicit { degrees: vec![1, 2, 2, 1] };
        let g = pair_configuration(&spec, 4, 3).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn sampled_graph_is_simple_connected() {
        let out = sample_simple_connected(&DegreeSpec::regular(3), 10, 42, 10_000).unwrap();
        assert_eq!(out.graph.check(), (true, true));
        assert_eq!(out.graph.is_simple(), Some(true));
        assert_eq!(out.graph.is_connected(), Some(true));
        assert!(!out.used_cycle_fallback);
        // All samples pass check(), across seeds.
        for seed in 0..30 {
            let out = sample_simple_connected(&DegreeSpec::regular(3), 50, seed, 10_000).unwrap();
            assert_eq!(out.graph.check(), (true, true));
        }
    }

    #[test]
    fn k2_falls_back_to_cycle() {
        let out = sample_simple_connected(&DegreeSpec::regular(2), 10, 1, 10).unwrap();
        assert!(out.used_cycle_fallback);
        assert_eq!(out.graph.edge_count(), 10);
        for v in 0..10 {
            assert_eq!(out.graph.degree(v), 2);
        }
    }

    #[test]
    fn exhausted_budget_reports_split_counts() {
        // Degree 3 on two nodes can never be simple: every try rejects.
        let spec = DegreeSpec::regular(3);
        let err = sample_simple_connected(&spec, 2, 5, 25).unwrap_err();
        match err {
            Error::SamplingFailure {
                tries,
                rejected_non_simple,
                rejected_disconnected,
            } => {
                assert_eq!(tries, 25);
                assert_eq!(rejected_non_simple, 25);
                assert_eq!(rejected_disconnected, 0);
            }
            other => panic!("expected SamplingFailure, got {other:?}"),
        }
    }

    #[test]
    fn determinism_same_seed_same_graph() {
        let a = pair_configuration(&DegreeSpec::regular(4), 100, 9).unwrap();
        let b = pair_configuration(&DegreeSpec::regular(4), 100, 9).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = pair_configuration(&DegreeSpec::regular(4), 100, 10).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn degree_histogram_matches_distribution() {
        // 3-sigma multinomial band per degree class over >= 10^4 nodes.
        let entries = vec![(3usize, 0.3), (5, 0.5), (8, 0.2)];
        let spec = DegreeSpec::distribution(entries.clone());
        let n = 20_000;
        let g = pair_configuration(&spec, n, 11).unwrap();
        let mut counts = std::collections::HashMap::new();
        for v in 0..n {
            *counts.entry(g.degree(v)).or_insert(0usize) += 1;
        }
        for (d, p) in entries {
            let c = *counts.get(&d).unwrap_or(&0) as f64;
            let mean = n as f64 * p;
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            assert!(
                (c - mean).abs() <= 3.0 * sigma,
                "degree {d}: count {c}, expected {mean} +- {}",
                3.0 * sigma
            );
        }
    }
}
