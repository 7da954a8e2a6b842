//! Graph families and generators: configuration-model multigraphs,
//! rejection-sampled simple connected graphs, and implicit complete/cycle
//! graphs that answer neighbor queries without materializing adjacency.
//!
//! Graphs are immutable after construction and safe to share across threads;
//! generation is single-threaded per call and reentrant.

mod gen;
mod io;

pub use gen::{pair_configuration, sample_simple_connected, SampleOutcome, DEFAULT_MAX_TRIES};
pub use io::{read_edge_list, write_edge_list};

use std::collections::VecDeque;

use rand::Rng;

use crate::rng::SimRng;
use crate::{Error, Result};

/// How the node degrees of a random graph are specified.
#[derive(Clone, Debug, PartialEq)]
pub enum DegreeSpec {
    /// Every node has degree `k`.
    Regular { k: usize },
    /// Degrees drawn i.i.d. from `(degree, probability)` entries.
    Distribution { entries: Vec<(usize, f64)> },
    /// One explicit degree per node.
    Explicit { degrees: Vec<usize> },
}

/// Number of full-sequence resamples allowed to repair an odd degree sum.
const ODD_SUM_RESAMPLES: usize = 100;

impl DegreeSpec {
    pub fn regular(k: usize) -> Self {
        DegreeSpec::Regular { k }
    }

    pub fn distribution(entries: Vec<(usize, f64)>) -> Self {
        DegreeSpec::Distribution { entries }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DegreeSpec::Regular { k } => {
                if *k < 1 {
                    return Err(Error::DegreeSequence("regular degree must be >= 1".into()));
                }
            }
            DegreeSpec::Distribution { entries } => {
                if entries.is_empty() {
                    return Err(Error::DegreeSequence("empty degree distribution".into()));
                }
                let mut total = 0.0;
                for &(d, p) in entries {
                    if d < 1 {
                        return Err(Error::DegreeSequence("all degrees must be >= 1".into()));
                    }
                    if !(0.0..=1.0).contains(&p) {
                        return Err(Error::DegreeSequence(format!(
                            "probability {p} for degree {d} outside [0, 1]"
                        )));
                    }
                    total += p;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::DegreeSequence(format!(
                        "degree probabilities sum to {total}, expected 1 within 1e-12"
                    )));
                }
            }
            DegreeSpec::Explicit { degrees } => {
                if degrees.is_empty() {
                    return Err(Error::DegreeSequence("empty explicit degree list".into()));
                }
                if degrees.iter().any(|&d| d < 1) {
                    return Err(Error::DegreeSequence("all degrees must be >= 1".into()));
                }
            }
        }
        Ok(())
    }

    pub fn mean_degree(&self) -> f64 {
        match self {
            DegreeSpec::Regular { k } => *k as f64,
            DegreeSpec::Distribution { entries } => {
                entries.iter().map(|&(d, p)| d as f64 * p).sum()
            }
            DegreeSpec::Explicit { degrees } => {
                degrees.iter().sum::<usize>() as f64 / degrees.len() as f64
            }
        }
    }

    pub fn min_degree(&self) -> usize {
        match self {
            DegreeSpec::Regular { k } => *k,
            DegreeSpec::Distribution { entries } => entries
                .iter()
                .filter(|&&(_, p)| p > 0.0)
                .map(|&(d, _)| d)
                .min()
                .unwrap_or(0),
            DegreeSpec::Explicit { degrees } => degrees.iter().copied().min().unwrap_or(0),
        }
    }

    /// Short textual form for curve metadata: `5` or `4:0.5,6:0.5`.
    pub fn label(&self) -> String {
        match self {
            DegreeSpec::Regular { k } => k.to_string(),
            DegreeSpec::Distribution { entries } => entries
                .iter()
                .map(|(d, p)| format!("{d}:{p}"))
                .collect::<Vec<_>>()
                .join(","),
            DegreeSpec::Explicit { .. } => "explicit".to_string(),
        }
    }

    /// Realizes one degree per node. A distribution draw with odd total is
    /// repaired by resampling the whole sequence (up to 100 times) rather
    /// than perturbing one node, which would bias the distribution.
    pub fn realize(&self, n: usize, rng: &mut SimRng) -> Result<Vec<usize>> {
        self.validate()?;
        match self {
            DegreeSpec::Regular { k } => {
                if (n * k) % 2 != 0 {
                    return Err(Error::DegreeSequence(format!(
                        "n*k = {} is odd; no {k}-regular graph on {n} nodes exists",
                        n * k
                    )));
                }
                Ok(vec![*k; n])
            }
            DegreeSpec::Distribution { entries } => {
                for _ in 0..ODD_SUM_RESAMPLES {
                    let mut degrees = Vec::with_capacity(n);
                    for _ in 0..n {
                        let mut u: f64 = rng.gen();
                        let mut picked = entries[entries.len() - 1].0;
                        for &(d, p) in entries {
                            if u < p {
                                picked = d;
                                break;
                            }
                            u -= p;
                        }
                        degrees.push(picked);
                    }
                    if degrees.iter().sum::<usize>() % 2 == 0 {
                        return Ok(degrees);
                    }
                }
                Err(Error::DegreeSequence(format!(
                    "degree sum still odd after {ODD_SUM_RESAMPLES} resamples"
                )))
            }
            DegreeSpec::Explicit { degrees } => {
                if degrees.len() != n {
                    return Err(Error::DegreeSequence(format!(
                        "explicit degree list has {} entries for n = {n}",
                        degrees.len()
                    )));
                }
                if degrees.iter().sum::<usize>() % 2 != 0 {
                    return Err(Error::DegreeSequence(
                        "explicit degree sequence has odd total".into(),
                    ));
                }
                Ok(degrees.clone())
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Repr {
    /// CSR adjacency. Multigraph convention: a parallel edge repeats the
    /// neighbor entry; a self-loop at `v` appears twice in `v`'s own list,
    /// so list lengths always sum to twice the edge count.
    Explicit {
        offsets: Vec<usize>,
        neighbors: Vec<u32>,
    },
    Complete,
    Cycle,
}

/// An immutable graph; explicit adjacency or an implicit complete/cycle form.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    repr: Repr,
    is_simple: Option<bool>,
    is_connected: Option<bool>,
}

/// Complete graph on `n >= 2` nodes. Neighbor queries answer "all others"
/// without O(n^2) storage.
pub fn complete_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Params(format!("complete graph needs n >= 2, got {n}")));
    }
    Ok(Graph {
        n,
        repr: Repr::Complete,
        is_simple: Some(true),
        is_connected: Some(true),
    })
}

/// Cycle on `n >= 3` nodes; node `v` neighbors `v-1` and `v+1` mod n.
pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Params(format!("cycle graph needs n >= 3, got {n}")));
    }
    Ok(Graph {
        n,
        repr: Repr::Cycle,
        is_simple: Some(true),
        is_connected: Some(true),
    })
}

impl Graph {
    /// Builds an explicit (multi)graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        let mut degrees = vec![0usize; n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Params(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        for v in 0..n {
            offsets.push(offsets[v] + degrees[v]);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; 2 * edges.len()];
        for &(u, v) in edges {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        Ok(Graph {
            n,
            repr: Repr::Explicit { offsets, neighbors },
            is_simple: None,
            is_connected: None,
        })
    }

    pub(crate) fn from_csr(n: usize, offsets: Vec<usize>, neighbors: Vec<u32>) -> Graph {
        Graph {
            n,
            repr: Repr::Explicit { offsets, neighbors },
            is_simple: None,
            is_connected: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        match &self.repr {
            Repr::Explicit { neighbors, .. } => neighbors.len() / 2,
            Repr::Complete => self.n * (self.n - 1) / 2,
            Repr::Cycle => self.n,
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        debug_assert!(v < self.n);
        match &self.repr {
            Repr::Explicit { offsets, .. } => offsets[v + 1] - offsets[v],
            Repr::Complete => self.n - 1,
            Repr::Cycle => 2,
        }
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edge_count() as f64 / self.n as f64
    }

    pub fn max_degree(&self) -> usize {
        match &self.repr {
            Repr::Explicit { .. } => (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0),
            Repr::Complete => self.n - 1,
            Repr::Cycle => 2,
        }
    }

    /// The `i`-th neighbor of `v`, `i < degree(v)`.
    #[inline]
    pub fn neighbor(&self, v: usize, i: usize) -> usize {
        match &self.repr {
            Repr::Explicit { offsets, neighbors } => neighbors[offsets[v] + i] as usize,
            Repr::Complete => {
                if i < v {
                    i
                } else {
                    i + 1
                }
            }
            Repr::Cycle => {
                if i == 0 {
                    (v + self.n - 1) % self.n
                } else {
                    (v + 1) % self.n
                }
            }
        }
    }

    /// A uniformly random neighbor of `v`; consumes one RNG draw.
    #[inline]
    pub fn sample_neighbor(&self, v: usize, rng: &mut SimRng) -> usize {
        let i = rng.gen_range(0..self.degree(v));
        self.neighbor(v, i)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.degree(v)).map(move |i| self.neighbor(v, i))
    }

    /// `Some(true)`/`Some(false)` when known, `None` when never checked.
    pub fn is_simple(&self) -> Option<bool> {
        self.is_simple
    }

    pub fn is_connected(&self) -> Option<bool> {
        self.is_connected
    }

    pub(crate) fn set_flags(&mut self, simple: Option<bool>, connected: Option<bool>) {
        self.is_simple = simple;
        self.is_connected = connected;
    }

    /// Simplicity by a duplicate/self-loop scan, connectivity by traversal.
    /// Simplicity is the cheap scan, so it runs first.
    pub fn check(&self) -> (bool, bool) {
        let simple = match &self.repr {
            Repr::Complete | Repr::Cycle => true,
            Repr::Explicit { offsets, neighbors } => {
                let mut scratch = Vec::new();
                let mut ok = true;
                'outer: for v in 0..self.n {
                    scratch.clear();
                    scratch.extend_from_slice(&neighbors[offsets[v]..offsets[v + 1]]);
                    scratch.sort_unstable();
                    for w in scratch.windows(2) {
                        if w[0] == w[1] {
                            ok = false;
                            break 'outer;
                        }
                    }
                    if scratch.binary_search(&(v as u32)).is_ok() {
                        ok = false;
                        break;
                    }
                }
                ok
            }
        };
        (simple, self.connected_by_traversal())
    }

    fn connected_by_traversal(&self) -> bool {
        match &self.repr {
            Repr::Complete | Repr::Cycle => true,
            Repr::Explicit { .. } => {
                if self.n == 0 {
                    return true;
                }
                let mut seen = vec![false; self.n];
                let mut queue = VecDeque::new();
                seen[0] = true;
                queue.push_back(0usize);
                let mut count = 1usize;
                while let Some(v) = queue.pop_front() {
                    for w in self.neighbors(v) {
                        if !seen[w] {
                            seen[w] = true;
                            count += 1;
                            queue.push_back(w);
                        }
                    }
                }
                count == self.n
            }
        }
    }

    /// Sizes of the connected components that contain no marked node.
    /// Used to report stranded nodes when `stop = all` is unreachable.
    pub fn unmarked_component_sizes(&self, marked: &[bool]) -> Vec<usize> {
        assert_eq!(marked.len(), self.n);
        let mut seen = vec![false; self.n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut size = 0usize;
            let mut has_marked = false;
            while let Some(v) = queue.pop_front() {
                size += 1;
                has_marked |= marked[v];
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            if !has_marked {
                sizes.push(size);
            }
        }
        sizes
    }

    /// Every edge exactly once: `(u, v)` with `u <= v`; parallel edges repeat,
    /// self-loops appear once each. Materializes implicit graphs, so this is
    /// O(n^2) on a complete graph.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        match &self.repr {
            Repr::Explicit { offsets, neighbors } => {
                let mut edges = Vec::with_capacity(neighbors.len() / 2);
                for v in 0..self.n {
                    let mut self_entries = 0usize;
                    for &w in &neighbors[offsets[v]..offsets[v + 1]] {
                        let w = w as usize;
                        if w > v {
                            edges.push((v as u32, w as u32));
                        } else if w == v {
                            self_entries += 1;
                            if self_entries % 2 == 0 {
                                edges.push((v as u32, v as u32));
                            }
                        }
                    }
                }
                edges
            }
            Repr::Complete => {
                let mut edges = Vec::with_capacity(self.n * (self.n - 1) / 2);
                for u in 0..self.n {
                    for v in (u + 1)..self.n {
                        edges.push((u as u32, v as u32));
                    }
                }
                edges
            }
            Repr::Cycle => {
                let mut edges: Vec<(u32, u32)> =
                    (0..self.n - 1).map(|u| (u as u32, u as u32 + 1)).collect();
                edges.push((0, self.n as u32 - 1));
                edges
            }
        }
    }

    /// True when the graph is stored implicitly (complete or cycle form).
    pub fn is_implicit(&self) -> bool {
        !matches!(self.repr, Repr::Explicit { .. })
    }

    pub(crate) fn is_cycle_repr(&self) -> bool {
        matches!(self.repr, Repr::Cycle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn complete_graph_shape() {
        let g = complete_graph(5).unwrap();
        for v in 0..5 {
            assert_eq!(g.degree(v), 4);
            let nbrs: Vec<usize> = g.neighbors(v).collect();
            assert_eq!(nbrs.len(), 4);
            assert!(!nbrs.contains(&v));
        }
        // degree sum = n(n-1)
        assert_eq!(2 * g.edge_count(), 5 * 4);
        assert_eq!(g.check(), (true, true));
        assert!(complete_graph(1).is_err());
    }

    #[test]
    fn cycle_graph_shape() {
        let g = cycle_graph(3).unwrap();
        assert_eq!(g.edge_count(), 3);
        let g = cycle_graph(10).unwrap();
        for v in 0..10 {
            assert_eq!(g.degree(v), 2);
            let nbrs: Vec<usize> = g.neighbors(v).collect();
            assert!(nbrs.contains(&((v + 1) % 10)));
            assert!(nbrs.contains(&((v + 9) % 10)));
        }
        assert_eq!(g.check(), (true, true));
        assert!(cycle_graph(2).is_err());
    }

    #[test]
    fn check_disjoint_triangles_and_self_loop() {
        let two_triangles =
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(two_triangles.check(), (true, false));

        let self_loop = Graph::from_edges(1, &[(0, 0)]).unwrap();
        assert_eq!(self_loop.check(), (false, true));
        assert_eq!(self_loop.degree(0), 2);
        assert_eq!(self_loop.edges(), vec![(0, 0)]);

        let multi = Graph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(multi.check(), (false, true));
        assert_eq!(multi.edges(), vec![(0, 1), (0, 1)]);
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        for v in 0..4 {
            for w in g.neighbors(v) {
                assert!(g.neighbors(w).any(|x| x == v), "{v} -> {w} not mirrored");
            }
        }
    }

    #[test]
    fn degree_spec_validation() {
        assert!(DegreeSpec::distribution(vec![(3, 0.5), (5, 0.5)]).validate().is_ok());
        assert!(DegreeSpec::distribution(vec![(3, 0.5), (5, 0.4)]).validate().is_err());
        assert!(DegreeSpec::distribution(vec![(0, 1.0)]).validate().is_err());
        assert!(DegreeSpec::Explicit { degrees: vec![1, 1, 1] }
            .realize(3, &mut rng_from_seed(1))
            .is_err());
        assert!(DegreeSpec::regular(3).realize(5, &mut rng_from_seed(1)).is_err());
    }

    #[test]
    fn distribution_realization_has_even_sum() {
        let spec = DegreeSpec::distribution(vec![(3, 0.5), (4, 0.5)]);
        let mut rng = rng_from_seed(9);
        for _ in 0..50 {
            let degs = spec.realize(101, &mut rng).unwrap();
            assert_eq!(degs.len(), 101);
            assert_eq!(degs.iter().sum::<usize>() % 2, 0);
            assert!(degs.iter().all(|&d| d == 3 || d == 4));
        }
    }

    #[test]
    fn mean_degree_and_labels() {
        assert_eq!(DegreeSpec::regular(5).mean_degree(), 5.0);
        let mix = DegreeSpec::distribution(vec![(4, 0.5), (6, 0.5)]);
        assert_eq!(mix.mean_degree(), 5.0);
        assert_eq!(mix.min_degree(), 4);
        assert_eq!(mix.label(), "4:0.5,6:0.5");
    }
}
