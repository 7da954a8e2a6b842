//! Event-driven engine (Gillespie direct method) over per-node clocks.
//!
//! The engine maintains the adopter set and the total rate of every active
//! clock class; each event draws one exponential race winner. Contacts from
//! an adopter to another adopter are simulated explicitly (they consume time
//! and randomness but change nothing), which keeps the sample path exactly
//! distributed per the model without adopter-boundary bookkeeping.
//!
//! The one exception is plain SI on an *implicit cycle*, where the adopter
//! set is always an arc and explicit wasted contacts would cost Θ(n²) events:
//! that path uses the exact thinned form (adoption gaps are i.i.d.
//! Exponential(βp), each adoption extends a uniformly chosen end of the arc),
//! which is distribution-identical on the observable trace.

use rand::Rng;

use super::trace::{AdoptionTrace, Event, EventKind};
use super::{Clock, ModelParams, Stop, Variant};
use crate::graph::Graph;
use crate::rng::{exp_time, rng_from_seed, SimRng};
use crate::{Error, Result};

/// Choice of the initial adopter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Init {
    /// Uniform over nodes (the model's default).
    UniformRandom,
    /// A fixed node, for debugging and reproduction recipes.
    Fixed(usize),
}

/// Simulates the adoption process with a uniformly random initial adopter.
pub fn simulate(graph: &Graph, params: &ModelParams, seed: u64, stop: Stop) -> Result<AdoptionTrace> {
    simulate_from(graph, params, seed, stop, Init::UniformRandom)
}

/// [`simulate`] with explicit control over the initial adopter.
pub fn simulate_from(
    graph: &Graph,
    params: &ModelParams,
    seed: u64,
    stop: Stop,
    init: Init,
) -> Result<AdoptionTrace> {
    params.validate()?;
    let n = graph.n();
    if n < 2 {
        return Err(Error::Params(format!("simulation needs n >= 2, got {n}")));
    }
    if let Stop::Count(x) = stop {
        if x < 1 || x > n {
            return Err(Error::domain("stop count", x as f64, "in [1, n]"));
        }
    }
    let mut rng = rng_from_seed(seed);
    let v0 = match init {
        Init::UniformRandom => rng.gen_range(0..n),
        Init::Fixed(v) => {
            if v >= n {
                return Err(Error::domain("initial node", v as f64, "a node id below n"));
            }
            v
        }
    };

    if params.variant == Variant::Si && graph.is_cycle_repr() {
        return simulate_cycle_si(graph, params, rng, stop, v0);
    }

    // SI can only ever reach the seed's component; detect unreachable stop
    // targets up front instead of spinning on wasted contacts forever.
    if params.variant == Variant::Si {
        let needed = match stop {
            Stop::All => Some(n),
            Stop::Count(x) => Some(x),
            Stop::Time(_) => None,
        };
        if let Some(needed) = needed {
            if graph.is_connected() != Some(true) {
                let mut marked = vec![false; n];
                marked[v0] = true;
                let stranded = graph.unmarked_component_sizes(&marked);
                let unreached: usize = stranded.iter().sum();
                if n - unreached < needed {
                    return Err(Error::UnreachableNodes {
                        unreached,
                        component_sizes: stranded,
                    });
                }
            }
        }
    }

    run_gillespie(graph, params, rng, stop, v0)
}

/// Set with O(1) uniform sampling and O(1) removal by value.
struct IndexedSet {
    items: Vec<u32>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl IndexedSet {
    fn with_capacity(n: usize) -> Self {
        IndexedSet {
            items: Vec::with_capacity(n),
            pos: vec![ABSENT; n],
        }
    }

    fn full(n: usize) -> Self {
        IndexedSet {
            items: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
        }
    }

    fn len(&self) -> usize {
        self.items.len()
    }

    fn insert(&mut self, v: u32) {
        debug_assert_eq!(self.pos[v as usize], ABSENT);
        self.pos[v as usize] = self.items.len() as u32;
        self.items.push(v);
    }

    fn remove(&mut self, v: u32) {
        let i = self.pos[v as usize];
        debug_assert_ne!(i, ABSENT);
        let last = *self.items.last().unwrap();
        self.items[i as usize] = last;
        self.pos[last as usize] = i;
        self.items.pop();
        self.pos[v as usize] = ABSENT;
    }

    fn sample(&self, rng: &mut SimRng) -> u32 {
        self.items[rng.gen_range(0..self.items.len())]
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Susceptible,
    Adopter,
    Removed,
}

fn run_gillespie(
    graph: &Graph,
    params: &ModelParams,
    mut rng: SimRng,
    stop: Stop,
    v0: usize,
) -> Result<AdoptionTrace> {
    let n = graph.n();
    let mean_degree = graph.mean_degree();
    let max_degree = graph.max_degree();

    let mut status = vec![Status::Susceptible; n];
    // Active adopters: adopted and not removed; their clocks run.
    let mut active = IndexedSet::with_capacity(n);
    // Susceptible set is only consulted by the innovators variant.
    let track_susceptible = params.variant == Variant::SiInnovators;
    let mut susceptible = if track_susceptible {
        IndexedSet::full(n)
    } else {
        IndexedSet::with_capacity(0)
    };
    let mut active_degree_sum = 0u64;

    let mut events = Vec::new();
    let mut adopted = 0usize;
    let mut t = 0.0f64;

    let adopt = |v: usize,
                     time: f64,
                     status: &mut Vec<Status>,
                     active: &mut IndexedSet,
                     susceptible: &mut IndexedSet,
                     active_degree_sum: &mut u64,
                     events: &mut Vec<Event>,
                     adopted: &mut usize| {
        status[v] = Status::Adopter;
        active.insert(v as u32);
        if track_susceptible {
            susceptible.remove(v as u32);
        }
        *active_degree_sum += graph.degree(v) as u64;
        events.push(Event {
            time,
            node: v as u32,
            kind: EventKind::Adopt,
        });
        *adopted += 1;
    };

    adopt(
        v0,
        0.0,
        &mut status,
        &mut active,
        &mut susceptible,
        &mut active_degree_sum,
        &mut events,
        &mut adopted,
    );

    let done = |adopted: usize, active_len: usize| -> bool {
        match stop {
            Stop::All => match params.variant {
                Variant::Si | Variant::SiInnovators => adopted == n,
                // SIR runs until no state-changing event can occur: the
                // active set emptied, or everyone adopted and nothing removes.
                Variant::Sir => {
                    active_len == 0 || (adopted == n && params.beta_prime == 0.0)
                }
            },
            Stop::Count(x) => adopted >= x,
            Stop::Time(_) => false,
        }
    };

    while !done(adopted, active.len()) {
        let contact_rate = match params.clock {
            Clock::Node => params.beta * active.len() as f64,
            Clock::Edge => params.beta / mean_degree * active_degree_sum as f64,
        };
        let innovate_rate = if params.variant == Variant::SiInnovators {
            params.beta_prime * susceptible.len() as f64
        } else {
            0.0
        };
        let removal_rate = if params.variant == Variant::Sir {
            params.beta_prime * active.len() as f64
        } else {
            0.0
        };
        let total = contact_rate + innovate_rate + removal_rate;
        if total <= 0.0 {
            // Only SIR gets here (its active set can empty out); SI variants
            // always keep at least the seed's clock running.
            break;
        }
        t += exp_time(&mut rng, total);
        if let Stop::Time(t_max) = stop {
            if t > t_max {
                break;
            }
        }
        let pick = rng.gen::<f64>() * total;
        if pick < contact_rate {
            // A contact fires; wasted ones (target already adopted/removed)
            // fall through with no state change.
            let v = match params.clock {
                Clock::Node => active.sample(&mut rng) as usize,
                Clock::Edge => loop {
                    // Degree-weighted adopter choice by rejection.
                    let cand = active.sample(&mut rng) as usize;
                    if max_degree == 0 {
                        break cand;
                    }
                    if rng.gen_range(0..max_degree) < graph.degree(cand) {
                        break cand;
                    }
                },
            };
            let u = graph.sample_neighbor(v, &mut rng);
            if status[u] == Status::Susceptible {
                let converts = params.p >= 1.0 || rng.gen::<f64>() < params.p;
                if converts {
                    adopt(
                        u,
                        t,
                        &mut status,
                        &mut active,
                        &mut susceptible,
                        &mut active_degree_sum,
                        &mut events,
                        &mut adopted,
                    );
                }
            }
        } else if pick < contact_rate + innovate_rate {
            let u = susceptible.sample(&mut rng) as usize;
            adopt(
                u,
                t,
                &mut status,
                &mut active,
                &mut susceptible,
                &mut active_degree_sum,
                &mut events,
                &mut adopted,
            );
        } else {
            let v = active.sample(&mut rng);
            status[v as usize] = Status::Removed;
            active.remove(v);
            active_degree_sum -= graph.degree(v as usize) as u64;
            events.push(Event {
                time: t,
                node: v,
                kind: EventKind::Remove,
            });
        }
    }

    Ok(AdoptionTrace::from_events(n, events))
}

/// Exact thinned SI dynamics on the implicit cycle: the adopter set is an
/// arc; the adoption rate is βp for every 1 <= i <= n−1 (two boundary nodes
/// each contact outward with probability 1/2, one lonely seed or one last
/// gap node otherwise), and each adoption extends a uniform end of the arc.
fn simulate_cycle_si(
    graph: &Graph,
    params: &ModelParams,
    mut rng: SimRng,
    stop: Stop,
    v0: usize,
) -> Result<AdoptionTrace> {
    let n = graph.n();
    let rate = params.beta * params.p;
    let target = match stop {
        Stop::All => n,
        Stop::Count(x) => x,
        Stop::Time(_) => n,
    };
    if rate <= 0.0 && target > 1 && !matches!(stop, Stop::Time(_)) {
        return Err(Error::Params("p = 0 never reaches the stop target".into()));
    }

    let mut events = Vec::with_capacity(target.min(n));
    events.push(Event {
        time: 0.0,
        node: v0 as u32,
        kind: EventKind::Adopt,
    });
    let mut left = v0;
    let mut right = v0;
    let mut adopted = 1usize;
    let mut t = 0.0f64;
    while adopted < target {
        if rate <= 0.0 {
            break;
        }
        t += exp_time(&mut rng, rate);
        if let Stop::Time(t_max) = stop {
            if t > t_max {
                break;
            }
        }
        let v = if adopted == n - 1 {
            // Both arc ends border the single remaining node.
            (left + n - 1) % n
        } else if rng.gen::<bool>() {
            left = (left + n - 1) % n;
            left
        } else {
            right = (right + 1) % n;
            right
        };
        adopted += 1;
        events.push(Event {
            time: t,
            node: v as u32,
            kind: EventKind::Adopt,
        });
    }
    Ok(AdoptionTrace::from_events(graph.n(), events))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, sample_simple_connected, DegreeSpec, Graph};

    fn small_regular(seed: u64) -> Graph {
        sample_simple_connected(&DegreeSpec::regular(3), 30, seed, 10_000)
            .unwrap()
            .graph
    }

    #[test]
    fn determinism_bit_for_bit() {
        let g = small_regular(1);
        let params = ModelParams::si(1.0);
        let a = simulate(&g, &params, 99, Stop::All).unwrap();
        let b = simulate(&g, &params, 99, Stop::All).unwrap();
        assert_eq!(a, b);
        let c = simulate(&g, &params, 100, Stop::All).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn si_reaches_everyone_and_grows_one_by_one() {
        let g = small_regular(2);
        let tr = simulate(&g, &ModelParams::si(1.0), 5, Stop::All).unwrap();
        assert_eq!(tr.adoptions(), 30);
        // strictly increasing times, one adoption per event
        let times: Vec<f64> = tr.events().iter().map(|e| e.time).collect();
        assert!(times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn si_only_neighbors_of_adopters_adopt() {
        let g = small_regular(3);
        let tr = simulate(&g, &ModelParams::si(1.0), 17, Stop::All).unwrap();
        let mut adopters = std::collections::HashSet::new();
        for (i, e) in tr.events().iter().enumerate() {
            let v = e.node as usize;
            if i > 0 {
                assert!(
                    g.neighbors(v).any(|w| adopters.contains(&w)),
                    "node {v} adopted without an adopter neighbor"
                );
            }
            adopters.insert(v);
        }
    }

    #[test]
    fn innovators_can_adopt_without_neighbors() {
        // With a huge innovator rate nearly all adoptions are spontaneous, so
        // some adopter must appear with no adopter neighbor.
        let g = small_regular(4);
        let params = ModelParams::si_innovators(0.001, 50.0);
        let tr = simulate(&g, &params, 3, Stop::All).unwrap();
        assert_eq!(tr.adoptions(), 30);
        let mut adopters = std::collections::HashSet::new();
        let mut spontaneous = 0;
        for (i, e) in tr.events().iter().enumerate() {
            let v = e.node as usize;
            if i > 0 && !g.neighbors(v).any(|w| adopters.contains(&w)) {
                spontaneous += 1;
            }
            adopters.insert(v);
        }
        assert!(spontaneous > 0);
    }

    #[test]
    fn sir_zero_removal_matches_si_seed_for_seed() {
        let g = small_regular(5);
        let si = simulate(&g, &ModelParams::si(1.3), 11, Stop::All).unwrap();
        let sir = simulate(&g, &ModelParams::sir(1.3, 0.0), 11, Stop::All).unwrap();
        assert_eq!(si, sir);
    }

    #[test]
    fn sir_removed_node_never_fires_again() {
        let g = complete_graph(40).unwrap();
        let params = ModelParams::sir(1.0, 0.8);
        for seed in 0..20 {
            let tr = simulate(&g, &params, seed, Stop::All).unwrap();
            let mut removed = std::collections::HashSet::new();
            for e in tr.events() {
                match e.kind {
                    EventKind::Remove => {
                        assert!(removed.insert(e.node), "node {} removed twice", e.node);
                    }
                    EventKind::Adopt => {
                        assert!(!removed.contains(&e.node), "removed node {} adopted", e.node);
                    }
                }
            }
            // epidemic ends with no active adopter: adoptions = removals or n
            let adopts = tr.adoptions();
            let removals = tr.events().len() - adopts;
            assert!(removals == adopts || adopts == 40);
        }
    }

    #[test]
    fn unreachable_components_error_lists_sizes() {
        // two disjoint triangles
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let err = simulate_from(&g, &ModelParams::si(1.0), 1, Stop::All, Init::Fixed(0)).unwrap_err();
        match err {
            Error::UnreachableNodes {
                unreached,
                component_sizes,
            } => {
                assert_eq!(unreached, 3);
                assert_eq!(component_sizes, vec![3]);
            }
            other => panic!("expected UnreachableNodes, got {other:?}"),
        }
        // stop below the component size is fine
        let tr = simulate_from(&g, &ModelParams::si(1.0), 1, Stop::Count(3), Init::Fixed(0)).unwrap();
        assert_eq!(tr.adoptions(), 3);
    }

    #[test]
    fn stop_time_and_count() {
        let g = complete_graph(100).unwrap();
        let tr = simulate(&g, &ModelParams::si(1.0), 8, Stop::Count(10)).unwrap();
        assert_eq!(tr.adoptions(), 10);
        let tr = simulate(&g, &ModelParams::si(1.0), 8, Stop::Time(0.05)).unwrap();
        assert!(tr.events().iter().all(|e| e.time <= 0.05));
    }

    #[test]
    fn complete_two_nodes_gap_is_unit_exponential() {
        // lambda_1 = beta * 1 * (n-1)/(n-1) = 1; mean of 1e4 draws in +-3 sigma.
        let g = complete_graph(2).unwrap();
        let params = ModelParams::si(1.0);
        let runs = 10_000;
        let mut total = 0.0;
        for seed in 0..runs {
            let tr = simulate(&g, &params, seed, Stop::All).unwrap();
            total += tr.time_of_adoption(2).unwrap();
        }
        let mean = total / runs as f64;
        assert!((0.97..=1.03).contains(&mean), "mean {mean}");
    }

    #[test]
    fn cycle_fast_path_quartile_spacing() {
        // Delta(0.25n, 0.75n)/n concentrates at 0.5/beta.
        let g = cycle_graph(20_000).unwrap();
        let tr = simulate(&g, &ModelParams::si(1.0), 21, Stop::All).unwrap();
        let d = tr.delta(0.25, 0.75).unwrap() / 20_000.0;
        assert!((0.48..=0.52).contains(&d), "scaled delta {d}");
        // node identities form a contiguous arc at all times
        let mut adopted = std::collections::HashSet::new();
        for e in tr.events() {
            adopted.insert(e.node as usize);
        }
        assert_eq!(adopted.len(), 20_000);
    }

    #[test]
    fn cycle_respects_count_stop_and_adjacency() {
        let g = cycle_graph(50).unwrap();
        let tr = simulate_from(&g, &ModelParams::si(2.0), 4, Stop::Count(20), Init::Fixed(7))
            .unwrap();
        assert_eq!(tr.adoptions(), 20);
        // every adopter after the first neighbors a previous adopter
        let mut set = std::collections::HashSet::new();
        for (i, e) in tr.events().iter().enumerate() {
            let v = e.node as usize;
            if i > 0 {
                assert!(g.neighbors(v).any(|w| set.contains(&w)));
            }
            set.insert(v);
        }
    }

    #[test]
    fn edge_clock_equals_node_clock_on_regular_graphs() {
        // On k-regular graphs the two conventions are the same process; the
        // ensemble means of T(n/2) must agree within Monte Carlo error.
        let g = small_regular(6);
        let mut node_params = ModelParams::si(1.0);
        node_params.clock = Clock::Node;
        let mut edge_params = ModelParams::si(1.0);
        edge_params.clock = Clock::Edge;
        let runs = 400;
        let mean = |params: &ModelParams, base: u64| -> f64 {
            (0..runs)
                .map(|s| {
                    simulate(&g, params, base + s, Stop::Count(15))
                        .unwrap()
                        .time_of_adoption(15)
                        .unwrap()
                })
                .sum::<f64>()
                / runs as f64
        };
        let m_node = mean(&node_params, 10_000);
        let m_edge = mean(&edge_params, 20_000);
        let rel = (m_node - m_edge).abs() / m_node;
        assert!(rel < 0.1, "node {m_node} vs edge {m_edge}");
    }

    #[test]
    fn thinning_identity_in_distribution() {
        // (beta, p) ~ (beta p, 1): ensemble means of T(n/2) agree.
        let g = small_regular(7);
        let thinned = ModelParams {
            p: 0.5,
            ..ModelParams::si(2.0)
        };
        let plain = ModelParams::si(1.0);
        let runs = 400;
        let mean = |params: &ModelParams, base: u64| -> f64 {
            (0..runs)
                .map(|s| {
                    simulate(&g, params, base + s, Stop::Count(15))
                        .unwrap()
                        .time_of_adoption(15)
                        .unwrap()
                })
                .sum::<f64>()
                / runs as f64
        };
        let a = mean(&thinned, 1);
        let b = mean(&plain, 50_000);
        assert!((a - b).abs() / b < 0.1, "thinned {a} vs plain {b}");
    }

    #[test]
    fn param_validation() {
        assert!(ModelParams::si(0.0).validate().is_err());
        assert!(ModelParams { p: 1.5, ..ModelParams::si(1.0) }.validate().is_err());
        assert!(ModelParams::sir(1.0, 1.0).validate().is_err());
        assert!(ModelParams::sir(1.0, 0.5).validate().is_ok());
    }
}
