//! The graph-free coupled exploration process for configuration-model random
//! graphs.
//!
//! Nodes carry clones (half-edges) that are sleeping, active, or dead. Each
//! pairing iteration kills one active clone and pairs it with a partner drawn
//! from the living clones: a sleeping partner wakes its node (an adoption), an
//! active partner closes a pair inside the revealed component. Coupling to
//! time makes iteration j consume an Exponential holding time whose rate is
//! set by the contact-clock convention, yielding adoption traces for random
//! (generalized) regular graphs without materializing a graph.
//!
//! The partner is sleeping with probability S(j)/L(j) (sleeping clones over
//! living clones), the form the evolution equations use; when the killed
//! initiator was the last active clone the partner can only be sleeping, so
//! the step falls back to the wake branch regardless of the draw.
//!
//! Runs are single-threaded and independent; nothing is shared across seeds.

use rand::Rng;

use crate::graph::DegreeSpec;
use crate::rng::{exp_time, rng_from_seed, SimRng};
use crate::sim::{AdoptionTrace, Clock, Event, EventKind, ModelParams, Stop, Variant};
use crate::{Error, Result};

/// Per-degree-class bookkeeping.
#[derive(Clone, Debug)]
struct DegreeClass {
    degree: usize,
    /// Nodes of this degree with all clones sleeping: N_d(j).
    sleeping_nodes: u64,
    /// Active clones on nodes of this degree: A_d(j).
    active_clones: u64,
}

/// Exploration bookkeeping: iteration count j, per-class sleeping-node and
/// active-clone counts, living clones L(j), and the tree flag.
#[derive(Clone, Debug)]
pub struct ExplorationState {
    n: usize,
    classes: Vec<DegreeClass>,
    living_clones: u64,
    sleeping_clones: u64,
    iterations: u64,
    adoptions: u64,
    tree: bool,
}

/// What one pairing iteration did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    /// The partner was sleeping: its node woke (one adoption).
    Woke { degree: usize },
    /// The partner was an active clone: a pair closed inside the component.
    ClosedPair,
}

impl ExplorationState {
    /// Initializes the exploration: realizes the degree sequence, then wakes
    /// one uniformly random node (all its clones become active). Degree
    /// specs containing degrees 1 or 2 are permitted here (raw exploration)
    /// but logged, since the coupled analysis assumes min degree >= 3.
    pub fn init(n: usize, spec: &DegreeSpec, rng: &mut SimRng) -> Result<Self> {
        if n < 2 {
            return Err(Error::Params(format!("exploration needs n >= 2, got {n}")));
        }
        if spec.min_degree() < 3 {
            log::warn!(
                "exploration with min degree {} < 3: component death is likely and \
                 analytic comparisons do not apply",
                spec.min_degree()
            );
        }
        let degrees = spec.realize(n, rng)?;
        let mut counts = std::collections::BTreeMap::new();
        for &d in &degrees {
            *counts.entry(d).or_insert(0u64) += 1;
        }
        let mut classes: Vec<DegreeClass> = counts
            .into_iter()
            .map(|(degree, c)| DegreeClass {
                degree,
                sleeping_nodes: c,
                active_clones: 0,
            })
            .collect();
        let living_clones: u64 = classes
            .iter()
            .map(|c| c.degree as u64 * c.sleeping_nodes)
            .sum();

        // Wake a uniform node: class with probability n_d / n.
        let mut r = rng.gen_range(0..n as u64);
        let mut idx = classes.len() - 1;
        for (i, c) in classes.iter().enumerate() {
            if r < c.sleeping_nodes {
                idx = i;
                break;
            }
            r -= c.sleeping_nodes;
        }
        classes[idx].sleeping_nodes -= 1;
        classes[idx].active_clones = classes[idx].degree as u64;
        let sleeping_clones = living_clones - classes[idx].degree as u64;

        Ok(ExplorationState {
            n,
            classes,
            living_clones,
            sleeping_clones,
            iterations: 0,
            adoptions: 1,
            tree: true,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// j: number of pairing iterations performed.
    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// N(j): sleeping nodes across all classes.
    pub fn sleeping_nodes(&self) -> u64 {
        self.classes.iter().map(|c| c.sleeping_nodes).sum()
    }

    /// N_d(j) for one degree class.
    pub fn sleeping_nodes_of_degree(&self, d: usize) -> u64 {
        self.classes
            .iter()
            .find(|c| c.degree == d)
            .map_or(0, |c| c.sleeping_nodes)
    }

    /// A(j): active clones across all classes.
    pub fn active_clones(&self) -> u64 {
        self.classes.iter().map(|c| c.active_clones).sum()
    }

    /// L(j) = (Σ_v deg v) − 2j: living (sleeping or active) clones.
    pub fn living_clones(&self) -> u64 {
        self.living_clones
    }

    /// Awake (adopted) nodes, counting the seed.
    pub fn adoptions(&self) -> u64 {
        self.adoptions
    }

    /// True while every partner so far was sleeping, i.e. the revealed
    /// multigraph is still a tree.
    pub fn is_tree(&self) -> bool {
        self.tree
    }

    /// One pairing iteration (kill an active clone, pair it). Errors with
    /// the component-death report when no active clone is left.
    pub fn step(&mut self, rng: &mut SimRng, clock: Clock) -> Result<StepOutcome> {
        let active_total = self.active_clones();
        if active_total == 0 {
            return Err(Error::ComponentDeath {
                iteration: self.iterations,
                adoptions: self.adoptions,
            });
        }

        // Kill the initiating clone. Under NODE clocks the initiator is
        // chosen with probability proportional to 1/d over active clones
        // (a degree-d node rings at beta and splits over d clones); under
        // EDGE clocks it is uniform over active clones. Single-class states
        // need no draw.
        let init_idx = if self.classes.len() == 1 {
            0
        } else {
            match clock {
                Clock::Edge => {
                    let mut r = rng.gen_range(0..active_total);
                    let mut idx = self.classes.len() - 1;
                    for (i, c) in self.classes.iter().enumerate() {
                        if r < c.active_clones {
                            idx = i;
                            break;
                        }
                        r -= c.active_clones;
                    }
                    idx
                }
                Clock::Node => {
                    let total: f64 = self
                        .classes
                        .iter()
                        .map(|c| c.active_clones as f64 / c.degree as f64)
                        .sum();
                    let mut r = rng.gen::<f64>() * total;
                    let mut idx = self.classes.len() - 1;
                    for (i, c) in self.classes.iter().enumerate() {
                        let w = c.active_clones as f64 / c.degree as f64;
                        if r < w {
                            idx = i;
                            break;
                        }
                        r -= w;
                    }
                    idx
                }
            }
        };
        self.classes[init_idx].active_clones -= 1;
        let remaining_active = active_total - 1;

        // Partner: sleeping with probability S/L; forced when no active
        // clone survives.
        let u: f64 = rng.gen();
        let wake = remaining_active == 0
            || u * (self.living_clones as f64) < self.sleeping_clones as f64;

        let outcome = if wake {
            // Class with probability d N_d / S.
            let class_idx = if self.classes.len() == 1 {
                0
            } else {
                let mut r = rng.gen_range(0..self.sleeping_clones);
                let mut idx = self.classes.len() - 1;
                for (i, c) in self.classes.iter().enumerate() {
                    let w = c.degree as u64 * c.sleeping_nodes;
                    if r < w {
                        idx = i;
                        break;
                    }
                    r -= w;
                }
                idx
            };
            let d = self.classes[class_idx].degree;
            self.classes[class_idx].sleeping_nodes -= 1;
            // d clones wake; the partner clone dies immediately.
            self.classes[class_idx].active_clones += d as u64 - 1;
            self.sleeping_clones -= d as u64;
            self.adoptions += 1;
            StepOutcome::Woke { degree: d }
        } else {
            let class_idx = if self.classes.len() == 1 {
                0
            } else {
                let mut r = rng.gen_range(0..remaining_active);
                let mut idx = self.classes.len() - 1;
                for (i, c) in self.classes.iter().enumerate() {
                    if r < c.active_clones {
                        idx = i;
                        break;
                    }
                    r -= c.active_clones;
                }
                idx
            };
            self.classes[class_idx].active_clones -= 1;
            self.tree = false;
            StepOutcome::ClosedPair
        };

        self.living_clones -= 2;
        self.iterations += 1;

        #[cfg(debug_assertions)]
        if let [only] = self.classes.as_slice() {
            // Regular-case identity A(j) = k(n - N(j)) - 2j.
            let k = only.degree as u64;
            let expect = k * (self.n as u64 - only.sleeping_nodes) - 2 * self.iterations;
            debug_assert_eq!(only.active_clones, expect);
        }

        Ok(outcome)
    }
}

/// Pairing-event rate per the clock convention: EDGE clocks ring each clone
/// at rate β/d̄ (rate βA/k on k-regular graphs); NODE clocks make contacts
/// through active clones at rate β Σ_d A_d/d.
fn pairing_rate(state: &ExplorationState, clock: Clock, beta: f64, mean_degree: f64) -> f64 {
    match clock {
        Clock::Edge => beta / mean_degree * state.active_clones() as f64,
        Clock::Node => {
            beta * state
                .classes
                .iter()
                .map(|c| c.active_clones as f64 / c.degree as f64)
                .sum::<f64>()
        }
    }
}

/// One `j, N, A, t` sample of a coupled run, for fluid-limit analysis.
#[derive(Clone, Copy, Debug)]
pub struct IterationRow {
    pub j: u64,
    pub sleeping_nodes: u64,
    pub active_clones: u64,
    pub time: f64,
}

/// A coupled run's trace plus the optional per-iteration dump.
#[derive(Clone, Debug)]
pub struct CoupledRun {
    pub trace: AdoptionTrace,
    pub iterations: Option<Vec<IterationRow>>,
}

/// Runs the coupled exploration/adoption process and returns the adoption
/// trace. Requires min degree >= 3 (regular k >= 3 or a distribution with
/// min degree >= 3); the variant must be `Si` or `SiInnovators`.
///
/// Distributionally the trace matches the adoption process on a
/// configuration-model graph, up to conditioning: the exploration runs over
/// all pairings rather than only simple-and-connected ones, so comparisons
/// against uniform simple connected samples are tolerance-level (the
/// non-simple and disconnected fractions are Θ(1) and O(n⁻²) respectively,
/// and neither biases the major-regime statistics detectably).
///
/// Adopter identities are synthesized in adoption order (0, 1, 2, ...).
pub fn coupled_run(
    n: usize,
    spec: &DegreeSpec,
    params: &ModelParams,
    seed: u64,
    stop: Stop,
) -> Result<AdoptionTrace> {
    Ok(coupled_run_with(n, spec, params, seed, stop, false)?.trace)
}

/// Innovators extension on random k-regular graphs: at each event, with
/// probability β′N(j) / (β′N(j) + βA(j)/k) a sleeping node wakes by itself
/// (all k clones become active, no pairing is consumed); otherwise one
/// pairing iteration runs. β′ = 0 reduces to [`coupled_run`] seed-for-seed.
pub fn coupled_run_innovators(
    n: usize,
    k: usize,
    beta: f64,
    beta_prime: f64,
    seed: u64,
    stop: Stop,
) -> Result<AdoptionTrace> {
    let params = ModelParams::si_innovators(beta, beta_prime);
    Ok(coupled_run_with(n, &DegreeSpec::regular(k), &params, seed, stop, false)?.trace)
}

/// [`coupled_run`] with an optional per-iteration `j, N, A, t` log.
pub fn coupled_run_with(
    n: usize,
    spec: &DegreeSpec,
    params: &ModelParams,
    seed: u64,
    stop: Stop,
    log_iterations: bool,
) -> Result<CoupledRun> {
    params.validate()?;
    match params.variant {
        Variant::Si => {
            if params.beta_prime != 0.0 {
                return Err(Error::Params(
                    "beta_prime > 0 requires the innovators variant".into(),
                ));
            }
        }
        Variant::SiInnovators => {}
        Variant::Sir => {
            return Err(Error::Params(
                "SIR is not coupled to the exploration process; simulate it on explicit graphs"
                    .into(),
            ));
        }
    }
    if spec.min_degree() < 3 {
        return Err(Error::Params(format!(
            "coupled runs need min degree >= 3, got {}",
            spec.min_degree()
        )));
    }
    if let Stop::Count(x) = stop {
        if x < 1 || x > n {
            return Err(Error::domain("stop count", x as f64, "in [1, n]"));
        }
    }

    // Thinning: success probability p is equivalent to contact rate beta*p.
    let beta_eff = params.beta * params.p;
    let beta_prime = params.beta_prime;
    let mean_degree = spec.mean_degree();
    let target = match stop {
        Stop::All => n as u64,
        Stop::Count(x) => x as u64,
        Stop::Time(_) => n as u64,
    };

    let mut rng = rng_from_seed(seed);
    let mut state = ExplorationState::init(n, spec, &mut rng)?;
    let mut t = 0.0f64;
    let mut events = vec![Event {
        time: 0.0,
        node: 0,
        kind: EventKind::Adopt,
    }];
    let mut rows = log_iterations.then(|| {
        vec![IterationRow {
            j: 0,
            sleeping_nodes: state.sleeping_nodes(),
            active_clones: state.active_clones(),
            time: 0.0,
        }]
    });

    while state.adoptions() < target {
        let pair_rate = pairing_rate(&state, params.clock, beta_eff, mean_degree);
        let innov_rate = beta_prime * state.sleeping_nodes() as f64;
        let total = pair_rate + innov_rate;
        if total <= 0.0 {
            return Err(Error::ComponentDeath {
                iteration: state.iterations(),
                adoptions: state.adoptions(),
            });
        }
        t += exp_time(&mut rng, total);
        if let Stop::Time(t_max) = stop {
            if t > t_max {
                break;
            }
        }
        // The innovator branch only exists (and only consumes a draw) when
        // its rate is positive, so beta_prime = 0 replays the plain stream.
        let innovate = innov_rate > 0.0 && rng.gen::<f64>() * total < innov_rate;
        if innovate {
            state.wake_spontaneous(&mut rng);
            events.push(Event {
                time: t,
                node: state.adoptions() as u32 - 1,
                kind: EventKind::Adopt,
            });
        } else {
            match state.step(&mut rng, params.clock) {
                Ok(StepOutcome::Woke { .. }) => {
                    events.push(Event {
                        time: t,
                        node: state.adoptions() as u32 - 1,
                        kind: EventKind::Adopt,
                    });
                }
                Ok(StepOutcome::ClosedPair) => {}
                Err(e) => return Err(e),
            }
            if let Some(rows) = rows.as_mut() {
                rows.push(IterationRow {
                    j: state.iterations(),
                    sleeping_nodes: state.sleeping_nodes(),
                    active_clones: state.active_clones(),
                    time: t,
                });
            }
        }
    }

    Ok(CoupledRun {
        trace: AdoptionTrace::from_events(n, events),
        iterations: rows,
    })
}

impl ExplorationState {
    /// Innovator wake: a uniformly random sleeping node wakes with all its
    /// clones active. Consumes no pairing; L(j) is unchanged.
    fn wake_spontaneous(&mut self, rng: &mut SimRng) {
        let sleeping_total = self.sleeping_nodes();
        debug_assert!(sleeping_total > 0);
        let class_idx = if self.classes.len() == 1 {
            0
        } else {
            let mut r = rng.gen_range(0..sleeping_total);
            let mut idx = self.classes.len() - 1;
            for (i, c) in self.classes.iter().enumerate() {
                if r < c.sleeping_nodes {
                    idx = i;
                    break;
                }
                r -= c.sleeping_nodes;
            }
            idx
        };
        let d = self.classes[class_idx].degree as u64;
        self.classes[class_idx].sleeping_nodes -= 1;
        self.classes[class_idx].active_clones += d;
        self.sleeping_clones -= d;
        self.adoptions += 1;
    }
}

/// ε₀ for fluid-band checks: the sup runs over j <= (k/2 − ε₀)n, keeping the
/// active-clone limit g bounded away from zero on the checked range.
pub const FLUID_EPSILON: f64 = 0.05;

/// One exploration run's sup deviation of the scaled sleeping-node count
/// from its fluid limit: sup_{j <= (k/2 − ε₀)n} |N(j)/n − f(j/n)|.
pub fn fluid_deviation(n: usize, k: usize, seed: u64) -> Result<f64> {
    if k < 3 {
        return Err(Error::domain("k", k as f64, ">= 3"));
    }
    let mut rng = rng_from_seed(seed);
    let mut state = ExplorationState::init(n, &DegreeSpec::regular(k), &mut rng)?;
    let j_max = ((k as f64 / 2.0 - FLUID_EPSILON) * n as f64).floor() as u64;
    let nf = n as f64;
    let kf = k as f64;
    // f(x) = (1 - 2x/k)^{k/2} without powf: integer power plus a square root
    // for odd k.
    let f = |x: f64| -> f64 {
        let w = 1.0 - 2.0 * x / kf;
        let whole = w.powi(k as i32 / 2);
        if k % 2 == 1 {
            whole * w.sqrt()
        } else {
            whole
        }
    };
    let mut sup = (state.sleeping_nodes() as f64 / nf - 1.0).abs();
    while state.iterations() < j_max {
        if state.active_clones() == 0 {
            break;
        }
        state.step(&mut rng, Clock::Node)?;
        let dev = (state.sleeping_nodes() as f64 / nf - f(state.iterations() as f64 / nf)).abs();
        if dev > sup {
            sup = dev;
        }
    }
    Ok(sup)
}

/// Runs a fresh exploration for `iterations` pairing steps and reports
/// whether the revealed component is still a tree (no partner was active).
/// Component death before the target keeps the flag it had at death.
pub fn tree_check_run(n: usize, k: usize, iterations: u64, seed: u64) -> Result<bool> {
    let mut rng = rng_from_seed(seed);
    let mut state = ExplorationState::init(n, &DegreeSpec::regular(k), &mut rng)?;
    while state.iterations() < iterations && state.active_clones() > 0 {
        state.step(&mut rng, Clock::Node)?;
    }
    Ok(state.is_tree())
}
