//! Exact jump-chain simulation on the complete graph.
//!
//! With i adopters out of n, the next adoption arrives at rate
//! λ_i = β i(n−i)/(n−1) (thinning of the contact processes), and the gaps are
//! independent exponentials. All nodes are exchangeable, so adopter
//! identities are synthesized by a progressive uniform shuffle. No adjacency
//! is ever materialized, which keeps n = 10⁶ runs in O(n) memory.

use rand::Rng;

use super::trace::{AdoptionTrace, Event, EventKind};
use super::Stop;
use crate::rng::{exp_time, rng_from_seed};
use crate::{Error, Result};

/// The complete-graph rate λ_i = β i(n−i)/(n−1).
pub(crate) fn complete_rate(i: usize, n: usize, beta: f64) -> f64 {
    let (i, n) = (i as f64, n as f64);
    beta * i * (n - i) / (n - 1.0)
}

/// Simulates the adoption jump chain on the complete graph on `n` nodes.
/// Distributionally identical to [`super::simulate`] on
/// [`crate::graph::complete_graph`], but takes one exponential per adoption.
pub fn simulate_complete_exact(n: usize, beta: f64, seed: u64, stop: Stop) -> Result<AdoptionTrace> {
    if n < 2 {
        return Err(Error::Params(format!("complete chain needs n >= 2, got {n}")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "a positive finite rate"));
    }
    let target = match stop {
        Stop::All => n,
        Stop::Count(x) => {
            if x < 1 || x > n {
                return Err(Error::domain("stop count", x as f64, "in [1, n]"));
            }
            x
        }
        Stop::Time(_) => n,
    };

    let mut rng = rng_from_seed(seed);
    // Progressive Fisher-Yates: ids[i] becomes the (i+1)-th adopter, giving a
    // uniformly random adoption order over exchangeable nodes.
    let mut ids: Vec<u32> = (0..n as u32).collect();
    let mut events = Vec::with_capacity(target);
    let mut t = 0.0f64;

    for i in 0..target {
        let j = rng.gen_range(i..n);
        ids.swap(i, j);
        if i > 0 {
            t += exp_time(&mut rng, complete_rate(i, n, beta));
            if let Stop::Time(t_max) = stop {
                if t > t_max {
                    break;
                }
            }
        }
        events.push(Event {
            time: t,
            node: ids[i],
            kind: EventKind::Adopt,
        });
    }
    Ok(AdoptionTrace::from_events(n, events))
}
