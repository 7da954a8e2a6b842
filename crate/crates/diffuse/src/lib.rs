//! Simulation and analysis of adoption dynamics on random graphs.
//!
//! The crate covers three layers that can be checked against each other:
//!
//! - **Stochastic simulation**: statistically exact event-driven simulation of
//!   the contact/adoption process (SI, SI with innovators, SIR) on explicit or
//!   implicit graphs ([`sim`]), plus the graph-free coupled exploration process
//!   for configuration-model random graphs ([`explore`]).
//! - **Analytic limits**: the closed-form and ODE limit curves the stochastic
//!   processes converge to — logistic timing on complete graphs, the
//!   generalized timing function on random regular graphs, fluid limits of the
//!   exploration process, and the general-degree ODE system ([`analytic`]).
//! - **Experiments**: seeded Monte Carlo ensembles, simulated-vs-analytic
//!   comparison reports, and the acceptance checks wiring the two together
//!   ([`experiments`]).
//!
//! Graph generation (configuration-model multigraphs, rejection-sampled simple
//! connected graphs, implicit complete/cycle graphs) lives in [`graph`].
//!
//! Everything stochastic is reproducible: a run is a pure function of its
//! inputs and a `u64` seed (see [`rng`] for the replica seed derivation).

pub mod analytic;
pub mod curve;
mod error;
pub mod experiments;
pub mod explore;
pub mod graph;
pub mod io;
pub mod numerics;
pub mod rng;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
