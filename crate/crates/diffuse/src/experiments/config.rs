//! JSON experiment configuration. The schema is documented in the README;
//! unknown fields are rejected so typos cannot silently change an experiment.

use serde::{Deserialize, Serialize};

use crate::graph::DegreeSpec;
use crate::sim::{Clock, ModelParams, Stop, Variant};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub name: String,
    /// Base seed; replica r runs on `derive_seed(seed, r)` streams.
    pub seed: u64,
    pub replicas: usize,
    pub graph: GraphConfig,
    #[serde(default)]
    pub engine: EngineKind,
    #[serde(default)]
    pub params: ParamsConfig,
    pub stop: StopConfig,
    pub measure: MeasureConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphConfig {
    Complete {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Regular {
        n: usize,
        k: usize,
        /// Rejection budget for simple connected sampling.
        #[serde(default = "default_tries")]
        max_tries: u64,
    },
    Distribution {
        n: usize,
        degrees: Vec<(usize, f64)>,
        /// Rejection budget; heterogeneous mixtures have small simple-graph
        /// rates and may need far more than the default.
        #[serde(default = "default_tries")]
        max_tries: u64,
    },
}

fn default_tries() -> u64 {
    crate::graph::DEFAULT_MAX_TRIES
}

impl GraphConfig {
    pub fn n(&self) -> usize {
        match *self {
            GraphConfig::Complete { n }
            | GraphConfig::Cycle { n }
            | GraphConfig::Regular { n, .. }
            | GraphConfig::Distribution { n, .. } => n,
        }
    }

    /// Degree spec for the families that have one.
    pub fn degree_spec(&self) -> Option<DegreeSpec> {
        match self {
            GraphConfig::Regular { k, .. } => Some(DegreeSpec::regular(*k)),
            GraphConfig::Distribution { degrees, .. } => {
                Some(DegreeSpec::distribution(degrees.clone()))
            }
            _ => None,
        }
    }

    /// Sampling budget for rejection-sampled families.
    pub fn max_tries(&self) -> u64 {
        match *self {
            GraphConfig::Regular { max_tries, .. }
            | GraphConfig::Distribution { max_tries, .. } => max_tries,
            _ => crate::graph::DEFAULT_MAX_TRIES,
        }
    }

    pub fn label(&self) -> String {
        match self {
            GraphConfig::Complete { .. } => "complete".into(),
            GraphConfig::Cycle { .. } => "cycle".into(),
            GraphConfig::Regular { k, .. } => format!("{k}-regular"),
            GraphConfig::Distribution { degrees, .. } => degrees
                .iter()
                .map(|(d, p)| format!("{d}:{p}"))
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

/// Which simulator realizes the process.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    /// Event-driven simulation on a realized graph (regular/distribution
    /// families are rejection-sampled simple connected per replica).
    #[default]
    Graph,
    /// Exact jump chain on the complete graph.
    CompleteExact,
    /// Graph-free coupled exploration process.
    Exploration,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default = "one")]
    pub p: f64,
    #[serde(default)]
    pub beta_prime: f64,
    #[serde(default)]
    pub variant: VariantConfig,
    #[serde(default)]
    pub clock: ClockConfig,
}

fn one() -> f64 {
    1.0
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            beta: 1.0,
            p: 1.0,
            beta_prime: 0.0,
            variant: VariantConfig::Si,
            clock: ClockConfig::Node,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantConfig {
    #[default]
    Si,
    SiInnovators,
    Sir,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClockConfig {
    #[default]
    Node,
    Edge,
}

impl ParamsConfig {
    pub fn to_model(self) -> ModelParams {
        ModelParams {
            beta: self.beta,
            p: self.p,
            beta_prime: self.beta_prime,
            variant: match self.variant {
                VariantConfig::Si => Variant::Si,
                VariantConfig::SiInnovators => Variant::SiInnovators,
                VariantConfig::Sir => Variant::Sir,
            },
            clock: match self.clock {
                ClockConfig::Node => Clock::Node,
                ClockConfig::Edge => Clock::Edge,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StopConfig {
    All,
    Count { x: usize },
    Time { t: f64 },
}

impl StopConfig {
    pub fn to_stop(self) -> Stop {
        match self {
            StopConfig::All => Stop::All,
            StopConfig::Count { x } => Stop::Count(x),
            StopConfig::Time { t } => Stop::Time(t),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    /// Δ(αn, γn) pairs.
    #[serde(default)]
    pub delta: Vec<(f64, f64)>,
    /// Times from the anchor crossing to these fractions.
    #[serde(default)]
    pub time_to: Vec<f64>,
    /// T(m) for a fixed early target m.
    #[serde(default)]
    pub early_m: Option<usize>,
    /// Aligned mean adoption curve.
    #[serde(default)]
    pub curve: Option<CurveMeasure>,
    /// Anchor fraction for alignment (time_to and curve); default 0.01.
    #[serde(default = "default_anchor")]
    pub anchor: f64,
}

fn default_anchor() -> f64 {
    0.01
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveMeasure {
    pub t_max: f64,
    pub points: usize,
}

impl EnsembleConfig {
    pub fn from_json(text: &str) -> Result<EnsembleConfig> {
        let cfg: EnsembleConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicas < 1 {
            return Err(Error::Config("replicas must be >= 1".into()));
        }
        if self.graph.n() < 2 {
            return Err(Error::Config("graph must have n >= 2".into()));
        }
        self.params.to_model().validate().map_err(|e| Error::Config(e.to_string()))?;
        match self.engine {
            EngineKind::CompleteExact => {
                if !matches!(self.graph, GraphConfig::Complete { .. }) {
                    return Err(Error::Config(
                        "engine complete-exact needs the complete graph family".into(),
                    ));
                }
            }
            EngineKind::Exploration => {
                if self.graph.degree_spec().is_none() {
                    return Err(Error::Config(
                        "engine exploration needs a regular or distribution family".into(),
                    ));
                }
            }
            EngineKind::Graph => {}
        }
        for &(a, g) in &self.measure.delta {
            if !(a > 0.0 && a <= g && g < 1.0) {
                return Err(Error::Config(format!("bad delta pair ({a}, {g})")));
            }
        }
        if !(self.measure.anchor > 0.0 && self.measure.anchor < 1.0) {
            return Err(Error::Config("anchor must be in (0, 1)".into()));
        }
        Ok(())
    }
}
