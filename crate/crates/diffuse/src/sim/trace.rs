//! Time-ordered event logs and the statistics derived from them.


use std::path::Path;

use crate::curve::{CurveMeta, CurveSeries};
use crate::io::{fmt_f64, write_atomic};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Adopt,
    Remove,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub node: u32,
    pub kind: EventKind,
}

/// An adoption trace: the ordered event log of one run.
///
/// Times are strictly increasing with T(1) = 0 (the initial adopter). The
/// x-th adoption time T(x), the duration Δ(αn, γn) = T(⌈γn⌉) − T(⌈αn⌉),
/// and the inter-adoption gaps derive from it.
#[derive(Clone, Debug, PartialEq)]
pub struct AdoptionTrace {
    n: usize,
    events: Vec<Event>,
    adoption_times: Vec<f64>,
}

impl AdoptionTrace {
    pub(crate) fn from_events(n: usize, events: Vec<Event>) -> Self {
        debug_assert!(
            events.windows(2).all(|w| w[0].time < w[1].time),
            "event times must be strictly increasing"
        );
        let adoption_times = events
            .iter()
            .filter(|e| e.kind == EventKind::Adopt)
            .map(|e| e.time)
            .collect();
        AdoptionTrace {
            n,
            events,
            adoption_times,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Total number of adoptions in the trace.
    pub fn adoptions(&self) -> usize {
        self.adoption_times.len()
    }

    /// T(x): the time of the x-th adoption (1-indexed; T(1) = 0).
    pub fn time_of_adoption(&self, x: usize) -> Result<f64> {
        if x == 0 || x > self.adoption_times.len() {
            return Err(Error::InsufficientAdoptions {
                needed: x as u64,
                reached: self.adoption_times.len() as u64,
            });
        }
        Ok(self.adoption_times[x - 1])
    }

    /// Δ(αn, γn) = T(⌈γn⌉) − T(⌈αn⌉) for 0 < α <= γ < 1.
    pub fn delta(&self, alpha: f64, gamma: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha <= gamma && gamma < 1.0) {
            return Err(Error::Params(format!(
                "delta needs 0 < alpha <= gamma < 1, got ({alpha}, {gamma})"
            )));
        }
        let xa = (alpha * self.n as f64).ceil() as usize;
        let xg = (gamma * self.n as f64).ceil() as usize;
        Ok(self.time_of_adoption(xg)? - self.time_of_adoption(xa)?)
    }

    /// Inter-adoption gaps τ_i = T(i+1) − T(i).
    pub fn gaps(&self) -> Vec<f64> {
        self.adoption_times.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Number of adopters at time t (right-continuous).
    pub fn adopters_at(&self, t: f64) -> usize {
        self.adoption_times.partition_point(|&x| x <= t)
    }

    /// Right-continuous step-function samples s(t) = S(t)/n over a sorted
    /// grid. For SI runs s is nondecreasing by construction.
    pub fn adoption_curve(&self, grid: &[f64], meta: CurveMeta) -> Result<CurveSeries> {
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Params("time grid must be strictly increasing".into()));
        }
        let nf = self.n as f64;
        let mut points = Vec::with_capacity(grid.len());
        let mut idx = 0usize;
        for &t in grid {
            while idx < self.adoption_times.len() && self.adoption_times[idx] <= t {
                idx += 1;
            }
            points.push((t, idx as f64 / nf));
        }
        CurveSeries::new("t", "s", points, meta)
    }

    /// CSV with a `# n=<n>` comment line, a `time,node,kind` header, and one
    /// row per event. Floats carry 17 significant digits.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, |w| {
            writeln!(w, "# n={}", self.n)?;
            writeln!(w, "time,node,kind")?;
            for e in &self.events {
                let kind = match e.kind {
                    EventKind::Adopt => "adopt",
                    EventKind::Remove => "remove",
                };
                writeln!(w, "{},{},{}", fmt_f64(e.time), e.node, kind)?;
            }
            Ok(())
        })
    }

    pub fn read_csv(path: &Path) -> Result<AdoptionTrace> {
        let text = std::fs::read_to_string(path)?;
        let perr = |msg: String| Error::Parse {
            path: path.display().to_string(),
            msg,
        };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| perr("empty trace file".into()))?;
        let n: usize = header
            .strip_prefix("# n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| perr("missing `# n=<n>` header".into()))?;
        let cols = lines.next().ok_or_else(|| perr("missing column header".into()))?;
        if cols.trim() != "time,node,kind" {
            return Err(perr(format!("unexpected column header `{cols}`")));
        }
        let mut events = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut f = line.split(',');
            let mut next = |what: &str| {
                f.next()
                    .ok_or_else(|| perr(format!("line {}: missing {what}", i + 3)))
            };
            let time: f64 = next("time")?
                .parse()
                .map_err(|e| perr(format!("line {}: {e}", i + 3)))?;
            let node: u32 = next("node")?
                .parse()
                .map_err(|e| perr(format!("line {}: {e}", i + 3)))?;
            let kind = match next("kind")? {
                "adopt" => EventKind::Adopt,
                "remove" => EventKind::Remove,
                other => return Err(perr(format!("line {}: bad kind `{other}`", i + 3))),
            };
            events.push(Event { time, node, kind });
        }
        Ok(AdoptionTrace::from_events(n, events))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace() -> AdoptionTrace {
        AdoptionTrace::from_events(
            4,
            vec![
                Event { time: 0.0, node: 2, kind: EventKind::Adopt },
                Event { time: 0.5, node: 0, kind: EventKind::Adopt },
                Event { time: 0.7, node: 2, kind: EventKind::Remove },
                Event { time: 1.5, node: 1, kind: EventKind::Adopt },
                Event { time: 3.0, node: 3, kind: EventKind::Adopt },
            ],
        )
    }

    #[test]
    fn accessors() {
        let tr = trace();
        assert_eq!(tr.adoptions(), 4);
        assert_eq!(tr.time_of_adoption(1).unwrap(), 0.0);
        assert_eq!(tr.time_of_adoption(3).unwrap(), 1.5);
        assert!(tr.time_of_adoption(5).is_err());
        assert_eq!(tr.gaps(), vec![0.5, 1.0, 1.5]);
        assert_eq!(tr.adopters_at(0.0), 1);
        assert_eq!(tr.adopters_at(1.5), 3);
        assert_eq!(tr.adopters_at(100.0), 4);
    }

    #[test]
    fn delta_semantics() {
        let tr = trace();
        // ceil(0.3*4) = 2, ceil(0.8*4) = 4
        let d = tr.delta(0.3, 0.8).unwrap();
        assert_eq!(d, 3.0 - 0.5);
        // alpha = gamma gives zero
        assert_eq!(tr.delta(0.5, 0.5).unwrap(), 0.0);
        // monotone in gamma
        assert!(tr.delta(0.3, 0.5).unwrap() <= tr.delta(0.3, 0.8).unwrap());
        assert!(tr.delta(0.0, 0.5).is_err());
        assert!(tr.delta(0.6, 0.5).is_err());
    }

    #[test]
    fn curve_is_right_continuous_step() {
        let tr = trace();
        let meta = CurveMeta::new("sim", "-", 1.0, None);
        let c = tr
            .adoption_curve(&[-0.1, 0.0, 0.4999, 0.5, 2.0, 10.0], meta)
            .unwrap();
        let ys: Vec<f64> = c.points.iter().map(|p| p.1).collect();
        assert_eq!(ys, vec![0.0, 0.25, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        let tr = trace();
        tr.write_csv(&path).unwrap();
        let back = AdoptionTrace::read_csv(&path).unwrap();
        assert_eq!(back, tr);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# n=4\ntime,node,kind\n"));
        assert!(text.contains("remove"));
    }
}
