//! `CurveSeries`: the sampled-function table exchanged between the analytic,
//! simulation, and reporting layers, with its CSV format.


use std::path::Path;

use crate::io::{fmt_f64, write_atomic};
use crate::numerics::interp_linear;
use crate::{Error, Result};

/// Provenance carried in the CSV header comment.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveMeta {
    /// Which limit object or process produced the curve
    /// (`bass`, `genbass`, `meanfield`, `ode`, `sim`).
    pub model: String,
    /// Degree parameter: `k` for regular families, a `d:p` list for mixtures,
    /// `-` when not applicable (complete graph / cycle).
    pub k: String,
    pub beta: f64,
    /// Normalization anchor: the fraction of adopters placed at time 0,
    /// if the curve was shifted.
    pub anchor: Option<f64>,
}

impl CurveMeta {
    pub fn new(model: &str, k: &str, beta: f64, anchor: Option<f64>) -> Self {
        Self {
            model: model.to_string(),
            k: k.to_string(),
            beta,
            anchor,
        }
    }
}

/// An ordered table of (abscissa, ordinate) samples with axis labels.
#[derive(Clone, Debug)]
pub struct CurveSeries {
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
    pub meta: CurveMeta,
}

impl CurveSeries {
    /// Abscissas must be strictly increasing.
    pub fn new(
        x_label: &str,
        y_label: &str,
        points: Vec<(f64, f64)>,
        meta: CurveMeta,
    ) -> Result<Self> {
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Params(
                "curve abscissas must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            points,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Linear interpolation of the ordinate, clamped at the ends.
    pub fn eval(&self, x: f64) -> f64 {
        let xs: Vec<f64> = self.points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.1).collect();
        interp_linear(&xs, &ys, x)
    }

    /// Largest |self.y - other.y| over this curve's abscissas restricted to
    /// the overlap of both supports. Errors when the supports are disjoint.
    pub fn sup_distance(&self, other: &CurveSeries) -> Result<f64> {
        let (alo, ahi) = (self.points[0].0, self.points[self.len() - 1].0);
        let (blo, bhi) = (other.points[0].0, other.points[other.len() - 1].0);
        let lo = alo.max(blo);
        let hi = ahi.min(bhi);
        if lo > hi {
            return Err(Error::Params("curve supports are disjoint".into()));
        }
        let mut sup: f64 = 0.0;
        for &(x, y) in &self.points {
            if x >= lo && x <= hi {
                sup = sup.max((y - other.eval(x)).abs());
            }
        }
        Ok(sup)
    }

    /// CSV: one `# model=... k=... beta=... anchor=...` comment, a column
    /// header line, then one row per sample (17 significant digits).
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, |w| {
            writeln!(
                w,
                "# model={} k={} beta={} anchor={}",
                self.meta.model,
                self.meta.k,
                fmt_f64(self.meta.beta),
                self.meta.anchor.map_or("-".to_string(), fmt_f64),
            )?;
            writeln!(w, "{},{}", self.x_label, self.y_label)?;
            for &(x, y) in &self.points {
                writeln!(w, "{},{}", fmt_f64(x), fmt_f64(y))?;
            }
            Ok(())
        })
    }

    pub fn read_csv(path: &Path) -> Result<CurveSeries> {
        let text = std::fs::read_to_string(path)?;
        let perr = |msg: &str| Error::Parse {
            path: path.display().to_string(),
            msg: msg.to_string(),
        };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| perr("empty file"))?;
        let header = header
            .strip_prefix("# ")
            .ok_or_else(|| perr("missing `# model=...` header"))?;
        let mut model = String::new();
        let mut k = String::new();
        let mut beta = f64::NAN;
        let mut anchor = None;
        for field in header.split_whitespace() {
            let (key, val) = field
                .split_once('=')
                .ok_or_else(|| perr("malformed header field"))?;
            match key {
                "model" => model = val.to_string(),
                "k" => k = val.to_string(),
                "beta" => beta = val.parse().map_err(|_| perr("bad beta"))?,
                "anchor" => {
                    if val != "-" {
                        anchor = Some(val.parse().map_err(|_| perr("bad anchor"))?);
                    }
                }
                _ => {}
            }
        }
        let cols = lines.next().ok_or_else(|| perr("missing column header"))?;
        let (x_label, y_label) = cols
            .split_once(',')
            .ok_or_else(|| perr("column header must be `x,y`"))?;
        let mut points = Vec::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (a, b) = line.split_once(',').ok_or_else(|| perr("bad row"))?;
            let x: f64 = a.trim().parse().map_err(|_| perr("bad abscissa"))?;
            let y: f64 = b.trim().parse().map_err(|_| perr("bad ordinate"))?;
            points.push((x, y));
        }
        CurveSeries::new(x_label, y_label, points, CurveMeta::new(&model, &k, beta, anchor))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> CurveSeries {
        CurveSeries::new(
            "t",
            "s",
            vec![(0.0, 0.01), (1.0, 0.5), (2.0, 0.99)],
            CurveMeta::new("genbass", "5", 1.0, Some(0.01)),
        )
        .unwrap()
    }

    #[test]
    fn rejects_unsorted_abscissas() {
        assert!(CurveSeries::new(
            "t",
            "s",
            vec![(0.0, 0.0), (0.0, 1.0)],
            CurveMeta::new("bass", "-", 1.0, None)
        )
        .is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let c = curve();
        c.write_csv(&path).unwrap();
        let back = CurveSeries::read_csv(&path).unwrap();
        assert_eq!(back.points, c.points);
        assert_eq!(back.meta, c.meta);
        assert_eq!(back.x_label, "t");
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# model=genbass k=5 beta="));
    }

    #[test]
    fn sup_distance_of_identical_is_zero() {
        let c = curve();
        assert_eq!(c.sup_distance(&c).unwrap(), 0.0);
    }

    #[test]
    fn sup_distance_disjoint_supports_errors() {
        let a = curve();
        let b = CurveSeries::new(
            "t",
            "s",
            vec![(5.0, 0.0), (6.0, 1.0)],
            CurveMeta::new("bass", "-", 1.0, None),
        )
        .unwrap();
        assert!(a.sup_distance(&b).is_err());
    }
}
