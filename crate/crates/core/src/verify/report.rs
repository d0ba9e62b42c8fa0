use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// What a report asserts about its ratio band, on top of the per-point checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Declared {
    /// every ratio in `[lo, hi]`
    Band { lo: f64, hi: f64 },
    /// `max ratio / min ratio <= max`
    Width { max: f64 },
    /// only the per-point checks
    Points,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportPoint {
    pub param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub ok: bool,
}

impl ReportPoint {
    pub fn new(param: f64, lhs: f64, rhs: f64, ok: bool) -> Self {
        ReportPoint { param, lhs, rhs, ratio: lhs / rhs, ok }
    }

    /// A point whose only check is the report's band.
    pub fn ratio(param: f64, lhs: f64, rhs: f64) -> Self {
        ReportPoint::new(param, lhs, rhs, true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub param_name: String,
    pub points: Vec<ReportPoint>,
    pub declared: Declared,
    /// `[min ratio, max ratio]` over points with finite ratios
    pub band: [f64; 2],
    pub verdict: Verdict,
    pub seed: Option<u64>,
    pub runtime_s: f64,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(
        experiment: impl Into<String>,
        param_name: impl Into<String>,
        points: Vec<ReportPoint>,
        declared: Declared,
    ) -> Self {
        let finite = points.iter().map(|p| p.ratio).filter(|r| r.is_finite());
        let band = finite.fold([f64::INFINITY, f64::NEG_INFINITY], |[lo, hi], r| [lo.min(r), hi.max(r)]);
        let positive = band[0] > 0.0 && band[1].is_finite();
        let band_ok = match declared {
            Declared::Band { lo, hi } => positive && band[0] >= lo && band[1] <= hi,
            Declared::Width { max } => positive && band[1] / band[0] <= max,
            Declared::Points => true,
        };
        let verdict =
            if band_ok && !points.is_empty() && points.iter().all(|p| p.ok) { Verdict::Pass } else { Verdict::Fail };
        Report {
            experiment: experiment.into(),
            param_name: param_name.into(),
            points,
            declared,
            band,
            verdict,
            seed: None,
            runtime_s: 0.0,
            notes: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn width(&self) -> f64 {
        self.band[1] / self.band[0]
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| !p.ok).count()
    }

    pub fn summary(&self) -> String {
        let band = if self.band[0] <= self.band[1] {
            format!("band [{:.4}, {:.4}] (x{:.3})", self.band[0], self.band[1], self.width())
        } else {
            "no ratios".to_string()
        };
        format!(
            "{} {}: {} points, {}, {} failed checks",
            self.verdict,
            self.experiment,
            self.points.len(),
            band,
            self.failures()
        )
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    param: f64,
    lhs: f64,
    rhs: f64,
    ratio: f64,
    verdict: Verdict,
}

/// One row per point: `experiment,param,lhs,rhs,ratio,verdict`.
pub fn write_csv<W: Write>(reports: &[Report], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        for p in &r.points {
            let verdict = if p.ok { Verdict::Pass } else { Verdict::Fail };
            out.serialize(CsvRow {
                experiment: &r.experiment,
                param: p.param,
                lhs: p.lhs,
                rhs: p.rhs,
                ratio: p.ratio,
                verdict,
            })?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(reports: &[Report], w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, reports)?;
    Ok(())
}

/// Two-column `param ratio` files, one per report, named after the experiment.
pub fn write_plot_data(reports: &[Report], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for r in reports {
        let mut f = std::io::BufWriter::new(std::fs::File::create(dir.join(format!("{}.dat", r.experiment)))?);
        writeln!(f, "# {} ratio", r.param_name)?;
        for p in &r.points {
            writeln!(f, "{:e} {:e}", p.param, p.ratio)?;
        }
        f.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(ratios: &[f64]) -> Vec<ReportPoint> {
        ratios.iter().enumerate().map(|(i, &r)| ReportPoint::ratio(i as f64, r, 1.0)).collect()
    }

    #[test]
    fn verdict_rules() {
        assert!(Report::new("a", "t", pts(&[1.0, 2.0]), Declared::Width { max: 2.0 }).passed());
        assert!(!Report::new("a", "t", pts(&[1.0, 2.5]), Declared::Width { max: 2.0 }).passed());
        assert!(!Report::new("a", "t", pts(&[0.0, 1.0]), Declared::Width { max: 2.0 }).passed());
        assert!(Report::new("a", "t", pts(&[0.5, 0.7]), Declared::Band { lo: 0.4, hi: 0.8 }).passed());
        assert!(!Report::new("a", "t", pts(&[0.3, 0.7]), Declared::Band { lo: 0.4, hi: 0.8 }).passed());
        let mut p = pts(&[1.0]);
        p[0].ok = false;
        assert!(!Report::new("a", "t", p, Declared::Points).passed());
        assert!(!Report::new("a", "t", vec![], Declared::Points).passed());
    }

    #[test]
    fn csv_layout() {
        let r = Report::new("exp", "t", pts(&[1.0, 2.0]), Declared::Points);
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("experiment,param,lhs,rhs,ratio,verdict"));
        assert_eq!(lines.next(), Some("exp,0.0,1.0,1.0,1.0,Pass"));
    }
}
