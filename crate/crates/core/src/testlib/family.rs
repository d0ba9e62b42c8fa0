use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{norm, GridSpec, Point, SampledFunction, TailDescriptor};

/// Analytic test families. Translations and cube indices act along the first axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Family {
    /// `t chi_{[0,s)^n}` with `s^n = 1/t`
    Spike {
        t: f64,
    },
    /// spikes of height `t` in `Q_0` and `Q_k`
    DoubleSpike {
        t: f64,
        k: i64,
    },
    /// spike of height `t` moved to `Q_k`
    TranslatedSpike {
        t: f64,
        k: i64,
    },
    CubeIndicator {
        k: i64,
    },
    /// `(1+|x|)^{-alpha}`
    HeavyTail {
        alpha: f64,
    },
    /// `(1+|x|)^{-n} ln(e+|x|)^{-beta}`
    SlowTail {
        beta: f64,
    },
    /// `(1+|x|)^{-n} ln(e+|x|)^{-1}`
    PaperExample,
    /// `sum_{m>=1} m^{-p} chi_{Q_{2^m}}`
    LacunarySum {
        p: f64,
    },
    /// `chi_{[lo,hi)^n}`
    Interval {
        lo: f64,
        hi: f64,
    },
    Zero,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Spike { .. } => "spike",
            Family::DoubleSpike { .. } => "double_spike",
            Family::TranslatedSpike { .. } => "translated_spike",
            Family::CubeIndicator { .. } => "cube_indicator",
            Family::HeavyTail { .. } => "heavy_tail",
            Family::SlowTail { .. } => "slow_tail",
            Family::PaperExample => "paper_example",
            Family::LacunarySum { .. } => "lacunary_sum",
            Family::Interval { .. } => "interval",
            Family::Zero => "zero",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            Family::Spike { t } | Family::DoubleSpike { t, .. } | Family::TranslatedSpike { t, .. }
                if !(t.is_finite() && t >= 1.0) =>
            {
                bad(format!("spike height must be >= 1, got {t}"))
            }
            Family::HeavyTail { alpha } if !(alpha.is_finite() && alpha > 0.0) => {
                bad(format!("alpha must be positive, got {alpha}"))
            }
            Family::SlowTail { beta } if !(beta.is_finite() && beta > 0.0) => {
                bad(format!("beta must be positive, got {beta}"))
            }
            Family::LacunarySum { p } if !(p.is_finite() && p > 0.0) => bad(format!("p must be positive, got {p}")),
            Family::Interval { lo, hi } if lo.is_nan() || hi.is_nan() || lo >= hi => {
                bad(format!("empty interval [{lo}, {hi})"))
            }
            _ => Ok(()),
        }
    }

    /// Decay profile outside every box, when the family has one.
    pub fn tail(&self, dim: usize) -> Option<TailDescriptor> {
        let n = dim as f64;
        match *self {
            Family::HeavyTail { alpha } => Some(TailDescriptor { amp: 1.0, alpha, beta: 0.0 }),
            Family::SlowTail { beta } => Some(TailDescriptor { amp: 1.0, alpha: n, beta }),
            Family::PaperExample => Some(TailDescriptor { amp: 1.0, alpha: n, beta: 1.0 }),
            _ => None,
        }
    }

    pub fn is_compact(&self) -> bool {
        !matches!(
            self,
            Family::HeavyTail { .. } | Family::SlowTail { .. } | Family::PaperExample | Family::LacunarySum { .. }
        )
    }

    /// Smallest power-of-two resolution that resolves the family.
    pub fn min_cells_per_unit(&self, dim: usize) -> u32 {
        match *self {
            Family::Spike { t } | Family::DoubleSpike { t, .. } | Family::TranslatedSpike { t, .. } => {
                let side = t.powf(-1.0 / dim as f64);
                ((1.0 / side).ceil() as u32).next_power_of_two()
            }
            _ => 1,
        }
    }

    /// Smallest box radius that contains the support, for compact families.
    pub fn min_box_radius(&self) -> Option<u32> {
        let reach = |k: i64| if k >= 0 { k as u32 + 1 } else { k.unsigned_abs() as u32 };
        match *self {
            Family::Spike { .. } | Family::CubeIndicator { k: 0 } | Family::Zero => Some(1),
            Family::DoubleSpike { k, .. } | Family::TranslatedSpike { k, .. } | Family::CubeIndicator { k } => {
                Some(reach(k))
            }
            Family::Interval { lo, hi } => Some(lo.abs().max(hi.abs()).ceil().max(1.0) as u32),
            _ => None,
        }
    }

    /// Value at a point; spikes use half-open cubes.
    pub fn eval(&self, x: &Point, dim: usize) -> f64 {
        let n = dim as f64;
        let in_cube = |x: &Point, k: i64, side: f64| {
            let shift = [k as f64, 0.0];
            (0..dim).all(|a| x[a] >= shift[a] && x[a] < shift[a] + side)
        };
        let r = norm(x);
        match *self {
            Family::Spike { t } => {
                let s = t.powf(-1.0 / n);
                if in_cube(x, 0, s) {
                    t
                } else {
                    0.0
                }
            }
            Family::DoubleSpike { t, k } => {
                let s = t.powf(-1.0 / n);
                if in_cube(x, 0, s) || in_cube(x, k, s) {
                    t
                } else {
                    0.0
                }
            }
            Family::TranslatedSpike { t, k } => {
                let s = t.powf(-1.0 / n);
                if in_cube(x, k, s) {
                    t
                } else {
                    0.0
                }
            }
            Family::CubeIndicator { k } => f64::from(u8::from(in_cube(x, k, 1.0))),
            Family::HeavyTail { alpha } => (1.0 + r).powf(-alpha),
            Family::SlowTail { beta } => (1.0 + r).powf(-n) * (E + r).ln().powf(-beta),
            Family::PaperExample => (1.0 + r).powf(-n) / (E + r).ln(),
            Family::LacunarySum { p } => {
                let k = x[0].floor();
                let on_axis = (1..dim).all(|a| x[a] >= 0.0 && x[a] < 1.0);
                if on_axis && k >= 2.0 && (k as u64).is_power_of_two() {
                    (k.log2()).powf(-p)
                } else {
                    0.0
                }
            }
            Family::Interval { lo, hi } => f64::from(u8::from((0..dim).all(|a| x[a] >= lo && x[a] < hi))),
            Family::Zero => 0.0,
        }
    }

    /// Midpoint samples on `g`, with the analytic tail attached where the family has one.
    pub fn materialize(&self, g: &GridSpec) -> Result<SampledFunction> {
        self.validate()?;
        g.validate()?;
        let dim = g.dim;
        if let Family::Spike { t } | Family::DoubleSpike { t, .. } | Family::TranslatedSpike { t, .. } = *self {
            let side = t.powf(-1.0 / dim as f64);
            if side < g.step() {
                return Err(Error::UnresolvedScale { scale: side, step: g.step() });
            }
        }
        if let Some(r) = self.min_box_radius() {
            if r > g.box_radius {
                return Err(Error::DomainTooSmall(format!("{} needs box radius {r}", self.name())));
            }
        }
        let f = SampledFunction::from_fn(*g, |x| self.eval(x, dim))?;
        match self.tail(dim) {
            Some(t) => f.with_tail(t),
            None => Ok(f),
        }
    }
}

/// A family on a concrete grid; the JSON form read by the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

impl FunctionSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        let family = v.get("family").ok_or_else(|| Error::Spec { field: "family".into(), msg: "missing".into() })?;
        if !family.is_string() {
            return Err(Error::Spec { field: "family".into(), msg: "must be a string".into() });
        }
        if let Some(g) = v.get("grid") {
            serde_json::from_value::<GridSpec>(g.clone())
                .map_err(|e| Error::Spec { field: "grid".into(), msg: e.to_string() })?
                .validate()
                .map_err(|e| Error::Spec { field: "grid".into(), msg: e.to_string() })?;
        }
        serde_json::from_value::<FunctionSpec>(v).map_err(|e| {
            let field = if e.to_string().contains("variant") { "family" } else { "params" };
            Error::Spec { field: field.into(), msg: e.to_string() }
        })
    }

    /// Grid from the spec, or `fallback` if it has none.
    pub fn grid_or(&self, fallback: GridSpec) -> GridSpec {
        self.grid.unwrap_or(fallback)
    }
}
