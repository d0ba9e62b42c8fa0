//! Musielak-Orlicz integrands and functionals, the Luxemburg gauge, tail
//! integrals of the log-type Musielak function, and radial weights.

mod luxemburg;
mod psi;
mod tail;
mod weight;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::SampledFunction;
use crate::par;

pub use luxemburg::{luxemburg_quasinorm, psi_modular};
pub use psi::{
    ln_plus, psi_bar, psi_derivative, psi_derivative_bounds_check, psi_original, psi_pointwise, psi_tail_integral,
    Radial,
};
pub use tail::{tail_integral, tail_integral_with, tail_is_finite};
pub use weight::{omega_capital, omega_capital_ln, surface, WeightDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MusielakKind {
    L1,
    LlogL,
    SteinGlobal,
    PsiLog,
    LogLogGlobal,
    EqLogLog,
    WeightedL1,
    PsiLogLuxemburg,
}

impl MusielakKind {
    pub const ALL: [MusielakKind; 8] = [
        MusielakKind::L1,
        MusielakKind::LlogL,
        MusielakKind::SteinGlobal,
        MusielakKind::PsiLog,
        MusielakKind::LogLogGlobal,
        MusielakKind::EqLogLog,
        MusielakKind::WeightedL1,
        MusielakKind::PsiLogLuxemburg,
    ];

    pub fn cli_name(&self) -> &'static str {
        match self {
            MusielakKind::L1 => "l1",
            MusielakKind::LlogL => "llogl",
            MusielakKind::SteinGlobal => "stein",
            MusielakKind::PsiLog => "psilog",
            MusielakKind::LogLogGlobal => "loglog",
            MusielakKind::EqLogLog => "eqloglog",
            MusielakKind::WeightedL1 => "wl1",
            MusielakKind::PsiLogLuxemburg => "psilux",
        }
    }

    /// `Phi(x, t)` for `t >= 0`; the weight only enters `WeightedL1`.
    pub fn integrand(&self, x: Radial, t: f64, w: &WeightDescriptor) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let le_t = (std::f64::consts::E + t).ln();
        match self {
            MusielakKind::L1 => t,
            MusielakKind::LlogL => t * (1.0 + ln_plus(t)),
            MusielakKind::SteinGlobal => t * (1.0 + ln_plus(t) + x.ln_plus()),
            MusielakKind::PsiLog | MusielakKind::PsiLogLuxemburg => psi_bar(x, t),
            MusielakKind::LogLogGlobal => t * (1.0 + ln_plus(le_t) + ln_plus(x.ln_e)),
            MusielakKind::EqLogLog => t * (1.0 + ln_plus(le_t / x.ln_e)),
            MusielakKind::WeightedL1 => t * w.eval_radial(x),
        }
    }
}

impl FromStr for MusielakKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MusielakKind::ALL.into_iter().find(|k| k.cli_name() == s).ok_or_else(|| Error::UnknownFunctional(s.to_string()))
    }
}

impl fmt::Display for MusielakKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MusielakSpec {
    pub kind: MusielakKind,
    /// used by `WeightedL1`; defaults to `1/ln(e+|x|)`
    pub weight: Option<WeightDescriptor>,
}

impl MusielakSpec {
    pub fn new(kind: MusielakKind) -> Self {
        MusielakSpec { kind, weight: None }
    }

    pub fn weighted(w: WeightDescriptor) -> Self {
        MusielakSpec { kind: MusielakKind::WeightedL1, weight: Some(w) }
    }

    pub fn weight(&self) -> WeightDescriptor {
        self.weight.unwrap_or_default()
    }
}

/// Cell sum of `Phi(x, |f|) h^n`, without any tail.
pub fn eval_truncated(spec: &MusielakSpec, f: &SampledFunction) -> f64 {
    let g = *f.spec();
    let w = spec.weight();
    let kind = spec.kind;
    let terms = par::map_range(g.len(), |i| {
        let v = f.values()[i].abs();
        if v == 0.0 {
            0.0
        } else {
            kind.integrand(Radial::of_point(&g.center(i)), v, &w)
        }
    });
    par::exact_sum(terms) * g.cell_volume()
}

/// `∫ Phi(x, |f|) dx` over the box plus the analytic tail, if any. The
/// Luxemburg kind returns the gauge instead.
pub fn eval_functional(spec: &MusielakSpec, f: &SampledFunction) -> Result<f64> {
    if spec.kind == MusielakKind::PsiLogLuxemburg {
        return Ok(luxemburg_quasinorm(f));
    }
    spec.weight().validate(f.spec().dim)?;
    let body = eval_truncated(spec, f);
    Ok(match f.tail() {
        Some(t) => body + tail_integral(spec, t, f.spec().dim, f.spec().radius(), f64::INFINITY),
        None => body,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    #[test]
    fn names_round_trip() {
        for k in MusielakKind::ALL {
            assert_eq!(k.cli_name().parse::<MusielakKind>().unwrap(), k);
        }
        assert!(matches!("nope".parse::<MusielakKind>(), Err(Error::UnknownFunctional(_))));
    }

    #[test]
    fn integrands_vanish_at_zero_and_increase() {
        let w = WeightDescriptor::InvLog;
        for k in MusielakKind::ALL {
            for r in [0.0, 0.5, 3.0, 1e4] {
                let x = Radial::from_abs(r);
                assert_eq!(k.integrand(x, 0.0, &w), 0.0);
                let mut prev = 0.0;
                for j in -30..30 {
                    let v = k.integrand(x, f64::exp2(j as f64 / 2.0), &w);
                    assert!(v >= prev, "{k} r={r}");
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn stein_on_unit_interval() {
        let s = GridSpec::new(1, 2, 64).unwrap();
        let f = SampledFunction::from_fn(s, |p| if (-0.5..0.5).contains(&p[0]) { 1.0 } else { 0.0 }).unwrap();
        let v = eval_functional(&MusielakSpec::new(MusielakKind::SteinGlobal), &f).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn llogl_spike() {
        let s = GridSpec::new(1, 1, 256).unwrap();
        let f = SampledFunction::from_fn(s, |p| if (0.0..1.0 / 256.0).contains(&p[0]) { 256.0 } else { 0.0 }).unwrap();
        let v = eval_functional(&MusielakSpec::new(MusielakKind::LlogL), &f).unwrap();
        assert!((v - (1.0 + 8.0 * std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn psilog_of_zero() {
        let s = GridSpec::new(2, 2, 4).unwrap();
        let z = SampledFunction::zeros(s);
        assert_eq!(eval_functional(&MusielakSpec::new(MusielakKind::PsiLog), &z).unwrap(), 0.0);
        assert_eq!(eval_functional(&MusielakSpec::new(MusielakKind::PsiLogLuxemburg), &z).unwrap(), 0.0);
    }
}
