use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::psi::Radial;
use crate::error::{Error, Result};
use crate::grid::ln_1p_exp;
use crate::quad;

/// Radial nonincreasing weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightDescriptor {
    One,
    /// `1 / ln(e + |x|)`
    #[default]
    InvLog,
    /// `(1 + |x|)^{-sigma}`
    Power {
        sigma: f64,
    },
}

impl WeightDescriptor {
    pub fn eval(&self, r: f64) -> f64 {
        self.eval_radial(Radial::from_abs(r))
    }

    pub fn eval_radial(&self, x: Radial) -> f64 {
        match *self {
            WeightDescriptor::One => 1.0,
            WeightDescriptor::InvLog => 1.0 / x.ln_e,
            WeightDescriptor::Power { sigma } => {
                if x.ln_abs == f64::NEG_INFINITY {
                    1.0
                } else {
                    (-sigma * ln_1p_exp(x.ln_abs)).exp()
                }
            }
        }
    }

    /// Rejects weights outside the family or failing `∫ w/(1+|x|)^{n+1} < ∞`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        if let WeightDescriptor::Power { sigma } = *self {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(Error::InvalidParameter(format!("weight exponent {sigma} must be >= 0")));
            }
        }
        let n = dim as i32;
        let g = |r: f64| surface(dim) * self.eval(r) * r.powi(n - 1) * (1.0 + r).powi(-n - 1);
        let head = quad::integrate(&g, 0.0, 1.0, 1e-10);
        match quad::integrate_to_infinity(&g, 1.0, 1e-8, 400) {
            Some(rest) if (head + rest).is_finite() => Ok(()),
            _ => Err(Error::InvalidParameter("weight is not integrable against (1+|x|)^{-n-1}".into())),
        }
    }

    /// `w(Q_0) = ∫_{[0,1)^n} w(|x|) dx`
    pub fn cube_mass(&self, dim: usize) -> f64 {
        if dim == 1 {
            quad::integrate(&|x: f64| self.eval(x), 0.0, 1.0, 1e-12)
        } else {
            let inner = |y: f64| quad::integrate(&|x: f64| self.eval(x.hypot(y)), 0.0, 1.0, 1e-12);
            quad::integrate(&inner, 0.0, 1.0, 1e-11)
        }
    }
}

pub fn surface(dim: usize) -> f64 {
    if dim == 1 {
        2.0
    } else {
        2.0 * PI
    }
}

/// `Omega(R) = w(Q_0) + ∫_{1<|y|<R} w(y) |y|^{-n} dy` for `R >= 1`.
pub fn omega_capital(r: f64, w: &WeightDescriptor, dim: usize) -> Result<f64> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::InvalidRange(1.0, r));
    }
    Ok(omega_capital_ln(r.ln(), w, dim))
}

/// `Omega` at `R = e^l`, for radii beyond floating range.
pub fn omega_capital_ln(l: f64, w: &WeightDescriptor, dim: usize) -> f64 {
    // with |y| = e^u the annulus integral is S_n ∫_0^l w(e^u) du
    let g = |u: f64| w.eval_radial(Radial::from_ln(u));
    let near = quad::integrate(&g, 0.0, l.min(1.0), 1e-11);
    let far = if l > 1.0 {
        // u = e^v for the slowly varying remainder
        let gv = |v: f64| g(v.exp()) * v.exp();
        quad::integrate_panels(&gv, 0.0, l.ln(), 1.0, 1e-11)
    } else {
        0.0
    };
    w.cube_mass(dim) + surface(dim) * (near + far)
}
