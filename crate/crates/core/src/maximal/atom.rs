use serde::Serialize;

use super::kernel::BumpKernel;
use super::radii::RadiusSet;
use super::smooth::smooth_max;
use crate::error::{Error, Result};
use crate::functionals::WeightDescriptor;
use crate::grid::{norm, SampledFunction};
use crate::{par, quad};

/// `∫_{|x|<R} M_phi a · w` and an upper bound for the rest of the space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedNorm {
    pub truncated: f64,
    pub tail_bound: f64,
}

impl WeightedNorm {
    pub fn upper(&self) -> f64 {
        self.truncated + self.tail_bound
    }
}

/// Weighted norm of the smooth maximal function of a zero-mean function.
///
/// Outside the support radius `rho`, `|phi_t * a(x)| <= Lip rho ||a||_1 (|x|-rho)^{-n-1}`,
/// which gives the tail bound beyond `r_max`.
pub fn atom_weighted_norm(
    a: &SampledFunction,
    kernel: &BumpKernel,
    weight: &WeightDescriptor,
    r_max: f64,
) -> Result<WeightedNorm> {
    let lip = kernel.lipschitz().ok_or(Error::NonLipschitzKernel(kernel.profile().name()))?;
    let spec = *a.spec();
    let l1 = a.l1_norm();
    let total = a.integral();
    if total.abs() > 1e-12 * l1.max(f64::MIN_POSITIVE) {
        return Err(Error::NonzeroIntegral(total));
    }
    if l1 == 0.0 {
        return Ok(WeightedNorm { truncated: 0.0, tail_bound: 0.0 });
    }
    let half_diag = 0.5 * spec.step() * (spec.dim as f64).sqrt();
    let rho = a
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, _)| norm(&spec.center(i)) + half_diag)
        .fold(0.0, f64::max);
    if r_max > spec.radius() || r_max <= rho {
        return Err(Error::DomainTooSmall(format!(
            "need support radius {rho} < r_max {r_max} <= box radius {}",
            spec.radius()
        )));
    }
    let m = smooth_max(a, kernel, &RadiusSet::quarter_octave(&spec, false))?;
    let vol = spec.cell_volume();
    let terms = par::map_range(spec.len(), |i| {
        let r = norm(&spec.center(i));
        if r < r_max {
            m.values()[i] * weight.eval(r) * vol
        } else {
            0.0
        }
    });
    let truncated = par::exact_sum(terms);
    let n = spec.dim as i32;
    let surface = if spec.dim == 1 { 2.0 } else { 2.0 * std::f64::consts::PI };
    let g = |r: f64| weight.eval(r) * r.powi(n - 1) * (r - rho).powi(-n - 1);
    let radial = quad::integrate_to_infinity(&g, r_max, 1e-8, 2000).unwrap_or(f64::INFINITY);
    Ok(WeightedNorm { truncated, tail_bound: lip * rho * l1 * surface * radial })
}
