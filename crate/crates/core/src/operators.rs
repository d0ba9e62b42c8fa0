//! Cancellation operator `T_theta f = f - (∫f) theta`, the near/far split of
//! a function into per-cube zero-mean parts and cube-indicator differences,
//! and the atoms `chi_{Q_j} - theta`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{CubeIndex, GridSpec, SampledFunction};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ThetaProfile {
    #[default]
    Box,
    Smooth,
}

impl FromStr for ThetaProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(ThetaProfile::Box),
            "smooth" => Ok(ThetaProfile::Smooth),
            _ => Err(Error::InvalidParameter(format!("unknown theta profile `{s}`"))),
        }
    }
}

impl fmt::Display for ThetaProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThetaProfile::Box => "box",
            ThetaProfile::Smooth => "smooth",
        })
    }
}

/// Number of dyadic bits the smooth profile is quantized to.
const THETA_BITS: i32 = 24;

/// Bounded function on `Q_0` whose discrete integral is exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaFunction {
    f: SampledFunction,
    profile: ThetaProfile,
}

impl ThetaFunction {
    pub fn new(spec: GridSpec, profile: ThetaProfile) -> Result<Self> {
        let origin = CubeIndex::origin();
        if !spec.contains_cube(&origin) {
            return Err(Error::DomainTooSmall("box does not contain Q_0".into()));
        }
        let cells = spec.cube_cells(&origin);
        let mut values = vec![0.0; spec.len()];
        match profile {
            ThetaProfile::Box => cells.iter().for_each(|&i| values[i] = 1.0),
            ThetaProfile::Smooth => {
                let q = quantized_bump(&spec, &cells);
                // theta_i = q_i 2^{-bits} m^n, so h^n sum theta_i = 2^{-bits} sum q_i = 1
                let scale = (-(THETA_BITS as f64)).exp2() / spec.cell_volume();
                for (&i, &qi) in cells.iter().zip(&q) {
                    values[i] = qi as f64 * scale;
                }
            }
        }
        Ok(ThetaFunction { f: SampledFunction::new(spec, values)?, profile })
    }

    pub fn profile(&self) -> ThetaProfile {
        self.profile
    }

    pub fn as_function(&self) -> &SampledFunction {
        &self.f
    }

    pub fn spec(&self) -> &GridSpec {
        self.f.spec()
    }
}

/// Integer weights of `exp(-1/(1-|2x-1|^2))` on the cells of `Q_0`, summing to
/// exactly `2^THETA_BITS` (largest-remainder rounding).
fn quantized_bump(spec: &GridSpec, cells: &[usize]) -> Vec<i64> {
    let raw: Vec<f64> = cells
        .iter()
        .map(|&i| {
            let c = spec.center(i);
            let r2: f64 = (0..spec.dim).map(|a| (2.0 * c[a] - 1.0).powi(2)).sum();
            if r2 < 1.0 {
                (-1.0 / (1.0 - r2)).exp()
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let target = 1i64 << THETA_BITS;
    let scaled: Vec<f64> = raw.iter().map(|v| v / total * target as f64).collect();
    let mut q: Vec<i64> = scaled.iter().map(|v| v.floor() as i64).collect();
    let short = target - q.iter().sum::<i64>();
    let mut order: Vec<usize> = (0..q.len()).collect();
    order.sort_by(|&a, &b| {
        let (fa, fb) = (scaled[a] - scaled[a].floor(), scaled[b] - scaled[b].floor());
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().take(short as usize) {
        q[i] += 1;
    }
    q
}

fn check_spec(f: &SampledFunction, theta: &ThetaFunction) -> Result<()> {
    if f.spec() != theta.spec() {
        return Err(Error::SpecMismatch(*f.spec(), *theta.spec()));
    }
    Ok(())
}

pub fn t_theta(f: &SampledFunction, theta: &ThetaFunction) -> Result<SampledFunction> {
    check_spec(f, theta)?;
    let mass = f.integral();
    let th = theta.as_function().values();
    let values = f.values().iter().zip(th).map(|(&v, &t)| if t == 0.0 { v } else { v - mass * t }).collect();
    SampledFunction::new(*f.spec(), values)
}

/// `h = sum_k (f_k - (∫f_k) chi_{Q_k})` and `g = sum_k (∫f_k)(chi_{Q_k} - theta)`.
pub fn h_g_split(f: &SampledFunction, theta: &ThetaFunction) -> Result<(SampledFunction, SampledFunction)> {
    check_spec(f, theta)?;
    let spec = *f.spec();
    let vol = spec.cell_volume();
    let cubes = spec.cubes();
    let masses: Vec<f64> = par::map_slice(&cubes, |k| par::exact_sum(f.cube_values(k)) * vol);
    let total = par::exact_sum(masses.iter().copied());
    let mut h = vec![0.0; spec.len()];
    let mut g = vec![0.0; spec.len()];
    let th = theta.as_function().values();
    for (k, &mk) in cubes.iter().zip(&masses) {
        for i in spec.cube_cells(k) {
            h[i] = f.values()[i] - mk;
            g[i] = if th[i] == 0.0 { mk } else { mk - total * th[i] };
        }
    }
    Ok((SampledFunction::new(spec, h)?, SampledFunction::new(spec, g)?))
}

/// `chi_{Q_j} - theta`, defined for `|j| > 2`.
pub fn atom(j: &CubeIndex, theta: &ThetaFunction) -> Result<SampledFunction> {
    if j.norm() <= 2.0 {
        return Err(Error::AtomTooClose(j.norm()));
    }
    let spec = *theta.spec();
    if !spec.contains_cube(j) {
        return Err(Error::DomainTooSmall(format!("cube {j} lies outside the box")));
    }
    let mut values: Vec<f64> = theta.as_function().values().iter().map(|v| -v).collect();
    for i in spec.cube_cells(j) {
        values[i] = 1.0;
    }
    SampledFunction::new(spec, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(spec: GridSpec, k: i64) -> SampledFunction {
        SampledFunction::zeros(spec).add(&indicator(spec, k)).unwrap()
    }

    fn indicator(spec: GridSpec, k: i64) -> SampledFunction {
        SampledFunction::from_fn(spec, move |p| if p[0] >= k as f64 && p[0] < k as f64 + 1.0 { 1.0 } else { 0.0 })
            .unwrap()
    }

    #[test]
    fn theta_has_unit_integral() {
        for dim in [1, 2] {
            for m in [1, 4, 64] {
                let s = GridSpec::new(dim, 2, m).unwrap();
                for p in [ThetaProfile::Box, ThetaProfile::Smooth] {
                    let th = ThetaFunction::new(s, p).unwrap();
                    assert_eq!(th.as_function().integral(), 1.0, "{dim} {m} {p}");
                    assert_eq!(th.as_function().support_cubes(), vec![CubeIndex::origin()]);
                }
            }
        }
    }

    #[test]
    fn t_theta_examples() {
        let s = GridSpec::new(1, 8, 16).unwrap();
        let th = ThetaFunction::new(s, ThetaProfile::Smooth).unwrap();
        assert_eq!(t_theta(th.as_function(), &th).unwrap().sup_norm(), 0.0);
        let f = cube(s, 3);
        let tf = t_theta(&f, &th).unwrap();
        assert_eq!(tf, f.sub(th.as_function()).unwrap());
        assert_eq!(t_theta(&tf, &th).unwrap(), tf);
    }

    #[test]
    fn split_of_unit_cube() {
        let s = GridSpec::new(1, 4, 8).unwrap();
        let th = ThetaFunction::new(s, ThetaProfile::Smooth).unwrap();
        let (h, g) = h_g_split(&cube(s, 0), &th).unwrap();
        assert_eq!(h.sup_norm(), 0.0);
        assert_eq!(g, cube(s, 0).sub(th.as_function()).unwrap());
    }

    #[test]
    fn atom_rules() {
        let s = GridSpec::new(1, 8, 8).unwrap();
        let th = ThetaFunction::new(s, ThetaProfile::Box).unwrap();
        assert!(matches!(atom(&CubeIndex::d1(2), &th), Err(Error::AtomTooClose(_))));
        let a = atom(&CubeIndex::d1(5), &th).unwrap();
        assert_eq!(a.integral(), 0.0);
        assert_eq!(a.l1_norm(), 2.0);
        assert_eq!(a.support_cubes(), vec![CubeIndex::origin(), CubeIndex::d1(5)]);
        assert!(atom(&CubeIndex::d1(9), &th).is_err());
    }
}
