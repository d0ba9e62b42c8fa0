use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KernelProfile {
    Box,
    Tent,
    #[default]
    Bump,
}

impl KernelProfile {
    pub fn name(&self) -> &'static str {
        match self {
            KernelProfile::Box => "box",
            KernelProfile::Tent => "tent",
            KernelProfile::Bump => "bump",
        }
    }

    /// Unnormalized radial profile on `[0, 1)`.
    fn psi(&self, s: f64) -> f64 {
        if !(0.0..1.0).contains(&s) {
            return 0.0;
        }
        match self {
            KernelProfile::Box => 1.0,
            KernelProfile::Tent => 1.0 - s,
            KernelProfile::Bump => (-1.0 / (1.0 - s * s)).exp(),
        }
    }
}

impl FromStr for KernelProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(KernelProfile::Box),
            "tent" => Ok(KernelProfile::Tent),
            "bump" => Ok(KernelProfile::Bump),
            _ => Err(Error::InvalidParameter(format!("unknown kernel `{s}`"))),
        }
    }
}

impl fmt::Display for KernelProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Radial kernel supported in the unit ball with unit integral.
#[derive(Debug, Clone)]
pub struct BumpKernel {
    profile: KernelProfile,
    dim: usize,
    /// `∫ psi(|x|) dx` over the unit ball
    mass: f64,
}

const CDF_NODES: usize = 4096;

impl BumpKernel {
    pub fn new(profile: KernelProfile, dim: usize) -> Self {
        let mass = match (profile, dim) {
            (KernelProfile::Box, 1) => 2.0,
            (KernelProfile::Box, _) => PI,
            (KernelProfile::Tent, 1) => 1.0,
            (KernelProfile::Tent, _) => PI / 3.0,
            (KernelProfile::Bump, 1) => 2.0 * bump_line_mass(),
            (KernelProfile::Bump, _) => {
                2.0 * PI * quad::integrate(&|s: f64| s * KernelProfile::Bump.psi(s), 0.0, 1.0, 1e-14)
            }
        };
        BumpKernel { profile, dim, mass }
    }

    pub fn profile(&self) -> KernelProfile {
        self.profile
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `phi(x)` for `|x| = r`.
    pub fn value(&self, r: f64) -> f64 {
        self.profile.psi(r) / self.mass
    }

    pub fn max_value(&self) -> f64 {
        self.value(0.0)
    }

    /// `max phi * |B(0,1)|`, the constant in `M_phi f <= C M f`.
    pub fn domination_constant(&self) -> f64 {
        let ball = if self.dim == 1 { 2.0 } else { PI };
        self.max_value() * ball
    }

    /// Lipschitz constant of `phi`; `None` for the discontinuous box.
    pub fn lipschitz(&self) -> Option<f64> {
        match self.profile {
            KernelProfile::Box => None,
            KernelProfile::Tent => Some(1.0 / self.mass),
            KernelProfile::Bump => {
                let d = |s: f64| {
                    let q = 1.0 - s * s;
                    KernelProfile::Bump.psi(s) * 2.0 * s / (q * q)
                };
                let peak = (1..10_000).map(|i| d(i as f64 / 10_000.0)).fold(0.0, f64::max);
                Some(peak * 1.001 / self.mass)
            }
        }
    }

    /// `∫_{-∞}^{u} phi` for the one-dimensional kernel.
    pub fn cdf(&self, u: f64) -> f64 {
        if u <= -1.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return 1.0;
        }
        match self.profile {
            KernelProfile::Box => 0.5 * (u + 1.0),
            KernelProfile::Tent => {
                if u <= 0.0 {
                    0.5 * (1.0 + u) * (1.0 + u)
                } else {
                    1.0 - 0.5 * (1.0 - u) * (1.0 - u)
                }
            }
            KernelProfile::Bump => bump_cdf(u),
        }
    }
}

fn bump_line_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| quad::integrate(&|s: f64| KernelProfile::Bump.psi(s), 0.0, 1.0, 1e-15))
}

/// Cumulative table of the 1-D bump at `u_i = -1 + 2i/N`, normalized to end at 1.
fn bump_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let psi = |u: f64| KernelProfile::Bump.psi(u.abs());
        let step = 2.0 / CDF_NODES as f64;
        let pieces: Vec<f64> = (0..CDF_NODES)
            .map(|i| {
                let a = -1.0 + i as f64 * step;
                quad::integrate(&psi, a, a + step, 1e-13)
            })
            .collect();
        let mut table = Vec::with_capacity(CDF_NODES + 1);
        table.push(0.0);
        for i in 0..CDF_NODES {
            table.push(crate::par::exact_sum(pieces[..=i].iter().copied()));
        }
        let total = table[CDF_NODES];
        table.iter().map(|v| v / total).collect()
    })
}

/// Cubic Hermite interpolation of the table, with the density as slope.
fn bump_cdf(u: f64) -> f64 {
    let table = bump_table();
    let step = 2.0 / CDF_NODES as f64;
    let x = (u + 1.0) / step;
    let i = (x.floor() as usize).min(CDF_NODES - 1);
    let t = x - i as f64;
    let scale = 1.0 / (2.0 * bump_line_mass());
    let d0 = KernelProfile::Bump.psi((-1.0 + i as f64 * step).abs()) * scale * step;
    let d1 = KernelProfile::Bump.psi((-1.0 + (i + 1) as f64 * step).abs()) * scale * step;
    let (p0, p1) = (table[i], table[i + 1]);
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * d1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_mass() {
        for p in [KernelProfile::Box, KernelProfile::Tent, KernelProfile::Bump] {
            let k = BumpKernel::new(p, 1);
            let m = quad::integrate(&|x: f64| k.value(x.abs()), -1.0, 1.0, 1e-13);
            assert!((m - 1.0).abs() < 1e-10, "{p}: {m}");
            let k2 = BumpKernel::new(p, 2);
            let m2 = 2.0 * PI * quad::integrate(&|r: f64| r * k2.value(r), 0.0, 1.0, 1e-13);
            assert!((m2 - 1.0).abs() < 1e-10, "{p}: {m2}");
        }
    }

    #[test]
    fn cdf_matches_quadrature() {
        for p in [KernelProfile::Box, KernelProfile::Tent, KernelProfile::Bump] {
            let k = BumpKernel::new(p, 1);
            for u in [-0.99, -0.5, -0.123, 0.0, 0.3, 0.77, 0.999] {
                let q = quad::integrate(&|x: f64| k.value(x.abs()), -1.0, u, 1e-13);
                assert!((k.cdf(u) - q).abs() < 1e-12, "{p} u={u}");
            }
            assert_eq!(k.cdf(-1.0), 0.0);
            assert_eq!(k.cdf(1.0), 1.0);
        }
    }

    #[test]
    fn peak_at_origin() {
        let k = BumpKernel::new(KernelProfile::Bump, 2);
        assert!((0..100).all(|i| k.value(i as f64 / 100.0) <= k.max_value()));
        assert_eq!(k.value(1.0), 0.0);
    }

    #[test]
    fn box_has_no_lipschitz_constant() {
        assert!(BumpKernel::new(KernelProfile::Box, 1).lipschitz().is_none());
        assert_eq!(BumpKernel::new(KernelProfile::Tent, 1).lipschitz(), Some(1.0));
    }
}
