//! Dyadic maximal function on a unit cube.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::SampledFunction;

/// `n^{-n/2} |B(0,1)|^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicConstant(pub f64);

impl DyadicConstant {
    pub fn for_dim(dim: usize) -> Self {
        let n = dim as f64;
        let ball = if dim == 1 { 2.0 } else { PI };
        DyadicConstant(n.powf(-n / 2.0) / ball)
    }
}

/// `M^d v` on the cube of `v`'s support, zero elsewhere.
pub fn dyadic_max(v: &SampledFunction) -> Result<SampledFunction> {
    dyadic_max_restricted(v, 1.0)
}

/// Sup restricted to dyadic subcubes of side at most `max_side`.
pub fn dyadic_max_restricted(v: &SampledFunction, max_side: f64) -> Result<SampledFunction> {
    let spec = *v.spec();
    let cubes = v.support_cubes();
    if cubes.len() > 1 {
        return Err(Error::MultiCubeSupport);
    }
    let mut out = SampledFunction::zeros(spec).into_values();
    if let Some(k) = cubes.first() {
        let local = v.cube_values(k);
        let m = spec.cells_per_unit as usize;
        let levels = m.trailing_zeros();
        let max_level = (0..=levels).take_while(|&l| (1usize << l) as f64 / m as f64 <= max_side).last();
        let md = match max_level {
            Some(l) => dyadic_max_values(&local, m, spec.dim, l),
            None => vec![0.0; local.len()],
        };
        for (i, val) in spec.cube_cells(k).into_iter().zip(md) {
            out[i] = val;
        }
    }
    SampledFunction::new(spec, out)
}

/// `M^d` of a single cube's `m^n` cell values (row-major). Only dyadic
/// blocks of at most `2^max_level` cells per side enter the sup.
pub fn dyadic_max_values(local: &[f64], m: usize, dim: usize, max_level: u32) -> Vec<f64> {
    assert!(m.is_power_of_two() && local.len() == m.pow(dim as u32));
    let levels = m.trailing_zeros();
    let mut avg: Vec<f64> = local.iter().map(|v| v.abs()).collect();
    let mut best = avg.clone();
    let mut side = m;
    for level in 1..=levels.min(max_level) {
        side /= 2;
        avg = if dim == 1 {
            (0..side).map(|i| 0.5 * (avg[2 * i] + avg[2 * i + 1])).collect()
        } else {
            let w = 2 * side;
            (0..side * side)
                .map(|c| {
                    let (x, y) = (c % side, c / side);
                    let (a, b) = (2 * y * w + 2 * x, (2 * y + 1) * w + 2 * x);
                    0.25 * ((avg[a] + avg[a + 1]) + (avg[b] + avg[b + 1]))
                })
                .collect()
        };
        for (i, b) in best.iter_mut().enumerate() {
            let parent = if dim == 1 {
                i >> level
            } else {
                let (x, y) = (i % m, i / m);
                (y >> level) * side + (x >> level)
            };
            *b = b.max(avg[parent]);
        }
    }
    best
}
