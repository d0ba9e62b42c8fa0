//! Piecewise-constant functions on uniform dyadic grids over `[-R, R)^n`.

mod io;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

pub use io::{read_binary, read_csv, write_binary, write_csv};

/// A point of the plane; one-dimensional points keep the second coordinate at 0.
pub type Point = [f64; 2];

pub fn norm(p: &Point) -> f64 {
    p[0].hypot(p[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub box_radius: u32,
    pub cells_per_unit: u32,
}

impl GridSpec {
    pub fn new(dim: usize, box_radius: u32, cells_per_unit: u32) -> Result<Self> {
        let spec = GridSpec { dim, box_radius, cells_per_unit };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim != 1 && self.dim != 2 {
            return Err(Error::InvalidGrid(format!("dim must be 1 or 2, got {}", self.dim)));
        }
        if self.box_radius == 0 {
            return Err(Error::InvalidGrid("box_radius must be positive".into()));
        }
        if !self.cells_per_unit.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "cells_per_unit must be a power of two, got {}",
                self.cells_per_unit
            )));
        }
        let cells = self.cells_per_axis() as u128;
        if cells.pow(self.dim as u32) > (1u128 << 34) {
            return Err(Error::InvalidGrid("grid too large".into()));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        1.0 / self.cells_per_unit as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.step().powi(self.dim as i32)
    }

    pub fn cells_per_axis(&self) -> usize {
        2 * self.box_radius as usize * self.cells_per_unit as usize
    }

    pub fn len(&self) -> usize {
        self.cells_per_axis().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn radius(&self) -> f64 {
        self.box_radius as f64
    }

    /// Euclidean diameter of the box.
    pub fn diameter(&self) -> f64 {
        2.0 * self.radius() * (self.dim as f64).sqrt()
    }

    pub fn with_radius(&self, box_radius: u32) -> Result<GridSpec> {
        GridSpec::new(self.dim, box_radius, self.cells_per_unit)
    }

    pub fn with_cells_per_unit(&self, cells_per_unit: u32) -> Result<GridSpec> {
        GridSpec::new(self.dim, self.box_radius, cells_per_unit)
    }

    /// Center of the cell with axis index `i`.
    pub fn axis_center(&self, i: usize) -> f64 {
        -self.radius() + (i as f64 + 0.5) * self.step()
    }

    pub fn multi_index(&self, idx: usize) -> [usize; 2] {
        let n = self.cells_per_axis();
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx % n, idx / n]
        }
    }

    pub fn flat_index(&self, mi: [usize; 2]) -> usize {
        if self.dim == 1 {
            mi[0]
        } else {
            mi[1] * self.cells_per_axis() + mi[0]
        }
    }

    pub fn center(&self, idx: usize) -> Point {
        let mi = self.multi_index(idx);
        if self.dim == 1 {
            [self.axis_center(mi[0]), 0.0]
        } else {
            [self.axis_center(mi[0]), self.axis_center(mi[1])]
        }
    }

    /// Index of the cell containing `p`, if inside the box.
    pub fn locate(&self, p: &Point) -> Option<usize> {
        let n = self.cells_per_axis();
        let mut mi = [0usize; 2];
        for (a, slot) in mi.iter_mut().enumerate().take(self.dim) {
            let u = ((p[a] + self.radius()) * self.cells_per_unit as f64).floor();
            if u < 0.0 || u >= n as f64 {
                return None;
            }
            *slot = u as usize;
        }
        Some(self.flat_index(mi))
    }

    pub fn cube_of_cell(&self, idx: usize) -> CubeIndex {
        let mi = self.multi_index(idx);
        let m = self.cells_per_unit as usize;
        let r = self.box_radius as i64;
        let mut k = [0i64; 2];
        for a in 0..self.dim {
            k[a] = (mi[a] / m) as i64 - r;
        }
        CubeIndex { k }
    }

    pub fn contains_cube(&self, k: &CubeIndex) -> bool {
        let r = self.box_radius as i64;
        (0..2).all(|a| if a < self.dim { (-r..r).contains(&k.k[a]) } else { k.k[a] == 0 })
    }

    /// All unit cubes of the tiling, in row-major order.
    pub fn cubes(&self) -> Vec<CubeIndex> {
        let r = self.box_radius as i64;
        if self.dim == 1 {
            (-r..r).map(CubeIndex::d1).collect()
        } else {
            (-r..r).flat_map(|b| (-r..r).map(move |a| CubeIndex::d2(a, b))).collect()
        }
    }

    /// Flat indices of the `m^n` cells tiling `Q_k`, row-major within the cube.
    pub fn cube_cells(&self, k: &CubeIndex) -> Vec<usize> {
        let m = self.cells_per_unit as usize;
        let r = self.box_radius as i64;
        let off = |a: usize| ((k.k[a] + r) as usize) * m;
        if self.dim == 1 {
            (0..m).map(|i| off(0) + i).collect()
        } else {
            let (ox, oy) = (off(0), off(1));
            (0..m).flat_map(|j| (0..m).map(move |i| [ox + i, oy + j])).map(|mi| self.flat_index(mi)).collect()
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim={},box_radius={},cells_per_unit={}", self.dim, self.box_radius, self.cells_per_unit)
    }
}

/// Integer label of the unit cube `[k, k+1)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubeIndex {
    pub k: [i64; 2],
}

impl CubeIndex {
    pub fn d1(k: i64) -> Self {
        CubeIndex { k: [k, 0] }
    }

    pub fn d2(a: i64, b: i64) -> Self {
        CubeIndex { k: [a, b] }
    }

    pub fn origin() -> Self {
        CubeIndex { k: [0, 0] }
    }

    pub fn norm(&self) -> f64 {
        (self.k[0] as f64).hypot(self.k[1] as f64)
    }

    pub fn is_origin(&self) -> bool {
        self.k == [0, 0]
    }
}

impl fmt::Display for CubeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k[1] == 0 {
            write!(f, "{}", self.k[0])
        } else {
            write!(f, "{}:{}", self.k[0], self.k[1])
        }
    }
}

/// Radial power-log decay `amp (1+|x|)^{-alpha} ln(e+|x|)^{-beta}` outside the box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailDescriptor {
    pub amp: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl TailDescriptor {
    pub fn eval(&self, r: f64) -> f64 {
        self.amp * (1.0 + r).powf(-self.alpha) * (std::f64::consts::E + r).ln().powf(-self.beta)
    }

    /// `ln f` at `|x| = e^l`, stable for very large `l`.
    pub fn ln_eval(&self, l: f64) -> f64 {
        self.amp.ln() - self.alpha * ln_1p_exp(l) - self.beta * ln_e_plus_exp(l).ln()
    }

    /// `ln(f(e^l) e^{n l})`, with the powers of `e^l` combined before rounding.
    pub fn ln_eval_times_power(&self, l: f64, n: f64) -> f64 {
        let power = if l > 0.0 {
            (n - self.alpha) * l - self.alpha * (-l).exp().ln_1p()
        } else {
            n * l - self.alpha * ln_1p_exp(l)
        };
        self.amp.ln() + power - self.beta * ln_e_plus_exp(l).ln()
    }

    pub fn scaled(&self, c: f64) -> TailDescriptor {
        TailDescriptor { amp: self.amp * c, ..*self }
    }
}

/// `ln(1 + e^l)` without overflow.
pub fn ln_1p_exp(l: f64) -> f64 {
    if l > 30.0 {
        l + (-l).exp().ln_1p()
    } else {
        l.exp().ln_1p()
    }
}

/// `ln(e + e^l)` without overflow.
pub fn ln_e_plus_exp(l: f64) -> f64 {
    if l > 30.0 {
        l + (1.0 - l).exp().ln_1p()
    } else {
        (std::f64::consts::E + l.exp()).ln()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    spec: GridSpec,
    values: Vec<f64>,
    tail: Option<TailDescriptor>,
}

impl SampledFunction {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.len() {
            return Err(Error::InvalidGrid(format!("expected {} values, got {}", spec.len(), values.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite value at cell {i}")));
        }
        Ok(SampledFunction { spec, values, tail: None })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        SampledFunction { spec, values: vec![0.0; spec.len()], tail: None }
    }

    /// Samples `f` at cell centers.
    pub fn from_fn<F: Fn(&Point) -> f64 + Sync + Send>(spec: GridSpec, f: F) -> Result<Self> {
        let values = par::map_range(spec.len(), |i| f(&spec.center(i)));
        SampledFunction::new(spec, values)
    }

    /// Attaches an analytic tail, checking it against the outermost cells.
    pub fn with_tail(mut self, tail: TailDescriptor) -> Result<Self> {
        let n = self.spec.cells_per_axis();
        for (i, &v) in self.values.iter().enumerate() {
            let mi = self.spec.multi_index(i);
            let outer = (0..self.spec.dim).any(|a| mi[a] == 0 || mi[a] == n - 1);
            if !outer {
                continue;
            }
            let expect = tail.eval(norm(&self.spec.center(i)));
            if (v - expect).abs() > 1e-6 * expect.abs().max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidParameter(format!(
                    "tail descriptor disagrees with boundary cell {i}: {v} vs {expect}"
                )));
            }
        }
        self.tail = Some(tail);
        Ok(self)
    }

    pub fn without_tail(mut self) -> Self {
        self.tail = None;
        self
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn tail(&self) -> Option<&TailDescriptor> {
        self.tail.as_ref()
    }

    pub fn value_at(&self, p: &Point) -> Option<f64> {
        self.spec.locate(p).map(|i| self.values[i])
    }

    pub fn integral(&self) -> f64 {
        par::exact_sum(self.values.iter().copied()) * self.spec.cell_volume()
    }

    pub fn l1_norm(&self) -> f64 {
        par::exact_sum(self.values.iter().map(|v| v.abs())) * self.spec.cell_volume()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn abs(&self) -> SampledFunction {
        self.map(f64::abs)
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> SampledFunction {
        SampledFunction { spec: self.spec, values: self.values.iter().map(|&v| f(v)).collect(), tail: None }
    }

    pub fn scale_values(&self, c: f64) -> SampledFunction {
        SampledFunction {
            spec: self.spec,
            values: self.values.iter().map(|v| v * c).collect(),
            tail: self.tail.and_then(|t| (c > 0.0).then(|| t.scaled(c))),
        }
    }

    pub fn add(&self, other: &SampledFunction) -> Result<SampledFunction> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SampledFunction) -> Result<SampledFunction> {
        self.zip(other, |a, b| a - b)
    }

    fn zip<F: Fn(f64, f64) -> f64>(&self, other: &SampledFunction, f: F) -> Result<SampledFunction> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(self.spec, other.spec));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(SampledFunction { spec: self.spec, values, tail: None })
    }

    pub fn support_cubes(&self) -> Vec<CubeIndex> {
        let mut ks: Vec<CubeIndex> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| self.spec.cube_of_cell(i))
            .collect();
        ks.sort();
        ks.dedup();
        ks
    }

    /// `f` times the indicator of `Q_k`.
    pub fn restrict_to_cube(&self, k: &CubeIndex) -> SampledFunction {
        let mut out = SampledFunction::zeros(self.spec);
        if self.spec.contains_cube(k) {
            for i in self.spec.cube_cells(k) {
                out.values[i] = self.values[i];
            }
        }
        out
    }

    /// Cell values of `Q_k`, row-major within the cube.
    pub fn cube_values(&self, k: &CubeIndex) -> Vec<f64> {
        self.spec.cube_cells(k).into_iter().map(|i| self.values[i]).collect()
    }

    /// `f(. - k)`: shifts the support by the integer vector `k`.
    pub fn translate(&self, k: &CubeIndex) -> Result<SampledFunction> {
        let spec = self.spec;
        let n = spec.cells_per_axis() as i64;
        let m = spec.cells_per_unit as i64;
        let mut out = vec![0.0; spec.len()];
        for (i, &v) in self.values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let mi = spec.multi_index(i);
            let mut dst = [0usize; 2];
            for a in 0..spec.dim {
                let j = mi[a] as i64 + k.k[a] * m;
                if !(0..n).contains(&j) {
                    return Err(Error::DomainTooSmall(format!(
                        "translation by {k} leaves the box of radius {}",
                        spec.box_radius
                    )));
                }
                dst[a] = j as usize;
            }
            out[spec.flat_index(dst)] = v;
        }
        Ok(SampledFunction { spec, values: out, tail: None })
    }

    /// Re-grids onto a box of a different radius, zero-padding or cropping.
    /// Cropping fails if nonzero values would be lost.
    pub fn rebox(&self, box_radius: u32) -> Result<SampledFunction> {
        let spec = self.spec.with_radius(box_radius)?;
        let shift = (box_radius as i64 - self.spec.box_radius as i64) * spec.cells_per_unit as i64;
        let n = spec.cells_per_axis() as i64;
        let mut out = vec![0.0; spec.len()];
        for (i, &v) in self.values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let mi = self.spec.multi_index(i);
            let mut dst = [0usize; 2];
            for a in 0..spec.dim {
                let j = mi[a] as i64 + shift;
                if !(0..n).contains(&j) {
                    return Err(Error::DomainTooSmall(format!("support does not fit in a box of radius {box_radius}")));
                }
                dst[a] = j as usize;
            }
            out[spec.flat_index(dst)] = v;
        }
        Ok(SampledFunction { spec, values: out, tail: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi_q0(spec: GridSpec) -> SampledFunction {
        SampledFunction::from_fn(spec, |p| if (0..spec.dim).all(|a| (0.0..1.0).contains(&p[a])) { 1.0 } else { 0.0 })
            .unwrap()
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::new(3, 4, 4).is_err());
        assert!(GridSpec::new(1, 0, 4).is_err());
        assert!(GridSpec::new(1, 4, 6).is_err());
    }

    #[test]
    fn cell_counts() {
        let s = GridSpec::new(2, 3, 4).unwrap();
        assert_eq!(s.len(), 24 * 24);
        assert_eq!(s.cubes().len(), 36);
        assert_eq!(s.cube_cells(&CubeIndex::d2(-3, 2)).len(), 16);
    }

    #[test]
    fn indicator_of_unit_cube_integrates_to_one() {
        for dim in [1, 2] {
            for m in [1, 8, 64] {
                let s = GridSpec::new(dim, 4, m).unwrap();
                assert_eq!(chi_q0(s).integral(), 1.0);
            }
        }
    }

    #[test]
    fn odd_function_integrates_to_zero() {
        let s = GridSpec::new(1, 1, 64).unwrap();
        let f = SampledFunction::from_fn(s, |p| p[0]).unwrap();
        assert_eq!(f.integral(), 0.0);
        assert_eq!(SampledFunction::zeros(s).integral(), 0.0);
    }

    #[test]
    fn translate_moves_cube_indicator() {
        let s = GridSpec::new(1, 8, 16).unwrap();
        let f = chi_q0(s);
        let g = f.translate(&CubeIndex::d1(3)).unwrap();
        assert_eq!(g.support_cubes(), vec![CubeIndex::d1(3)]);
        assert_eq!(g.integral(), 1.0);
        assert_eq!(f.translate(&CubeIndex::origin()).unwrap(), f);
        assert!(matches!(f.translate(&CubeIndex::d1(8)), Err(Error::DomainTooSmall(_))));
    }

    #[test]
    fn cube_tiling_matches_locate() {
        let s = GridSpec::new(2, 2, 4).unwrap();
        for k in s.cubes() {
            for i in s.cube_cells(&k) {
                assert_eq!(s.cube_of_cell(i), k);
                assert_eq!(s.locate(&s.center(i)), Some(i));
            }
        }
    }

    #[test]
    fn add_and_scale() {
        let s = GridSpec::new(1, 2, 4).unwrap();
        let f = SampledFunction::from_fn(s, |p| p[0] * p[0] - 0.5).unwrap();
        assert_eq!(f.add(&f.scale_values(-1.0)).unwrap().sup_norm(), 0.0);
        assert_eq!(f.scale_values(0.0).sup_norm(), 0.0);
        let t = GridSpec::new(1, 3, 4).unwrap();
        assert!(matches!(f.add(&SampledFunction::zeros(t)), Err(Error::SpecMismatch(..))));
    }

    #[test]
    fn rebox_round_trip() {
        let s = GridSpec::new(2, 2, 4).unwrap();
        let f = chi_q0(s);
        let big = f.rebox(5).unwrap();
        assert_eq!(big.integral(), 1.0);
        assert_eq!(big.rebox(2).unwrap(), f);
        assert!(big.translate(&CubeIndex::d2(4, 0)).unwrap().rebox(2).is_err());
    }

    #[test]
    fn tail_must_match_boundary() {
        let s = GridSpec::new(1, 4, 4).unwrap();
        let t = TailDescriptor { amp: 1.0, alpha: 1.0, beta: 2.0 };
        let f = SampledFunction::from_fn(s, |p| t.eval(p[0].abs())).unwrap();
        assert!(f.clone().with_tail(t).is_ok());
        assert!(f.with_tail(TailDescriptor { beta: 1.0, ..t }).is_err());
    }

    #[test]
    fn log_space_tail_matches_direct() {
        let t = TailDescriptor { amp: 2.0, alpha: 1.5, beta: 0.5 };
        for r in [1.0f64, 10.0, 1e4] {
            assert!((t.ln_eval(r.ln()).exp() - t.eval(r)).abs() < 1e-12 * t.eval(r));
        }
    }
}
