//! Ball averages of piecewise-constant functions and the Hardy-Littlewood
//! maximal operator. Balls are clipped to the box and averages divide by the
//! full ball volume, i.e. `f` is extended by zero.

use std::f64::consts::PI;

use super::radii::RadiusSet;
use crate::error::{Error, Result};
use crate::grid::{GridSpec, Point, SampledFunction};
use crate::par;

/// Subcells per axis used for overlap fractions in the plane.
const SUB: usize = 4;

/// `M f` at every cell center, the sup running over `radii`.
pub fn hl_max(f: &SampledFunction, radii: &RadiusSet) -> Result<SampledFunction> {
    if radii.is_empty() {
        return Err(Error::EmptyRadiusSet);
    }
    let values = match f.spec().dim {
        1 => Interval::new(f).max_all(radii),
        _ => Disk::new(f, radii).max_all(radii),
    };
    SampledFunction::new(*f.spec(), values)
}

/// `M^loc f` with the default quarter-octave radii up to 1.
pub fn local_max(f: &SampledFunction) -> SampledFunction {
    hl_max(f, &RadiusSet::quarter_octave(f.spec(), true)).expect("local radius set is nonempty")
}

pub fn local_max_with(f: &SampledFunction, radii: &RadiusSet) -> Result<SampledFunction> {
    if !radii.local_only() {
        return Err(Error::InvalidRadii("local maximal function needs a local radius set".into()));
    }
    hl_max(f, radii)
}

/// Average of `|f|` over `B(x, r)` for an arbitrary center `x`.
pub fn ball_average(f: &SampledFunction, x: &Point, r: f64) -> f64 {
    match f.spec().dim {
        1 => Interval::new(f).average(x[0], r),
        _ => brute_disk_integral(f, x, r) / (PI * r * r),
    }
}

struct Interval<'a> {
    f: &'a SampledFunction,
    abs: Vec<f64>,
    /// `cum[i] = h * sum_{j<i} |f_j|`, accumulated in index order
    cum: Vec<f64>,
    support: Option<(f64, f64)>,
}

impl<'a> Interval<'a> {
    fn new(f: &'a SampledFunction) -> Self {
        let h = f.spec().step();
        let abs: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
        let mut cum = Vec::with_capacity(abs.len() + 1);
        let mut run = 0.0;
        cum.push(0.0);
        for a in &abs {
            run += a;
            cum.push(run * h);
        }
        let lo = abs.iter().position(|&a| a != 0.0);
        let hi = abs.iter().rposition(|&a| a != 0.0);
        let spec = f.spec();
        let support = lo.zip(hi).map(|(lo, hi)| (spec.axis_center(lo) - 0.5 * h, spec.axis_center(hi) + 0.5 * h));
        Interval { f, abs, cum, support }
    }

    /// `int_{-R}^{x} |f|`
    fn primitive(&self, x: f64) -> f64 {
        let spec = self.f.spec();
        let u = (x + spec.radius()) * spec.cells_per_unit as f64;
        let n = self.abs.len();
        if u <= 0.0 {
            return 0.0;
        }
        if u >= n as f64 {
            return self.cum[n];
        }
        let i = u.floor() as usize;
        let left = spec.axis_center(i) - 0.5 * spec.step();
        self.cum[i] + (x - left) * self.abs[i]
    }

    fn average(&self, x: f64, r: f64) -> f64 {
        (self.primitive(x + r) - self.primitive(x - r)) / (2.0 * r)
    }

    /// Average over the ball of radius `q` cells around the center of cell `i`.
    /// Offsets `|d| <= k` are covered fully and `d = ±(k+1)` by the fraction
    /// `q - k - 1/2`, which is exact when `q` is.
    fn centered_average(&self, i: usize, q: f64) -> f64 {
        let n = self.abs.len() as i64;
        let i = i as i64;
        if q < 0.5 {
            return self.abs[i as usize];
        }
        let k = (q - 0.5).floor() as i64;
        let frac = q - (k as f64 + 0.5);
        let sum_range = |a: i64, b: i64| {
            let (a, b) = (a.clamp(0, n) as usize, b.clamp(0, n) as usize);
            if b > a {
                self.cum[b] - self.cum[a]
            } else {
                0.0
            }
        };
        let at = |j: i64| if (0..n).contains(&j) { self.abs[j as usize] } else { 0.0 };
        let h = self.f.spec().step();
        let full = sum_range(i - k, i + k + 1) / h;
        (full + frac * (at(i - k - 1) + at(i + k + 1))) / (2.0 * q)
    }

    fn max_all(&self, radii: &RadiusSet) -> Vec<f64> {
        let spec = *self.f.spec();
        let m = spec.cells_per_unit as f64;
        par::map_range(spec.len(), |i| {
            let x = spec.axis_center(i);
            let mut best = if radii.include_single_cell() { self.abs[i] } else { 0.0 };
            let Some((lo, hi)) = self.support else { return best };
            for &r in radii.radii() {
                best = best.max(self.centered_average(i, r * m));
                // past this radius the ball holds all the mass and the average only decays
                if x - r <= lo && x + r >= hi {
                    break;
                }
            }
            best
        })
    }
}

/// One row of a disk stencil: cell offsets `-full..=full` lie entirely inside,
/// `partial` lists boundary offsets with their overlap fraction.
struct StencilRow {
    dj: i64,
    full: i64,
    partial: Vec<(i64, f64)>,
}

struct DiskStencil {
    rows: Vec<StencilRow>,
}

impl DiskStencil {
    fn new(r_cells: f64) -> Self {
        let d = (r_cells + 0.5).ceil() as i64;
        let r2 = r_cells * r_cells;
        let mut rows = Vec::new();
        for dj in -d..=d {
            let mut full = -1;
            let mut partial = Vec::new();
            for di in -d..=d {
                let frac = overlap_fraction(di, dj, r2);
                if frac == 1.0 {
                    full = full.max(di.abs());
                } else if frac > 0.0 {
                    partial.push((di, frac));
                }
            }
            partial.retain(|(di, _)| di.abs() > full);
            if full >= 0 || !partial.is_empty() {
                rows.push(StencilRow { dj, full, partial });
            }
        }
        DiskStencil { rows }
    }
}

/// Fraction of the cell at offset `(di, dj)` (in cell units) whose subcell
/// centers lie in the open disk of squared radius `r2`.
fn overlap_fraction(di: i64, dj: i64, r2: f64) -> f64 {
    let near = |d: i64| (d.abs() as f64 - 0.5).max(0.0);
    if near(di).powi(2) + near(dj).powi(2) >= r2 {
        return 0.0;
    }
    let mut inside = 0;
    for a in 0..SUB {
        let x = di as f64 + (a as f64 + 0.5) / SUB as f64 - 0.5;
        for b in 0..SUB {
            let y = dj as f64 + (b as f64 + 0.5) / SUB as f64 - 0.5;
            if x * x + y * y < r2 {
                inside += 1;
            }
        }
    }
    inside as f64 / (SUB * SUB) as f64
}

struct Disk<'a> {
    f: &'a SampledFunction,
    abs: Vec<f64>,
    /// per row `y`, `prefix[y][i] = sum_{x<i} |f(x, y)|`
    prefix: Vec<Vec<f64>>,
    stencils: Vec<DiskStencil>,
    support: Option<[usize; 4]>,
}

impl<'a> Disk<'a> {
    fn new(f: &'a SampledFunction, radii: &RadiusSet) -> Self {
        let spec = f.spec();
        let n = spec.cells_per_axis();
        let abs: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
        let prefix = abs
            .chunks(n)
            .map(|row| {
                let mut p = Vec::with_capacity(n + 1);
                let mut run = 0.0;
                p.push(0.0);
                for a in row {
                    run += a;
                    p.push(run);
                }
                p
            })
            .collect();
        let m = spec.cells_per_unit as f64;
        let stencils = par::map_slice(radii.radii(), |&r| DiskStencil::new(r * m));
        let mut support: Option<[usize; 4]> = None;
        for (i, &a) in abs.iter().enumerate() {
            if a != 0.0 {
                let [x, y] = spec.multi_index(i);
                support = Some(match support {
                    None => [x, x, y, y],
                    Some([x0, x1, y0, y1]) => [x0.min(x), x1.max(x), y0.min(y), y1.max(y)],
                });
            }
        }
        Disk { f, abs, prefix, stencils, support }
    }

    fn integral(&self, cx: usize, cy: usize, st: &DiskStencil) -> f64 {
        let n = self.f.spec().cells_per_axis() as i64;
        let (cx, cy) = (cx as i64, cy as i64);
        let mut total = 0.0;
        for row in &st.rows {
            let y = cy + row.dj;
            if !(0..n).contains(&y) {
                continue;
            }
            let pre = &self.prefix[y as usize];
            if row.full >= 0 {
                let lo = (cx - row.full).clamp(0, n) as usize;
                let hi = (cx + row.full + 1).clamp(0, n) as usize;
                total += pre[hi] - pre[lo];
            }
            let base = y as usize * n as usize;
            for &(di, frac) in &row.partial {
                let x = cx + di;
                if (0..n).contains(&x) {
                    total += frac * self.abs[base + x as usize];
                }
            }
        }
        total * self.f.spec().cell_volume()
    }

    fn max_all(&self, radii: &RadiusSet) -> Vec<f64> {
        let spec = *self.f.spec();
        let m = spec.cells_per_unit as f64;
        par::map_range(spec.len(), |i| {
            let mut best = if radii.include_single_cell() { self.abs[i] } else { 0.0 };
            let Some([x0, x1, y0, y1]) = self.support else { return best };
            let [cx, cy] = spec.multi_index(i);
            // farthest support corner, in cell units
            let dx = (cx as f64 - x0 as f64).abs().max((x1 as f64 - cx as f64).abs()) + 0.5;
            let dy = (cy as f64 - y0 as f64).abs().max((y1 as f64 - cy as f64).abs()) + 0.5;
            let reach = dx.hypot(dy);
            for (st, &r) in self.stencils.iter().zip(radii.radii()) {
                best = best.max(self.integral(cx, cy, st) / (PI * r * r));
                if r * m > reach {
                    break;
                }
            }
            best
        })
    }
}

/// Disk integral of `|f|` by direct subcell enumeration (any center).
fn brute_disk_integral(f: &SampledFunction, x: &Point, r: f64) -> f64 {
    let spec: GridSpec = *f.spec();
    let h = spec.step();
    let terms = f.values().iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| {
        let c = spec.center(i);
        let mut inside = 0;
        for a in 0..SUB {
            for b in 0..SUB {
                let px = c[0] + ((a as f64 + 0.5) / SUB as f64 - 0.5) * h;
                let py = c[1] + ((b as f64 + 0.5) / SUB as f64 - 0.5) * h;
                if (px - x[0]).powi(2) + (py - x[1]).powi(2) < r * r {
                    inside += 1;
                }
            }
        }
        v.abs() * inside as f64 / (SUB * SUB) as f64
    });
    par::exact_sum(terms) * spec.cell_volume()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn indicator(spec: GridSpec, lo: f64, hi: f64) -> SampledFunction {
        SampledFunction::from_fn(spec, |p| if (lo..hi).contains(&p[0]) { 1.0 } else { 0.0 }).unwrap()
    }

    #[test]
    fn interval_average_of_contained_ball_is_one() {
        let s = GridSpec::new(1, 8, 16).unwrap();
        let f = indicator(s, -1.0, 1.0);
        let m = hl_max(&f, &RadiusSet::quarter_octave(&s, false)).unwrap();
        assert_eq!(m.value_at(&[0.0 + 1.0 / 32.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn zero_function_maps_to_zero() {
        for dim in [1, 2] {
            let s = GridSpec::new(dim, 2, 4).unwrap();
            let z = SampledFunction::zeros(s);
            assert_eq!(hl_max(&z, &RadiusSet::quarter_octave(&s, false)).unwrap().sup_norm(), 0.0);
        }
    }

    #[test]
    fn stencil_matches_brute_force_in_plane() {
        let s = GridSpec::new(2, 2, 4).unwrap();
        let f = SampledFunction::from_fn(s, |p| (p[0] * 1.3 + p[1]).sin()).unwrap();
        let radii = RadiusSet::new(vec![0.3, 0.75, 1.6], false, false).unwrap();
        let disk = Disk::new(&f, &radii);
        for i in [0, 17, 40, 63] {
            let [cx, cy] = s.multi_index(i);
            for (st, &r) in disk.stencils.iter().zip(radii.radii()) {
                let a = disk.integral(cx, cy, st);
                let b = brute_disk_integral(&f, &s.center(i), r);
                assert!((a - b).abs() < 1e-12, "{a} {b}");
            }
        }
    }

    #[test]
    fn full_disk_recovers_area() {
        let s = GridSpec::new(2, 4, 8).unwrap();
        let one = SampledFunction::from_fn(s, |_| 1.0).unwrap();
        let a = ball_average(&one, &[0.0625, 0.0625], 2.0);
        assert!((a - 1.0).abs() < 0.01, "{a}");
    }
}
