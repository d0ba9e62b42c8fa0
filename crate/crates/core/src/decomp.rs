//! Unit-cube decompositions `f = sum_k f chi_{Q_k}` and the discrete sums built
//! from the pieces and their masses `mu_k = ||f_k||_1`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::functionals::{ln_plus, omega_capital, WeightDescriptor};
use crate::grid::{CubeIndex, GridSpec, SampledFunction};
use crate::par;

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub k: CubeIndex,
    /// cell values on `Q_k`, row-major within the cube
    pub values: Vec<f64>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeDecomposition {
    spec: GridSpec,
    pieces: Vec<Piece>,
}

pub fn split(f: &SampledFunction) -> CubeDecomposition {
    let spec = *f.spec();
    let vol = spec.cell_volume();
    let pieces = par::map_slice(&spec.cubes(), |k| {
        let values = f.cube_values(k);
        let mass = par::exact_sum(values.iter().map(|v| v.abs())) * vol;
        Piece { k: *k, values, mass }
    });
    CubeDecomposition { spec, pieces }
}

impl CubeDecomposition {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Piece> {
        self.pieces.iter().filter(|p| p.mass > 0.0)
    }

    pub fn masses(&self) -> BTreeMap<CubeIndex, f64> {
        self.pieces.iter().map(|p| (p.k, p.mass)).collect()
    }

    pub fn total_mass(&self) -> f64 {
        par::exact_sum(self.pieces.iter().map(|p| p.mass))
    }

    /// `f_k` as a function on the whole grid.
    pub fn piece_function(&self, piece: &Piece) -> SampledFunction {
        let mut out = SampledFunction::zeros(self.spec).into_values();
        for (i, v) in self.spec.cube_cells(&piece.k).into_iter().zip(&piece.values) {
            out[i] = *v;
        }
        SampledFunction::new(self.spec, out).expect("piece values are finite")
    }

    pub fn reassemble(&self) -> SampledFunction {
        let mut out = SampledFunction::zeros(self.spec).into_values();
        for p in &self.pieces {
            for (i, v) in self.spec.cube_cells(&p.k).into_iter().zip(&p.values) {
                out[i] = *v;
            }
        }
        SampledFunction::new(self.spec, out).expect("piece values are finite")
    }

    fn sum_pieces<F: Fn(&Piece) -> f64 + Sync + Send>(&self, term: F) -> f64 {
        par::exact_sum(par::map_slice(&self.pieces, |p| if p.mass > 0.0 { term(p) } else { 0.0 }))
    }

    fn cell_sum<F: Fn(f64) -> f64>(&self, p: &Piece, g: F) -> f64 {
        par::exact_sum(p.values.iter().map(|v| v.abs()).filter(|&a| a > 0.0).map(g)) * self.spec.cell_volume()
    }
}

/// `sum_k ∫ |f_k| (1 + ln+(|f_k| / mu_k))`
pub fn local_llogl_sum(d: &CubeDecomposition) -> f64 {
    d.sum_pieces(|p| d.cell_sum(p, |a| a * (1.0 + ln_plus(a / p.mass))))
}

/// `sum_k mu_k ln+(1 / mu_k)`
pub fn amalgam_entropy_sum(d: &CubeDecomposition) -> f64 {
    d.sum_pieces(|p| p.mass * ln_plus(1.0 / p.mass))
}

/// `sum_k mu_k (1 + ln+ |k|)`
pub fn log_moment_sum(d: &CubeDecomposition) -> f64 {
    d.sum_pieces(|p| p.mass * (1.0 + ln_plus(p.k.norm())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FarWeight {
    /// `1 + ln+ |j|`
    Log,
    /// `Omega(max(|j|, 1))`
    Omega(WeightDescriptor),
}

/// `sum_j |lambda_j| w(j)` for coefficients attached to cubes.
pub fn far_weighted_sum(lambda: &BTreeMap<CubeIndex, f64>, weight: FarWeight, dim: usize) -> Result<f64> {
    let mut terms = Vec::with_capacity(lambda.len());
    for (j, l) in lambda {
        let w = match weight {
            FarWeight::Log => 1.0 + ln_plus(j.norm()),
            FarWeight::Omega(om) => omega_capital(j.norm().max(1.0), &om, dim)?,
        };
        terms.push(l.abs() * w);
    }
    Ok(par::exact_sum(terms))
}

/// `sum_k ∫ |f_k| ln+(min(|f_k|, |k|) / mu_k) / ln(e + |k|)`, with `|k|`
/// replaced by `max(|k|, 1)` inside the min.
pub fn min_term_sum(d: &CubeDecomposition) -> f64 {
    min_term_sum_with(d, true)
}

/// As `min_term_sum`; with `include_origin = false` the `k = 0` piece is left out.
pub fn min_term_sum_with(d: &CubeDecomposition, include_origin: bool) -> f64 {
    d.sum_pieces(|p| {
        if !include_origin && p.k.is_origin() {
            return 0.0;
        }
        let kn = p.k.norm();
        let cap = kn.max(1.0);
        let denom = (std::f64::consts::E + kn).ln();
        d.cell_sum(p, |a| a * ln_plus(a.min(cap) / p.mass)) / denom
    })
}

/// Parts of the amalgam sum over heavy pieces (`k != 0`, `mu_k > |k|^{-(n+1)}`)
/// and the rest, with the bounds the heavy/light split predicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmalgamSplit {
    pub heavy: f64,
    pub light: f64,
    /// `(n+1) * log_moment_sum`
    pub heavy_bound: f64,
    /// `sum_k sup_{mu <= c_k} mu ln+(1/mu)` with `c_k = |k|^{-(n+1)}` (`c_0 = 1`),
    /// i.e. `(n+1) |k|^{-(n+1)} ln|k|` once `|k|^{n+1} >= e`
    pub light_bound: f64,
}

fn entropy_cap(cap: f64) -> f64 {
    let inv_e = (-1.0f64).exp();
    if cap <= inv_e {
        cap * ln_plus(1.0 / cap)
    } else {
        inv_e
    }
}

pub fn amalgam_split(d: &CubeDecomposition) -> AmalgamSplit {
    let n1 = d.spec.dim as f64 + 1.0;
    let heavy_k = |p: &Piece| !p.k.is_origin() && p.mass > p.k.norm().powf(-n1);
    let heavy = d.sum_pieces(|p| if heavy_k(p) { p.mass * ln_plus(1.0 / p.mass) } else { 0.0 });
    let light = d.sum_pieces(|p| if heavy_k(p) { 0.0 } else { p.mass * ln_plus(1.0 / p.mass) });
    let light_bound = par::exact_sum(d.pieces.iter().map(|p| {
        let cap = if p.k.is_origin() { 1.0 } else { p.k.norm().powf(-n1) };
        entropy_cap(cap)
    }));
    AmalgamSplit { heavy, light, heavy_bound: n1 * log_moment_sum(d), light_bound }
}

#[derive(Debug, Clone, Serialize)]
pub struct TermRow {
    pub k: String,
    pub mass: f64,
    pub local_llogl: f64,
    pub amalgam: f64,
    pub log_moment: f64,
    pub min_term: f64,
}

pub fn term_table(d: &CubeDecomposition) -> Vec<TermRow> {
    d.nonzero()
        .map(|p| {
            let one = CubeDecomposition { spec: d.spec, pieces: vec![p.clone()] };
            TermRow {
                k: p.k.to_string(),
                mass: p.mass,
                local_llogl: local_llogl_sum(&one),
                amalgam: amalgam_entropy_sum(&one),
                log_moment: log_moment_sum(&one),
                min_term: min_term_sum(&one),
            }
        })
        .collect()
}

pub fn write_terms_csv<W: Write>(d: &CubeDecomposition, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in term_table(d) {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn on(spec: GridSpec, f: impl Fn(f64) -> f64 + Sync + Send) -> SampledFunction {
        SampledFunction::from_fn(spec, move |p| f(p[0])).unwrap()
    }

    fn s1() -> GridSpec {
        GridSpec::new(1, 8, 256).unwrap()
    }

    #[test]
    fn unit_cube() {
        let d = split(&on(s1(), |x| if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 }));
        assert_eq!(d.nonzero().count(), 1);
        assert_eq!(d.masses()[&CubeIndex::origin()], 1.0);
        assert_eq!(local_llogl_sum(&d), 1.0);
        assert_eq!(amalgam_entropy_sum(&d), 0.0);
        assert_eq!(log_moment_sum(&d), 1.0);
        assert_eq!(min_term_sum(&d), 0.0);
    }

    #[test]
    fn zero_function() {
        let d = split(&SampledFunction::zeros(s1()));
        assert!(d.pieces().iter().all(|p| p.mass == 0.0));
        assert_eq!(local_llogl_sum(&d) + amalgam_entropy_sum(&d) + min_term_sum(&d), 0.0);
    }

    #[test]
    fn spike_llogl() {
        let d = split(&on(s1(), |x| if (0.0..1.0 / 256.0).contains(&x) { 256.0 } else { 0.0 }));
        assert!((local_llogl_sum(&d) - (1.0 + 8.0 * LN_2)).abs() < 1e-12);
    }

    #[test]
    fn two_cubes() {
        let f = on(s1(), |x| if (0.0..1.0).contains(&x) || (5.0..6.0).contains(&x) { 1.0 } else { 0.0 });
        assert_eq!(local_llogl_sum(&split(&f)), 2.0);
        let g = on(s1(), |x| if (0.0..2.0).contains(&x) { 0.5 } else { 0.0 });
        assert!((amalgam_entropy_sum(&split(&g)) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn far_sums() {
        let mut l = BTreeMap::new();
        assert_eq!(far_weighted_sum(&l, FarWeight::Log, 1).unwrap(), 0.0);
        l.insert(CubeIndex::origin(), 1.0);
        assert_eq!(far_weighted_sum(&l, FarWeight::Log, 1).unwrap(), 1.0);
        let om = far_weighted_sum(&l, FarWeight::Omega(WeightDescriptor::InvLog), 1).unwrap();
        assert_eq!(om, WeightDescriptor::InvLog.cube_mass(1));
        let mut l = BTreeMap::new();
        l.insert(CubeIndex::d1(100), 1.0);
        let v = far_weighted_sum(&l, FarWeight::Log, 1).unwrap();
        assert!((v - (1.0 + 100f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn log_moment_single_term() {
        let s = GridSpec::new(1, 16, 4).unwrap();
        let d = split(&on(s, |x| if (8.0..9.0).contains(&x) { 1.0 } else { 0.0 }));
        assert!((log_moment_sum(&d) - (1.0 + 8f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn min_term_closed_form() {
        // |k| = 52, t = 32: a single piece of mass 1, so the sum is ln(32)/ln(e+52)
        let s = GridSpec::new(1, 64, 32).unwrap();
        let d = split(&on(s, |x| if (52.0..52.0 + 1.0 / 32.0).contains(&x) { 32.0 } else { 0.0 }));
        let want = 32f64.ln() / (std::f64::consts::E + 52.0).ln();
        assert!((min_term_sum(&d) - want).abs() < 1e-14);
        let unit = split(&on(s, |x| if (-7.0..-6.0).contains(&x) { 1.0 } else { 0.0 }));
        assert_eq!(min_term_sum(&unit), 0.0);
    }

    #[test]
    fn reassembly_and_masses() {
        let f = on(s1(), |x| (x * 3.0).sin() * (x.abs() < 5.0) as i32 as f64);
        let d = split(&f);
        assert_eq!(d.reassemble(), f);
        assert!((d.total_mass() - f.l1_norm()).abs() <= 1e-12 * f.l1_norm());
    }

    #[test]
    fn terms_csv_has_rows() {
        let f = on(s1(), |x| if (0.0..2.0).contains(&x) { 0.5 } else { 0.0 });
        let mut buf = Vec::new();
        write_terms_csv(&split(&f), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("k,mass,"));
    }
}
