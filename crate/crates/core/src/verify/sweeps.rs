//! Truncation sweeps for the test catalog.
//!
//! Compact families are re-evaluated on boxes `R = 8, ..., 256`. Families with
//! a power-log tail use `R_j = 2^(2^(2^j))`: the grid on `[-4, 4)` plus the
//! analytic tail out to `R_j`, with cube sums replaced by their density
//! surrogates (`mu_k ~ f(k)`). Lacunary sums add exact per-cube terms for
//! `m <= 2^(2^j)`.

use std::f64::consts::LN_2;

use super::growth::{classify_growth, GrowthClass, TruncationSweep};
use crate::decomp::{amalgam_entropy_sum, local_llogl_sum, split};
use crate::error::Result;
use crate::functionals::{eval_truncated, ln_plus, tail_integral_with, Radial};
use crate::grid::{GridSpec, SampledFunction};
use crate::par;
use crate::quad;
use crate::testlib::{Condition, Family, Membership, TestFunction};

pub const OCTAVE_RADII: [u32; 6] = [8, 16, 32, 64, 128, 256];
const TAIL_STEPS: usize = 7;
const LACUNARY_STEPS: usize = 5;
const GRID_RADIUS: u32 = 4;

/// Condition value of a function on its grid box (no tail).
pub fn condition_on_grid(f: &SampledFunction, c: Condition) -> f64 {
    match c.functional() {
        Some(spec) => eval_truncated(&spec, f),
        None => {
            let d = split(f);
            match c {
                Condition::LlogLLocal => local_llogl_sum(&d),
                _ => amalgam_entropy_sum(&d),
            }
        }
    }
}

/// Integrand of the condition divided by `t`, as a function of `ln t`.
fn tail_ratio(c: Condition, x: Radial, ln_t: f64) -> f64 {
    match c.functional() {
        Some(spec) => {
            let w = spec.weight();
            let t = ln_t.exp().max(f64::MIN_POSITIVE);
            spec.kind.integrand(x, t, &w) / t
        }
        None if c == Condition::Amalgam => (-ln_t).max(0.0),
        None => 1.0,
    }
}

/// Zeroes everything outside `[-R, R)^n` and re-grids onto that box.
pub fn truncate(f: &SampledFunction, radius: u32) -> Result<SampledFunction> {
    let spec = *f.spec();
    let r = radius as f64;
    let cut = SampledFunction::new(
        spec,
        f.values()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let x = spec.center(i);
                if (0..spec.dim).all(|a| x[a] >= -r && x[a] < r) {
                    v
                } else {
                    0.0
                }
            })
            .collect(),
    )?;
    cut.rebox(radius)
}

pub fn condition_sweep(tf: &TestFunction, c: Condition, m_base: u32) -> Result<TruncationSweep> {
    let name = format!("{}:{}", tf.id, c);
    let dim = tf.dim;
    match tf.family {
        Family::LacunarySum { p } => lacunary_sweep(name, p, c),
        fam if fam.is_compact() => {
            let m = fam.min_cells_per_unit(dim).max(4);
            let big = fam.materialize(&GridSpec::new(dim, *OCTAVE_RADII.last().unwrap(), m)?)?;
            let values = OCTAVE_RADII
                .iter()
                .map(|&r| Ok(condition_on_grid(&truncate(&big, r)?, c)))
                .collect::<Result<Vec<_>>>()?;
            TruncationSweep::octaves(name, values)
        }
        fam => {
            let tail = fam.tail(dim).expect("non-compact family without tail");
            let f = fam.materialize(&GridSpec::new(dim, GRID_RADIUS, m_base)?)?;
            let body = condition_on_grid(&f, c);
            let ln_radii: Vec<f64> = (0..TAIL_STEPS).map(|j| (2f64).powi(1 << j) * LN_2).collect();
            let values = par::map_slice(&ln_radii, |&l| {
                body + tail_integral_with(&tail, dim, GRID_RADIUS as f64, l, |x, ln_t| tail_ratio(c, x, ln_t))
            });
            TruncationSweep::new(name, ln_radii, values)
        }
    }
}

/// Exact contribution of the piece `m^-p chi_{[2^m, 2^m + 1)}`.
fn lacunary_term(m: u32, p: f64, c: Condition) -> f64 {
    let cm = (m as f64).powf(-p);
    match c {
        Condition::L1 | Condition::LlogLLocal => cm,
        Condition::Amalgam => cm * ln_plus(1.0 / cm),
        _ => {
            let spec = c.functional().unwrap();
            let w = spec.weight();
            let phi = |x: f64| spec.kind.integrand(Radial::from_abs(x), cm, &w);
            if m <= 40 {
                let k = (m as f64).exp2();
                quad::integrate(&phi, k, k + 1.0, 1e-12)
            } else {
                // the integrand is constant to within 2^-80 relative on the cube
                spec.kind.integrand(Radial::from_ln(m as f64 * LN_2), cm, &w)
            }
        }
    }
}

fn lacunary_sweep(name: String, p: f64, c: Condition) -> Result<TruncationSweep> {
    let bounds: Vec<u32> = (0..LACUNARY_STEPS).map(|j| 1u32 << (1u32 << j)).collect();
    let max = *bounds.last().unwrap();
    let terms = par::map_range(max as usize, |i| lacunary_term(i as u32 + 1, p, c));
    let values = bounds.iter().map(|&b| par::exact_sum(terms[..b as usize].iter().copied())).collect();
    let ln_radii = bounds.iter().map(|&b| b as f64 * LN_2).collect();
    TruncationSweep::new(name, ln_radii, values)
}

pub fn membership_of(class: GrowthClass) -> Option<Membership> {
    match class {
        GrowthClass::Convergent => Some(Membership::Finite),
        GrowthClass::LogDivergent | GrowthClass::PolyDivergent => Some(Membership::Divergent),
        GrowthClass::Undecided => None,
    }
}

/// Observed membership class of one catalog entry against one condition.
pub fn classify_condition(tf: &TestFunction, c: Condition, m_base: u32) -> Result<(TruncationSweep, GrowthClass)> {
    let s = condition_sweep(tf, c, m_base)?;
    let class = classify_growth(&s)?;
    Ok((s, class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testlib::catalog;

    fn entry(id: &str) -> TestFunction {
        catalog().entries.into_iter().find(|e| e.id == id).unwrap()
    }

    #[test]
    fn slow_tail_thresholds() {
        for (id, stein) in [("slow_tail_b1.75", GrowthClass::PolyDivergent), ("slow_tail_b3", GrowthClass::Convergent)]
        {
            let (_, c) = classify_condition(&entry(id), Condition::Stein, 16).unwrap();
            assert_eq!(c, stein, "{id}");
        }
        let (s, c) = classify_condition(&entry("slow_tail_b1.25"), Condition::LogLog, 16).unwrap();
        assert_eq!(c, GrowthClass::Convergent, "{s:?}");
    }

    #[test]
    fn lacunary_stein_diverges() {
        let (s, c) = classify_condition(&entry("lacunary_p2"), Condition::Stein, 16).unwrap();
        assert!(c.is_divergent(), "{s:?}");
        let (_, c) = classify_condition(&entry("lacunary_p2"), Condition::L1, 16).unwrap();
        assert_eq!(c, GrowthClass::Convergent);
    }

    #[test]
    fn compact_entries_converge() {
        let (s, c) = classify_condition(&entry("translated_spike_t16_k37"), Condition::Stein, 16).unwrap();
        assert_eq!(c, GrowthClass::Convergent);
        let want = 1.0 + 16f64.ln() + (37.0f64).ln();
        assert!((s.values.last().unwrap() - want).abs() < 0.01, "{s:?}");
    }
}
