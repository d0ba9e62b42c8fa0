//! Checks in exact arithmetic: the dyadic maximal function against brute
//! force, and the weak-type level-set inequality on integer step functions.

use super::report::{Declared, Report, ReportPoint};
use crate::error::Result;
use crate::grid::GridSpec;
use crate::maximal::dyadic_max;
use crate::par;
use crate::testlib::random::{random_step_counts, rng};
use crate::SampledFunction;

/// Maximal dyadic average at each cell of a 1-D step function on `[0,1)`,
/// by enumerating every dyadic interval containing the cell.
pub fn brute_dyadic_max(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let mut best = f64::NEG_INFINITY;
            let mut len = 1;
            while len <= n {
                let start = i / len * len;
                let avg = v[start..start + len].iter().map(|x| x.abs()).sum::<f64>() / len as f64;
                best = best.max(avg);
                len *= 2;
            }
            best
        })
        .collect()
}

/// `dyadic_max` versus `brute_dyadic_max` on random step functions with
/// `cells` cells on the unit interval. Values are small integers, so every
/// average is a dyadic rational and equality is required bit for bit.
pub fn dyadic_exactness(count: usize, cells: u32, seed: u64) -> Result<Report> {
    let spec = GridSpec::new(1, 1, cells)?;
    let offset = spec.cells_per_unit as usize * spec.box_radius as usize;
    let mut r = rng(seed);
    let inputs: Vec<Vec<u64>> = (0..count).map(|_| random_step_counts(&mut r, cells as usize, 64)).collect();
    let rows = par::map_slice(&inputs, |a| -> Result<ReportPoint> {
        let local: Vec<f64> = a.iter().map(|&x| x as f64).collect();
        let mut values = vec![0.0; spec.len()];
        values[offset..offset + local.len()].copy_from_slice(&local);
        let m = dyadic_max(&SampledFunction::new(spec, values)?)?;
        let got = &m.values()[offset..offset + local.len()];
        let want = brute_dyadic_max(&local);
        let mismatches = got.iter().zip(&want).filter(|(g, w)| g != w).count();
        Ok(ReportPoint::new(0.0, mismatches as f64, 0.0, mismatches == 0))
    });
    let mut points = rows.into_iter().collect::<Result<Vec<_>>>()?;
    for (i, p) in points.iter_mut().enumerate() {
        p.param = i as f64;
    }
    Ok(Report::new("dyadic_exactness", "function", points, Declared::Points).with_seed(seed))
}

/// Outcome of the level-set inequality for one function at one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCheck {
    pub s: f64,
    /// `|{M^d v > s}|`
    pub lhs: f64,
    /// `(1/s) ∫_{|v|>s} |v|`
    pub rhs: f64,
    /// `lhs >= 2^-n rhs`, decided in integers
    pub holds: bool,
    /// `lhs >= rhs`, decided in integers
    pub holds_without_constant: bool,
}

/// Level checks for the step function with integer cell values `a` on `[0,1)`,
/// normalized to unit mass, at levels `s` (not exactly attained averages).
///
/// With `A = sum a`, `N` cells and `v = a N / A`, the level `s` maps to
/// `sigma = s A / N = P / Q`, and the inequality reads
/// `2^n P #{D > sigma} >= Q sum_{a_i > sigma} a_i`, where `D` is the maximal
/// dyadic average of `a`.
pub fn level_checks(a: &[u64], levels: &[f64]) -> Vec<LevelCheck> {
    const Q: i128 = 1 << 40;
    let n = a.len();
    let total: u64 = a.iter().sum();
    // all dyadic intervals as (start, len, sum)
    let mut intervals = Vec::new();
    let mut len = 1;
    while len <= n {
        for start in (0..n).step_by(len) {
            intervals.push((start, len, a[start..start + len].iter().sum::<u64>() as i128));
        }
        len *= 2;
    }
    levels
        .iter()
        .map(|&s| {
            let sigma = s * total as f64 / n as f64;
            let p = (sigma * Q as f64).ceil() as i128;
            // cell i is in {D > sigma} iff some dyadic J containing i has sum_J Q > P |J|
            let mut above = vec![false; n];
            for &(start, len, sum) in &intervals {
                if sum * Q > p * len as i128 {
                    above[start..start + len].iter_mut().for_each(|b| *b = true);
                }
            }
            let count = above.iter().filter(|&&b| b).count() as i128;
            let heavy: i128 = a.iter().filter(|&&x| x as i128 * Q > p).map(|&x| x as i128).sum();
            let lhs = count as f64 / n as f64;
            let rhs = heavy as f64 / total as f64 / s;
            LevelCheck {
                s,
                lhs,
                rhs,
                holds: 2 * p * count >= Q * heavy,
                holds_without_constant: p * count >= Q * heavy,
            }
        })
        .collect()
}

/// `levels` log-spaced points in `(1, max v]`, each nudged up by `1e-9`.
pub fn level_grid(max_v: f64, levels: usize) -> Vec<f64> {
    (1..=levels).map(|j| max_v.powf(j as f64 / levels as f64) + 1e-9).filter(|&s| s > 1.0).collect()
}

/// The level-set inequality with constant `2^-n` over `count` random normalized
/// step functions on 16 cells, 20 levels each. Violations of the constant-free
/// form are counted in the notes.
pub fn stein_inequality_suite(count: usize, seed: u64) -> Report {
    const CELLS: usize = 16;
    const LEVELS: usize = 20;
    let mut r = rng(seed);
    let inputs: Vec<Vec<u64>> = (0..count).map(|_| random_step_counts(&mut r, CELLS, 32)).collect();
    let per_fn = par::map_slice(&inputs, |a| {
        let total: u64 = a.iter().sum();
        let max_v = *a.iter().max().unwrap() as f64 * CELLS as f64 / total as f64;
        let mut levels = level_grid(max_v, LEVELS);
        if levels.is_empty() {
            levels.push(1.0 + 1e-9);
        }
        level_checks(a, &levels)
    });
    let literal = per_fn.iter().flatten().filter(|c| !c.holds_without_constant).count();
    let points = per_fn.into_iter().flatten().map(|c| ReportPoint::new(c.s, c.lhs, 0.5 * c.rhs, c.holds)).collect();
    Report::new("stein_inequality", "s", points, Declared::Points)
        .with_seed(seed)
        .note(format!("violations without the 1/2 factor: {literal}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_small() {
        assert_eq!(brute_dyadic_max(&[4.0, 0.0, 0.0, 0.0]), vec![4.0, 2.0, 1.0, 1.0]);
    }

    #[test]
    fn level_set_counterexample_needs_the_factor() {
        // v = 4 chi_[0,1/4): at s = 3, |{M^d v > 3}| = 1/4 but (1/s) ∫_{v>3} v = 1/3
        let c = level_checks(&[1, 0, 0, 0], &[3.0 + 1e-9])[0];
        assert_eq!(c.lhs, 0.25);
        assert!((c.rhs - 1.0 / 3.0).abs() < 1e-8);
        assert!(!c.holds_without_constant);
        assert!(c.holds);
    }

    #[test]
    fn constant_and_zero() {
        let c = level_checks(&[1, 1, 1, 1], &[1.5]);
        assert_eq!((c[0].lhs, c[0].rhs), (0.0, 0.0));
        assert!(c[0].holds);
    }

    #[test]
    fn suites_are_clean() {
        let r = stein_inequality_suite(30, 7);
        assert!(r.passed(), "{}", r.summary());
        assert!(dyadic_exactness(20, 64, 1).unwrap().passed());
    }
}
