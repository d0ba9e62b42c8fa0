use super::psi::{psi_bar, Radial};
use super::tail::{tail_integral, tail_is_finite};
use super::{MusielakKind, MusielakSpec};
use crate::grid::SampledFunction;
use crate::par;

const REL_WIDTH: f64 = 1e-6;

/// `∫ psi_bar(x, |f|/lambda) dx`, including the analytic tail.
pub fn psi_modular(f: &SampledFunction, lambda: f64) -> f64 {
    let g = *f.spec();
    let terms = par::map_range(g.len(), |i| {
        let v = f.values()[i].abs();
        if v == 0.0 {
            0.0
        } else {
            psi_bar(Radial::of_point(&g.center(i)), v / lambda)
        }
    });
    let body = par::exact_sum(terms) * g.cell_volume();
    match f.tail() {
        Some(t) => {
            let spec = MusielakSpec::new(MusielakKind::PsiLog);
            body + tail_integral(&spec, &t.scaled(1.0 / lambda), g.dim, g.radius(), f64::INFINITY)
        }
        None => body,
    }
}

/// `inf { lambda > 0 : ∫ psi_bar(x, |f|/lambda) <= 1 }` by doubling then bisection.
/// The returned value always satisfies the modular inequality.
pub fn luxemburg_quasinorm(f: &SampledFunction) -> f64 {
    if f.values().iter().all(|v| *v == 0.0) && f.tail().is_none() {
        return 0.0;
    }
    if let Some(t) = f.tail() {
        if !tail_is_finite(&MusielakSpec::new(MusielakKind::PsiLog), t, f.spec().dim) {
            return f64::INFINITY;
        }
    }
    let g = |lambda: f64| psi_modular(f, lambda);
    let (mut lo, mut hi) = (1.0, 1.0);
    if g(1.0) > 1.0 {
        while g(hi) > 1.0 {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
    } else {
        while g(lo) <= 1.0 {
            hi = lo;
            lo *= 0.5;
            if lo == 0.0 {
                return 0.0;
            }
        }
    }
    while (hi - lo) > REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}
