//! Contributions of analytic power-log tails outside the box.
//!
//! With `|x| = e^u` the radial measure becomes `S(r) r du`; beyond `u = 8`
//! the substitution `u = e^v` follows the slow log-scale decay. Everything is
//! evaluated through logarithms so radii like `exp(exp(40))` stay finite.

use std::f64::consts::{PI, SQRT_2};

use super::psi::Radial;
use super::weight::WeightDescriptor;
use super::{MusielakKind, MusielakSpec};
use crate::grid::TailDescriptor;
use crate::quad;

const V_MAX: f64 = 700.0;

/// Whether `∫_{|x|>R} Phi(x, f(x)) dx` is finite for the tail profile.
pub fn tail_is_finite(spec: &MusielakSpec, tail: &TailDescriptor, dim: usize) -> bool {
    let n = dim as f64;
    let (mut alpha, mut beta) = (tail.alpha, tail.beta);
    match spec.kind {
        MusielakKind::SteinGlobal => beta -= 1.0,
        MusielakKind::PsiLog | MusielakKind::PsiLogLuxemburg => beta += 1.0,
        MusielakKind::WeightedL1 => match spec.weight() {
            WeightDescriptor::One => {}
            WeightDescriptor::InvLog => beta += 1.0,
            WeightDescriptor::Power { sigma } => alpha += sigma,
        },
        MusielakKind::L1 | MusielakKind::LlogL | MusielakKind::LogLogGlobal | MusielakKind::EqLogLog => {}
    }
    if tail.amp == 0.0 {
        return true;
    }
    alpha > n || (alpha == n && beta > 1.0)
}

/// `∫ Phi(x, f(x)) dx` over points outside the box `[-R, R)^n` with
/// `ln|x| < ln_outer` (`+inf` for the whole exterior).
pub fn tail_integral(spec: &MusielakSpec, tail: &TailDescriptor, dim: usize, box_radius: f64, ln_outer: f64) -> f64 {
    if tail.amp == 0.0 {
        return 0.0;
    }
    if ln_outer == f64::INFINITY && !tail_is_finite(spec, tail, dim) {
        return f64::INFINITY;
    }
    let w = spec.weight();
    let kind = spec.kind;
    tail_integral_with(tail, dim, box_radius, ln_outer, |x, ln_t| {
        let t = ln_t.exp();
        if t == 0.0 {
            // below the smallest double: Phi(x,t) ~ t * factor as t -> 0
            kind.integrand(x, f64::MIN_POSITIVE, &w) / f64::MIN_POSITIVE
        } else {
            kind.integrand(x, t, &w) / t
        }
    })
}

/// Exterior integral of `f(x) * ratio(x, ln f(x))`, where `ratio` is the
/// integrand divided by its magnitude argument.
pub fn tail_integral_with<G: Fn(Radial, f64) -> f64>(
    tail: &TailDescriptor,
    dim: usize,
    box_radius: f64,
    ln_outer: f64,
    ratio: G,
) -> f64 {
    if tail.amp == 0.0 {
        return 0.0;
    }
    let u0 = box_radius.ln();
    if ln_outer <= u0 {
        return 0.0;
    }
    // integrand per unit u = ln r
    let g = |u: f64| {
        let x = Radial::from_ln(u);
        let ln_f = tail.ln_eval(u);
        let ln_arc = match dim {
            1 => 2f64.ln(),
            _ => {
                let arc = if u < u0 + SQRT_2.ln() { 8.0 * (box_radius * (-u).exp()).min(1.0).acos() } else { 2.0 * PI };
                if arc <= 0.0 {
                    return 0.0;
                }
                arc.ln()
            }
        };
        // f(r) r^n, without forming r^n
        let ln_mass = ln_arc + tail.ln_eval_times_power(u, dim as f64);
        ratio(x, ln_f) * ln_mass.exp()
    };
    let mut parts = Vec::new();
    let mut lo = u0;
    if dim == 2 {
        let kink = (u0 + SQRT_2.ln()).min(ln_outer);
        parts.push(quad::integrate(&g, lo, kink, 1e-10));
        lo = kink;
    }
    let u_switch = lo.max(8.0).min(ln_outer);
    parts.push(quad::integrate_panels(&g, lo, u_switch, 1.0, 1e-10));
    if ln_outer > u_switch {
        let gv = |v: f64| {
            let u = v.exp();
            g(u) * u
        };
        let (v0, v1) = (u_switch.ln(), ln_outer.ln().min(V_MAX));
        let mut v = v0;
        let mut quiet = 0;
        while v < v1 {
            let hi = (v + 0.5).min(v1);
            let part = quad::integrate(&gv, v, hi, 1e-10);
            parts.push(part);
            let total: f64 = parts.iter().sum();
            if ln_outer == f64::INFINITY && part.abs() <= 1e-13 * total.abs() {
                quiet += 1;
                if quiet >= 6 {
                    break;
                }
            } else {
                quiet = 0;
            }
            v = hi;
        }
    }
    crate::par::exact_sum(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    #[test]
    fn matches_direct_quadrature_in_1d() {
        let tail = TailDescriptor { amp: 1.0, alpha: 1.0, beta: 3.0 };
        let spec = MusielakSpec::new(MusielakKind::L1);
        let v = tail_integral(&spec, &tail, 1, 4.0, 6f64.ln() * 3.0);
        let direct = 2.0 * quad::integrate(&|r: f64| tail.eval(r), 4.0, 216.0, 1e-12);
        assert!((v - direct).abs() < 1e-9 * direct, "{v} {direct}");
    }

    #[test]
    fn infinite_tail_closed_form() {
        // 2 ∫_R^∞ dr / ((1+r) ln(e+r)^2) is close to 2/ln(R) for large R
        let tail = TailDescriptor { amp: 1.0, alpha: 1.0, beta: 2.0 };
        let spec = MusielakSpec::new(MusielakKind::L1);
        let v = tail_integral(&spec, &tail, 1, 1e6, f64::INFINITY);
        let approx = 2.0 / (1e6f64).ln();
        assert!((v / approx - 1.0).abs() < 0.01, "{v} {approx}");
    }

    #[test]
    fn divergence_rules() {
        let slow = |beta| TailDescriptor { amp: 1.0, alpha: 1.0, beta };
        let l1 = MusielakSpec::new(MusielakKind::L1);
        let stein = MusielakSpec::new(MusielakKind::SteinGlobal);
        let psi = MusielakSpec::new(MusielakKind::PsiLog);
        assert!(tail_is_finite(&l1, &slow(1.5), 1));
        assert!(!tail_is_finite(&stein, &slow(1.5), 1));
        assert!(tail_is_finite(&stein, &slow(3.0), 1));
        assert!(!tail_is_finite(&l1, &slow(1.0), 1));
        assert!(tail_is_finite(&psi, &slow(1.0), 1));
        assert!(tail_integral(&stein, &slow(1.5), 1, 8.0, f64::INFINITY).is_infinite());
    }

    #[test]
    fn plane_exterior_of_square() {
        let tail = TailDescriptor { amp: 1.0, alpha: 3.0, beta: 0.0 };
        let spec = MusielakSpec::new(MusielakKind::L1);
        let v = tail_integral(&spec, &tail, 2, 2.0, f64::INFINITY);
        // brute force: full plane minus the square, radial integral minus square integral
        let full = 2.0 * PI * quad::integrate_to_infinity(&|r: f64| r * (1.0 + r).powi(-3), 0.0, 1e-10, 400).unwrap();
        let inner = |y: f64| quad::integrate(&|x: f64| (1.0 + x.hypot(y)).powi(-3), -2.0, 2.0, 1e-12);
        let square = quad::integrate(&inner, -2.0, 2.0, 1e-11);
        assert!((v - (full - square)).abs() < 1e-7, "{v} {}", full - square);
    }
}
