use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::grid::{ln_e_plus_exp, norm, Point};
use crate::quad;

/// `max(ln t, 0)`, with `ln_plus(0) = 0`.
pub fn ln_plus(t: f64) -> f64 {
    if t > 1.0 {
        t.ln()
    } else {
        0.0
    }
}

/// `|x|` in the forms the integrands need, valid even when `|x|` overflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radial {
    /// `ln |x|`, `-inf` at the origin
    pub ln_abs: f64,
    /// `ln(e + |x|)`
    pub ln_e: f64,
}

impl Radial {
    pub fn from_abs(r: f64) -> Self {
        Radial { ln_abs: r.ln(), ln_e: (E + r).ln() }
    }

    pub fn from_ln(l: f64) -> Self {
        Radial { ln_abs: l, ln_e: ln_e_plus_exp(l) }
    }

    pub fn of_point(x: &Point) -> Self {
        Radial::from_abs(norm(x))
    }

    pub fn ln_plus(&self) -> f64 {
        self.ln_abs.max(0.0)
    }
}

/// `t / (ln(e+t) + ln(e+|x|))`
pub fn psi_bar(x: Radial, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    t / ((E + t).ln() + x.ln_e)
}

/// `t / (1 + ln+ t + ln+ |x|)`, the first form of the function.
pub fn psi_original(x: Radial, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    t / (1.0 + ln_plus(t) + x.ln_plus())
}

pub fn psi_pointwise(x: &Point, t: f64) -> f64 {
    psi_bar(Radial::of_point(x), t)
}

/// `d/dt psi_bar(x, t)`
pub fn psi_derivative(x: Radial, t: f64) -> f64 {
    let d = (E + t).ln() + x.ln_e;
    (d - t / (E + t)) / (d * d)
}

/// `psi(x,t)/t`, continuous at `t = 0`.
fn psi_over_t(x: Radial, t: f64) -> f64 {
    1.0 / ((E + t).ln() + x.ln_e)
}

/// Checks `(1/2) psi/t <= d psi/dt <= psi/t` by a centered difference with
/// step `1e-4 max(t, 1)` and 1% slack.
pub fn psi_derivative_bounds_check(x: &Point, t: f64) -> bool {
    let r = Radial::of_point(x);
    let step = 1e-4 * t.max(1.0);
    let d = (psi_bar_ext(r, t + step) - psi_bar_ext(r, t - step)) / (2.0 * step);
    let q = psi_over_t(r, t);
    0.5 * q * 0.99 <= d && d <= q * 1.01
}

/// The closed form continued to `t > 1 - e`, used by the difference quotient.
fn psi_bar_ext(x: Radial, t: f64) -> f64 {
    t / ((E + t).ln() + x.ln_e)
}

/// `∫_a^b psi_bar(x, s) / s^2 ds` to about `1e-9` relative accuracy.
pub fn psi_tail_integral(x: &Point, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a <= b && b.is_finite()) {
        return Err(Error::InvalidRange(a, b));
    }
    if a == b {
        return Ok(0.0);
    }
    let le = Radial::of_point(x).ln_e;
    // s = e^u turns the integrand into 1 / (ln(e + e^u) + ln(e+|x|))
    let g = |u: f64| 1.0 / (ln_e_plus_exp(u) + le);
    Ok(quad::integrate_panels(&g, a.ln(), b.ln(), 2.0, 1e-10))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let o = Radial::from_abs(0.0);
        assert_eq!(psi_bar(o, 0.0), 0.0);
        let t = E * E - E;
        assert!((psi_bar(o, t) - t / 3.0).abs() < 1e-14);
        assert_eq!(ln_plus(0.0), 0.0);
        assert_eq!(ln_plus(0.5), 0.0);
    }

    #[test]
    fn derivative_matches_difference() {
        let x = Radial::from_abs(3.0);
        for t in [0.0, 0.5, 7.0, 1e5] {
            let s = 1e-5 * f64::max(t, 1.0);
            let fd = (psi_bar_ext(x, t + s) - psi_bar_ext(x, t - s)) / (2.0 * s);
            assert!((fd - psi_derivative(x, t)).abs() < 1e-8);
        }
    }

    #[test]
    fn tail_integral_rejects_bad_range() {
        assert!(psi_tail_integral(&[0.0, 0.0], 2.0, 1.0).is_err());
        assert!(psi_tail_integral(&[0.0, 0.0], 0.0, 1.0).is_err());
        assert_eq!(psi_tail_integral(&[0.0, 0.0], 1.5, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn tail_integral_exact_case() {
        // at s << 1 and large |x| the integrand is nearly 1/(s (1 + L))
        let v = psi_tail_integral(&[0.0, 0.0], 0.5, 1.0).unwrap();
        let direct = quad::integrate(&|s: f64| psi_bar(Radial::from_abs(0.0), s) / (s * s), 0.5, 1.0, 1e-12);
        assert!((v - direct).abs() < 1e-10);
    }
}
