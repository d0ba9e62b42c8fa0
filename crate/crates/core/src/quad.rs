//! Adaptive wrappers around double-exponential quadrature.

const MAX_INTERVALS: usize = 512;

/// `∫_a^b f` to roughly `rel_tol` relative accuracy, bisecting the interval
/// with the worst error estimate until the total estimate is small enough.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let first = quadrature::integrate(f, a, b, 1e-14);
    let mut parts: Vec<(f64, f64, quadrature::Output)> = vec![(a, b, first)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2.integral).sum();
        let err: f64 = parts.iter().map(|p| p.2.error_estimate).sum();
        let tol = (rel_tol * total.abs()).max(1e-300);
        if err <= tol || parts.len() >= MAX_INTERVALS {
            return crate::par::exact_sum(parts.iter().map(|p| p.2.integral));
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error_estimate.total_cmp(&y.1 .2.error_estimate))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return crate::par::exact_sum(parts.iter().map(|p| p.2.integral));
        }
        parts.push((lo, mid, quadrature::integrate(f, lo, mid, 1e-14)));
        parts.push((mid, hi, quadrature::integrate(f, mid, hi, 1e-14)));
    }
}

/// `∫_a^b f` over unit-width panels, each integrated adaptively.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, width: f64, rel_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let n = ((b - a) / width).ceil().max(1.0) as usize;
    let w = (b - a) / n as f64;
    let parts: Vec<f64> = (0..n)
        .map(|i| {
            let lo = a + i as f64 * w;
            let hi = if i + 1 == n { b } else { lo + w };
            integrate(f, lo, hi, rel_tol)
        })
        .collect();
    crate::par::exact_sum(parts)
}

/// `∫_a^∞ f` for integrands decaying at least like `x^{-1-ε}`: panels of
/// doubling width until the running contribution becomes negligible.
/// Returns `None` if it fails to settle within `max_panels`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: &F, a: f64, rel_tol: f64, max_panels: usize) -> Option<f64> {
    let mut total = 0.0;
    let mut lo = a;
    let mut w = a.abs().max(1.0);
    let mut quiet = 0;
    for _ in 0..max_panels {
        let hi = lo + w;
        let part = integrate(f, lo, hi, rel_tol * 0.1);
        total += part;
        if part.abs() <= rel_tol * 1e-2 * total.abs() {
            quiet += 1;
            if quiet >= 4 {
                return Some(total);
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        w *= 2.0;
        if !lo.is_finite() {
            break;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(&|x: f64| 3.0 * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn log_endpoint() {
        let v = integrate(&|x: f64| x.ln(), 0.0, 1.0, 1e-10);
        assert!((v + 1.0).abs() < 1e-9);
    }

    #[test]
    fn semi_infinite_power() {
        let v = integrate_to_infinity(&|x: f64| x.powi(-2), 1.0, 1e-9, 200).unwrap();
        assert!((v - 1.0).abs() < 1e-7, "{v}");
    }

    #[test]
    fn panels_sum() {
        let v = integrate_panels(&|x: f64| x.cos(), 0.0, 10.0, 1.0, 1e-12);
        assert!((v - 10f64.sin()).abs() < 1e-11);
    }
}
