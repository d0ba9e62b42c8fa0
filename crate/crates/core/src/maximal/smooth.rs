//! Smooth maximal function `sup_t |phi_t * f|`. In one dimension the
//! convolution is exact for the piecewise-constant representative (weights are
//! differences of the kernel's distribution function); in the plane the
//! kernel is sampled on a 4x4 subcell grid and renormalized.

use super::kernel::BumpKernel;
use super::radii::RadiusSet;
use crate::error::{Error, Result};
use crate::grid::SampledFunction;
use crate::par;

const SUB: usize = 4;
/// stencils longer than this are applied by FFT
const FFT_MIN_WIDTH: usize = 96;

enum Plan {
    /// weights for offsets `-half..=half`
    Line { half: i64, w: Vec<f64> },
    /// jump positions (cell edges, in cell units) and jump sizes
    Jumps { t_cells: f64 },
    /// weights for offsets in `[-half, half]^2`, row-major
    Plane { half: i64, w: Vec<f64> },
}

struct Conv<'a> {
    f: &'a SampledFunction,
    kernel: &'a BumpKernel,
    jumps: Vec<(f64, f64)>,
    /// support bounding box in cell indices, per axis
    support: Option<[(i64, i64); 2]>,
}

impl<'a> Conv<'a> {
    fn new(f: &'a SampledFunction, kernel: &'a BumpKernel) -> Result<Self> {
        if kernel.dim() != f.spec().dim {
            return Err(Error::InvalidParameter(format!(
                "kernel is {}-dimensional, function is {}-dimensional",
                kernel.dim(),
                f.spec().dim
            )));
        }
        let spec = f.spec();
        let vals = f.values();
        let mut jumps = Vec::new();
        if spec.dim == 1 {
            let mut prev = 0.0;
            for (i, &v) in vals.iter().chain(std::iter::once(&0.0)).enumerate() {
                if v != prev {
                    jumps.push((i as f64, v - prev));
                    prev = v;
                }
            }
        }
        let mut support: Option<[(i64, i64); 2]> = None;
        for (i, &v) in vals.iter().enumerate() {
            if v != 0.0 {
                let [x, y] = spec.multi_index(i);
                let (x, y) = (x as i64, y as i64);
                support = Some(match support {
                    None => [(x, x), (y, y)],
                    Some([(x0, x1), (y0, y1)]) => [(x0.min(x), x1.max(x)), (y0.min(y), y1.max(y))],
                });
            }
        }
        Ok(Conv { f, kernel, jumps, support })
    }

    fn plan(&self, t: f64) -> Plan {
        let h = self.f.spec().step();
        let t_cells = t / h;
        if self.f.spec().dim == 1 {
            let n = self.f.spec().cells_per_axis();
            let width = 2 * ((t_cells - 0.5).ceil().max(0.0) as usize).min(n) + 1;
            let few_jumps = if width < FFT_MIN_WIDTH { width > self.jumps.len() } else { self.jumps.len() < 32 };
            if few_jumps {
                Plan::Jumps { t_cells }
            } else {
                self.line_plan(t_cells)
            }
        } else {
            let half = (t_cells + 0.5).ceil() as i64;
            let mut w = Vec::with_capacity(((2 * half + 1) * (2 * half + 1)) as usize);
            for dj in -half..=half {
                for di in -half..=half {
                    let mut acc = 0.0;
                    for a in 0..SUB {
                        let x = di as f64 + (a as f64 + 0.5) / SUB as f64 - 0.5;
                        for b in 0..SUB {
                            let y = dj as f64 + (b as f64 + 0.5) / SUB as f64 - 0.5;
                            acc += self.kernel.value(x.hypot(y) / t_cells);
                        }
                    }
                    w.push(acc);
                }
            }
            let total = par::exact_sum(w.iter().copied());
            w.iter_mut().for_each(|v| *v /= total);
            Plan::Plane { half, w }
        }
    }

    fn line_plan(&self, t_cells: f64) -> Plan {
        let n = self.f.spec().cells_per_axis() as i64;
        let half = ((t_cells - 0.5).ceil().max(0.0) as i64).min(n);
        let w = (-half..=half)
            .map(|d| self.kernel.cdf((d as f64 + 0.5) / t_cells) - self.kernel.cdf((d as f64 - 0.5) / t_cells))
            .collect();
        Plan::Line { half, w }
    }

    fn reach(plan: &Plan) -> i64 {
        match plan {
            Plan::Line { half, .. } | Plan::Plane { half, .. } => *half,
            Plan::Jumps { t_cells } => (t_cells + 0.5).ceil() as i64,
        }
    }

    fn eval(&self, plan: &Plan, i: usize) -> f64 {
        let spec = self.f.spec();
        let n = spec.cells_per_axis() as i64;
        let vals = self.f.values();
        let Some(sup) = self.support else { return 0.0 };
        let [x, y] = spec.multi_index(i);
        let (x, y) = (x as i64, y as i64);
        let r = Self::reach(plan);
        if x < sup[0].0 - r || x > sup[0].1 + r || (spec.dim == 2 && (y < sup[1].0 - r || y > sup[1].1 + r)) {
            return 0.0;
        }
        match plan {
            Plan::Line { half, w } => {
                let mut acc = 0.0;
                for (k, wk) in w.iter().enumerate() {
                    let j = x - (k as i64 - half);
                    if (0..n).contains(&j) {
                        acc += wk * vals[j as usize];
                    }
                }
                acc
            }
            Plan::Jumps { t_cells } => {
                let c = x as f64 + 0.5;
                self.jumps.iter().map(|&(e, d)| d * self.kernel.cdf((c - e) / t_cells)).sum()
            }
            Plan::Plane { half, w } => {
                let half = *half;
                let side = 2 * half + 1;
                let mut acc = 0.0;
                for dj in -half..=half {
                    let yy = y - dj;
                    if !(0..n).contains(&yy) {
                        continue;
                    }
                    let row = (dj + half) * side;
                    for di in -half..=half {
                        let xx = x - di;
                        if (0..n).contains(&xx) {
                            acc += w[(row + di + half) as usize] * vals[(yy * n + xx) as usize];
                        }
                    }
                }
                acc
            }
        }
    }
}

/// `sum_k w[k] v[x - (k - half)]` for every `x`, by zero-padded FFT.
fn fft_line(v: &[f64], w: &[f64], half: usize) -> Vec<f64> {
    use rustfft::num_complex::Complex;
    let size = (v.len() + w.len()).next_power_of_two();
    let mut planner = rustfft::FftPlanner::<f64>::new();
    let (fwd, inv) = (planner.plan_fft_forward(size), planner.plan_fft_inverse(size));
    let pad = |x: &[f64]| {
        let mut b: Vec<Complex<f64>> = x.iter().map(|&r| Complex::new(r, 0.0)).collect();
        b.resize(size, Complex::new(0.0, 0.0));
        b
    };
    let (mut a, mut b) = (pad(v), pad(w));
    fwd.process(&mut a);
    fwd.process(&mut b);
    a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);
    inv.process(&mut a);
    let scale = 1.0 / size as f64;
    (0..v.len()).map(|x| a[x + half].re * scale).collect()
}

impl Conv<'_> {
    /// The whole convolution for one plan.
    fn apply(&self, plan: &Plan) -> Vec<f64> {
        match plan {
            Plan::Line { half, w } if w.len() >= FFT_MIN_WIDTH && self.support.is_some() => {
                fft_line(self.f.values(), w, *half as usize)
            }
            _ => par::map_range(self.f.spec().len(), |i| self.eval(plan, i)),
        }
    }
}

/// `phi_t * f` at every cell center.
pub fn convolve(f: &SampledFunction, kernel: &BumpKernel, t: f64) -> Result<Vec<f64>> {
    let h = f.spec().step();
    if t < h {
        return Err(Error::UnresolvedScale { scale: t, step: h });
    }
    let conv = Conv::new(f, kernel)?;
    let plan = conv.plan(t);
    Ok(conv.apply(&plan))
}

/// `M_phi f = sup_t |phi_t * f|` over `scales`; every scale must be at least `h`.
pub fn smooth_max(f: &SampledFunction, kernel: &BumpKernel, scales: &RadiusSet) -> Result<SampledFunction> {
    if scales.is_empty() {
        return Err(Error::EmptyRadiusSet);
    }
    let h = f.spec().step();
    if let Some(&t) = scales.radii().iter().find(|&&t| t < h) {
        return Err(Error::UnresolvedScale { scale: t, step: h });
    }
    let conv = Conv::new(f, kernel)?;
    let mut best = vec![0.0f64; f.spec().len()];
    for &t in scales.radii() {
        let c = conv.apply(&conv.plan(t));
        best.iter_mut().zip(&c).for_each(|(b, v)| *b = b.max(v.abs()));
    }
    SampledFunction::new(*f.spec(), best)
}

/// `M_phi^loc f` over quarter-octave scales from `h` up to 1.
pub fn smooth_local_max(f: &SampledFunction, kernel: &BumpKernel) -> Result<SampledFunction> {
    smooth_max(f, kernel, &RadiusSet::quarter_octave(f.spec(), true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::maximal::KernelProfile;

    #[test]
    fn tent_on_half_interval() {
        let s = GridSpec::new(1, 4, 64).unwrap();
        let f = SampledFunction::from_fn(s, |p| if (-0.5..0.5).contains(&p[0]) { 1.0 } else { 0.0 }).unwrap();
        let k = BumpKernel::new(KernelProfile::Tent, 1);
        let c = convolve(&f, &k, 1.0).unwrap();
        // the cell centered at h/2: analytic value at x is 3/4 - x^2
        let i = s.locate(&[1.0 / 128.0, 0.0]).unwrap();
        let x: f64 = 1.0 / 128.0;
        assert!((c[i] - (0.75 - x * x)).abs() < 1e-12, "{}", c[i]);
    }

    #[test]
    fn stencil_and_jump_forms_agree() {
        let s = GridSpec::new(1, 4, 8).unwrap();
        let f = SampledFunction::from_fn(s, |p| ((p[0] * 2.0).floor()).sin()).unwrap();
        let k = BumpKernel::new(KernelProfile::Bump, 1);
        let conv = Conv::new(&f, &k).unwrap();
        for t in [0.125, 0.4, 1.7] {
            let line = conv.line_plan(t / s.step());
            let jumps = Plan::Jumps { t_cells: t / s.step() };
            for i in 0..s.len() {
                assert!((conv.eval(&line, i) - conv.eval(&jumps, i)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fft_matches_direct_stencil() {
        let s = GridSpec::new(1, 8, 32).unwrap();
        let f = SampledFunction::from_fn(s, |p| (p[0] * 3.0).cos() * (-p[0].abs()).exp()).unwrap();
        let k = BumpKernel::new(KernelProfile::Bump, 1);
        let conv = Conv::new(&f, &k).unwrap();
        let plan = conv.line_plan(5.0 / s.step());
        let fast = conv.apply(&plan);
        for (i, v) in fast.iter().enumerate() {
            assert!((v - conv.eval(&plan, i)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_subcell_scale() {
        let s = GridSpec::new(1, 2, 8).unwrap();
        let f = SampledFunction::zeros(s);
        let k = BumpKernel::new(KernelProfile::Tent, 1);
        let scales = RadiusSet::new(vec![0.05, 0.5], false, true).unwrap();
        assert!(matches!(smooth_max(&f, &k, &scales), Err(Error::UnresolvedScale { .. })));
    }

    #[test]
    fn plane_weights_preserve_constants() {
        let s = GridSpec::new(2, 3, 4).unwrap();
        let one = SampledFunction::from_fn(s, |_| 1.0).unwrap();
        let k = BumpKernel::new(KernelProfile::Bump, 2);
        let c = convolve(&one, &k, 0.5).unwrap();
        let i = s.locate(&[0.1, 0.1]).unwrap();
        assert!((c[i] - 1.0).abs() < 1e-12);
    }
}
