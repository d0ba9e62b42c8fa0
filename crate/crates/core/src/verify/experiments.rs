use std::f64::consts::{E, LN_2};

use super::bands;
use super::growth::GrowthClass;
use super::report::{Declared, Report, ReportPoint};
use super::sweeps::{classify_condition, membership_of};
use super::SuiteConfig;
use crate::decomp::{local_llogl_sum, split};
use crate::error::Result;
use crate::functionals::{
    eval_truncated, omega_capital, omega_capital_ln, psi_bar, psi_derivative, psi_derivative_bounds_check,
    psi_tail_integral, tail_integral_with, MusielakKind, MusielakSpec, Radial, WeightDescriptor,
};
use crate::grid::{CubeIndex, GridSpec};
use crate::maximal::{atom_weighted_norm, hl_max, local_max, BumpKernel, RadiusPreset, RadiusSet};
use crate::operators::{atom, h_g_split, t_theta, ThetaFunction};
use crate::par;
use crate::testlib::random::{random_dyadic_function, rng};
use crate::testlib::{catalog, Condition, Family, Membership, TestFunction};

fn code(m: Option<Membership>) -> f64 {
    match m {
        Some(Membership::Finite) => 1.0,
        Some(Membership::Divergent) => 2.0,
        None => 0.0,
    }
}

/// `M chi_{[-1,1)}` against `1/(1+|x|)` at cell centers with `1 < |x| <= 32`.
pub fn hl_oracle(cfg: &SuiteConfig) -> Result<Report> {
    let spec = GridSpec::new(1, 64, cfg.m_base)?;
    let f = Family::Interval { lo: -1.0, hi: 1.0 }.materialize(&spec)?;
    let m = hl_max(&f, &RadiusSet::preset(&spec, cfg.radii, false))?;
    let points = (0..spec.len())
        .filter_map(|i| {
            let x = spec.center(i)[0];
            (x.abs() > 1.0 && x.abs() <= 32.0).then(|| ReportPoint::ratio(x, m.values()[i], 1.0 / (1.0 + x.abs())))
        })
        .collect();
    let tol = match cfg.radii {
        RadiusPreset::QuarterOctave => 0.02,
        RadiusPreset::Dense => 0.002,
    };
    Ok(Report::new(format!("hl_oracle_{}", cfg.radii), "x", points, Declared::Band { lo: 1.0 - tol, hi: 1.0 + tol }))
}

fn psi_grid() -> (Vec<f64>, Vec<f64>) {
    let xs = (0..50).map(|j| 10f64.powf(-3.0 + 11.0 * j as f64 / 49.0)).collect();
    let ts = (0..50).map(|i| (-20.0 + 40.0 * i as f64 / 49.0).exp2()).collect();
    (xs, ts)
}

/// Derivative bounds, doubling and monotonicity of `psi/t` on a 50x50 log grid.
pub fn psi_calculus() -> Vec<Report> {
    let (xs, ts) = psi_grid();
    let mut deriv = Vec::new();
    let mut doubling = Vec::new();
    let mut quotient = Vec::new();
    for &x in &xs {
        let r = Radial::from_abs(x);
        for (i, &t) in ts.iter().enumerate() {
            let p = psi_bar(r, t);
            deriv.push(ReportPoint::new(t, psi_derivative(r, t), p / t, psi_derivative_bounds_check(&[x, 0.0], t)));
            let (a, b) = (psi_bar(r, 2.0 * t), 2.0 * p);
            doubling.push(ReportPoint::new(t, a, b, a <= b));
            if i + 1 < ts.len() {
                let t2 = ts[i + 1];
                let (q2, q1) = (psi_bar(r, t2) / t2, p / t);
                quotient.push(ReportPoint::new(t, q2, q1, q2 <= q1));
            }
        }
    }
    vec![
        Report::new("psi_derivative_bounds", "t", deriv, Declared::Band { lo: 0.5 * 0.99, hi: 1.01 }),
        Report::new("psi_doubling", "t", doubling, Declared::Points),
        Report::new("psi_quotient_monotone", "t", quotient, Declared::Points),
    ]
}

/// `∫ psi(x,s)/s^2` against `ln(1/t)/L` below 1 and `ln(1 + ln(e+t)/L)` above 1,
/// `L = ln(e+|x|) = 1..20`, `t = 2^-20..2^20`.
pub fn psi_tail(max_width: f64) -> Result<Report> {
    let cases: Vec<(f64, i32)> =
        (1..=20).flat_map(|l| (-20..=20).filter(|&k| k != 0).map(move |k| (l as f64, k))).collect();
    let rows = par::map_slice(&cases, |&(l, k)| -> Result<ReportPoint> {
        let x = [l.exp() - E, 0.0];
        let t = (k as f64).exp2();
        let (lhs, rhs) = if t < 1.0 {
            (psi_tail_integral(&x, t, 1.0)?, (1.0 / t).ln() / l)
        } else {
            (psi_tail_integral(&x, 1.0, t)?, (1.0 + (E + t).ln() / l).ln())
        };
        Ok(ReportPoint::ratio(t, lhs, rhs))
    });
    let points = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Report::new("psi_tail_integral", "t", points, Declared::Width { max: max_width }))
}

fn spike_cells(t: f64, m_base: u32) -> u32 {
    let scaled = (m_base as f64 * t.max(64.0) / 64.0) as u32;
    scaled.max(t as u32).next_power_of_two()
}

/// `||M^loc f||_1` against the local L log L sum for spikes `t = 2^2..2^12`,
/// plus the unit cube indicator.
pub fn local_h1(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let ts: Vec<f64> = (2..=12).map(|k| (k as f64).exp2()).collect();
    let one = |t: f64| -> Result<ReportPoint> {
        let f = Family::Spike { t }.materialize(&GridSpec::new(1, 2, spike_cells(t, cfg.m_base))?)?;
        Ok(ReportPoint::ratio(t, local_max(&f).l1_norm(), local_llogl_sum(&split(&f))))
    };
    let points = ts.iter().map(|&t| one(t)).collect::<Result<Vec<_>>>()?;
    let cube = vec![one(1.0)?];
    Ok(vec![
        Report::new("local_h1_spike", "t", points, Declared::Width { max: bands::LOCAL_H1_WIDTH }),
        Report::new(
            "local_h1_cube",
            "t",
            cube,
            Declared::Band { lo: bands::LOCAL_H1_CUBE.0, hi: bands::LOCAL_H1_CUBE.1 },
        ),
    ])
}

pub const ATOM_INDICES: [i64; 7] = [4, 8, 16, 32, 64, 128, 256];

/// Truncated norms of `chi_{Q_j} - theta` over `|x| < 4j + 4`, unweighted and
/// with weight `w`, for `|j| = 4..256`.
pub fn far_atoms(cfg: &SuiteConfig, w: WeightDescriptor) -> Result<Vec<(f64, f64)>> {
    let kernel = BumpKernel::new(cfg.kernel, 1);
    let m = (cfg.m_base / 4).max(4);
    let rows = par::map_slice(&ATOM_INDICES, |&j| -> Result<(f64, f64)> {
        let r = (4 * j + 4) as u32;
        let spec = GridSpec::new(1, r, m)?;
        let theta = ThetaFunction::new(spec, cfg.theta)?;
        let a = atom(&CubeIndex::d1(j), &theta)?;
        let n = atom_weighted_norm(&a, &kernel, &w, r as f64)?;
        Ok((j as f64, n.truncated))
    });
    rows.into_iter().collect()
}

fn class_point(tf: &TestFunction, c: Condition, m_base: u32, param: f64) -> Result<ReportPoint> {
    let (_, class) = classify_condition(tf, c, m_base)?;
    let want = tf.ground_truth[&c].membership;
    let got = membership_of(class);
    Ok(ReportPoint::new(param, code(got), code(Some(want)), got == Some(want)))
}

/// Far atoms against `1 + ln|j|`, and the stein functional class of slow tails.
pub fn global_h1(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let atoms = far_atoms(cfg, WeightDescriptor::One)?;
    let points = atoms.iter().map(|&(j, v)| ReportPoint::ratio(j, v, 1.0 + j.ln())).collect();
    let slow = [1.5, 3.0]
        .iter()
        .map(|&beta| {
            class_point(&TestFunction::new("slow", Family::SlowTail { beta }, 1), Condition::Stein, cfg.m_base, beta)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        Report::new(format!("far_atoms_h1_{}_{}", cfg.theta, cfg.kernel), "j", points, Declared::Width { max: 3.0 }),
        Report::new("slow_tail_stein_class", "beta", slow, Declared::Points),
    ])
}

/// Weighted far atoms against `Omega(|j|)`, the lacunary far sum with
/// `Omega` weights, and the loglog class of `slow_tail(1.5)`.
pub fn global_hlog(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let w = WeightDescriptor::InvLog;
    let atoms = far_atoms(cfg, w)?;
    let points = atoms
        .iter()
        .map(|&(j, v)| Ok(ReportPoint::ratio(j, v, omega_capital(j, &w, 1)?)))
        .collect::<Result<Vec<_>>>()?;
    let slow =
        class_point(&TestFunction::new("slow", Family::SlowTail { beta: 1.5 }, 1), Condition::LogLog, cfg.m_base, 1.5)?;
    let lac = lacunary_omega_class()?;
    Ok(vec![
        Report::new(format!("far_atoms_hlog_{}_{}", cfg.theta, cfg.kernel), "j", points, Declared::Width { max: 3.0 }),
        Report::new("hlog_membership", "case", vec![slow, lac], Declared::Points),
    ])
}

/// `sum_m m^-2 Omega(2^m)` truncated at `m <= 2^(2^j)`.
fn lacunary_omega_class() -> Result<ReportPoint> {
    let bounds: Vec<usize> = (0..5).map(|j| 1usize << (1 << j)).collect();
    let w = WeightDescriptor::InvLog;
    let terms = par::map_range(*bounds.last().unwrap(), |i| {
        let m = (i + 1) as f64;
        omega_capital_ln(m * LN_2, &w, 1) / (m * m)
    });
    let values = bounds.iter().map(|&b| par::exact_sum(terms[..b].iter().copied())).collect();
    let ln_radii = bounds.iter().map(|&b| b as f64 * LN_2).collect();
    let s = super::growth::TruncationSweep::new("lacunary:omega", ln_radii, values)?;
    let got = membership_of(super::growth::classify_growth(&s)?);
    Ok(ReportPoint::new(2.0, code(got), code(Some(Membership::Finite)), got == Some(Membership::Finite)))
}

/// `Omega(R)` for `w = 1` against `1 + 2 ln R`, and for `w = 1/ln(e+|x|)`
/// against `1 + ln ln(e+R)`, over `R` in `[1, 1e6]`.
pub fn omega() -> Result<Vec<Report>> {
    let rs: Vec<f64> = (0..=24).map(|j| 10f64.powf(j as f64 / 4.0)).collect();
    let one = rs
        .iter()
        .map(|&r| Ok(ReportPoint::ratio(r, omega_capital(r, &WeightDescriptor::One, 1)?, 1.0 + 2.0 * r.ln())))
        .collect::<Result<Vec<_>>>()?;
    let inv = rs
        .iter()
        .map(|&r| Ok(ReportPoint::ratio(r, omega_capital(r, &WeightDescriptor::InvLog, 1)?, 1.0 + (E + r).ln().ln())))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        Report::new("omega_unweighted", "R", one, Declared::Band { lo: 1.0 - 1e-4, hi: 1.0 + 1e-4 }),
        Report::new("omega_invlog", "R", inv, Declared::Width { max: 2.0 }),
    ])
}

/// Classifier output against ground truth for every catalog entry and condition.
pub fn membership(cfg: &SuiteConfig) -> Result<Report> {
    let cat = catalog();
    let cases: Vec<(usize, Condition)> =
        (0..cat.entries.len()).flat_map(|i| Condition::ALL.into_iter().map(move |c| (i, c))).collect();
    let rows = par::map_slice(&cases, |&(i, c)| -> Result<(ReportPoint, GrowthClass)> {
        let tf = &cat.entries[i];
        let (_, class) = classify_condition(tf, c, cfg.m_base)?;
        let want = tf.ground_truth[&c].membership;
        let got = membership_of(class);
        let param = (i * Condition::ALL.len() + Condition::ALL.iter().position(|&x| x == c).unwrap()) as f64;
        Ok((ReportPoint::new(param, code(got), code(Some(want)), got == Some(want)), class))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut report = Report::new("membership", "case", rows.iter().map(|r| r.0.clone()).collect(), Declared::Points);
    for ((i, c), (p, class)) in cases.iter().zip(&rows) {
        if !p.ok {
            report = report.note(format!("{} {}: {:?}", cat.entries[*i].id, c, class));
        }
    }
    let undecided = rows.iter().filter(|r| r.1 == GrowthClass::Undecided).count();
    Ok(report.note(format!("undecided: {undecided}")))
}

/// `∫ psi(x, M^loc f)` against the eqloglog functional for spikes at the origin,
/// and the far spike where `ln(e+|k|) ~ ln(e+t)`.
pub fn local_hlog(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let psi = MusielakSpec::new(MusielakKind::PsiLog);
    let eq = MusielakSpec::new(MusielakKind::EqLogLog);
    let ts: Vec<f64> = (4..=20).map(|k| (k as f64).exp2()).collect();
    let mut points = Vec::new();
    for &t in &ts {
        let f = Family::Spike { t }.materialize(&GridSpec::new(1, 2, spike_cells(t, cfg.m_base))?)?;
        points.push(ReportPoint::ratio(t, eval_truncated(&psi, &local_max(&f)), eval_truncated(&eq, &f)));
    }
    let spikes = Report::new(
        "local_hlog_spike",
        "t",
        points,
        Declared::Band { lo: bands::LOCAL_HLOG.0, hi: bands::LOCAL_HLOG.1 },
    );

    let t = 256.0;
    let k = 256;
    let spec = GridSpec::new(1, k as u32 + 1, 256)?;
    let far = Family::TranslatedSpike { t, k }.materialize(&spec)?;
    let near = Family::Spike { t }.materialize(&spec)?;
    let eq_far = eval_truncated(&eq, &far);
    let psi_far = eval_truncated(&psi, &local_max(&far));
    let psi_near = eval_truncated(&psi, &local_max(&near));
    let far_points = vec![
        ReportPoint::new(1.0, eq_far, far.l1_norm(), (eq_far / far.l1_norm() - 1.0).abs() <= 0.01),
        ReportPoint::new(2.0, psi_far, psi_near, psi_far < psi_near),
    ];
    let far_report = Report::new("local_hlog_far_spike", "case", far_points, Declared::Points);

    let tail_report = Report::new("local_hlog_example_tail", "case", example_tail_hlog(cfg)?, Declared::Points);
    Ok(vec![spikes, far_report, tail_report])
}

/// `weightedL1` class and the class of `∫ psi(x, M^loc f)` for the slowly
/// decaying example, with `M^loc f ~ f` in the analytic tail.
fn example_tail_hlog(cfg: &SuiteConfig) -> Result<Vec<ReportPoint>> {
    let tf = TestFunction::new("paper_example", Family::PaperExample, 1);
    let wl1 = class_point(&tf, Condition::WeightedL1, cfg.m_base, 1.0)?;
    let f = Family::PaperExample.materialize(&GridSpec::new(1, 4, cfg.m_base)?)?;
    let psi = MusielakSpec::new(MusielakKind::PsiLog);
    let body = eval_truncated(&psi, &local_max(&f));
    let tail = Family::PaperExample.tail(1).unwrap();
    let ln_radii: Vec<f64> = (0..7).map(|j| (2f64).powi(1 << j) * LN_2).collect();
    let values = par::map_slice(&ln_radii, |&l| {
        body + tail_integral_with(&tail, 1, 4.0, l, |x, ln_t| {
            let t = ln_t.exp().max(f64::MIN_POSITIVE);
            psi_bar(x, t) / t
        })
    });
    let s = super::growth::TruncationSweep::new("example_tail:psi_local", ln_radii, values)?;
    let got = membership_of(super::growth::classify_growth(&s)?);
    let psi_point = ReportPoint::new(2.0, code(got), code(Some(Membership::Finite)), got == Some(Membership::Finite));
    Ok(vec![wl1, psi_point])
}

/// Exactness of the cancellation operator and the cube split on random dyadic functions.
pub fn consistency(cfg: &SuiteConfig) -> Result<Report> {
    let mut r = rng(cfg.seed);
    let mut inputs = Vec::new();
    for i in 0..cfg.count {
        let spec = if i % 5 == 4 { GridSpec::new(2, 3, 8)? } else { GridSpec::new(1, 8, 16)? };
        inputs.push(random_dyadic_function(&mut r, spec, 4)?);
    }
    let rows = par::map_slice(&inputs, |f| -> Result<ReportPoint> {
        let theta = ThetaFunction::new(*f.spec(), cfg.theta)?;
        let tf = t_theta(f, &theta)?;
        let (h, g) = h_g_split(f, &theta)?;
        let sum = h.add(&g)?;
        let masses = split(f).total_mass();
        let integral = tf.integral();
        let ok = integral == 0.0 && sum.values() == tf.values() && masses == f.l1_norm();
        Ok(ReportPoint::new(0.0, integral, 0.0, ok))
    });
    let mut points = rows.into_iter().collect::<Result<Vec<_>>>()?;
    for (i, p) in points.iter_mut().enumerate() {
        p.param = i as f64;
    }
    Ok(Report::new(format!("consistency_{}", cfg.theta), "function", points, Declared::Points).with_seed(cfg.seed))
}
