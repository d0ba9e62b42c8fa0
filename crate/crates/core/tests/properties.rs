use approx::assert_relative_eq;
use hardylab::decomp::split;
use hardylab::functionals::{psi_bar, Radial};
use hardylab::grid::{CubeIndex, GridSpec};
use hardylab::maximal::{dyadic_max, hl_max, smooth_max, BumpKernel, KernelProfile, RadiusSet};
use hardylab::operators::{h_g_split, t_theta, ThetaFunction, ThetaProfile};
use hardylab::testlib::random::{random_dyadic_function, rng};
use hardylab::verify::{classify_growth, GrowthClass, TruncationSweep};
use hardylab::SampledFunction;
use proptest::prelude::*;

fn spec_1d() -> GridSpec {
    GridSpec::new(1, 4, 8).unwrap()
}

fn values_1d() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-64i32..=64).prop_map(|k| k as f64 / 8.0), 64)
}

/// `(1/2r) int_{x-r}^{x+r} |f|` by summing cell overlaps.
fn brute_interval_avg(spec: &GridSpec, v: &[f64], x: f64, r: f64) -> f64 {
    let h = spec.step();
    let mut acc = 0.0;
    for (i, &a) in v.iter().enumerate() {
        let c = spec.axis_center(i);
        let overlap = ((c + h / 2.0).min(x + r) - (c - h / 2.0).max(x - r)).max(0.0);
        acc += a.abs() * overlap;
    }
    acc / (2.0 * r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hl_max_matches_overlap_oracle(v in values_1d()) {
        let spec = spec_1d();
        let f = SampledFunction::new(spec, v.clone()).unwrap();
        let radii = RadiusSet::quarter_octave(&spec, false);
        let m = hl_max(&f, &radii).unwrap();
        for i in 0..spec.len() {
            let x = spec.axis_center(i);
            let want = radii.radii().iter().map(|&r| brute_interval_avg(&spec, &v, x, r)).fold(v[i].abs(), f64::max);
            assert_relative_eq!(m.values()[i], want, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn maximal_operators_are_bounded_and_homogeneous(v in values_1d(), c in -3i32..=3) {
        let f = SampledFunction::new(spec_1d(), v).unwrap();
        let scale = (c as f64).exp2();
        let sup = f.sup_norm();
        // dyadic_max wants support in one unit cube: keep Q_0
        let q0 = f.restrict_to_cube(&CubeIndex::d1(0));
        let d = dyadic_max(&q0).unwrap();
        let d2 = dyadic_max(&q0.scale_values(-scale)).unwrap();
        for ((a, b), x) in d.values().iter().zip(d2.values()).zip(q0.values()) {
            prop_assert!(*a >= x.abs() && *a <= q0.sup_norm());
            prop_assert_eq!(*b, scale * a);
        }
        let k = BumpKernel::new(KernelProfile::Bump, 1);
        let s = smooth_max(&f, &k, &RadiusSet::quarter_octave(f.spec(), false)).unwrap();
        prop_assert!(s.values().iter().all(|&y| y <= sup * (1.0 + 1e-12) + 1e-12));
    }

    #[test]
    fn cube_split_reassembles(seed in any::<u64>(), two_d in any::<bool>()) {
        let spec = if two_d { GridSpec::new(2, 3, 4).unwrap() } else { GridSpec::new(1, 6, 16).unwrap() };
        let f = random_dyadic_function(&mut rng(seed), spec, 5).unwrap();
        let d = split(&f);
        prop_assert_eq!(d.reassemble().into_values(), f.values().to_vec());
        let vol = spec.cell_volume();
        let l1: f64 = f.values().iter().map(|v| v.abs() * vol).sum();
        prop_assert_eq!(d.total_mass(), l1);
    }

    #[test]
    fn cancellation_is_an_exact_projection(seed in any::<u64>(), smooth in any::<bool>()) {
        let spec = GridSpec::new(1, 6, 16).unwrap();
        let f = random_dyadic_function(&mut rng(seed), spec, 5).unwrap();
        let profile = if smooth { ThetaProfile::Smooth } else { ThetaProfile::Box };
        let theta = ThetaFunction::new(spec, profile).unwrap();
        let once = t_theta(&f, &theta).unwrap();
        prop_assert_eq!(once.integral(), 0.0);
        prop_assert_eq!(t_theta(&once, &theta).unwrap().into_values(), once.values().to_vec());
        let (h, g) = h_g_split(&f, &theta).unwrap();
        prop_assert_eq!(h.add(&g).unwrap().into_values(), once.values().to_vec());
        // h has zero mean on every unit cube
        for piece in split(&h).pieces() {
            let s: f64 = piece.values.iter().sum();
            prop_assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn psi_is_doubling_and_quasiconcave(x in -5.0f64..30.0, t in -30.0f64..30.0) {
        let r = Radial::from_abs(x.exp());
        let t = t.exp();
        let (p, p2) = (psi_bar(r, t), psi_bar(r, 2.0 * t));
        prop_assert!(p2 <= 2.0 * p * (1.0 + 1e-15));
        prop_assert!(p2 >= p);
        prop_assert!(p2 / (2.0 * t) <= p / t * (1.0 + 1e-15));
    }

    #[test]
    fn geometric_partial_sums_converge(q in 0.05f64..0.45, a in 0.1f64..10.0) {
        let values: Vec<f64> = (0..6).map(|j| a * (1.0 - q.powi(j + 1)) / (1.0 - q)).collect();
        let s = TruncationSweep::octaves("geometric", values).unwrap();
        prop_assert_eq!(classify_growth(&s).unwrap(), GrowthClass::Convergent);
    }

    #[test]
    fn linear_in_log_radius_is_log_divergent(a in -5.0f64..5.0, b in 0.1f64..10.0) {
        let values: Vec<f64> = (0..6).map(|j| a + b * j as f64).collect();
        let s = TruncationSweep::octaves("log", values).unwrap();
        prop_assert_eq!(classify_growth(&s).unwrap(), GrowthClass::LogDivergent);
    }

    #[test]
    fn power_growth_is_poly_divergent(p in 0.8f64..2.0) {
        let values: Vec<f64> = (0..6).map(|j| (2f64).powf(p * (3 + j) as f64)).collect();
        let s = TruncationSweep::octaves("power", values).unwrap();
        prop_assert_eq!(classify_growth(&s).unwrap(), GrowthClass::PolyDivergent);
    }
}

#[test]
fn too_few_points_is_an_error() {
    let s = TruncationSweep::octaves("short", vec![1.0, 2.0, 3.0]);
    assert!(s.is_err() || classify_growth(&s.unwrap()).is_err());
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let spec = GridSpec::new(1, 16, 32).unwrap();
    let f = random_dyadic_function(&mut rng(11), spec, 12).unwrap();
    let k = BumpKernel::new(KernelProfile::Tent, 1);
    let run = || {
        let radii = RadiusSet::quarter_octave(&spec, false);
        let a = hl_max(&f, &radii).unwrap().into_values();
        let b = smooth_max(&f, &k, &radii).unwrap().into_values();
        let c = hardylab::verify::stein_inequality_suite(10, 3).points;
        (a, b, c.iter().map(|p| (p.lhs, p.rhs)).collect::<Vec<_>>())
    };
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
    assert_eq!(one, many);
}
