//! Property-based checks of the mathematical invariants.

use std::f64::consts::PI;

use bathtub::cli_app::config::{format_config, parse_config};
use bathtub::cli_app::output::format_real;
use bathtub::core_model::{action_inverse, action_s, orbit_catalog, period_t, ModelParams};
use bathtub::numerics::pairwise_sum;
use bathtub::quantization::{bohr_sommerfeld, eigen_batch, phase_phi, solve_eigen};
use bathtub::special_functions::theta_tilde;
use bathtub::trace_formulas::{
    counting_sum, hbar_sweep, isolating_window, scaling_exponent, AsymptoticEigenvalues, BumpSpec,
    ExactEigenvalues, ScalingOutcome, TestPair,
};
use proptest::prelude::*;

fn any_params() -> impl Strategy<Value = ModelParams> {
    (
        0.3f64..3.0,
        0.3f64..3.0,
        0.3f64..3.0,
        0.0f64..2.0,
        0.05f64..2.0,
    )
        .prop_map(|(m, wm, wp, ell, h)| ModelParams::new(m, wm, wp, ell, h).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_interlace_with_bohr_sommerfeld(p in any_params(), n in 0u64..2000) {
        let e = solve_eigen(n, &p).unwrap().e_exact;
        let lo = if n == 0 { 0.0 } else { bohr_sommerfeld(n - 1, &p).unwrap() };
        prop_assert!(lo < e && e < bohr_sommerfeld(n + 1, &p).unwrap());
    }

    #[test]
    fn eigenvalues_solve_the_quantization_condition(p in any_params(), n in 0u64..2000) {
        let e = solve_eigen(n, &p).unwrap().e_exact;
        let phi = phase_phi(e, &p).unwrap();
        // Φ is evaluated from O(n)-sized pieces; allow their rounding.
        prop_assert!((phi - PI * n as f64).abs() <= 1e-10 * (1.0 + n as f64));
    }

    #[test]
    fn eigenvalues_increase(p in any_params(), start in 0u64..500) {
        let batch = eigen_batch(start..start + 20, &p, 0).unwrap();
        prop_assert!(batch.windows(2).all(|w| w[0].e_exact < w[1].e_exact));
    }

    #[test]
    fn harmonic_oscillator_levels(w in 0.2f64..5.0, h in 0.05f64..2.0, n in 0u64..100) {
        let p = ModelParams::new(1.0, w, w, 0.0, h).unwrap();
        let e = solve_eigen(n, &p).unwrap().e_exact;
        prop_assert!((e - h * w * (n as f64 + 0.5)).abs() <= 1e-10 * (1.0 + e));
    }

    #[test]
    fn action_inverse_round_trips(p in any_params(), e in 1e-6f64..1e4) {
        let back = action_inverse(action_s(e, &p).unwrap(), &p).unwrap();
        prop_assert!(((back - e) / e).abs() < 1e-12);
    }

    #[test]
    fn period_is_derivative_of_action(p in any_params(), e in 0.5f64..100.0) {
        let h = 1e-5 * e;
        let fd = (action_s(e + h, &p).unwrap() - action_s(e - h, &p).unwrap()) / (2.0 * h);
        let t = period_t(e, &p).unwrap();
        prop_assert!(((fd - t) / t).abs() < 1e-6);
    }

    #[test]
    fn orbit_periods_are_odd(p in any_params(), e in 0.1f64..10.0) {
        let cat = orbit_catalog(e, 1, 3, &p, true).unwrap();
        for o in &cat {
            let mirror = cat.iter().find(|x| (x.k, x.alpha, x.beta) == (-o.k, -o.alpha, -o.beta)).unwrap();
            prop_assert!((mirror.period + o.period).abs() <= 1e-12 * (1.0 + o.period.abs()));
        }
    }

    #[test]
    fn angle_function_is_monotone_and_close_to_linear(z in 0.0f64..1e5, dz in 1e-6f64..1.0) {
        let a = theta_tilde(z).unwrap();
        let b = theta_tilde(z + dz).unwrap();
        prop_assert!(b.theta > a.theta);
        if z > 0.0 {
            prop_assert!((a.theta - PI * (z - 0.25)).abs() < PI / 2.0);
        }
    }

    #[test]
    fn config_round_trips(p in any_params()) {
        prop_assert_eq!(parse_config(&format_config(&p)).unwrap().resolve().unwrap(), p);
    }

    #[test]
    fn real_formatting_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn pairwise_sum_is_accurate(xs in proptest::collection::vec(-1e3f64..1e3, 0..500)) {
        let exact: f64 = xs.iter().sum();
        let scale: f64 = xs.iter().map(|x| x.abs()).sum::<f64>() + 1.0;
        prop_assert!((pairwise_sum(&xs) - exact).abs() <= 1e-12 * scale);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let p = ModelParams::new(1.0, 1.0, 2f64.sqrt(), 1.0, 0.05).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let e: Vec<f64> = eigen_batch(0..200, &p, 6)
                .unwrap()
                .iter()
                .map(|r| r.e_exact)
                .collect();
            let chi = BumpSpec::new(2.0, 0.6).unwrap();
            let t = period_t(2.0, &p).unwrap();
            let tp = TestPair::new(chi, isolating_window(2.0, t, &p).unwrap(), 100.0).unwrap();
            (
                e,
                counting_sum(2.0, &p, &tp, &ExactEigenvalues).unwrap().value,
            )
        })
    };
    assert_eq!(run(1), run(5));
}

#[test]
fn asymptotic_eigenvalues_reproduce_the_counting_sum() {
    let p = ModelParams::new(1.0, 1.0, 2f64.sqrt(), 1.0, 1.0).unwrap();
    let e = 2.0;
    let chi = BumpSpec::default_energy_window(e).unwrap();
    let rho_hat = isolating_window(e, period_t(e, &p).unwrap(), &p).unwrap();
    let hbars = [0.1, 0.05, 0.025, 0.0125];
    let exact = hbar_sweep(e, &p, chi, rho_hat, &hbars, &ExactEigenvalues, None).unwrap();
    let asym = hbar_sweep(
        e,
        &p,
        chi,
        rho_hat,
        &hbars,
        &AsymptoticEigenvalues { order: 6 },
        None,
    )
    .unwrap();
    let diffs: Vec<(f64, f64)> = exact
        .iter()
        .zip(&asym)
        .map(|(a, b)| (a.hbar, (a.value - b.value).norm()))
        .collect();
    match scaling_exponent(&diffs).unwrap() {
        ScalingOutcome::Slope(s) => assert!(s >= 3.5, "exponent {s}"),
        ScalingOutcome::BelowNoise => {}
    }
}
