//! The acceptance checks, shared by the `selftest` subcommand and the
//! `acceptance` test target. Each check returns a [`CheckOutcome`] with a
//! human-readable detail string containing the measured quantities.

use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use crate::cli_app::output::{json_object, Cell};
use crate::core_model::{period_t, ModelParams};
use crate::error::Result;
use crate::fd_oracle::{oracle_eigenvalues, OracleOptions};
use crate::heat_trace::{
    extract_log_coefficient, reference_partial_sum, reference_trace, HeatGrid,
};
use crate::numerics::envelope_log_slope;
use crate::quantization::{bohr_sommerfeld, correction_series, eigen_batch, solve_eigen};
use crate::quantization::{index_set_generate, IndexTriple};
use crate::special_functions::{r_series, remainder, theta_tilde};
use crate::trace_formulas::{
    gap_window, hbar_sweep, isolating_window, scaling_exponent, BumpSpec, ExactEigenvalues,
    OrbitSelector, ScalingOutcome,
};

/// Identifiers of the acceptance checks.
pub const CRITERIA: RangeInclusive<u32> = 1..=10;

/// Result of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl CheckOutcome {
    /// `PASS [3] interlacing (0.12 s): ...`
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }

    /// One JSON object.
    pub fn json(&self) -> String {
        json_object(&[
            ("id", Cell::Int(self.id as i64)),
            ("title", Cell::Text(self.title.to_string())),
            (
                "passed",
                Cell::Text(if self.passed { "pass" } else { "fail" }.to_string()),
            ),
            ("elapsed_s", self.elapsed.as_secs_f64().into()),
            ("detail", Cell::Text(self.detail.clone())),
        ])
    }
}

type Check = fn() -> Result<(bool, String)>;

fn check_info(id: u32) -> (&'static str, Option<u64>, Check) {
    match id {
        1 => ("oracle equivalence", Some(30), oracle_equivalence),
        2 => (
            "harmonic-oscillator degeneracy",
            Some(1),
            harmonic_degeneracy,
        ),
        3 => ("interlacing", None, interlacing),
        4 => ("expansion order", Some(60), expansion_order),
        5 => ("angle-function suite", None, angle_suite),
        6 => ("suppression away from orbit periods", Some(60), suppression),
        7 => ("orbit amplitudes", Some(120), orbit_amplitudes),
        8 => ("heat-trace identity", None, heat_identity),
        9 => ("t^5 log t coefficient", Some(120), log_coefficient),
        10 => ("index set", None, index_set),
        _ => unreachable!("check ids are validated by the caller"),
    }
}

/// Runs check `id` (one of [`CRITERIA`]). A check fails if its property
/// does not hold, it returns an error, or it exceeds its time budget.
pub fn run_check(id: u32) -> CheckOutcome {
    assert!(CRITERIA.contains(&id), "unknown check {id}");
    let (title, limit_s, check) = check_info(id);
    let limit = limit_s.map(Duration::from_secs);
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(l) = limit {
        if elapsed > l {
            passed = false;
            detail.push_str(&format!("; exceeded time budget of {} s", l.as_secs()));
        }
    }
    CheckOutcome {
        id,
        title,
        passed,
        detail,
        elapsed,
        limit,
    }
}

/// Runs every check in order.
pub fn run_all() -> Vec<CheckOutcome> {
    CRITERIA.map(run_check).collect()
}

fn params(m: f64, wm: f64, wp: f64, ell: f64, hbar: f64) -> Result<ModelParams> {
    ModelParams::new(m, wm, wp, ell, hbar)
}

fn oracle_equivalence() -> Result<(bool, String)> {
    let p = ModelParams::default();
    let oracle = oracle_eigenvalues(&p, 20, OracleOptions::default())?;
    let mut worst: f64 = 0.0;
    for o in &oracle {
        let e = solve_eigen(o.n as u64, &p)?.e_exact;
        worst = worst.max(((e - o.value) / e).abs());
    }
    Ok((
        worst <= 1e-7,
        format!("max relative difference {worst:.2e} over n=0..19 (limit 1e-7)"),
    ))
}

fn harmonic_degeneracy() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (w, h) in [(1.0, 1.0), (2.5, 0.3)] {
        let p = params(1.0, w, w, 0.0, h)?;
        for n in 0..=100u64 {
            let e = solve_eigen(n, &p)?.e_exact;
            worst = worst.max((e - h * w * (n as f64 + 0.5)).abs());
        }
    }
    Ok((
        worst <= 1e-10,
        format!("max |E_n - hbar*omega*(n+1/2)| = {worst:.2e} for n<=100 (limit 1e-10)"),
    ))
}

fn interlacing() -> Result<(bool, String)> {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for ell in [0.0, 1.0] {
        for ratio in [2.0, 2f64.sqrt()] {
            for h in [1.0, 0.1, 0.01] {
                let p = params(1.0, 1.0, ratio, ell, h)?;
                for r in eigen_batch(0..500, &p, 0)? {
                    let lo = if r.n == 0 {
                        0.0
                    } else {
                        bohr_sommerfeld(r.n - 1, &p)?
                    };
                    let hi = bohr_sommerfeld(r.n + 1, &p)?;
                    checked += 1;
                    if !(lo < r.e_exact && r.e_exact < hi) {
                        violations.push(format!("n={} ({p})", r.n));
                    }
                }
            }
        }
    }
    Ok((
        violations.is_empty(),
        format!(
            "{checked} eigenvalues over 12 parameter sets, {} violations{}",
            violations.len(),
            if violations.is_empty() {
                String::new()
            } else {
                format!(": {}", violations.join("; "))
            }
        ),
    ))
}

fn expansion_order() -> Result<(bool, String)> {
    let p = ModelParams::default();
    let mut xs = Vec::new();
    let mut r4 = Vec::new();
    let mut r6 = Vec::new();
    for n in 50..=5000u64 {
        let s = solve_eigen(n, &p)?;
        xs.push(s.e_bohr);
        r4.push(s.delta - correction_series(s.e_bohr, &p, 4)?);
        r6.push(s.delta - correction_series(s.e_bohr, &p, 6)?);
    }
    let s4 = envelope_log_slope(&xs, &r4, 20);
    let s6 = envelope_log_slope(&xs, &r6, 20);
    let ok = (s4 + 4.0).abs() <= 0.4 && s6 <= -5.5;
    Ok((ok, format!("residual slope {s4:.3} with N=4 (target -4 +/- 0.4), {s6:.3} with N=6 (target <= -5.5)")))
}

fn angle_suite() -> Result<(bool, String)> {
    let mut prev = f64::NEG_INFINITY;
    let mut monotone = true;
    let mut max_r: f64 = 0.0;
    let points = 100_000;
    for i in 0..=points {
        let z = 1e4 * i as f64 / points as f64;
        let v = theta_tilde(z)?;
        monotone &= v.theta > prev;
        prev = v.theta;
        if z > 0.0 {
            max_r = max_r.max((v.theta - PI * (z - 0.25)).abs());
        }
    }
    let mut quarter: f64 = 0.0;
    for j in 0..20_000u32 {
        let z = 0.25 + 0.5 * j as f64;
        quarter = quarter.max((theta_tilde(z)?.theta - PI * (z - 0.25)).abs());
    }
    let mut zs = Vec::new();
    let mut res = Vec::new();
    let mut z = 5.0;
    while z <= 500.0 {
        zs.push(z);
        res.push(remainder(z)? - r_series(z, 4)?);
        z *= 1.003;
    }
    let slope = envelope_log_slope(&zs, &res, 16);
    let ok = monotone && max_r < PI / 2.0 && quarter <= 1e-10 && (slope + 6.0).abs() <= 0.3;
    Ok((
        ok,
        format!(
            "monotone={monotone} on {points} steps to z=1e4, max|r|={max_r:.3e} (< pi/2), quarter-point error \
             {quarter:.2e} (<= 1e-10), r_series order-4 residual slope {slope:.3} (target -6 +/- 0.3)"
        ),
    ))
}

fn slope_text(o: ScalingOutcome) -> String {
    match o {
        ScalingOutcome::Slope(s) => format!("{s:.3}"),
        ScalingOutcome::BelowNoise => "below noise".to_string(),
    }
}

/// Generic parameters for the trace-formula checks.
fn generic_params() -> Result<ModelParams> {
    params(1.0, 1.0, 2f64.sqrt(), 1.0, 1.0)
}

fn suppression() -> Result<(bool, String)> {
    let p = generic_params()?;
    let e = 2.0;
    let chi = BumpSpec::default_energy_window(e)?;
    let rho_hat = gap_window(e, &p, 0.0, period_t(e, &p)?)?;
    let hbars = [0.1, 0.05, 0.025, 0.0125];
    let rows = hbar_sweep(e, &p, chi, rho_hat, &hbars, &ExactEigenvalues, None)?;
    let values: Vec<(f64, f64)> = rows.iter().map(|r| (r.hbar, r.value.norm())).collect();
    let outcome = scaling_exponent(&values)?;
    let ok = match outcome {
        ScalingOutcome::Slope(s) => s >= 3.7,
        ScalingOutcome::BelowNoise => true,
    };
    // Diagnostic: the same fit one octave pair further into the
    // semiclassical regime.
    let fine = [0.0125, 0.00625, 0.003125, 0.0015625];
    let rows_fine = hbar_sweep(e, &p, chi, rho_hat, &fine, &ExactEigenvalues, None)?;
    let values_fine: Vec<(f64, f64)> = rows_fine.iter().map(|r| (r.hbar, r.value.norm())).collect();
    let fine_outcome = scaling_exponent(&values_fine)?;
    let (a, b) = rho_hat.support();
    let mags: Vec<String> = values.iter().map(|(_, v)| format!("{v:.2e}")).collect();
    Ok((
        ok,
        format!(
            "rho_hat on [{a:.4}, {b:.4}], |sum| = [{}] over hbar 0.1..0.0125, fitted exponent {} (target >= 3.7); \
             diagnostic exponent over hbar 0.0125..0.0015625: {}",
            mags.join(", "),
            slope_text(outcome),
            slope_text(fine_outcome)
        ),
    ))
}

/// `(ratio, phase)` at the smallest ħ of the sweep for the selected orbit.
fn orbit_ratio(p: &ModelParams, e: f64, sel: OrbitSelector, target: f64) -> Result<(f64, f64)> {
    let chi = BumpSpec::default_energy_window(e)?;
    let rho_hat = isolating_window(e, target, p)?;
    let rows = hbar_sweep(
        e,
        p,
        chi,
        rho_hat,
        &[0.05, 0.025, 0.0125],
        &ExactEigenvalues,
        Some(sel),
    )?;
    let last = rows.last().expect("three rows");
    let pred = last.prediction.expect("prediction requested");
    Ok((last.value.norm() / pred.norm(), (last.value / pred).arg()))
}

fn orbit_amplitudes() -> Result<(bool, String)> {
    // ω₊ = √5 at E = 3 keeps every two-reflection period well away from
    // T(E) + τ₋; see the diagnostic for the √2, E = 2 choice.
    let p = params(1.0, 1.0, 5f64.sqrt(), 1.0, 1.0)?;
    let e = 3.0;
    let t = period_t(e, &p)?;
    let (refl, refl_phase) = orbit_ratio(
        &p,
        e,
        OrbitSelector {
            k: 1,
            alpha: 1,
            beta: 0,
        },
        t + p.tau_minus(),
    )?;
    let (trans, trans_phase) = orbit_ratio(
        &p,
        e,
        OrbitSelector {
            k: 1,
            alpha: 0,
            beta: 0,
        },
        t,
    )?;
    let q = generic_params()?;
    let tq = period_t(2.0, &q)?;
    let (diag, _) = orbit_ratio(
        &q,
        2.0,
        OrbitSelector {
            k: 1,
            alpha: 1,
            beta: 0,
        },
        tq + q.tau_minus(),
    )?;
    let ok = (0.9..=1.1).contains(&refl) && (0.95..=1.05).contains(&trans);
    Ok((
        ok,
        format!(
            "omega_plus=sqrt5, E=3, hbar=0.0125: reflected ratio {refl:.4} (phase {refl_phase:.3} rad, target \
             [0.9,1.1]), transmitted ratio {trans:.4} (phase {trans_phase:.3} rad, target [0.95,1.05]); \
             diagnostic reflected ratio at omega_plus=sqrt2, E=2: {diag:.4}"
        ),
    ))
}

fn heat_identity() -> Result<(bool, String)> {
    let p = params(1.0, 1.0, 2.0, 0.0, 1.0)?;
    let mut worst: f64 = 0.0;
    for t in [0.1, 0.5, 1.0] {
        let (sum, tail) = reference_partial_sum(t, &p, 4000)?;
        let r = reference_trace(t, &p)?;
        worst = worst.max(((sum + tail - r) / r).abs());
    }
    Ok((
        worst <= 1e-13,
        format!("max relative deviation {worst:.2e} at t in {{0.1, 0.5, 1}} (limit 1e-13)"),
    ))
}

fn log_coefficient() -> Result<(bool, String)> {
    let p = params(1.0, 1.0, 2.0, 0.0, 1.0)?;
    let fit = extract_log_coefficient(&p, HeatGrid::default())?;
    let ratio = fit.ratio();
    let degradation = fit.rms_degradation();
    let ok = (0.75..=1.25).contains(&ratio) && degradation >= 3.0;
    let ext = fit
        .extended_log_coefficient
        .map_or("n/a".to_string(), |c| format!("{c:.3e}"));
    Ok((
        ok,
        format!(
            "fitted {:.4e} +/- {:.1e}, predicted {:.4e}, ratio {ratio:.4} (target [0.75,1.25]); RMS degradation \
             without the log term {degradation:.2}x (target >= 3); condition {:.2e}; diagnostic with t^6, t^6 log t \
             added: {ext}",
            fit.log_coefficient, fit.log_coefficient_error, fit.predicted, fit.condition_estimate
        ),
    ))
}

fn index_set() -> Result<(bool, String)> {
    let set = index_set_generate(10)?;
    let lowest: Vec<IndexTriple> = set.iter().take(5).copied().collect();
    let expected = [
        IndexTriple::new(2, 4, 1),
        IndexTriple::new(4, 8, 1),
        IndexTriple::new(4, 8, 2),
        IndexTriple::new(5, 10, 2),
        IndexTriple::new(5, 11, 3),
    ];
    let bounded = set.iter().all(IndexTriple::satisfies_containment_bound);
    let shown: Vec<String> = lowest.iter().map(|t| t.to_string()).collect();
    Ok((
        lowest == expected && bounded,
        format!(
            "{} members up to j=10, lowest five {}, containment bound holds: {bounded}",
            set.len(),
            shown.join(" ")
        ),
    ))
}
