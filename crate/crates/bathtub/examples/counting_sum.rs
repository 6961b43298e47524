//! The smoothed eigenvalue-counting function against its periodic-orbit
//! predictions: the transmitted orbit, a one-reflection orbit, and a time
//! window that avoids every period with at most one reflection.
//!
//! Run with `cargo run --release --example counting_sum`.

use bathtub::core_model::period_t;
use bathtub::trace_formulas::{
    gap_window, hbar_sweep, isolating_window, scaling_exponent, BumpSpec, ExactEigenvalues,
    OrbitSelector,
};
use bathtub::ModelParams;

fn sweep(p: &ModelParams, e: f64, sel: OrbitSelector, target: f64) -> bathtub::Result<()> {
    let chi = BumpSpec::default_energy_window(e)?;
    let rho_hat = isolating_window(e, target, p)?;
    let hbars = [0.05, 0.025, 0.0125];
    for r in hbar_sweep(e, p, chi, rho_hat, &hbars, &ExactEigenvalues, Some(sel))? {
        let pred = r.prediction.expect("requested");
        println!(
            "  hbar {:<7} |sum| {:.4e}  |prediction| {:.4e}  ratio {:.4}  phase {:+.3}",
            r.hbar,
            r.value.norm(),
            pred.norm(),
            r.value.norm() / pred.norm(),
            (r.value / pred).arg()
        );
    }
    Ok(())
}

fn main() -> bathtub::Result<()> {
    let p = ModelParams::new(1.0, 1.0, 5f64.sqrt(), 1.0, 1.0)?;
    let e = 3.0;
    let t = period_t(e, &p)?;
    println!("{p}, E = {e}");
    println!("transmitted orbit, T* = T(E) = {t:.6}:");
    sweep(
        &p,
        e,
        OrbitSelector {
            k: 1,
            alpha: 0,
            beta: 0,
        },
        t,
    )?;
    println!(
        "one reflection in the left well, T* = T(E) + tau_- = {:.6}:",
        t + p.tau_minus()
    );
    sweep(
        &p,
        e,
        OrbitSelector {
            k: 1,
            alpha: 1,
            beta: 0,
        },
        t + p.tau_minus(),
    )?;

    let q = ModelParams::new(1.0, 1.0, 2f64.sqrt(), 1.0, 1.0)?;
    let e = 2.0;
    let chi = BumpSpec::default_energy_window(e)?;
    let rho_hat = gap_window(e, &q, 0.0, period_t(e, &q)?)?;
    println!(
        "\nwindow {:?} avoiding all one-reflection periods ({q}, E = {e}):",
        rho_hat.support()
    );
    for hbars in [
        [0.1, 0.05, 0.025, 0.0125],
        [0.0125, 0.00625, 0.003125, 0.0015625],
    ] {
        let rows = hbar_sweep(e, &q, chi, rho_hat, &hbars, &ExactEigenvalues, None)?;
        let values: Vec<(f64, f64)> = rows.iter().map(|r| (r.hbar, r.value.norm())).collect();
        for (h, v) in &values {
            println!("  hbar {h:<10} |sum| {v:.3e}");
        }
        println!("  fitted exponent: {:?}", scaling_exponent(&values)?);
    }
    Ok(())
}
