//! Heat trace of the asymmetric oscillator and the small-t fit of
//! D(t) = Σ e^{−tEₙ} − 1/(2 sinh(ω̄t/2)).
//!
//! Run with `cargo run --release --example heat_trace`.

use bathtub::heat_trace::{
    extract_log_coefficient, reference_trace, standard_basis, weighted_fit, BasisFunction,
    HeatGrid, HeatTable,
};
use bathtub::ModelParams;

fn main() -> bathtub::Result<()> {
    let p = ModelParams::new(1.0, 1.0, 2.0, 0.0, 1.0)?;
    let table = HeatTable::new(&p, 1e-3, 500)?;
    println!(
        "{} tabulated levels ({} solved exactly)",
        table.len(),
        table.n_exact()
    );
    println!(
        "{:>8} {:>22} {:>22} {:>14}",
        "t", "exact", "reference", "D(t)"
    );
    for t in [1e-3, 1e-2, 0.1, 1.0] {
        println!(
            "{t:>8} {:>22.15} {:>22.15} {:>14.6e}",
            table.exact_trace(t)?,
            reference_trace(t, &p)?,
            table.difference(t)?
        );
    }

    let fit = extract_log_coefficient(&p, HeatGrid::default())?;
    println!(
        "\nfit on t in [1e-3, 5e-2], condition {:.2e}:",
        fit.condition_estimate
    );
    for (b, (c, s)) in fit
        .fit
        .basis
        .iter()
        .zip(fit.fit.coefficients.iter().zip(&fit.fit.std_errors))
    {
        println!("  {:>14}  {c:+.6e} +/- {s:.1e}", b.label());
    }
    println!(
        "predicted t^5 log t coefficient {:.6e}, ratio {:.4}",
        fit.predicted,
        fit.ratio()
    );
    println!(
        "RMS {:.3e}, without the log term {:.3e}",
        fit.rms, fit.rms_without_log
    );
    println!(
        "log coefficient with t^6, t^6 log t added: {:?}",
        fit.extended_log_coefficient
    );
    println!("constant term check: {:?}", fit.constant_check);

    // Oscillatory probes t^5 cos(wt), t^5 sin(wt): how much does the log
    // coefficient move when they are added?
    println!("\nwith oscillatory probes at frequency w:");
    for w in [1.0, p.tau_sum(), 20.0, 100.0] {
        let mut basis = standard_basis();
        basis.extend([BasisFunction::PowerCos(5, w), BasisFunction::PowerSin(5, w)]);
        match weighted_fit(&fit.t_grid, &fit.difference, &basis) {
            Ok(f) => println!(
                "  w = {w:<8.4} log coefficient {:+.3e} +/- {:.1e} (condition {:.1e})",
                f.coefficients[5], f.std_errors[5], f.condition
            ),
            Err(e) => println!("  w = {w:<8.4} {e}"),
        }
    }
    Ok(())
}
