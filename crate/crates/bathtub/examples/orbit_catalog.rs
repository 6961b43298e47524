//! Classical periodic orbits with at most one reflection: periods and
//! actions, and the isolated time windows used by the trace formula.
//!
//! Run with `cargo run --release --example orbit_catalog`.

use bathtub::core_model::{one_reflection_periods_in, orbit_catalog, period_t};
use bathtub::trace_formulas::isolating_window;
use bathtub::ModelParams;

fn main() -> bathtub::Result<()> {
    let p = ModelParams::new(1.0, 1.0, 2f64.sqrt(), 1.0, 1.0)?;
    let e = 2.0;
    println!("{p}, E = {e}, T(E) = {:.6}", period_t(e, &p)?);
    println!(
        "{:>3} {:>3} {:>3} {:>12} {:>12} {:>12}",
        "k", "a", "b", "kind", "period", "action"
    );
    for o in orbit_catalog(e, 1, 2, &p, false)? {
        println!(
            "{:>3} {:>3} {:>3} {:>12} {:>12.6} {:>12.6}",
            o.k,
            o.alpha,
            o.beta,
            o.kind.label(),
            o.period,
            o.action
        );
    }
    println!("\npositive one-reflection periods up to 10 and their isolating windows:");
    for t in one_reflection_periods_in(e, &p, 1e-9, 10.0)? {
        let w = isolating_window(e, t, &p)?;
        println!("  {t:>10.6}  half-width {:.4}", w.half_width);
    }
    Ok(())
}
