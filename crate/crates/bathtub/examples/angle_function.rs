//! The angle function θ̃(z), its remainder r(z) = θ̃(z) − π(z − ¼) and the
//! large-z series of r.
//!
//! Run with `cargo run --release --example angle_function`.

use bathtub::special_functions::{cap_f, r_series, remainder, theta_tilde, theta_tilde_by_winding};

fn main() -> bathtub::Result<()> {
    println!(
        "{:>8} {:>20} {:>14} {:>14} {:>12}",
        "z", "theta", "r", "winding diff", "F(z)"
    );
    for z in [0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.9, 2.1, 3.3] {
        let v = theta_tilde(z)?;
        let wind = theta_tilde_by_winding(z)?;
        let f = if z > 0.0 {
            format!("{:.8}", cap_f(z)?)
        } else {
            "-".into()
        };
        println!(
            "{z:>8} {:>20.15} {:>14.6e} {:>14.2e} {f:>12}",
            v.theta,
            v.r,
            v.theta - wind
        );
    }
    println!(
        "\n{:>8} {:>14} {:>14} {:>14}",
        "z", "r", "r - series2", "r - series4"
    );
    for z in [5.0, 10.3, 20.0, 50.7, 100.0, 400.1] {
        let r = remainder(z)?;
        println!(
            "{z:>8} {r:>14.6e} {:>14.3e} {:>14.3e}",
            r - r_series(z, 2)?,
            r - r_series(z, 4)?
        );
    }
    Ok(())
}
