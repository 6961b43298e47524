//! Exact eigenvalues from the quantization condition next to their
//! Bohr–Sommerfeld approximations and the corrected asymptotic values.
//!
//! Run with `cargo run --release --example eigenvalues`.

use bathtub::quantization::{eigen_batch, phase_phi};
use bathtub::ModelParams;

fn main() -> bathtub::Result<()> {
    let p = ModelParams::default();
    println!("parameters: {p}");
    println!(
        "{:>4} {:>22} {:>22} {:>12} {:>12}",
        "n", "E_exact", "E_bohr", "delta", "asym. err"
    );
    for r in eigen_batch(0..15, &p, 6)? {
        let err = r
            .e_asymptotic
            .map_or("-".to_string(), |a| format!("{:.2e}", a - r.e_exact));
        println!(
            "{:>4} {:>22.15} {:>22.15} {:>12.3e} {:>12}",
            r.n, r.e_exact, r.e_bohr, r.delta, err
        );
    }
    // Φ(E_n) = πn is the quantization condition itself.
    let e = eigen_batch(7..8, &p, 0)?[0].e_exact;
    println!(
        "Phi(E_7)/pi = {:.15}",
        phase_phi(e, &p)? / std::f64::consts::PI
    );
    Ok(())
}
