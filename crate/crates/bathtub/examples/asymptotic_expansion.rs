//! How the correction series ΔE(𝓔ₙ) of increasing order approaches the
//! exact eigenvalue shift E_n − 𝓔ₙ.
//!
//! Run with `cargo run --release --example asymptotic_expansion`.

use bathtub::numerics::envelope_log_slope;
use bathtub::quantization::{correction_polynomials, correction_series, solve_eigen};
use bathtub::ModelParams;

fn main() -> bathtub::Result<()> {
    let p = ModelParams::default();
    println!("correction terms h^(j+1) P_(j,k,l) / (E^k T^l):");
    for term in correction_polynomials(&p) {
        let coeffs: Vec<String> = term
            .poly
            .coefficients()
            .map(|((a, b), c)| format!("({a},{b}):{:.4}{:+.4}i", c.re, c.im))
            .collect();
        println!("  {}  {}", term.index, coeffs.join(" "));
    }

    println!(
        "\n{:>6} {:>12} {:>12} {:>12} {:>12}",
        "n", "delta", "err N=2", "err N=4", "err N=6"
    );
    for n in [10u64, 30, 100, 300, 1000, 3000] {
        let s = solve_eigen(n, &p)?;
        let err = |order| correction_series(s.e_bohr, &p, order).map(|c| s.delta - c);
        println!(
            "{:>6} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}",
            n,
            s.delta,
            err(2)?,
            err(4)?,
            err(6)?
        );
    }

    let mut xs = Vec::new();
    let mut r4 = Vec::new();
    let mut r6 = Vec::new();
    for n in 50..=5000u64 {
        let s = solve_eigen(n, &p)?;
        xs.push(s.e_bohr);
        r4.push(s.delta - correction_series(s.e_bohr, &p, 4)?);
        r6.push(s.delta - correction_series(s.e_bohr, &p, 6)?);
    }
    println!(
        "\nresidual envelope slope in E: N=4 {:.3}, N=6 {:.3}",
        envelope_log_slope(&xs, &r4, 20),
        envelope_log_slope(&xs, &r6, 20)
    );
    Ok(())
}
