//! The independent finite-difference oracle: three grid levels,
//! Sturm-sequence bisection and Richardson extrapolation, compared with the
//! exact quantization condition.
//!
//! Run with `cargo run --release --example fd_oracle`.

use bathtub::fd_oracle::{oracle_eigenvalues, OracleOptions};
use bathtub::quantization::solve_eigen;
use bathtub::ModelParams;

fn main() -> bathtub::Result<()> {
    let p = ModelParams::default();
    let oracle = oracle_eigenvalues(&p, 12, OracleOptions::default())?;
    println!(
        "{:>3} {:>20} {:>20} {:>10} {:>10} {:>6}",
        "n", "oracle", "exact", "rel diff", "estimate", "order"
    );
    for o in oracle {
        let e = solve_eigen(o.n as u64, &p)?.e_exact;
        println!(
            "{:>3} {:>20.14} {:>20.14} {:>10.2e} {:>10.2e} {:>6.3}",
            o.n,
            o.value,
            e,
            (o.value - e) / e,
            o.error_estimate,
            o.observed_order()
        );
    }
    Ok(())
}
