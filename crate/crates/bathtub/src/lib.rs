//! Spectral analysis of the one-dimensional "bathtub" Schrödinger operator
//!
//! ```text
//! P = −(ħ²/2m) d²/dx² + V(x),   V = ½mω₋²x² (x<0),  0 (0≤x≤ℓ),  ½mω₊²(x−ℓ)² (x>ℓ)
//! ```
//!
//! The crate computes the eigenvalues from an exact quantization condition,
//! compares them with the Bohr–Sommerfeld rule and its correction series,
//! validates everything against an independent finite-difference oracle, and
//! evaluates the smoothed eigenvalue-counting function (periodic-orbit trace
//! formula) and the small-time heat trace.
//!
//! Modules, bottom-up:
//!
//! - [`special_functions`]: `ln Γ`, `ψ`, `F(z)`, the angle function `θ̃`.
//! - [`core_model`]: parameters, potential, action, period, orbit catalog.
//! - [`quantization`]: exact eigenvalues, Bohr–Sommerfeld values, the
//!   correction polynomials and the index set.
//! - [`fd_oracle`]: finite-difference + Sturm bisection + Richardson oracle.
//! - [`trace_formulas`]: counting sums and orbit predictions.
//! - [`heat_trace`]: heat trace of the asymmetric oscillator and the
//!   `t⁵ log t` fit.
//! - [`cli_app`]: configuration, subcommands and deterministic output.
//! - [`selftest`]: the acceptance checks, shared by the CLI and the tests.

pub mod cli_app;
pub mod core_model;
pub mod error;
pub mod fd_oracle;
pub mod heat_trace;
pub mod numerics;
pub mod quantization;
pub mod selftest;
pub mod special_functions;
pub mod trace_formulas;

pub use core_model::ModelParams;
pub use error::{BathtubError, Result};

/// Name of the environment variable that caps the worker-thread count.
pub const THREADS_ENV: &str = "BATHTUB_THREADS";

/// Configures the global thread pool from `BATHTUB_THREADS` (if set to a
/// positive integer). Safe to call more than once; only the first call has
/// an effect. Results never depend on the thread count.
pub fn init_thread_pool() -> Result<()> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                BathtubError::Config(format!(
                    "{THREADS_ENV} must be a positive integer, got {v:?}"
                ))
            })?;
            // An already-initialised pool is not an error.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
            Ok(())
        }
        Err(_) => Ok(()),
    }
}
