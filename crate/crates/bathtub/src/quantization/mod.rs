//! Exact eigenvalues from the quantization condition, the Bohr–Sommerfeld
//! approximation and its correction series.
//!
//! The eigenvalues are the solutions of
//!
//! ```text
//! Φ(E) = √(2m)ℓ√E/ħ + θ̃(E/2ħω₋) + θ̃(E/2ħω₊) = πn,   n = 0, 1, 2, …
//! ```
//!
//! and satisfy `𝓔_{n−1} < E_n < 𝓔_{n+1}` with the Bohr–Sommerfeld values
//! `𝓔_n = S⁻¹(2πħ(n+½))`. The offset `ΔE_n = E_n − 𝓔_n` has the expansion
//! `ΔE/ħ ~ Σ_{(j,k,l)∈𝒜} ħ^j/(𝓔^k T(𝓔)^l) P_{j,k,l}(τ₋𝓔/ħ, τ₊𝓔/ħ)`.

mod index_set;
mod trigpoly;

pub use index_set::{index_set_generate, IndexTriple, MAX_J_BOUND};
pub use trigpoly::TrigPoly2;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::core_model::{action_inverse, action_s, period_t, ModelParams};
use crate::error::{invalid, BathtubError, Result};
use crate::numerics::brent;
use crate::special_functions::{
    cap_f_minus_one, cos_sin_2pi, remainder, remainder_from_trig, theta_tilde, Z_SWITCH,
};

/// Lower end of the root bracket for the ground state.
pub const GROUND_STATE_FLOOR: f64 = 1e-12;

/// Smallest Bohr–Sommerfeld energy for which the correction series is
/// evaluated.
pub const SERIES_MIN_ENERGY: f64 = 0.1;

/// Highest supported truncation order of the correction series.
pub const MAX_SERIES_ORDER: u32 = 6;

/// Denominator `D` in the prefactor `√m·ℓ/(D√2)` of the `(5, 11/2, 3)`
/// coefficient; fixed by a high-precision fit of eigenvalue residuals (see
/// `scripts/verify_coefficients.py`).
pub const FLAT_TERM_DENOMINATOR: f64 = 512.0;

/// Left-hand side `Φ(E)` of the quantization condition, evaluated directly
/// from the angle function. Continuous and strictly increasing, `Φ(0) = −π`.
pub fn phase_phi(energy: f64, p: &ModelParams) -> Result<f64> {
    if !(energy >= 0.0) {
        return invalid(format!("phase requires E >= 0, got {energy}"));
    }
    let h = p.hbar();
    let flat = p.flat_coefficient() * energy.sqrt() / h;
    let tm = theta_tilde(energy / (2.0 * h * p.omega_minus()))?.theta;
    let tp = theta_tilde(energy / (2.0 * h * p.omega_plus()))?.theta;
    Ok(flat + tm + tp)
}

/// Bohr–Sommerfeld energy `𝓔_n = S⁻¹(2πħ(n+½))`.
pub fn bohr_sommerfeld(n: u64, p: &ModelParams) -> Result<f64> {
    action_inverse(2.0 * PI * p.hbar() * (n as f64 + 0.5), p)
}

/// Result of solving the quantization condition for one index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSolution {
    pub n: u64,
    /// `𝓔_n`.
    pub e_bohr: f64,
    /// `ΔE_n = E_n − 𝓔_n`, resolved to full relative precision.
    pub delta: f64,
    /// `E_n = 𝓔_n + ΔE_n`.
    pub e_exact: f64,
    /// `Φ(E_n) − πn` as seen by the solver.
    pub residual: f64,
}

/// Per-index data shared by every evaluation of the quantization condition.
struct DeltaEquation {
    e_bohr: f64,
    flat: f64,
    tau: f64,
    hbar: f64,
    omegas: [f64; 2],
    base_phase: [(f64, f64); 2],
}

impl DeltaEquation {
    fn new(e_bohr: f64, p: &ModelParams) -> Self {
        let h = p.hbar();
        let omegas = [p.omega_minus(), p.omega_plus()];
        Self {
            e_bohr,
            flat: p.flat_coefficient(),
            tau: p.tau_sum(),
            hbar: h,
            omegas,
            base_phase: omegas.map(|w| cos_sin_2pi(e_bohr / (2.0 * h * w))),
        }
    }

    /// `Φ(𝓔 + Δ) − πn`, rewritten as
    /// `(S(𝓔+Δ) − S(𝓔))/2ħ + r(z₋) + r(z₊)` so that no large phase is ever
    /// subtracted. The oscillatory phases `2πz±` are split into the exactly
    /// reduced Bohr–Sommerfeld part and the small increment `πΔ/ħω±`.
    fn eval(&self, delta: f64) -> f64 {
        let e = self.e_bohr + delta;
        let linear = delta * (2.0 * self.flat / (e.sqrt() + self.e_bohr.sqrt()) + self.tau)
            / (2.0 * self.hbar);
        let mut total = linear;
        for (w, (cb, sb)) in self.omegas.iter().zip(self.base_phase) {
            let z = e / (2.0 * self.hbar * w);
            let r = if z < Z_SWITCH {
                remainder(z).expect("z >= 0 inside the bracket")
            } else {
                let a = 0.5 * cap_f_minus_one(z).expect("z > 0 inside the bracket");
                let (sd, cd) = (PI * delta / (self.hbar * w)).sin_cos();
                remainder_from_trig(a, cb * cd - sb * sd, sb * cd + cb * sd)
            };
            total += r;
        }
        total
    }
}

/// Solves `Φ(E) = πn` for the `n`-th eigenvalue.
///
/// The root is bracketed by the interlacing bounds `𝓔_{n−1} < E < 𝓔_{n+1}`
/// (with `𝓔_{−1}` replaced by [`GROUND_STATE_FLOOR`]), narrowed around the
/// correction-series estimate, and refined with Brent's method to full
/// precision in `ΔE`.
pub fn solve_eigen(n: u64, p: &ModelParams) -> Result<EigenSolution> {
    let e_bohr = bohr_sommerfeld(n, p)?;
    let e_lo = if n == 0 {
        GROUND_STATE_FLOOR
    } else {
        bohr_sommerfeld(n - 1, p)?
    };
    let e_hi = bohr_sommerfeld(n + 1, p)?;
    let (d_lo, d_hi) = (e_lo - e_bohr, e_hi - e_bohr);
    let eq = DeltaEquation::new(e_bohr, p);
    let g = |d: f64| eq.eval(d);

    let guess = correction_series(e_bohr, p, MAX_SERIES_ORDER)
        .unwrap_or(0.0)
        .clamp(0.5 * d_lo, 0.5 * d_hi);
    let g_guess = g(guess);
    if g_guess == 0.0 {
        return Ok(finish(n, e_bohr, guess, 0.0));
    }
    // Step away from the guess, growing geometrically, until the sign flips.
    let mut step = (1e-3 * guess.abs())
        .max(1e-15 * e_bohr)
        .max(f64::MIN_POSITIVE);
    let (mut a, mut b, mut fa, mut fb) = (guess, guess, g_guess, g_guess);
    while fa.signum() == fb.signum() {
        if g_guess > 0.0 {
            if a <= d_lo {
                return Err(not_bracketed(n, p));
            }
            b = a;
            fb = fa;
            a = (guess - step).max(d_lo);
            fa = g(a);
        } else {
            if b >= d_hi {
                return Err(not_bracketed(n, p));
            }
            a = b;
            fa = fb;
            b = (guess + step).min(d_hi);
            fb = g(b);
        }
        step *= 16.0;
    }
    let delta = brent(g, a, b, fa, fb, f64::MIN_POSITIVE, 400)?;
    Ok(finish(n, e_bohr, delta, g(delta)))
}

fn finish(n: u64, e_bohr: f64, delta: f64, residual: f64) -> EigenSolution {
    EigenSolution {
        n,
        e_bohr,
        delta,
        e_exact: e_bohr + delta,
        residual,
    }
}

fn not_bracketed(n: u64, p: &ModelParams) -> BathtubError {
    BathtubError::Numerical(format!(
        "quantization condition not bracketed by the interlacing bounds for n={n} ({p}); \
         this indicates an angle-function branch error"
    ))
}

/// The `n`-th eigenvalue `E_n`. The returned value is converged far beyond
/// `tol` (a relative tolerance, which must be positive); it is accepted for
/// interface compatibility and validated.
pub fn eigenvalue_exact(n: u64, p: &ModelParams, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return invalid(format!("tolerance must be > 0, got {tol}"));
    }
    Ok(solve_eigen(n, p)?.e_exact)
}

/// A correction polynomial `P_{j,k,l}` together with its index triple.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionTerm {
    pub index: IndexTriple,
    pub poly: TrigPoly2,
}

/// The five lowest correction polynomials, in index order
/// `(2,2,1), (4,4,1), (4,4,2), (5,5,2), (5,11/2,3)`.
///
/// With `Σ(x, y) = ω₋² cos x + ω₊² cos y`:
///
/// ```text
/// P₂₂₁ = Σ/16
/// P₄₄₁ = −5(ω₋⁴ cos x + ω₊⁴ cos y)/128 + (ω₋⁴ sin 2x + ω₊⁴ sin 2y)/1024
/// P₄₄₂ = −(π/256)(ω₋ sin x + ω₊ sin y)·Σ
/// P₅₅₂ = −Σ²/128 = −2·P₂₂₁²
/// P₅,₁₁/₂,₃ = √m·ℓ/(512√2)·Σ²
/// ```
///
/// The signs of `P₄₄₂` and `P₅₅₂` follow from expanding the quantization
/// condition with the correct derivative of the remainder,
/// `r′(z) = π sin 2πz/(64z²) + cos 2πz/(64z³) + O(z⁻⁴)`, and are confirmed
/// numerically: with them the residual after all five terms decays like
/// `𝓔⁻⁶` (see `scripts/verify_coefficients.py`).
pub fn correction_polynomials(p: &ModelParams) -> Vec<CorrectionTerm> {
    let (wm, wp) = (p.omega_minus(), p.omega_plus());
    let (wm2, wp2) = (wm * wm, wp * wp);
    let sigma = &TrigPoly2::cos(1, 0, wm2) + &TrigPoly2::cos(0, 1, wp2);
    let sigma2 = &sigma * &sigma;
    let p441 = &(&TrigPoly2::cos(1, 0, -5.0 * wm2 * wm2 / 128.0)
        + &TrigPoly2::cos(0, 1, -5.0 * wp2 * wp2 / 128.0))
        + &(&TrigPoly2::sin(2, 0, wm2 * wm2 / 1024.0) + &TrigPoly2::sin(0, 2, wp2 * wp2 / 1024.0));
    let sines = &TrigPoly2::sin(1, 0, wm) + &TrigPoly2::sin(0, 1, wp);
    let p442 = (&sines * &sigma).scale(-PI / 256.0);
    let flat = p.m().sqrt() * p.ell() / (FLAT_TERM_DENOMINATOR * 2f64.sqrt());
    vec![
        CorrectionTerm {
            index: IndexTriple::new(2, 4, 1),
            poly: sigma.scale(1.0 / 16.0),
        },
        CorrectionTerm {
            index: IndexTriple::new(4, 8, 1),
            poly: p441,
        },
        CorrectionTerm {
            index: IndexTriple::new(4, 8, 2),
            poly: p442,
        },
        CorrectionTerm {
            index: IndexTriple::new(5, 10, 2),
            poly: sigma2.scale(-1.0 / 128.0),
        },
        CorrectionTerm {
            index: IndexTriple::new(5, 11, 3),
            poly: sigma2.scale(flat),
        },
    ]
}

/// `𝓔^k` for `k = two_k/2`, using the positive real power.
fn energy_power(e: f64, two_k: u32) -> f64 {
    let whole = e.powi((two_k / 2) as i32);
    if two_k % 2 == 0 {
        whole
    } else {
        whole * e.sqrt()
    }
}

/// Correction `ΔE ≈ ħ Σ ħ^j/(𝓔^k T(𝓔)^l) P_{j,k,l}(τ₋𝓔/ħ, τ₊𝓔/ħ)` over the
/// built-in [`correction_polynomials`] with `j < order`.
///
/// `order = 4` keeps the leading term only; `order = 6` keeps all five.
/// Requires `E_bohr > 0.1` and `order ≤ 6`.
pub fn correction_series(e_bohr: f64, p: &ModelParams, order: u32) -> Result<f64> {
    correction_series_with(&correction_polynomials(p), e_bohr, p, order)
}

/// [`correction_series`] over an explicit list of terms.
pub fn correction_series_with(
    terms: &[CorrectionTerm],
    e_bohr: f64,
    p: &ModelParams,
    order: u32,
) -> Result<f64> {
    if order > MAX_SERIES_ORDER {
        return invalid(format!(
            "correction series order {order} exceeds {MAX_SERIES_ORDER}"
        ));
    }
    if !(e_bohr > SERIES_MIN_ENERGY) {
        return invalid(format!(
            "correction series requires E_bohr > {SERIES_MIN_ENERGY}, got {e_bohr}"
        ));
    }
    let h = p.hbar();
    let t = period_t(e_bohr, p)?;
    let phase = |w: f64| {
        let (c, s) = cos_sin_2pi(e_bohr / (2.0 * h * w));
        Complex64::new(c, s)
    };
    let (ex, ey) = (phase(p.omega_minus()), phase(p.omega_plus()));
    let mut total = 0.0;
    for term in terms.iter().filter(|t| t.index.j < order) {
        let IndexTriple { j, two_k, l } = term.index;
        let weight = h.powi(j as i32 + 1) / (energy_power(e_bohr, two_k) * t.powi(l as i32));
        total += weight * term.poly.eval_with_phases(ex, ey).re;
    }
    Ok(total)
}

/// One row of an eigenvalue table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRecord {
    pub n: u64,
    pub e_exact: f64,
    pub e_bohr: f64,
    /// `𝓔_n + ΔE(order)`; `None` where the series is not defined
    /// (`𝓔_n ≤ 0.1`).
    pub e_asymptotic: Option<f64>,
    /// `E_exact − E_bohr`.
    pub delta: f64,
}

/// Eigenvalue records for every `n` in `range`, computed in parallel and
/// returned in index order.
pub fn eigen_batch(
    range: std::ops::Range<u64>,
    p: &ModelParams,
    order: u32,
) -> Result<Vec<EigenRecord>> {
    range
        .into_par_iter()
        .map(|n| {
            let sol = solve_eigen(n, p)?;
            let e_asymptotic = correction_series(sol.e_bohr, p, order)
                .ok()
                .map(|d| sol.e_bohr + d);
            Ok(EigenRecord {
                n,
                e_exact: sol.e_exact,
                e_bohr: sol.e_bohr,
                e_asymptotic,
                delta: sol.delta,
            })
        })
        .collect()
}

/// Asymptotic eigenvalue `𝓔_n + ΔE(order)`.
pub fn eigenvalue_asymptotic(n: u64, p: &ModelParams, order: u32) -> Result<f64> {
    let e = bohr_sommerfeld(n, p)?;
    Ok(e + correction_series(e, p, order)?)
}

/// Consistency check used by tests: `S(𝓔_n) = 2πħ(n+½)`.
pub fn bohr_action_residual(n: u64, p: &ModelParams) -> Result<f64> {
    let w = 2.0 * PI * p.hbar() * (n as f64 + 0.5);
    Ok((action_s(bohr_sommerfeld(n, p)?, p)? - w) / w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(wm: f64, wp: f64, ell: f64, hbar: f64) -> ModelParams {
        ModelParams::new(1.0, wm, wp, ell, hbar).unwrap()
    }

    #[test]
    fn phase_examples() {
        let p = params(1.0, 2.0, 1.0, 1.0);
        assert!((phase_phi(0.0, &p).unwrap() + PI).abs() < 1e-15);
        let ho = params(1.3, 1.3, 0.0, 0.7);
        for n in [0u64, 1, 7, 40] {
            let e = 0.7 * 1.3 * (n as f64 + 0.5);
            assert!((phase_phi(e, &ho).unwrap() - PI * n as f64).abs() < 1e-10);
        }
        assert!(phase_phi(-1.0, &p).is_err());
    }

    #[test]
    fn phase_is_increasing() {
        let p = params(1.0, 2f64.sqrt(), 1.0, 0.3);
        let mut prev = phase_phi(0.0, &p).unwrap();
        for i in 1..2000 {
            let v = phase_phi(i as f64 * 0.01, &p).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn harmonic_oscillator_levels() {
        let p = params(1.0, 1.0, 0.0, 1.0);
        assert!((eigenvalue_exact(5, &p, 1e-14).unwrap() - 5.5).abs() < 1e-12);
    }

    #[test]
    fn bohr_examples() {
        let p = params(1.0, 2.0, 0.0, 1.0);
        assert!((bohr_sommerfeld(0, &p).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        for n in [0u64, 3, 100] {
            let expected = p.omega_bar() * (n as f64 + 0.5);
            assert!((bohr_sommerfeld(n, &p).unwrap() - expected).abs() < 1e-12 * expected);
        }
        let q = params(1.0, 2.0, 1.0, 0.1);
        for n in [0u64, 10, 1000] {
            assert!(bohr_action_residual(n, &q).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn solver_residual_and_interlacing() {
        let p = params(1.0, 2.0, 1.0, 1.0);
        for n in 0..60u64 {
            let s = solve_eigen(n, &p).unwrap();
            let phi = phase_phi(s.e_exact, &p).unwrap();
            assert!((phi - PI * n as f64).abs() < 1e-10, "n={n}");
            if n > 0 {
                assert!(bohr_sommerfeld(n - 1, &p).unwrap() < s.e_exact);
            }
            assert!(s.e_exact < bohr_sommerfeld(n + 1, &p).unwrap());
        }
    }

    #[test]
    fn polynomial_examples() {
        let p = params(1.0, 2.0, 1.0, 1.0);
        let terms = correction_polynomials(&p);
        let idx: Vec<String> = terms.iter().map(|t| t.index.to_string()).collect();
        assert_eq!(
            idx,
            ["(2,2,1)", "(4,4,1)", "(4,4,2)", "(5,5,2)", "(5,11/2,3)"]
        );
        assert!((terms[0].poly.eval(0.0, 0.0) - 5.0 / 16.0).abs() < 1e-15);
        assert_eq!(terms[1].poly.degree(), 2);
        let p221_sq = &terms[0].poly * &terms[0].poly;
        for (x, y) in [(0.3, 1.7), (4.0, -2.2)] {
            assert!((terms[3].poly.eval(x, y) + 2.0 * p221_sq.eval(x, y)).abs() < 1e-14);
        }
        for t in &terms {
            assert!(t.poly.is_real(1e-14));
            assert!(2 * t.poly.degree() <= t.index.j);
        }
    }

    #[test]
    fn leading_series_term() {
        let p = params(1.0, 2.0, 1.0, 0.1);
        let e = 3.7;
        let t = period_t(e, &p).unwrap();
        let (x, y) = (p.tau_minus() * e / p.hbar(), p.tau_plus() * e / p.hbar());
        let expected = p.hbar().powi(3) / (16.0 * e * e * t) * (x.cos() + 4.0 * y.cos());
        let got = correction_series(e, &p, 4).unwrap();
        assert!((got - expected).abs() < 1e-12 * expected.abs());
    }

    #[test]
    fn series_rejects_bad_arguments() {
        let p = params(1.0, 2.0, 1.0, 1.0);
        assert!(correction_series(2.0, &p, 7).is_err());
        assert!(correction_series(0.05, &p, 4).is_err());
    }

    #[test]
    fn zero_length_leading_term_reduces() {
        let p = params(1.0, 2.0, 0.0, 1.0);
        let e = bohr_sommerfeld(37, &p).unwrap();
        let t = p.tau_sum();
        let y = p.tau_plus() * e;
        let expected = (4.0 - 1.0) * y.cos() / (16.0 * e * e * t);
        assert!((correction_series(e, &p, 4).unwrap() - expected).abs() < 1e-12 * expected.abs());
    }

    #[test]
    fn batch_is_ordered_and_increasing() {
        let p = params(1.0, 2.0, 1.0, 1.0);
        let rows = eigen_batch(0..40, &p, 6).unwrap();
        assert!(rows.iter().enumerate().all(|(i, r)| r.n == i as u64));
        assert!(rows.windows(2).all(|w| w[0].e_exact < w[1].e_exact));
    }
}
