//! The smoothed eigenvalue-counting function
//!
//! ```text
//! N(E; ħ) = Σₙ χ(Eₙ) ρ((E − Eₙ)/ħ),    ρ(x) = (1/2π) ∫ e^{ixt} ρ̂(t) dt,
//! ```
//!
//! and its periodic-orbit predictions. If `supp ρ̂` contains no period with
//! at most one reflection the sum is `O(ħ⁴)`; if it isolates the transmitted
//! period `T* = kT(E)` the sum tends to
//! `(−1)ᵏ e^{ikS(E)/ħ} χ(E) T(E) ρ̂(T*)/2π`; if it isolates a one-reflection
//! period `T* = T_{k,α,β}(E)` the sum is
//! `ħ² i^{−(2k+1)} e^{iS_{k,α,β}(E)/ħ} ω±² χ(E) T* ρ̂(T*)/(64πE²) + O(ħ³)`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::core_model::{
    action_s, one_reflection_periods_in, period_t, ModelParams, PeriodicOrbit,
};
use crate::error::{invalid, BathtubError, Result};
use crate::numerics::{linear_fit, pairwise_sum};
use crate::quantization::{eigenvalue_asymptotic, solve_eigen};

/// Smooth compactly supported bump
/// `normalization · exp(−1/(1 − u²))`, `u = (x − center)/half_width`,
/// vanishing with all derivatives outside `|u| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSpec {
    pub center: f64,
    pub half_width: f64,
    pub normalization: f64,
}

impl BumpSpec {
    /// Bump with unit normalization (peak value `e⁻¹`).
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite() && center.is_finite()) {
            return invalid(format!(
                "bump needs a finite center and half-width > 0, got ({center}, {half_width})"
            ));
        }
        Ok(Self {
            center,
            half_width,
            normalization: 1.0,
        })
    }

    /// Value at `x`.
    pub fn value(&self, x: f64) -> f64 {
        self.normalization * bump_profile((x - self.center) / self.half_width)
    }

    /// Closed support `[center − half_width, center + half_width]`.
    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }

    /// Default energy window: centered at `E` with half-width `0.3·E`.
    pub fn default_energy_window(energy: f64) -> Result<Self> {
        Self::new(energy, 0.3 * energy)
    }
}

/// `exp(−1/(1 − u²))` on `|u| < 1`, zero elsewhere.
pub fn bump_profile(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

/// Composite Gauss–Legendre rule on `[−1, 1]` with the bump profile folded
/// into the weights, used to evaluate `ρ` from `ρ̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Gauss–Legendre order per panel.
const PANEL_ORDER: usize = 16;
/// Accuracy target for `ρ`, absolute (relative to the peak of `ρ̂`).
const RHO_TOLERANCE: f64 = 1e-12;

impl FourierQuadrature {
    fn with_panels(panels: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).expect("non-zero order"));
        let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
        let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
        let width = 2.0 / panels as f64;
        for k in 0..panels {
            let (a, b) = (-1.0 + k as f64 * width, -1.0 + (k + 1) as f64 * width);
            for &(x, w) in rule.as_node_weight_pairs() {
                let u = 0.5 * ((b - a) * x + (b + a));
                nodes.push(u);
                weights.push(0.5 * (b - a) * w * bump_profile(u));
            }
        }
        Self { nodes, weights }
    }

    /// `∫_{−1}^{1} e^{iωu} b(u) du`.
    fn transform(&self, omega: f64) -> Complex64 {
        let terms: Vec<Complex64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| Complex64::cis(omega * u) * w)
            .collect();
        pairwise_sum(&terms)
    }

    /// Rule whose transform is converged to `1e−12` for every frequency
    /// `|ω| ≤ omega_max`, found by doubling the number of panels.
    pub fn adaptive(omega_max: f64) -> Self {
        let probes: Vec<f64> = (0..=8).map(|i| omega_max.abs() * i as f64 / 8.0).collect();
        let mut panels = 1;
        let mut rule = Self::with_panels(panels);
        while panels < 4096 {
            let finer = Self::with_panels(2 * panels);
            let converged = probes
                .iter()
                .all(|&w| (finer.transform(w) - rule.transform(w)).norm() < 0.1 * RHO_TOLERANCE);
            panels *= 2;
            rule = finer;
            if converged {
                break;
            }
        }
        rule
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// `true` if the rule has no nodes.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Energy window `χ`, time window `ρ̂` and the quadrature for `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestPair {
    pub chi: BumpSpec,
    pub rho_hat: BumpSpec,
    pub quadrature: FourierQuadrature,
}

impl TestPair {
    /// Builds the pair with a quadrature accurate for every argument
    /// `|x| ≤ x_max` of `ρ`.
    pub fn new(chi: BumpSpec, rho_hat: BumpSpec, x_max: f64) -> Result<Self> {
        let (lo, _) = chi.support();
        if !(lo > 0.0) {
            return invalid(format!(
                "energy window must be supported in E > 0, support starts at {lo}"
            ));
        }
        let quadrature = FourierQuadrature::adaptive(x_max * rho_hat.half_width);
        Ok(Self {
            chi,
            rho_hat,
            quadrature,
        })
    }

    /// Pair suitable for counting sums at energy `energy` for every
    /// `ħ ≥ hbar_min`.
    pub fn for_sweep(chi: BumpSpec, rho_hat: BumpSpec, energy: f64, hbar_min: f64) -> Result<Self> {
        let x_max = ((energy - chi.center).abs() + chi.half_width) / hbar_min;
        Self::new(chi, rho_hat, x_max)
    }
}

/// `ρ(x) = (1/2π) ∫ e^{ixt} ρ̂(t) dt`.
pub fn rho_eval(x: f64, tp: &TestPair) -> Complex64 {
    let rh = &tp.rho_hat;
    let scale = rh.normalization * rh.half_width / (2.0 * PI);
    Complex64::cis(x * rh.center) * tp.quadrature.transform(x * rh.half_width) * scale
}

/// A source of eigenvalues covering an energy interval.
pub trait EigenSource: Sync {
    /// Every eigenvalue in `[lo, hi]`, ascending; an error if the source
    /// cannot guarantee completeness.
    fn eigenvalues_in(&self, lo: f64, hi: f64, p: &ModelParams) -> Result<Vec<f64>>;
}

/// Indices `n` whose eigenvalue can lie in `[lo, hi]`, from interlacing.
fn candidate_indices(lo: f64, hi: f64, p: &ModelParams) -> Result<std::ops::RangeInclusive<u64>> {
    let q = |e: f64| -> Result<f64> { Ok(action_s(e.max(0.0), p)? / (2.0 * PI * p.hbar()) - 0.5) };
    let n_lo = (q(lo)?.floor() - 1.0).max(0.0) as u64;
    let n_hi = (q(hi)?.ceil() + 1.0).max(0.0) as u64;
    Ok(n_lo..=n_hi)
}

/// Exact eigenvalues from the quantization condition.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactEigenvalues;

impl EigenSource for ExactEigenvalues {
    fn eigenvalues_in(&self, lo: f64, hi: f64, p: &ModelParams) -> Result<Vec<f64>> {
        let values: Vec<f64> = candidate_indices(lo, hi, p)?
            .into_par_iter()
            .map(|n| solve_eigen(n, p).map(|s| s.e_exact))
            .collect::<Result<_>>()?;
        Ok(values.into_iter().filter(|&e| e >= lo && e <= hi).collect())
    }
}

/// Eigenvalues from the Bohr–Sommerfeld rule plus the correction series of
/// the given order.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticEigenvalues {
    pub order: u32,
}

impl EigenSource for AsymptoticEigenvalues {
    fn eigenvalues_in(&self, lo: f64, hi: f64, p: &ModelParams) -> Result<Vec<f64>> {
        let values: Vec<f64> = candidate_indices(lo, hi, p)?
            .map(|n| eigenvalue_asymptotic(n, p, self.order))
            .collect::<Result<_>>()?;
        Ok(values.into_iter().filter(|&e| e >= lo && e <= hi).collect())
    }
}

/// A precomputed list of the eigenvalues `E₀ < E₁ < …` that is known to be
/// complete up to `complete_up_to`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedEigenvalues {
    pub values: Vec<f64>,
    pub complete_up_to: f64,
}

impl EigenSource for TabulatedEigenvalues {
    fn eigenvalues_in(&self, lo: f64, hi: f64, _p: &ModelParams) -> Result<Vec<f64>> {
        if hi > self.complete_up_to {
            return Err(BathtubError::Coverage(format!(
                "table is complete up to E={} but the window extends to {hi}",
                self.complete_up_to
            )));
        }
        Ok(self
            .values
            .iter()
            .copied()
            .filter(|&e| e >= lo && e <= hi)
            .collect())
    }
}

/// Outcome of one counting sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingResult {
    /// The finite sum `Σ χ(Eₙ) ρ((E − Eₙ)/ħ)`.
    pub value: Complex64,
    pub hbar: f64,
    pub e_center: f64,
    /// Leading-order orbit prediction, if one was requested.
    pub prediction: Option<Complex64>,
    /// Number of eigenvalues inside `supp χ`.
    pub terms: usize,
}

/// The smoothed counting function at energy `energy`.
///
/// Terms are computed in parallel and reduced by pairwise summation in index
/// order, so the result is independent of the thread count.
pub fn counting_sum(
    energy: f64,
    p: &ModelParams,
    tp: &TestPair,
    eigs: &dyn EigenSource,
) -> Result<CountingResult> {
    let (lo, hi) = tp.chi.support();
    let values = eigs.eigenvalues_in(lo, hi, p)?;
    let h = p.hbar();
    let terms: Vec<Complex64> = values
        .par_iter()
        .map(|&e| rho_eval((energy - e) / h, tp) * tp.chi.value(e))
        .collect();
    Ok(CountingResult {
        value: pairwise_sum(&terms),
        hbar: h,
        e_center: energy,
        prediction: None,
        terms: terms.len(),
    })
}

/// Checks that `supp ρ̂ ∩ 𝒯₁(E) = {T*}`.
fn check_isolation(energy: f64, target: f64, p: &ModelParams, tp: &TestPair) -> Result<()> {
    let (a, b) = tp.rho_hat.support();
    if !(target > a && target < b) {
        return Err(BathtubError::Isolation(format!(
            "period {target} is outside supp rho_hat = [{a}, {b}]"
        )));
    }
    let periods = one_reflection_periods_in(energy, p, a, b)?;
    if let Some(other) = periods
        .iter()
        .find(|&&t| (t - target).abs() > 1e-12 * (1.0 + target.abs()))
    {
        return Err(BathtubError::Isolation(format!(
            "supp rho_hat = [{a}, {b}] also contains the period {other} besides {target}"
        )));
    }
    Ok(())
}

/// Leading term for `ρ̂` isolating the transmitted period `T* = kT(E)`:
/// `(−1)ᵏ e^{ikS(E)/ħ} χ(E) T(E) ρ̂(T*)/2π`.
pub fn prediction_transmitted(
    energy: f64,
    k: i64,
    p: &ModelParams,
    tp: &TestPair,
) -> Result<Complex64> {
    let t = period_t(energy, p)?;
    let target = k as f64 * t;
    check_isolation(energy, target, p, tp)?;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let phase = Complex64::cis(k as f64 * action_s(energy, p)? / p.hbar());
    Ok(phase * (sign * tp.chi.value(energy) * t * tp.rho_hat.value(target) / (2.0 * PI)))
}

/// Leading term for `ρ̂` isolating the one-reflection period
/// `T* = T_{k,α,β}(E)` (`|α| + |β| = 1`):
/// `ħ² i^{−(2k+1)} e^{iS_{k,α,β}/ħ} ω±² χ(E) T* ρ̂(T*)/(64πE²)`, with
/// `ω₋` if `|α| = 1` and `ω₊` if `|β| = 1`.
pub fn prediction_reflected(
    energy: f64,
    k: i64,
    alpha: i64,
    beta: i64,
    p: &ModelParams,
    tp: &TestPair,
) -> Result<Complex64> {
    if alpha.abs() + beta.abs() != 1 {
        return invalid(format!(
            "reflected orbit needs |alpha|+|beta| = 1, got ({alpha}, {beta})"
        ));
    }
    let orbit = PeriodicOrbit::new(k, alpha, beta, energy, p)?;
    check_isolation(energy, orbit.period, p, tp)?;
    let omega = if alpha != 0 {
        p.omega_minus()
    } else {
        p.omega_plus()
    };
    let maslov = Complex64::i().powi(-(2 * k as i32 + 1));
    let phase = Complex64::cis(orbit.action / p.hbar());
    let h = p.hbar();
    let amplitude = h
        * h
        * omega
        * omega
        * tp.chi.value(energy)
        * orbit.period
        * tp.rho_hat.value(orbit.period)
        / (64.0 * PI * energy * energy);
    Ok(maslov * phase * amplitude)
}

/// Which orbit prediction accompanies a counting sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitSelector {
    pub k: i64,
    pub alpha: i64,
    pub beta: i64,
}

/// Prediction for the selected orbit (transmitted if `α = β = 0`).
pub fn prediction(
    energy: f64,
    sel: OrbitSelector,
    p: &ModelParams,
    tp: &TestPair,
) -> Result<Complex64> {
    if sel.alpha == 0 && sel.beta == 0 {
        prediction_transmitted(energy, sel.k, p, tp)
    } else {
        prediction_reflected(energy, sel.k, sel.alpha, sel.beta, p, tp)
    }
}

/// Counting sums (and optional predictions) for each `ħ` in `hbars`.
pub fn hbar_sweep(
    energy: f64,
    p: &ModelParams,
    chi: BumpSpec,
    rho_hat: BumpSpec,
    hbars: &[f64],
    eigs: &dyn EigenSource,
    selector: Option<OrbitSelector>,
) -> Result<Vec<CountingResult>> {
    let hbar_min = hbars.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(hbar_min > 0.0) {
        return invalid("hbar sweep needs positive hbar values");
    }
    let tp = TestPair::for_sweep(chi, rho_hat, energy, hbar_min)?;
    hbars
        .iter()
        .map(|&h| {
            let q = p.with_hbar(h)?;
            let mut res = counting_sum(energy, &q, &tp, eigs)?;
            if let Some(sel) = selector {
                res.prediction = Some(prediction(energy, sel, &q, &tp)?);
            }
            Ok(res)
        })
        .collect()
}

/// Time window isolating `target ∈ 𝒯₁(E)`: centered at the target with
/// half-width `0.4 ×` the distance to the nearest other element of `𝒯₁(E)`.
pub fn isolating_window(energy: f64, target: f64, p: &ModelParams) -> Result<BumpSpec> {
    let t = period_t(energy, p)?;
    let reach = t + p.tau_minus() + p.tau_plus();
    let periods = one_reflection_periods_in(energy, p, target - reach, target + reach)?;
    let gap = periods
        .iter()
        .map(|&x| (x - target).abs())
        .filter(|&d| d > 1e-12 * (1.0 + target.abs()))
        .fold(f64::INFINITY, f64::min);
    BumpSpec::new(target, 0.4 * gap)
}

/// Time window avoiding `𝒯₁(E)`: the widest gap between consecutive
/// elements of `𝒯₁(E) ∩ [t_lo, t_hi]` (first one on ties), centered in the
/// gap with half-width `0.4 ×` its length.
pub fn gap_window(energy: f64, p: &ModelParams, t_lo: f64, t_hi: f64) -> Result<BumpSpec> {
    let periods = one_reflection_periods_in(energy, p, t_lo, t_hi)?;
    let best = periods
        .windows(2)
        .map(|w| (w[0], w[1]))
        .fold(None, |best: Option<(f64, f64)>, (a, b)| match best {
            Some((x, y)) if y - x >= (b - a) * (1.0 - 1e-12) => Some((x, y)),
            _ => Some((a, b)),
        })
        .ok_or_else(|| {
            BathtubError::Isolation(format!("fewer than two periods in [{t_lo}, {t_hi}]"))
        })?;
    BumpSpec::new(0.5 * (best.0 + best.1), 0.4 * (best.1 - best.0))
}

/// Values below this magnitude are treated as numerical noise.
pub const NOISE_FLOOR: f64 = 1e-14;

/// Result of fitting `|sum| ∝ ħ^s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingOutcome {
    /// Least-squares slope of `log|sum|` against `log ħ`.
    Slope(f64),
    /// Every value sits at the noise floor (consistent with `O(ħ^∞)`).
    BelowNoise,
}

/// Fits the `ħ` exponent of `|sum|`. Needs at least four samples spanning a
/// factor of eight; values below [`NOISE_FLOOR`] are excluded.
pub fn scaling_exponent(values: &[(f64, f64)]) -> Result<ScalingOutcome> {
    if values.len() < 4 {
        return invalid(format!(
            "scaling fit needs at least 4 samples, got {}",
            values.len()
        ));
    }
    let hmin = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    let hmax = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
    if !(hmin > 0.0 && hmax / hmin >= 8.0 * (1.0 - 1e-12)) {
        return invalid(format!(
            "scaling fit needs hbar values spanning a factor >= 8, got [{hmin}, {hmax}]"
        ));
    }
    let kept: Vec<(f64, f64)> = values
        .iter()
        .copied()
        .filter(|&(_, v)| v.abs() >= NOISE_FLOOR)
        .collect();
    if kept.len() < 2 {
        return Ok(ScalingOutcome::BelowNoise);
    }
    let lx: Vec<f64> = kept.iter().map(|v| v.0.ln()).collect();
    let ly: Vec<f64> = kept.iter().map(|v| v.1.abs().ln()).collect();
    Ok(ScalingOutcome::Slope(linear_fit(&lx, &ly).0))
}
