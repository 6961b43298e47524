//! The physical model: parameters, the piecewise potential, the classical
//! action and period of the transmitted orbit, the inverse action, and the
//! catalog of periodic orbits with at most one reflection.
//!
//! The operator is `P = −(ħ²/2m) d²/dx² + V(x)` with
//!
//! ```text
//!         ½ m ω₋² x²          x < 0
//! V(x) =  0                   0 ≤ x ≤ ℓ
//!         ½ m ω₊² (x − ℓ)²    x > ℓ
//! ```

use std::f64::consts::PI;
use std::fmt;

use crate::error::{invalid, BathtubError, Result};

/// Physical parameters of the operator. Constructed through
/// [`ModelParams::new`], which enforces `m, ω₋, ω₊, ħ > 0` and `ℓ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    m: f64,
    omega_minus: f64,
    omega_plus: f64,
    ell: f64,
    hbar: f64,
}

impl Default for ModelParams {
    /// `m = ħ = ω₋ = ℓ = 1`, `ω₊ = 2`.
    fn default() -> Self {
        Self {
            m: 1.0,
            omega_minus: 1.0,
            omega_plus: 2.0,
            ell: 1.0,
            hbar: 1.0,
        }
    }
}

impl ModelParams {
    /// Validated constructor.
    pub fn new(m: f64, omega_minus: f64, omega_plus: f64, ell: f64, hbar: f64) -> Result<Self> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                invalid(format!("{name} must be finite and > 0, got {v}"))
            }
        };
        positive("m", m)?;
        positive("omega_minus", omega_minus)?;
        positive("omega_plus", omega_plus)?;
        positive("hbar", hbar)?;
        if !(ell.is_finite() && ell >= 0.0) {
            return invalid(format!("ell must be finite and >= 0, got {ell}"));
        }
        Ok(Self {
            m,
            omega_minus,
            omega_plus,
            ell,
            hbar,
        })
    }

    /// Same parameters with a different semiclassical parameter.
    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        Self::new(self.m, self.omega_minus, self.omega_plus, self.ell, hbar)
    }

    /// Mass `m`.
    pub fn m(&self) -> f64 {
        self.m
    }
    /// Frequency `ω₋` of the left quadratic end.
    pub fn omega_minus(&self) -> f64 {
        self.omega_minus
    }
    /// Frequency `ω₊` of the right quadratic end.
    pub fn omega_plus(&self) -> f64 {
        self.omega_plus
    }
    /// Length `ℓ` of the flat middle region.
    pub fn ell(&self) -> f64 {
        self.ell
    }
    /// Semiclassical parameter `ħ`.
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Half-period `τ₋ = π/ω₋` spent in the left well per traversal.
    pub fn tau_minus(&self) -> f64 {
        PI / self.omega_minus
    }
    /// Half-period `τ₊ = π/ω₊` spent in the right well per traversal.
    pub fn tau_plus(&self) -> f64 {
        PI / self.omega_plus
    }
    /// `τ₋ + τ₊`.
    pub fn tau_sum(&self) -> f64 {
        self.tau_minus() + self.tau_plus()
    }
    /// Harmonic mean `ω̄ = 2/(ω₋⁻¹ + ω₊⁻¹)` of the two frequencies.
    pub fn omega_bar(&self) -> f64 {
        2.0 / (1.0 / self.omega_minus + 1.0 / self.omega_plus)
    }
    /// `√(2m)·ℓ`, the coefficient of `√E` in the flat-region action.
    pub fn flat_coefficient(&self) -> f64 {
        (2.0 * self.m).sqrt() * self.ell
    }

    /// `ℓ = 0` with `ω₋ ≠ ω₊`: the asymmetric oscillator, the regime with
    /// non-trivial spectral corrections and heat-trace logarithm.
    pub fn is_asymmetric_oscillator(&self) -> bool {
        self.ell == 0.0 && self.omega_minus != self.omega_plus
    }

    /// `ℓ = 0` with `ω₋ = ω₊`: the plain harmonic oscillator, kept as a
    /// regression case (all corrections vanish).
    pub fn is_harmonic_oscillator(&self) -> bool {
        self.ell == 0.0 && self.omega_minus == self.omega_plus
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} omega_minus={} omega_plus={} ell={} hbar={}",
            self.m, self.omega_minus, self.omega_plus, self.ell, self.hbar
        )
    }
}

/// The bathtub potential `V(x)`; continuous and C¹ at `x = 0` and `x = ℓ`.
pub fn potential(x: f64, p: &ModelParams) -> f64 {
    if x < 0.0 {
        0.5 * p.m * p.omega_minus * p.omega_minus * x * x
    } else if x > p.ell {
        let y = x - p.ell;
        0.5 * p.m * p.omega_plus * p.omega_plus * y * y
    } else {
        0.0
    }
}

/// Reduced action of the transmitted orbit, `S(E) = 2√(2m)ℓ√E + (τ₊+τ₋)E`.
pub fn action_s(energy: f64, p: &ModelParams) -> Result<f64> {
    if !(energy >= 0.0) {
        return invalid(format!("action requires E >= 0, got {energy}"));
    }
    Ok(2.0 * p.flat_coefficient() * energy.sqrt() + p.tau_sum() * energy)
}

/// Period of the transmitted orbit, `T(E) = S′(E) = √(2m)ℓ/√E + τ₊ + τ₋`.
pub fn period_t(energy: f64, p: &ModelParams) -> Result<f64> {
    if !(energy > 0.0) {
        return invalid(format!("period requires E > 0, got {energy}"));
    }
    Ok(p.flat_coefficient() / energy.sqrt() + p.tau_sum())
}

/// Energies below this threshold are returned as exactly zero by
/// [`action_inverse`].
pub const ENERGY_FLOOR: f64 = 1e-12;

/// Inverse of [`action_s`]: the unique `E ≥ 0` with `S(E) = w`.
///
/// `S` is quadratic in `u = √E`, `τu² + 2au − w = 0` with `a = √(2m)ℓ`, and
/// the positive root is evaluated in the cancellation-free form
/// `u = w / (a + √(a² + τw))`.
pub fn action_inverse(w: f64, p: &ModelParams) -> Result<f64> {
    if !(w >= 0.0) {
        return invalid(format!("inverse action requires w >= 0, got {w}"));
    }
    let a = p.flat_coefficient();
    let tau = p.tau_sum();
    let u = w / (a + (a * a + tau * w).sqrt());
    let e = u * u;
    Ok(if e < ENERGY_FLOOR { 0.0 } else { e })
}

/// Which singular point an orbit reflects at, and from which side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrbitKind {
    /// Passes through both junctions (`α = β = 0`).
    Transmitted,
    /// Reflects at `x = 0` coming from the left well: `(k, +1, 0)`.
    ZeroMinus,
    /// Reflects at `x = 0` coming from the flat region: `(k, 0, −1)`.
    ZeroPlus,
    /// Reflects at `x = ℓ` coming from the flat region: `(k, −1, 0)`.
    EllMinus,
    /// Reflects at `x = ℓ` coming from the right well: `(k, 0, +1)`.
    EllPlus,
}

impl OrbitKind {
    /// Kind of the orbit with reflection multiplicities `(α, β)`, or `None`
    /// when `|α| + |β| > 1`.
    pub fn from_reflections(alpha: i64, beta: i64) -> Option<Self> {
        match (alpha, beta) {
            (0, 0) => Some(OrbitKind::Transmitted),
            (1, 0) => Some(OrbitKind::ZeroMinus),
            (0, -1) => Some(OrbitKind::ZeroPlus),
            (-1, 0) => Some(OrbitKind::EllMinus),
            (0, 1) => Some(OrbitKind::EllPlus),
            _ => None,
        }
    }

    /// Short label: `transmitted`, `0-`, `0+`, `l-`, `l+`.
    pub fn label(&self) -> &'static str {
        match self {
            OrbitKind::Transmitted => "transmitted",
            OrbitKind::ZeroMinus => "0-",
            OrbitKind::ZeroPlus => "0+",
            OrbitKind::EllMinus => "l-",
            OrbitKind::EllPlus => "l+",
        }
    }
}

/// A classical periodic trajectory at a fixed energy: `k` full revolutions
/// combined with `α` extra `τ₋` and `β` extra `τ₊` excursions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicOrbit {
    pub k: i64,
    pub alpha: i64,
    pub beta: i64,
    /// `T_{k,α,β}(E) = kT(E) + ατ₋ + βτ₊`.
    pub period: f64,
    /// `S_{k,α,β}(E) = kS(E) + (ατ₋ + βτ₊)E`.
    pub action: f64,
    pub kind: OrbitKind,
}

impl PeriodicOrbit {
    /// Builds the orbit `(k, α, β)` at energy `E > 0` (`|α| + |β| ≤ 1`).
    pub fn new(k: i64, alpha: i64, beta: i64, energy: f64, p: &ModelParams) -> Result<Self> {
        let kind = OrbitKind::from_reflections(alpha, beta).ok_or_else(|| {
            BathtubError::Unsupported(format!(
                "orbits with more than one reflection (alpha={alpha}, beta={beta})"
            ))
        })?;
        let t = period_t(energy, p)?;
        let s = action_s(energy, p)?;
        let shift = alpha as f64 * p.tau_minus() + beta as f64 * p.tau_plus();
        Ok(Self {
            k,
            alpha,
            beta,
            period: k as f64 * t + shift,
            action: k as f64 * s + shift * energy,
            kind,
        })
    }
}

/// All periodic orbits with `|k| ≤ k_max` and at most `reflections ∈ {0, 1}`
/// reflections, sorted by `(k, α, β)`.
///
/// For `ℓ = 0` the two junctions coincide and the `0⁺` / `ℓ⁻` rows (which
/// would reflect inside an empty flat region) are omitted unless
/// `include_degenerate` is set.
pub fn orbit_catalog(
    energy: f64,
    reflections: u32,
    k_max: u32,
    p: &ModelParams,
    include_degenerate: bool,
) -> Result<Vec<PeriodicOrbit>> {
    if !(energy > 0.0) {
        return invalid(format!("orbit catalog requires E > 0, got {energy}"));
    }
    if reflections > 1 {
        return Err(BathtubError::Unsupported(format!(
            "orbit catalog with {reflections} reflections (only 0 or 1 are supported)"
        )));
    }
    let shifts: &[(i64, i64)] = if reflections == 0 {
        &[(0, 0)]
    } else {
        &[(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]
    };
    let k_max = k_max as i64;
    let mut out = Vec::new();
    for k in -k_max..=k_max {
        for &(alpha, beta) in shifts {
            let kind = OrbitKind::from_reflections(alpha, beta).expect("catalog shifts are valid");
            let degenerate = matches!(kind, OrbitKind::ZeroPlus | OrbitKind::EllMinus);
            if p.ell == 0.0 && degenerate && !include_degenerate {
                continue;
            }
            out.push(PeriodicOrbit::new(k, alpha, beta, energy, p)?);
        }
    }
    Ok(out)
}

/// Sorted, de-duplicated elements of `𝒯₁(E)` lying in `[t_lo, t_hi]`.
///
/// Periods closer than `1e-12·(1+|t|)` are merged.
pub fn one_reflection_periods_in(
    energy: f64,
    p: &ModelParams,
    t_lo: f64,
    t_hi: f64,
) -> Result<Vec<f64>> {
    let t = period_t(energy, p)?;
    let reach = t_lo.abs().max(t_hi.abs()) + p.tau_minus() + p.tau_plus();
    let k_max = (reach / t).ceil() as u32 + 1;
    let mut periods: Vec<f64> = orbit_catalog(energy, 1, k_max, p, true)?
        .into_iter()
        .map(|o| o.period)
        .filter(|&x| x >= t_lo && x <= t_hi)
        .collect();
    periods.sort_by(|a, b| a.total_cmp(b));
    periods.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    Ok(periods)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: f64, wm: f64, wp: f64, ell: f64) -> ModelParams {
        ModelParams::new(m, wm, wp, ell, 1.0).unwrap()
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(ModelParams::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, -0.5, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn regime_flags() {
        assert!(params(1.0, 1.0, 2.0, 0.0).is_asymmetric_oscillator());
        assert!(params(1.0, 1.0, 1.0, 0.0).is_harmonic_oscillator());
        assert!(!params(1.0, 1.0, 2.0, 1.0).is_asymmetric_oscillator());
    }

    #[test]
    fn potential_examples() {
        let p = params(1.0, 2.0, 1.0, 1.5);
        assert_eq!(potential(0.0, &p), 0.0);
        assert_eq!(potential(-1.0, &p), 2.0);
        assert_eq!(potential(p.ell() + 1.0, &p), 0.5);
        assert_eq!(potential(0.7, &p), 0.0);
    }

    #[test]
    fn potential_is_c1_at_junctions() {
        let p = params(1.3, 0.7, 2.1, 0.9);
        for x0 in [0.0, p.ell()] {
            let h = 1e-6;
            let left = (potential(x0, &p) - potential(x0 - h, &p)) / h;
            let right = (potential(x0 + h, &p) - potential(x0, &p)) / h;
            assert!((left - right).abs() < 1e-5);
            assert!((potential(x0 + 1e-9, &p) - potential(x0 - 1e-9, &p)).abs() < 1e-15);
        }
    }

    #[test]
    fn action_examples() {
        assert_eq!(action_s(0.0, &params(1.0, 1.0, 2.0, 1.0)).unwrap(), 0.0);
        let s = action_s(1.0, &params(1.0, 1.0, 2.0, 0.0)).unwrap();
        assert!((s - 1.5 * PI).abs() < 1e-15);
        let s = action_s(2.0, &params(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert!((s - (4.0 + 4.0 * PI)).abs() < 1e-14);
        assert!(action_s(-1.0, &params(1.0, 1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn period_examples() {
        let p0 = params(1.0, 1.0, 2.0, 0.0);
        for e in [0.1, 1.0, 17.0] {
            assert!((period_t(e, &p0).unwrap() - p0.tau_sum()).abs() < 1e-15);
        }
        let t = period_t(2.0, &params(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert!((t - (1.0 + 2.0 * PI)).abs() < 1e-14);
        assert!(period_t(0.0, &p0).is_err());
    }

    #[test]
    fn period_is_derivative_of_action() {
        let p = params(1.7, 0.8, 1.9, 2.3);
        for e in [0.5, 1.0, 5.0, 30.0, 100.0] {
            let h = 1e-5 * e;
            let fd = (action_s(e + h, &p).unwrap() - action_s(e - h, &p).unwrap()) / (2.0 * h);
            let t = period_t(e, &p).unwrap();
            assert!(((fd - t) / t).abs() < 1e-6);
        }
    }

    #[test]
    fn inverse_action_examples() {
        let p = params(1.0, 1.0, 1.0, 1.0);
        assert_eq!(action_inverse(0.0, &p).unwrap(), 0.0);
        assert!((action_inverse(4.0 + 4.0 * PI, &p).unwrap() - 2.0).abs() < 1e-14);
        let p0 = params(1.0, 1.0, 2.0, 0.0);
        assert!((action_inverse(3.3, &p0).unwrap() - 3.3 / p0.tau_sum()).abs() < 1e-15);
        assert!(action_inverse(-1.0, &p).is_err());
    }

    #[test]
    fn catalog_without_reflections() {
        let p = params(1.0, 1.0, 2.0, 1.0);
        let t = period_t(2.0, &p).unwrap();
        let periods: Vec<f64> = orbit_catalog(2.0, 0, 2, &p, false)
            .unwrap()
            .iter()
            .map(|o| o.period)
            .collect();
        let expected = [-2.0 * t, -t, 0.0, t, 2.0 * t];
        assert_eq!(periods.len(), 5);
        for (a, b) in periods.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn catalog_reflection_rows() {
        let p = params(1.0, 1.0, 2f64.sqrt(), 1.0);
        let e = 2.0;
        let (t, s) = (period_t(e, &p).unwrap(), action_s(e, &p).unwrap());
        let cat = orbit_catalog(e, 1, 2, &p, false).unwrap();
        let find = |k, a, b| {
            *cat.iter()
                .find(|o| o.k == k && o.alpha == a && o.beta == b)
                .unwrap()
        };
        let o = find(1, 1, 0);
        assert_eq!(o.kind, OrbitKind::ZeroMinus);
        assert!((o.period - (t + p.tau_minus())).abs() < 1e-14);
        assert!((o.action - (s + p.tau_minus() * e)).abs() < 1e-13);
        let o = find(1, 0, -1);
        assert_eq!(o.kind, OrbitKind::ZeroPlus);
        assert!((o.period - (t - p.tau_plus())).abs() < 1e-14);
        assert!((o.action - (s - p.tau_plus() * e)).abs() < 1e-13);
        assert_eq!(find(1, -1, 0).kind, OrbitKind::EllMinus);
        assert_eq!(find(1, 0, 1).kind, OrbitKind::EllPlus);
        assert_eq!(cat.len(), 5 * 5);
    }

    #[test]
    fn catalog_negation_symmetry() {
        let p = params(1.0, 1.0, 3f64.sqrt(), 0.7);
        let cat = orbit_catalog(1.3, 1, 3, &p, false).unwrap();
        for o in &cat {
            let neg = cat
                .iter()
                .find(|q| q.k == -o.k && q.alpha == -o.alpha && q.beta == -o.beta)
                .unwrap();
            assert!((neg.period + o.period).abs() < 1e-13);
            assert!((neg.action + o.action).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_length_excludes_degenerate_rows() {
        let p = params(1.0, 1.0, 2.0, 0.0);
        let cat = orbit_catalog(1.0, 1, 2, &p, false).unwrap();
        assert!(cat
            .iter()
            .all(|o| !matches!(o.kind, OrbitKind::ZeroPlus | OrbitKind::EllMinus)));
        let full = orbit_catalog(1.0, 1, 2, &p, true).unwrap();
        assert_eq!(full.len(), 25);
        assert_eq!(cat.len(), 15);
    }

    #[test]
    fn multi_reflection_is_unsupported() {
        let p = params(1.0, 1.0, 2.0, 1.0);
        assert!(matches!(
            orbit_catalog(1.0, 2, 1, &p, false),
            Err(BathtubError::Unsupported(_))
        ));
    }

    #[test]
    fn one_reflection_periods_sorted_and_unique() {
        let p = params(1.0, 1.0, 2f64.sqrt(), 1.0);
        let v = one_reflection_periods_in(2.0, &p, 0.0, 10.0).unwrap();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(v[0], 0.0);
        assert!((v[1] - p.tau_plus()).abs() < 1e-14);
    }
}
