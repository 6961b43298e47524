//! Heat trace of the asymmetric oscillator (`ℓ = 0`, `ħ = 1`).
//!
//! With `ℓ = 0` the Bohr–Sommerfeld levels are `𝓔ₙ = ω̄(n + ½)`, so
//! `Σ e^{−t𝓔ₙ} = 1/(2 sinh(ω̄t/2))` exactly. The difference
//! `D(t) = Σ e^{−tEₙ} − 1/(2 sinh(ω̄t/2))` carries the small-`t`
//! expansion `Σ cⱼ tʲ + c_log t⁵ log t + O(t⁵)`, and this module extracts
//! `c_log` by weighted least squares.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::core_model::ModelParams;
use crate::error::{invalid, BathtubError, Result};
use crate::numerics::{log_space, CompensatedSum};
use crate::quantization::{bohr_sommerfeld, correction_series, solve_eigen, MAX_SERIES_ORDER};

/// Smallest admissible time: below it the number of terms and the error of
/// the asymptotic eigenvalues exceed the budget.
pub const T_MIN: f64 = 5e-4;
/// Largest admissible time for the log-coefficient fit.
pub const T_MAX_FIT: f64 = 0.2;
/// Terms are dropped once `e^{−tEₙ} < TRUNCATION · running sum`.
pub const TRUNCATION: f64 = 1e-18;
/// Default number of exactly solved eigenvalues.
pub const DEFAULT_N_EXACT: usize = 500;
/// Fits with a column-scaled condition number above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

fn require_oscillator(p: &ModelParams) -> Result<()> {
    if p.ell() != 0.0 || p.hbar() != 1.0 {
        return invalid(format!("heat trace needs ell = 0 and hbar = 1, got {p}"));
    }
    Ok(())
}

fn require_time(t: f64, t_min: f64) -> Result<()> {
    if !(t >= t_min && t.is_finite()) {
        return invalid(format!("time must be finite and >= {t_min}, got {t}"));
    }
    Ok(())
}

/// `1/(2 sinh(ω̄t/2))`, the heat trace of the Bohr–Sommerfeld levels.
pub fn reference_trace(t: f64, p: &ModelParams) -> Result<f64> {
    if !(t > 0.0) {
        return invalid(format!("time must be > 0, got {t}"));
    }
    if p.ell() != 0.0 {
        return invalid(format!("reference trace needs ell = 0, got {}", p.ell()));
    }
    let x = 0.5 * p.omega_bar() * p.hbar() * t;
    Ok(0.5 / x.sinh())
}

/// Partial sum `Σ_{n≤N} e^{−t𝓔ₙ}` and the tail bound
/// `e^{−t𝓔_{N+1}}/(1 − e^{−tħω̄})`.
pub fn reference_partial_sum(t: f64, p: &ModelParams, n_max: u64) -> Result<(f64, f64)> {
    reference_trace(t, p)?;
    let mut sum = CompensatedSum::new();
    for n in 0..=n_max {
        sum.add((-t * bohr_sommerfeld(n, p)?).exp());
    }
    let step = p.omega_bar() * p.hbar() * t;
    let tail = (-t * bohr_sommerfeld(n_max + 1, p)?).exp() / -(-step).exp_m1();
    Ok((sum.value(), tail))
}

/// Eigenvalue data for heat-trace evaluation: `𝓔ₙ` and `ΔEₙ = Eₙ − 𝓔ₙ`,
/// exact for `n < n_exact` and from the sixth-order series beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatTable {
    params: ModelParams,
    t_min: f64,
    n_exact: usize,
    e_bohr: Vec<f64>,
    delta: Vec<f64>,
}

impl HeatTable {
    /// Tabulates every level needed for times `t ≥ t_min`.
    pub fn new(p: &ModelParams, t_min: f64, n_exact: usize) -> Result<Self> {
        require_oscillator(p)?;
        require_time(t_min, T_MIN)?;
        if n_exact < 2 {
            return invalid(format!("n_exact must be >= 2, got {n_exact}"));
        }
        // e^{−t𝓔ₙ} < 1e−18 · (trace ≥ 1/(ω̄t)) well before this index.
        let wb = p.omega_bar();
        let cutoff =
            ((-TRUNCATION.ln() + (1.0 / (wb * t_min)).ln()) / (wb * t_min)).ceil() as usize + 2;
        let count = cutoff.max(n_exact);
        let rows: Vec<(f64, f64)> = (0..count as u64)
            .into_par_iter()
            .map(|n| {
                if (n as usize) < n_exact {
                    let s = solve_eigen(n, p)?;
                    Ok((s.e_bohr, s.delta))
                } else {
                    let e = bohr_sommerfeld(n, p)?;
                    Ok((e, correction_series(e, p, MAX_SERIES_ORDER)?))
                }
            })
            .collect::<Result<_>>()?;
        let (e_bohr, delta) = rows.into_iter().unzip();
        Ok(Self {
            params: *p,
            t_min,
            n_exact,
            e_bohr,
            delta,
        })
    }

    /// Number of tabulated levels.
    pub fn len(&self) -> usize {
        self.e_bohr.len()
    }

    /// `true` if nothing is tabulated.
    pub fn is_empty(&self) -> bool {
        self.e_bohr.is_empty()
    }

    /// Number of exactly solved levels.
    pub fn n_exact(&self) -> usize {
        self.n_exact
    }

    /// Parameters the table was built for.
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `Σ e^{−tEₙ}`, truncated once `e^{−tEₙ} < 1e−18 ·` running sum.
    pub fn exact_trace(&self, t: f64) -> Result<f64> {
        require_time(t, self.t_min)?;
        let mut sum = CompensatedSum::new();
        for (e, d) in self.e_bohr.iter().zip(&self.delta) {
            let term = (-t * (e + d)).exp();
            sum.add(term);
            if term < TRUNCATION * sum.value() {
                return Ok(sum.value());
            }
        }
        Err(self.exhausted(t))
    }

    /// `D(t) = Σ e^{−tEₙ} − 1/(2 sinh(ω̄t/2))`, summed term by term as
    /// `Σ e^{−t𝓔ₙ} expm1(−tΔEₙ)` to avoid cancellation; the cut-off index
    /// is the one used by [`HeatTable::exact_trace`].
    pub fn difference(&self, t: f64) -> Result<f64> {
        require_time(t, self.t_min)?;
        let mut trace = CompensatedSum::new();
        let mut diff = CompensatedSum::new();
        for (e, d) in self.e_bohr.iter().zip(&self.delta) {
            let base = (-t * e).exp();
            let term = base * (-t * d).exp_m1();
            trace.add(base + term);
            diff.add(term);
            if base + term < TRUNCATION * trace.value() {
                return Ok(diff.value());
            }
        }
        Err(self.exhausted(t))
    }

    /// `−t Σ e^{−t𝓔ₙ} ΔEₙ`, the first-order part of [`HeatTable::difference`].
    pub fn first_order_difference(&self, t: f64) -> Result<f64> {
        require_time(t, self.t_min)?;
        let mut diff = CompensatedSum::new();
        for (e, d) in self.e_bohr.iter().zip(&self.delta) {
            diff.add(-t * (-t * e).exp() * d);
        }
        Ok(diff.value())
    }

    fn exhausted(&self, t: f64) -> BathtubError {
        BathtubError::Numerical(format!(
            "heat table with {} levels does not reach truncation at t={t}",
            self.len()
        ))
    }
}

/// `Σ e^{−tEₙ}` with `n_exact` exactly solved levels.
pub fn exact_heat_trace(t: f64, p: &ModelParams, n_exact: usize) -> Result<f64> {
    require_time(t, T_MIN)?;
    HeatTable::new(p, t, n_exact)?.exact_trace(t)
}

/// The predicted `t⁵ log t` coefficient `(ω₊² − ω₋²)²/(4096 ω̄ T²)` with
/// `T = τ₋ + τ₊`.
pub fn predicted_log_coefficient(p: &ModelParams) -> f64 {
    let d = p.omega_plus().powi(2) - p.omega_minus().powi(2);
    d * d / (4096.0 * p.omega_bar() * p.tau_sum().powi(2))
}

/// A basis function of the small-`t` fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisFunction {
    /// `tᵏ`.
    Power(i32),
    /// `tᵏ log t`.
    PowerLog(i32),
    /// `tᵏ cos(ωt)`.
    PowerCos(i32, f64),
    /// `tᵏ sin(ωt)`.
    PowerSin(i32, f64),
}

impl BasisFunction {
    /// Value at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Self::Power(k) => t.powi(k),
            Self::PowerLog(k) => t.powi(k) * t.ln(),
            Self::PowerCos(k, w) => t.powi(k) * (w * t).cos(),
            Self::PowerSin(k, w) => t.powi(k) * (w * t).sin(),
        }
    }

    /// Human-readable label such as `t^5*log(t)`.
    pub fn label(&self) -> String {
        match *self {
            Self::Power(k) => format!("t^{k}"),
            Self::PowerLog(k) => format!("t^{k}*log(t)"),
            Self::PowerCos(k, w) => format!("t^{k}*cos({w}*t)"),
            Self::PowerSin(k, w) => format!("t^{k}*sin({w}*t)"),
        }
    }
}

/// The standard basis `{t, t², t³, t⁴, t⁵, t⁵ log t}`.
pub fn standard_basis() -> Vec<BasisFunction> {
    let mut b: Vec<BasisFunction> = (1..=5).map(BasisFunction::Power).collect();
    b.push(BasisFunction::PowerLog(5));
    b
}

/// Row weighting of the least-squares fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// `1/t`: residuals relative to the `O(t)` size of `D` (the default).
    InverseT,
    /// `1/t⁵`: equalizes the `t⁵` basis scales but lets rounding error at
    /// small `t` dominate.
    InverseT5,
}

impl Weighting {
    fn weight(self, t: f64) -> f64 {
        match self {
            Self::InverseT => 1.0 / t,
            Self::InverseT5 => t.powi(-5),
        }
    }
}

/// Weighted least-squares fit of samples `(t, D)` with weights `1/t`, so that
/// residuals are measured relative to the leading `O(t)` size of `D`, which
/// is also the scale of its rounding error.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub basis: Vec<BasisFunction>,
    pub coefficients: Vec<f64>,
    /// Standard errors from the residual variance.
    pub std_errors: Vec<f64>,
    /// Weighted residual RMS.
    pub rms: f64,
    /// Ratio of extreme singular values of the column-normalized design
    /// matrix.
    pub condition: f64,
}

impl LinearFit {
    /// Coefficient of the given basis element, if present.
    pub fn coefficient_of(&self, f: BasisFunction) -> Option<(f64, f64)> {
        self.basis
            .iter()
            .position(|&b| b == f)
            .map(|i| (self.coefficients[i], self.std_errors[i]))
    }
}

/// Fits `ys ≈ Σ cⱼ φⱼ(t)` with weights `1/t`, using the SVD of the
/// column-normalized design matrix.
pub fn weighted_fit(ts: &[f64], ys: &[f64], basis: &[BasisFunction]) -> Result<LinearFit> {
    weighted_fit_with(ts, ys, basis, Weighting::InverseT)
}

/// [`weighted_fit`] with an explicit row weighting.
pub fn weighted_fit_with(
    ts: &[f64],
    ys: &[f64],
    basis: &[BasisFunction],
    weighting: Weighting,
) -> Result<LinearFit> {
    let (rows, cols) = (ts.len(), basis.len());
    if rows != ys.len() || rows <= cols || cols == 0 {
        return invalid(format!(
            "fit needs more samples ({rows}) than basis functions ({cols})"
        ));
    }
    let mut a = DMatrix::<f64>::from_fn(rows, cols, |i, j| {
        basis[j].eval(ts[i]) * weighting.weight(ts[i])
    });
    let b = DVector::<f64>::from_fn(rows, |i, _| ys[i] * weighting.weight(ts[i]));
    let scales: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    for (j, s) in scales.iter().enumerate() {
        if !(*s > 0.0) {
            return Err(BathtubError::FitConditioning {
                condition: f64::INFINITY,
                limit: MAX_CONDITION,
            });
        }
        a.column_mut(j).unscale_mut(*s);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = smax / smin;
    if !(condition <= MAX_CONDITION) {
        return Err(BathtubError::FitConditioning {
            condition,
            limit: MAX_CONDITION,
        });
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|e| BathtubError::Numerical(format!("least-squares solve failed: {e}")))?;
    let resid = &b - &a * &x;
    let rss = resid.norm_squared();
    let sigma2 = rss / (rows - cols) as f64;
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let std_errors: Vec<f64> = (0..cols)
        .map(|j| {
            let var: f64 = (0..cols)
                .map(|k| (v_t[(k, j)] / svd.singular_values[k]).powi(2))
                .sum();
            (sigma2 * var).sqrt() / scales[j]
        })
        .collect();
    let coefficients = (0..cols).map(|j| x[j] / scales[j]).collect();
    Ok(LinearFit {
        basis: basis.to_vec(),
        coefficients,
        std_errors,
        rms: (rss / rows as f64).sqrt(),
        condition,
    })
}

/// Log-spaced time grid for the fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for HeatGrid {
    fn default() -> Self {
        Self {
            t_min: 1e-3,
            t_max: 5e-2,
            points: 60,
        }
    }
}

impl HeatGrid {
    /// Validates the grid and returns its nodes.
    pub fn nodes(&self) -> Result<Vec<f64>> {
        if !(self.t_min >= T_MIN && self.t_max <= T_MAX_FIT && self.t_min < self.t_max) {
            return invalid(format!(
                "fit grid [{}, {}] must lie within [{T_MIN}, {T_MAX_FIT}]",
                self.t_min, self.t_max
            ));
        }
        if self.points < 40 {
            return invalid(format!(
                "fit grid needs at least 40 points, got {}",
                self.points
            ));
        }
        Ok(log_space(self.t_min, self.t_max, self.points))
    }
}

/// Result of the log-coefficient extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatFit {
    pub t_grid: Vec<f64>,
    /// `D(t)` on the grid.
    pub difference: Vec<f64>,
    /// Fit against the standard basis.
    pub fit: LinearFit,
    /// Fitted `t⁵ log t` coefficient and its standard error.
    pub log_coefficient: f64,
    pub log_coefficient_error: f64,
    pub condition_estimate: f64,
    /// Weighted RMS with and without the `t⁵ log t` element.
    pub rms: f64,
    pub rms_without_log: f64,
    /// `(ω₊² − ω₋²)²/(4096 ω̄ T²)`.
    pub predicted: f64,
    /// Log coefficient with `t⁶` and `t⁶ log t` added to the basis, as a
    /// truncation diagnostic (`None` if that fit is ill-conditioned).
    pub extended_log_coefficient: Option<f64>,
    /// Log coefficient of the same basis fitted with `1/t⁵` weights.
    pub inverse_t5_log_coefficient: Option<f64>,
    /// Fitted constant term and its standard error when `1` is added to
    /// the basis; consistent with zero for a correct reference subtraction.
    pub constant_check: Option<(f64, f64)>,
}

impl HeatFit {
    /// `fitted / predicted`.
    pub fn ratio(&self) -> f64 {
        self.log_coefficient / self.predicted
    }

    /// `rms_without_log / rms`.
    pub fn rms_degradation(&self) -> f64 {
        self.rms_without_log / self.rms
    }
}

/// Extracts the `t⁵ log t` coefficient of `D(t)` on `grid`.
pub fn extract_log_coefficient(p: &ModelParams, grid: HeatGrid) -> Result<HeatFit> {
    extract_log_coefficient_with(p, grid, DEFAULT_N_EXACT)
}

/// [`extract_log_coefficient`] with an explicit number of exact levels.
pub fn extract_log_coefficient_with(
    p: &ModelParams,
    grid: HeatGrid,
    n_exact: usize,
) -> Result<HeatFit> {
    let ts = grid.nodes()?;
    let table = HeatTable::new(p, grid.t_min, n_exact)?;
    heat_fit_from_table(&table, &ts)
}

/// Fits `D(t)` from an existing table on the nodes `ts`.
pub fn heat_fit_from_table(table: &HeatTable, ts: &[f64]) -> Result<HeatFit> {
    let ds: Vec<f64> = ts
        .par_iter()
        .map(|&t| table.difference(t))
        .collect::<Result<_>>()?;
    let basis = standard_basis();
    let fit = weighted_fit(ts, &ds, &basis)?;
    let without = weighted_fit(ts, &ds, &basis[..5])?;
    let mut ext_basis = basis.clone();
    ext_basis.extend([BasisFunction::Power(6), BasisFunction::PowerLog(6)]);
    let extended_log_coefficient = weighted_fit(ts, &ds, &ext_basis)
        .ok()
        .map(|f| f.coefficients[5]);
    let inverse_t5_log_coefficient = weighted_fit_with(ts, &ds, &basis, Weighting::InverseT5)
        .ok()
        .map(|f| f.coefficients[5]);
    let mut const_basis = vec![BasisFunction::Power(0)];
    const_basis.extend(basis.iter().copied());
    let constant_check = weighted_fit(ts, &ds, &const_basis)
        .ok()
        .map(|f| (f.coefficients[0], f.std_errors[0]));
    Ok(HeatFit {
        t_grid: ts.to_vec(),
        difference: ds,
        log_coefficient: fit.coefficients[5],
        log_coefficient_error: fit.std_errors[5],
        condition_estimate: fit.condition,
        rms: fit.rms,
        rms_without_log: without.rms,
        predicted: predicted_log_coefficient(table.params()),
        extended_log_coefficient,
        inverse_t5_log_coefficient,
        constant_check,
        fit,
    })
}
