//! Independent eigenvalue oracle: a second-order finite-difference
//! discretisation of the operator on a truncated interval with Dirichlet
//! ends, eigenvalues by Sturm-sequence bisection, and Richardson
//! extrapolation over three nested grids.
//!
//! The grids are aligned so that the junctions `x = 0` and `x = ℓ` (where
//! `V″` jumps) are grid nodes on every level; the discretisation error then
//! has a clean `h², h⁴, …` expansion and one Richardson step gains two
//! orders.

use rayon::prelude::*;

use crate::core_model::{potential, ModelParams};
use crate::error::{invalid, BathtubError, Result};
use crate::quantization::bohr_sommerfeld;

/// Uniform grid of `n_points` interior nodes strictly between `x_min` and
/// `x_max`, with spacing `(x_max − x_min)/(n_points + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    /// Node spacing `h`.
    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points + 1) as f64
    }

    /// Position of interior node `i` (`0 ≤ i < n_points`).
    pub fn node(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.spacing()
    }

    /// Same interval with half the spacing (every old node is kept).
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            x_min: self.x_min,
            x_max: self.x_max,
            n_points: 2 * self.n_points + 1,
        }
    }

    /// Grid covering the classically allowed region at `energy` plus the
    /// region where `V < energy + margin`, with about `intervals` cells, and
    /// with `0` and `ℓ` on nodes.
    pub fn aligned(
        p: &ModelParams,
        energy: f64,
        margin: f64,
        intervals: usize,
    ) -> Result<GridSpec> {
        if !(energy + margin > 0.0) || intervals < 4 {
            return invalid("grid requires a positive energy window and at least 4 intervals");
        }
        let reach = (2.0 * (energy + margin) / p.m()).sqrt();
        let left = reach / p.omega_minus();
        let right = reach / p.omega_plus();
        let length = left + p.ell() + right;
        let h = if p.ell() > 0.0 {
            let flat_cells = ((p.ell() / length) * intervals as f64).round().max(1.0);
            p.ell() / flat_cells
        } else {
            length / intervals as f64
        };
        let cells_left = (left / h).ceil();
        let cells_right = (right / h).ceil();
        let cells_flat = (p.ell() / h).round();
        let total = (cells_left + cells_flat + cells_right) as usize;
        Ok(GridSpec {
            x_min: -cells_left * h,
            x_max: p.ell() + cells_right * h,
            n_points: total - 1,
        })
    }
}

/// Symmetric tridiagonal matrix stored by its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diagonal: Vec<f64>,
    /// `off_diagonal[i]` couples nodes `i` and `i+1`.
    pub off_diagonal: Vec<f64>,
}

/// Discretises `−(ħ²/2m) d²/dx² + V` on `grid` with the central second
/// difference: `dᵢ = ħ²/(m h²) + V(xᵢ)`, `eᵢ = −ħ²/(2m h²)`.
pub fn build_operator_with<V: Fn(f64) -> f64>(
    potential: V,
    hbar: f64,
    m: f64,
    grid: &GridSpec,
) -> TridiagonalOperator {
    let h = grid.spacing();
    let kinetic = hbar * hbar / (m * h * h);
    let diagonal = (0..grid.n_points)
        .map(|i| kinetic + potential(grid.node(i)))
        .collect();
    let off_diagonal = vec![-0.5 * kinetic; grid.n_points.saturating_sub(1)];
    TridiagonalOperator {
        diagonal,
        off_diagonal,
    }
}

/// [`build_operator_with`] for the bathtub potential.
pub fn build_operator(p: &ModelParams, grid: &GridSpec) -> TridiagonalOperator {
    build_operator_with(|x| potential(x, p), p.hbar(), p.m(), grid)
}

impl TridiagonalOperator {
    /// Number of eigenvalues strictly below `lambda` (number of negative
    /// pivots of the `LDLᵀ` factorisation of `T − λ`).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE / f64::EPSILON;
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diagonal.iter().enumerate() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off_diagonal[i - 1] * self.off_diagonal[i - 1] / q
            };
            q = d - lambda - coupling;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.diagonal.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.off_diagonal[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.off_diagonal[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    /// The `count` smallest eigenvalues in ascending order, each bisected
    /// until its bracket is a few ulp wide.
    pub fn lowest_eigenvalues(&self, count: usize) -> Result<Vec<f64>> {
        if count > self.diagonal.len() {
            return invalid(format!(
                "requested {count} eigenvalues of a {}x{} matrix",
                self.diagonal.len(),
                self.diagonal.len()
            ));
        }
        let (g_lo, g_hi) = self.gershgorin_bounds();
        (0..count)
            .into_par_iter()
            .map(|k| self.bisect_eigenvalue(k, g_lo, g_hi))
            .collect()
    }

    /// The `k`-th eigenvalue (0-based) by bisection on the Sturm count.
    fn bisect_eigenvalue(&self, k: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                return Ok(mid);
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(BathtubError::Numerical(format!(
            "bisection stagnated for eigenvalue {k}"
        )))
    }
}

/// Default number of cells on the coarsest of the three grids.
pub const DEFAULT_BASE_INTERVALS: usize = 8000;

/// One oracle eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEigenvalue {
    pub n: usize,
    /// Richardson extrapolation `(4E_{h/4} − E_{h/2})/3` from the two finest
    /// grids.
    pub value: f64,
    /// `|value − (4E_{h/2} − E_h)/3|`: the change of the extrapolated value
    /// under one refinement, a conservative estimate of its error.
    pub error_estimate: f64,
    /// Raw eigenvalues on the grids `h`, `h/2`, `h/4`.
    pub raw: [f64; 3],
}

impl OracleEigenvalue {
    /// Observed convergence order `log₂((E_h − E_{h/2})/(E_{h/2} − E_{h/4}))`
    /// of the raw second-order values.
    pub fn observed_order(&self) -> f64 {
        ((self.raw[0] - self.raw[1]) / (self.raw[1] - self.raw[2])).log2()
    }
}

/// Options for [`oracle_eigenvalues`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Cells on the coarsest grid.
    pub base_intervals: usize,
    /// If set, an error estimate above `tolerance·|value|` is an error.
    pub tolerance: Option<f64>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            base_intervals: DEFAULT_BASE_INTERVALS,
            tolerance: None,
        }
    }
}

/// Largest supported `count`.
pub const MAX_ORACLE_COUNT: usize = 100;

/// The lowest `count` eigenvalues from the finite-difference discretisation.
///
/// The interval is chosen so that `V` at both ends exceeds
/// `E_count + 50ħ·max(ω₋, ω₊)` (with `E_count < 𝓔_count` by interlacing).
pub fn oracle_eigenvalues(
    p: &ModelParams,
    count: usize,
    options: OracleOptions,
) -> Result<Vec<OracleEigenvalue>> {
    if count == 0 || count > MAX_ORACLE_COUNT {
        return invalid(format!(
            "oracle count must be in 1..={MAX_ORACLE_COUNT}, got {count}"
        ));
    }
    let e_top = bohr_sommerfeld(count as u64, p)?;
    let margin = 50.0 * p.hbar() * p.omega_minus().max(p.omega_plus());
    let coarse = GridSpec::aligned(p, e_top, margin, options.base_intervals)?;
    let grids = [coarse, coarse.refined(), coarse.refined().refined()];
    let levels: Vec<Vec<f64>> = grids
        .iter()
        .map(|g| build_operator(p, g).lowest_eigenvalues(count))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        let raw = [levels[0][n], levels[1][n], levels[2][n]];
        let coarse_extrapolation = (4.0 * raw[1] - raw[0]) / 3.0;
        let value = (4.0 * raw[2] - raw[1]) / 3.0;
        let error_estimate = (value - coarse_extrapolation).abs();
        if let Some(tol) = options.tolerance {
            if error_estimate > tol * value.abs() {
                return Err(BathtubError::OracleAccuracy(format!(
                    "n={n}: error estimate {error_estimate:.3e} exceeds {tol:.1e} relative"
                )));
            }
        }
        out.push(OracleEigenvalue {
            n,
            value,
            error_estimate,
            raw,
        });
    }
    Ok(out)
}
