//! Two-variable trigonometric polynomials
//! `P(x, y) = Σ c_{j,k} e^{i(jx + ky)}` with finitely many coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_complex::Complex64;

/// Finite Fourier coefficient table in two variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPoly2 {
    coeffs: BTreeMap<(i32, i32), Complex64>,
}

impl TrigPoly2 {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a polynomial from explicit `((j, k), c_{j,k})` entries;
    /// repeated frequencies are accumulated.
    pub fn from_coefficients(entries: impl IntoIterator<Item = ((i32, i32), Complex64)>) -> Self {
        let mut p = Self::zero();
        for (key, c) in entries {
            p.add_coefficient(key, c);
        }
        p
    }

    /// `amplitude · cos(jx + ky)`.
    pub fn cos(j: i32, k: i32, amplitude: f64) -> Self {
        let half = Complex64::new(0.5 * amplitude, 0.0);
        Self::from_coefficients([((j, k), half), ((-j, -k), half)])
    }

    /// `amplitude · sin(jx + ky)`.
    pub fn sin(j: i32, k: i32, amplitude: f64) -> Self {
        let half = Complex64::new(0.0, 0.5 * amplitude);
        Self::from_coefficients([((j, k), -half), ((-j, -k), half)])
    }

    fn add_coefficient(&mut self, key: (i32, i32), c: Complex64) {
        let entry = self.coeffs.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&key);
        }
    }

    /// Coefficient `c_{j,k}` (zero when absent).
    pub fn coefficient(&self, j: i32, k: i32) -> Complex64 {
        self.coeffs.get(&(j, k)).copied().unwrap_or_default()
    }

    /// Iterator over the stored `((j, k), c_{j,k})` entries in key order.
    pub fn coefficients(&self) -> impl Iterator<Item = ((i32, i32), Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    /// Multiplies every coefficient by a real factor.
    pub fn scale(&self, factor: f64) -> Self {
        Self::from_coefficients(self.coefficients().map(|(key, c)| (key, c * factor)))
    }

    /// `max(|j| + |k|)` over the non-zero coefficients (0 for the zero
    /// polynomial).
    pub fn degree(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|&(j, k)| j.unsigned_abs() + k.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// `c_{−j,−k} = conj(c_{j,k})` for every entry, up to `tol` relative to
    /// the largest coefficient: the polynomial is real-valued.
    pub fn is_real(&self, tol: f64) -> bool {
        let scale = self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max);
        self.coefficients()
            .all(|((j, k), c)| (self.coefficient(-j, -k) - c.conj()).norm() <= tol * scale)
    }

    /// Complex value at `(x, y)`.
    pub fn eval_complex(&self, x: f64, y: f64) -> Complex64 {
        self.eval_with_phases(Complex64::cis(x), Complex64::cis(y))
    }

    /// Real part of the value at `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.eval_complex(x, y).re
    }

    /// Value from the unit phases `e^{ix}`, `e^{iy}`. Every harmonic is built
    /// by multiplying these phases, so callers that reduce the arguments
    /// themselves (e.g. modulo `2π` in extended precision) keep that
    /// accuracy.
    pub fn eval_with_phases(&self, ex: Complex64, ey: Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (&(j, k), &c) in &self.coeffs {
            total += c * int_power(ex, j) * int_power(ey, k);
        }
        total
    }
}

fn int_power(z: Complex64, n: i32) -> Complex64 {
    // |z| = 1, so the inverse is the conjugate.
    let base = if n < 0 { z.conj() } else { z };
    let mut out = Complex64::new(1.0, 0.0);
    for _ in 0..n.unsigned_abs() {
        out *= base;
    }
    out
}

impl Add for &TrigPoly2 {
    type Output = TrigPoly2;
    fn add(self, rhs: &TrigPoly2) -> TrigPoly2 {
        TrigPoly2::from_coefficients(self.coefficients().chain(rhs.coefficients()))
    }
}

impl Mul for &TrigPoly2 {
    type Output = TrigPoly2;
    fn mul(self, rhs: &TrigPoly2) -> TrigPoly2 {
        let mut out = TrigPoly2::zero();
        for ((j1, k1), c1) in self.coefficients() {
            for ((j2, k2), c2) in rhs.coefficients() {
                out.add_coefficient((j1 + j2, k1 + k2), c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_and_sin_evaluate_correctly() {
        let p = &TrigPoly2::cos(1, 0, 2.0) + &TrigPoly2::sin(0, 2, -3.0);
        let (x, y) = (0.37, -1.21);
        assert!((p.eval(x, y) - (2.0 * x.cos() - 3.0 * (2.0 * y).sin())).abs() < 1e-15);
        assert!(p.eval_complex(x, y).im.abs() < 1e-15);
        assert!(p.is_real(1e-15));
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn product_is_pointwise_product() {
        let a = &TrigPoly2::cos(1, 0, 1.5) + &TrigPoly2::cos(0, 1, 0.5);
        let b = &TrigPoly2::sin(1, 0, 2.0) + &TrigPoly2::cos(1, -1, 0.25);
        let ab = &a * &b;
        for (x, y) in [(0.1, 0.2), (2.0, -3.0), (10.5, 4.25)] {
            assert!((ab.eval(x, y) - a.eval(x, y) * b.eval(x, y)).abs() < 1e-14);
        }
        assert_eq!(ab.degree(), 3);
    }

    #[test]
    fn cancellation_removes_entries() {
        let p = &TrigPoly2::cos(1, 1, 1.0) + &TrigPoly2::cos(1, 1, -1.0);
        assert_eq!(p.degree(), 0);
        assert_eq!(p, TrigPoly2::zero());
    }

    #[test]
    fn non_real_detected() {
        let p = TrigPoly2::from_coefficients([((1, 0), Complex64::new(1.0, 0.0))]);
        assert!(!p.is_real(1e-12));
    }
}
