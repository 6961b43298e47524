//! Small numerical building blocks: deterministic summation, bracketed root
//! finding and log–log slope fits.

use std::ops::Add;

use crate::error::{BathtubError, Result};

/// Pairwise (tree) summation.
///
/// The reduction order depends only on the length of the slice, so the
/// result is bit-identical no matter how the terms were produced (e.g. by a
/// parallel map), and the rounding error grows like `O(log n)` instead of
/// `O(n)`.
pub fn pairwise_sum<T>(terms: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    const LEAF: usize = 32;
    if terms.len() <= LEAF {
        return terms.iter().fold(T::default(), |acc, &t| acc + t);
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}

/// Streaming compensated (Neumaier) summation for sums whose length is not
/// known in advance.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    /// Empty accumulator.
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one term.
    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Current compensated total.
    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Brent's method for a root of `f` in `[a, b]`, given `f(a)` and `f(b)` of
/// opposite sign (or one of them zero).
///
/// Iterates until the bracket is narrower than `xtol + 4·eps·|x|`, or `f`
/// vanishes exactly.
pub fn brent<F>(
    mut f: F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(BathtubError::Numerical(format!(
            "root not bracketed: f({a:e}) = {fa:e}, f({b:e}) = {fb:e}"
        )));
    }
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            // Attempt inverse quadratic interpolation / secant step.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(BathtubError::Numerical(format!(
                "non-finite function value at {b:e}"
            )));
        }
    }
    Err(BathtubError::Numerical(format!(
        "Brent iteration did not converge in {max_iter} steps"
    )))
}

/// Ordinary least-squares line `y = slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = pairwise_sum(xs) / n;
    let my = pairwise_sum(ys) / n;
    let sxy: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .collect();
    let sxx: Vec<f64> = xs.iter().map(|x| (x - mx) * (x - mx)).collect();
    let slope = pairwise_sum(&sxy) / pairwise_sum(&sxx);
    (slope, my - slope * mx)
}

/// Least-squares slope of `log|y|` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Log–log slope of the *envelope* of an oscillating, decaying quantity.
///
/// The abscissa range is split into `bins` logarithmically equal bins; the
/// largest `|y|` in each bin (together with its `x`) enters a least-squares
/// line in log–log coordinates. Bins without samples are skipped.
pub fn envelope_log_slope(xs: &[f64], ys: &[f64], bins: usize) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(bins >= 2);
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min).ln();
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ln();
    let width = (hi - lo) / bins as f64;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; bins];
    for (&x, &y) in xs.iter().zip(ys) {
        let idx = (((x.ln() - lo) / width) as usize).min(bins - 1);
        let y = y.abs();
        match best[idx] {
            Some((_, by)) if by >= y => {}
            _ => best[idx] = Some((x, y)),
        }
    }
    let (bx, by): (Vec<f64>, Vec<f64>) =
        best.into_iter().flatten().filter(|&(_, y)| y > 0.0).unzip();
    log_log_slope(&bx, &by)
}

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_exact_integer_sum() {
        let terms: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&terms), 500_500.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn brent_finds_cubic_root() {
        let f = |x: f64| x * x * x - 2.0;
        let root = brent(f, 0.0, 2.0, f(0.0), f(2.0), 0.0, 200).unwrap();
        assert!((root - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn brent_rejects_unbracketed_interval() {
        let f = |x: f64| x * x + 1.0;
        assert!(brent(f, -1.0, 1.0, 2.0, 2.0, 0.0, 10).is_err());
    }

    #[test]
    fn slope_of_exact_power_law() {
        let xs: Vec<f64> = log_space(1.0, 100.0, 20);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-2.5)).collect();
        assert!((log_log_slope(&xs, &ys) + 2.5).abs() < 1e-12);
    }

    #[test]
    fn envelope_slope_ignores_oscillation() {
        let xs: Vec<f64> = (1..20_000).map(|i| 1.0 + i as f64 * 0.05).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (7.0 * x).cos() * x.powi(-3)).collect();
        assert!((envelope_log_slope(&xs, &ys, 12) + 3.0).abs() < 0.05);
    }
}
