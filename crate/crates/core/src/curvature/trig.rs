use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Σᵢ (aᵢ + bᵢ sin t) cosⁱ t.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl TrigPolynomial {
    pub fn constant(c: f64) -> Self {
        TrigPolynomial { a: vec![c], b: vec![0.0] }
    }

    pub fn degree(&self) -> usize {
        self.a.len().max(self.b.len()).saturating_sub(1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (sn, cs) = t.sin_cos();
        let horner = |v: &[f64]| v.iter().rev().fold(0.0, |acc, x| acc * cs + x);
        horner(&self.a) + sn * horner(&self.b)
    }

    /// Largest |aᵢ|, |bᵢ| with i > `degree`.
    pub fn excess_above(&self, degree: usize) -> f64 {
        let tail = |v: &[f64]| v.iter().skip(degree + 1).map(|x| x.abs()).fold(0.0, f64::max);
        tail(&self.a).max(tail(&self.b))
    }

    pub fn scaled(&self, k: f64) -> Self {
        TrigPolynomial { a: self.a.iter().map(|x| x * k).collect(), b: self.b.iter().map(|x| x * k).collect() }
    }
}

/// Sampling for [`fit_trig_polynomial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitConfig {
    /// Samples beyond the 2(d + 1) unknowns; at least 4.
    pub oversample: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { oversample: 8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrigFit {
    pub poly: TrigPolynomial,
    /// Largest |sample − fit| over the sample points.
    pub max_residual: f64,
    /// Largest |sample|; divide by it for scale-free thresholds.
    pub scale: f64,
}

impl TrigFit {
    pub fn normalized(&self) -> TrigPolynomial {
        if self.scale > 0.0 {
            self.poly.scaled(1.0 / self.scale)
        } else {
            self.poly.clone()
        }
    }

    pub fn relative_residual(&self) -> f64 {
        if self.scale > 0.0 {
            self.max_residual / self.scale
        } else {
            self.max_residual
        }
    }
}

/// Least-squares fit of `f` on at least `2(d + 1) + oversample` equispaced
/// angles, rounded up to a multiple of 4 so that with the half-step offset no
/// sample lands on t = 0, π/2, π or 3π/2.
pub fn fit_trig_polynomial<F>(f: F, degree: usize, cfg: FitConfig) -> Result<TrigFit>
where
    F: Fn(f64) -> Result<f64>,
{
    if cfg.oversample < 4 {
        return Err(Error::InvalidConfig(format!("oversampling must be at least 4, got {}", cfg.oversample)));
    }
    let n = (2 * (degree + 1) + cfg.oversample).next_multiple_of(4);
    let ts: Vec<f64> = (0..n).map(|j| TAU * (j as f64 + 0.5) / n as f64).collect();
    let mut values = Vec::with_capacity(n);
    for &t in &ts {
        values.push(f(t)?);
    }
    fit_trig_samples(&ts, &values, degree)
}

/// Least-squares fit through arbitrary `(t, value)` samples.
pub fn fit_trig_samples(ts: &[f64], values: &[f64], degree: usize) -> Result<TrigFit> {
    assert_eq!(ts.len(), values.len(), "one value per sample angle");
    let unknowns = 2 * (degree + 1);
    for (&t, &v) in ts.iter().zip(values) {
        if !v.is_finite() || !t.is_finite() {
            return Err(Error::NonFiniteSample { t });
        }
    }
    let n = ts.len();
    if n < unknowns {
        return Err(Error::RankDeficientFit { samples: n, unknowns, rank: n });
    }
    // Fourier basis: cos kt, k = 0..=d, then sin (k + 1)t, k = 0..=d
    let basis = DMatrix::from_fn(n, unknowns, |i, j| {
        let t = ts[i];
        if j <= degree {
            (j as f64 * t).cos()
        } else {
            ((j - degree) as f64 * t).sin()
        }
    });
    let rhs = DVector::from_column_slice(values);
    let svd = basis.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cutoff = smax * 1e-10;
    let rank = svd.singular_values.iter().filter(|&&x| x > cutoff).count();
    if rank < unknowns {
        return Err(Error::RankDeficientFit { samples: n, unknowns, rank });
    }
    let coeffs = svd.solve(&rhs, cutoff).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let fitted = &basis * &coeffs;
    let max_residual = (fitted - &rhs).amax();
    let scale = rhs.amax();

    let cheb_t = chebyshev(degree, 1.0, 1.0);
    let cheb_u = chebyshev(degree, 1.0, 2.0);
    let mut a = vec![0.0; degree + 1];
    let mut b = vec![0.0; degree + 1];
    for k in 0..=degree {
        for (i, c) in cheb_t[k].iter().enumerate() {
            a[i] += coeffs[k] * c;
        }
        for (i, c) in cheb_u[k].iter().enumerate() {
            b[i] += coeffs[degree + 1 + k] * c;
        }
    }
    Ok(TrigFit { poly: TrigPolynomial { a, b }, max_residual, scale })
}

/// Power-basis coefficients of P₀…P_d with P₀ = p0, P₁ = p1·x,
/// Pₖ₊₁ = 2x Pₖ − Pₖ₋₁ (T for p1 = 1, U for p1 = 2).
fn chebyshev(d: usize, p0: f64, p1: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![vec![p0]];
    if d >= 1 {
        out.push(vec![0.0, p1]);
    }
    for k in 1..d {
        let mut next = vec![0.0; k + 2];
        for (i, c) in out[k].iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in out[k - 1].iter().enumerate() {
            next[i] -= c;
        }
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_function() {
        let fit = fit_trig_polynomial(|_| Ok(5.0), 3, FitConfig::default()).unwrap();
        assert!((fit.poly.a[0] - 5.0).abs() < 1e-12);
        assert!(fit.poly.excess_above(0) < 1e-12);
        assert!(fit.poly.b.iter().all(|x| x.abs() < 1e-12));
        assert!(fit.max_residual < 1e-12);
    }

    #[test]
    fn recovers_power_coefficients() {
        let truth = TrigPolynomial { a: vec![0.5, -1.0, 2.0, 0.0, 3.0], b: vec![1.5, 0.0, -0.25, 0.7, 0.0] };
        let fit = fit_trig_polynomial(|t| Ok(truth.eval(t)), 4, FitConfig::default()).unwrap();
        for (x, y) in fit.poly.a.iter().zip(&truth.a).chain(fit.poly.b.iter().zip(&truth.b)) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn degree_ten_leading_term() {
        let f = |t: f64| Ok(1.3e-4 * t.cos().powi(10) - 0.2 * t.cos().powi(3) + 0.1 * t.sin());
        let fit = fit_trig_polynomial(f, 10, FitConfig::default()).unwrap();
        assert!((fit.poly.a[10] - 1.3e-4).abs() < 1e-12);
    }

    #[test]
    fn overfitting_degree_is_zero_padded() {
        let f = |t: f64| Ok(t.cos() * t.cos());
        let fit = fit_trig_polynomial(f, 6, FitConfig::default()).unwrap();
        assert!(fit.poly.excess_above(2) < 1e-12);
        assert!((fit.poly.a[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_samples() {
        let ts = [0.1, 0.2, 0.3];
        assert!(matches!(fit_trig_samples(&ts, &[1.0, 2.0, 3.0], 2), Err(Error::RankDeficientFit { .. })));
        assert!(fit_trig_polynomial(|_| Ok(1.0), 2, FitConfig { oversample: 2 }).is_err());
    }

    #[test]
    fn rejects_nan_sample() {
        let f = |t: f64| Ok(if t > 3.0 { f64::NAN } else { 1.0 });
        assert!(matches!(fit_trig_polynomial(f, 1, FitConfig::default()), Err(Error::NonFiniteSample { .. })));
    }
}
