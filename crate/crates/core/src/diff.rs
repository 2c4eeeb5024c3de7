//! Central finite differences with Richardson extrapolation.
//!
//! Every estimator here has an error expansion in even powers of the step, so
//! a table of halved steps is combined with factors 4ᵏ (second-order
//! stencils) or 16·4ᵏ (fourth-order stencils).

use crate::error::{Error, Result};

/// Step and extrapolation depth for finite differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilConfig {
    /// Base step, scaled by `max(1, |x|)` at the evaluation point.
    pub h: f64,
    /// Number of halvings folded in by Richardson extrapolation.
    pub levels: usize,
}

impl StencilConfig {
    pub fn new(h: f64, levels: usize) -> Result<Self> {
        let cfg = StencilConfig { h, levels };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::InvalidConfig(format!("stencil step must be positive, got {}", self.h)));
        }
        if self.levels < 1 {
            return Err(Error::InvalidConfig("Richardson levels must be at least 1".into()));
        }
        Ok(())
    }

    pub fn step_at(&self, x: f64) -> f64 {
        self.h * x.abs().max(1.0)
    }

    pub fn halved(&self) -> Self {
        StencilConfig { h: 0.5 * self.h, levels: self.levels }
    }
}

/// Extrapolates `estimates[k]` (computed with step h/2ᵏ) whose error is a
/// series in h^order, h^(order+2), ...
pub(crate) fn richardson<T>(mut estimates: Vec<T>, order: i32) -> T
where
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let mut p = order;
    while estimates.len() > 1 {
        let factor = 2f64.powi(p);
        estimates = estimates
            .windows(2)
            .map(|w| w[1] + (w[1] - w[0]) * (1.0 / (factor - 1.0)))
            .collect();
        p += 2;
    }
    estimates[0]
}

/// Second-order central first derivative, Richardson-extrapolated.
pub(crate) fn first<T, E, F>(f: F, x: f64, h: f64, levels: usize) -> Result<T, E>
where
    F: Fn(f64) -> Result<T, E>,
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let mut est = Vec::with_capacity(levels + 1);
    let mut step = h;
    for _ in 0..=levels {
        est.push((f(x + step)? - f(x - step)?) * (0.5 / step));
        step *= 0.5;
    }
    Ok(richardson(est, 2))
}

/// Second-order central second derivative, Richardson-extrapolated.
pub(crate) fn second<T, E, F>(f: F, x: f64, h: f64, levels: usize) -> Result<T, E>
where
    F: Fn(f64) -> Result<T, E>,
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let f0 = f(x)?;
    let mut est = Vec::with_capacity(levels + 1);
    let mut step = h;
    for _ in 0..=levels {
        let v = f(x + step)? + f(x - step)? - f0 * 2.0;
        est.push(v * (1.0 / (step * step)));
        step *= 0.5;
    }
    Ok(richardson(est, 2))
}

/// Five-point fourth-order first derivative, Richardson-extrapolated.
pub(crate) fn first4<T, E, F>(f: F, x: f64, h: f64, levels: usize) -> Result<T, E>
where
    F: Fn(f64) -> Result<T, E>,
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let mut est = Vec::with_capacity(levels + 1);
    let mut step = h;
    for _ in 0..=levels {
        let v = (f(x + step)? - f(x - step)?) * 8.0 - (f(x + 2.0 * step)? - f(x - 2.0 * step)?);
        est.push(v * (1.0 / (12.0 * step)));
        step *= 0.5;
    }
    Ok(richardson(est, 4))
}

/// Five-point fourth-order second derivative, Richardson-extrapolated.
pub(crate) fn second4<T, E, F>(f: F, x: f64, h: f64, levels: usize) -> Result<T, E>
where
    F: Fn(f64) -> Result<T, E>,
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let f0 = f(x)?;
    let mut est = Vec::with_capacity(levels + 1);
    let mut step = h;
    for _ in 0..=levels {
        let v = (f(x + step)? + f(x - step)?) * 16.0 - (f(x + 2.0 * step)? + f(x - 2.0 * step)?) - f0 * 30.0;
        est.push(v * (1.0 / (12.0 * step * step)));
        step *= 0.5;
    }
    Ok(richardson(est, 4))
}
