use std::fmt;
use std::sync::Arc;

use crate::error::{finite, Error, Result};
use crate::Vec3;

/// Frenet apparatus of an arc-length curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetData {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub kappa: f64,
    pub kappa_prime: f64,
    pub tau: f64,
    /// τ′ only enters the exact second partial C_ss; the fundamental-form
    /// coefficients never depend on it.
    pub tau_prime: f64,
}

impl FrenetData {
    /// Constant frame (e₁, e₂, e₃) with vanishing curvature and torsion.
    pub fn straight() -> Self {
        FrenetData {
            t: Vec3::x(),
            n: Vec3::y(),
            b: Vec3::z(),
            kappa: 0.0,
            kappa_prime: 0.0,
            tau: 0.0,
            tau_prime: 0.0,
        }
    }
}

/// User-supplied center curve. Must be parametrized by arc length and either
/// keep κ > 0 or hand back a constant frame where κ = 0.
pub trait CurveModel: Send + Sync + fmt::Debug {
    fn position(&self, s: f64) -> Vec3;
    fn frenet(&self, s: f64) -> FrenetData;
}

#[derive(Debug, Clone)]
pub enum CurveFamily {
    /// α(s) = (s, 0, 0) with frame (e₁, e₂, e₃).
    Line,
    /// Circle of radius `a` in the xy-plane, unit speed.
    Circle { a: f64 },
    /// α(s) = (a cos(s/c), a sin(s/c), b s/c), c = √(a² + b²).
    Helix { a: f64, b: f64 },
    Custom(Arc<dyn CurveModel>),
}

/// A unit-speed center curve restricted to `[s_min, s_max]`.
#[derive(Debug, Clone)]
pub struct CenterCurve {
    pub family: CurveFamily,
    pub s_min: f64,
    pub s_max: f64,
}

impl CenterCurve {
    pub fn line(s_min: f64, s_max: f64) -> Result<Self> {
        Self::with_family(CurveFamily::Line, s_min, s_max)
    }

    pub fn circle(a: f64, s_min: f64, s_max: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidCurve(format!("circle radius must be positive, got {a}")));
        }
        Self::with_family(CurveFamily::Circle { a }, s_min, s_max)
    }

    pub fn helix(a: f64, b: f64, s_min: f64, s_max: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && b.is_finite()) {
            return Err(Error::InvalidCurve(format!("helix needs a > 0 and finite b, got a = {a}, b = {b}")));
        }
        Self::with_family(CurveFamily::Helix { a, b }, s_min, s_max)
    }

    pub fn custom(model: Arc<dyn CurveModel>, s_min: f64, s_max: f64) -> Result<Self> {
        Self::with_family(CurveFamily::Custom(model), s_min, s_max)
    }

    fn with_family(family: CurveFamily, s_min: f64, s_max: f64) -> Result<Self> {
        finite("s_min", s_min)?;
        finite("s_max", s_max)?;
        if s_min >= s_max {
            return Err(Error::InvalidCurve(format!("empty interval [{s_min}, {s_max}]")));
        }
        Ok(CenterCurve { family, s_min, s_max })
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.s_min && s <= self.s_max
    }

    fn check(&self, s: f64) -> Result<()> {
        finite("s", s)?;
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { s, s_min: self.s_min, s_max: self.s_max })
        }
    }

    /// True when the family is a straight line by construction.
    pub fn is_line(&self) -> bool {
        matches!(self.family, CurveFamily::Line)
    }

    /// α(s), checked against the interval.
    pub fn position(&self, s: f64) -> Result<Vec3> {
        self.check(s)?;
        Ok(self.position_unbounded(s))
    }

    /// Frenet data at `s`. Custom curves are additionally checked for unit
    /// speed at `s`.
    pub fn eval(&self, s: f64) -> Result<FrenetData> {
        self.check(s)?;
        if let CurveFamily::Custom(_) = self.family {
            let speed = speed_at(|x| self.position_unbounded(x), s);
            if (speed - 1.0).abs() > 1e-8 {
                return Err(Error::NotUnitSpeed { s, speed });
            }
        }
        Ok(self.frenet_unbounded(s))
    }

    /// α(s) without the interval check; finite-difference stencils step
    /// slightly past the ends.
    pub(crate) fn position_unbounded(&self, s: f64) -> Vec3 {
        match &self.family {
            CurveFamily::Line => Vec3::new(s, 0.0, 0.0),
            CurveFamily::Circle { a } => {
                let u = s / a;
                Vec3::new(a * u.cos(), a * u.sin(), 0.0)
            }
            CurveFamily::Helix { a, b } => {
                let c = a.hypot(*b);
                let u = s / c;
                Vec3::new(a * u.cos(), a * u.sin(), b * u)
            }
            CurveFamily::Custom(m) => m.position(s),
        }
    }

    pub(crate) fn frenet_unbounded(&self, s: f64) -> FrenetData {
        match &self.family {
            CurveFamily::Line => FrenetData::straight(),
            CurveFamily::Circle { a } => helix_frame(*a, 0.0, s),
            CurveFamily::Helix { a, b } => helix_frame(*a, *b, s),
            CurveFamily::Custom(m) => m.frenet(s),
        }
    }
}

fn helix_frame(a: f64, b: f64, s: f64) -> FrenetData {
    let c2 = a * a + b * b;
    let c = c2.sqrt();
    let (sn, cs) = (s / c).sin_cos();
    let t = Vec3::new(-a / c * sn, a / c * cs, b / c);
    let n = Vec3::new(-cs, -sn, 0.0);
    let bn = Vec3::new(b / c * sn, -b / c * cs, a / c);
    FrenetData {
        t,
        n,
        b: bn,
        kappa: a / c2,
        kappa_prime: 0.0,
        tau: b / c2,
        tau_prime: 0.0,
    }
}

/// |α′(s)| from a five-point central difference.
fn speed_at(p: impl Fn(f64) -> Vec3, s: f64) -> f64 {
    let h = 1e-3 * s.abs().max(1.0);
    let d = (p(s - 2.0 * h) - 8.0 * p(s - h) + 8.0 * p(s + h) - p(s + 2.0 * h)) / (12.0 * h);
    d.norm()
}

/// Outcome of [`validate_unit_speed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSpeedReport {
    pub ok: bool,
    pub worst_s: f64,
    pub worst_deviation: f64,
}

/// Samples `| |α′(s)| − 1 |` on `samples` equispaced points of the curve
/// interval and reports the worst offender.
pub fn validate_unit_speed(curve: &CenterCurve, samples: usize, tol: f64) -> UnitSpeedReport {
    let n = samples.max(2);
    let mut worst = UnitSpeedReport { ok: true, worst_s: curve.s_min, worst_deviation: 0.0 };
    for i in 0..n {
        let s = curve.s_min + (curve.s_max - curve.s_min) * i as f64 / (n - 1) as f64;
        let dev = (speed_at(|x| curve.position_unbounded(x), s) - 1.0).abs();
        if !(dev <= worst.worst_deviation) {
            worst.worst_deviation = dev;
            worst.worst_s = s;
        }
    }
    worst.ok = worst.worst_deviation <= tol;
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug)]
    struct Parabola;

    impl CurveModel for Parabola {
        fn position(&self, s: f64) -> Vec3 {
            Vec3::new(s * s, 0.0, 0.0)
        }
        fn frenet(&self, _s: f64) -> FrenetData {
            FrenetData::straight()
        }
    }

    #[test]
    fn line_has_constant_frame() {
        let c = CenterCurve::line(0.0, 10.0).unwrap();
        let f = c.eval(7.0).unwrap();
        assert_eq!(f.t, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(f.n, Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(f.b, Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(f.kappa, 0.0);
        assert_eq!(f.tau, 0.0);
    }

    #[test]
    fn circle_curvature() {
        let c = CenterCurve::circle(3.0, 0.0, 20.0).unwrap();
        for s in [0.0, 1.3, 9.0] {
            let f = c.eval(s).unwrap();
            assert!((f.kappa - 1.0 / 3.0).abs() < 1e-15);
            assert_eq!(f.tau, 0.0);
        }
    }

    #[test]
    fn helix_curvature_and_torsion() {
        let c = CenterCurve::helix(2.0, 1.0, 0.0, 10.0).unwrap();
        let f = c.eval(2.5).unwrap();
        assert!((f.kappa - 0.4).abs() < 1e-15);
        assert!((f.tau - 0.2).abs() < 1e-15);
    }

    #[test]
    fn out_of_interval_is_rejected() {
        let c = CenterCurve::circle(3.0, 0.0, 1.0).unwrap();
        assert!(matches!(c.eval(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(c.eval(f64::NAN), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn unit_speed_reports() {
        let circle = CenterCurve::circle(3.0, 0.0, 10.0).unwrap();
        assert!(validate_unit_speed(&circle, 50, 1e-8).ok);
        let helix = CenterCurve::helix(2.0, 1.0, 0.0, 10.0).unwrap();
        assert!(validate_unit_speed(&helix, 50, 1e-8).ok);

        let para = CenterCurve::custom(Arc::new(Parabola), 0.0, 2.0).unwrap();
        let rep = validate_unit_speed(&para, 21, 1e-8);
        assert!(!rep.ok);
        assert!((rep.worst_s - 2.0).abs() < 1e-12);
        assert!((rep.worst_deviation - 3.0).abs() < 1e-9);
        // |α'(1)| = 2
        assert!(matches!(para.eval(1.0), Err(Error::NotUnitSpeed { speed, .. }) if (speed - 2.0).abs() < 1e-9));
    }
}
