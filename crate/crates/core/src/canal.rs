//! The canal-surface parametrization
//!
//! ```text
//! C(s, t) = α(s) − R(s) T − Q(s) cos t N + Q(s) sin t B
//! ```
//!
//! with R = r r′ and Q = ±r√(1 − r′²), its exact partial derivatives (via the
//! Frenet–Serret equations), the radial unit normal and the closed-form
//! fundamental-form coefficients.

use std::f64::consts::TAU;

use crate::error::{finite, Error, Result};
use crate::geometry::{rq_jet_at, CenterCurve, FrenetData, QSign, RQJet, RadiusFamily, RadiusJet};
use crate::jet::Jet2;
use crate::Vec3;

/// Arc-length interval of the surface; t always ranges over a full period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamDomain {
    pub s_min: f64,
    pub s_max: f64,
}

impl ParamDomain {
    pub fn new(s_min: f64, s_max: f64) -> Result<Self> {
        finite("s_min", s_min)?;
        finite("s_max", s_max)?;
        if s_min >= s_max {
            return Err(Error::InvalidConfig(format!("empty s-domain [{s_min}, {s_max}]")));
        }
        Ok(ParamDomain { s_min, s_max })
    }

    /// `n` equispaced values covering `[s_min, s_max]` inclusive.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        if n < 2 {
            return vec![0.5 * (self.s_min + self.s_max)];
        }
        (0..n)
            .map(|i| self.s_min + (self.s_max - self.s_min) * i as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.s_min && s <= self.s_max
    }
}

/// `n` equispaced angles on `[0, 2π)`.
pub fn t_samples(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

#[derive(Debug, Clone)]
pub struct CanalSurface {
    pub curve: CenterCurve,
    pub radius: RadiusFamily,
    pub q_sign: QSign,
    pub domain: ParamDomain,
}

/// Number of s-samples used when validating a new surface.
const VALIDATION_SAMPLES: usize = 201;

/// C_s, C_t, C_ss, C_st, C_tt at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePartials {
    pub c_s: Vec3,
    pub c_t: Vec3,
    pub c_ss: Vec3,
    pub c_st: Vec3,
    pub c_tt: Vec3,
}

/// First and second fundamental forms at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormCoefficients {
    pub e_big: f64,
    pub f_big: f64,
    pub g_big: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// EG − F²
    pub area2: f64,
    /// eg − f²
    pub det2: f64,
}

impl FormCoefficients {
    pub fn new(first: (f64, f64, f64), second: (f64, f64, f64)) -> Self {
        let (eb, fb, gb) = first;
        let (e, f, g) = second;
        FormCoefficients {
            e_big: eb,
            f_big: fb,
            g_big: gb,
            e,
            f,
            g,
            area2: eb * gb - fb * fb,
            det2: e * g - f * f,
        }
    }
}

/// `a0 + a1 cos t + a2 cos² t + b0 sin t`: the shape of every fundamental-form
/// coefficient at fixed s.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct TrigQuad {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub b0: f64,
}

impl TrigQuad {
    pub fn eval(&self, t: f64) -> f64 {
        let (sn, cs) = t.sin_cos();
        self.a0 + cs * (self.a1 + self.a2 * cs) + self.b0 * sn
    }

    /// Value with exact first and second t-derivatives.
    pub fn jet(&self, t: f64) -> Jet2 {
        let (sn, cs) = t.sin_cos();
        let v = self.a0 + cs * (self.a1 + self.a2 * cs) + self.b0 * sn;
        let d1 = -self.a1 * sn - 2.0 * self.a2 * cs * sn + self.b0 * cs;
        let d2 = -self.a1 * cs - 2.0 * self.a2 * (cs * cs - sn * sn) - self.b0 * sn;
        Jet2::new(v, d1, d2)
    }

    fn scale(self, k: f64) -> Self {
        TrigQuad { a0: self.a0 * k, a1: self.a1 * k, a2: self.a2 * k, b0: self.b0 * k }
    }
}

/// Everything the closed forms need at a fixed s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LocalData {
    pub s: f64,
    pub frenet: FrenetData,
    pub radius: RadiusJet,
    pub rq: RQJet,
}

#[allow(non_snake_case)]
impl LocalData {
    /// (E, F, G) as trig quadratics in t.
    pub fn first_form_trig(&self) -> [TrigQuad; 3] {
        let RQJet { R, R1, Q, Q1, .. } = self.rq;
        let (k, tau) = (self.frenet.kappa, self.frenet.tau);
        let e_big = TrigQuad {
            a0: Q * Q * tau * tau + Q1 * Q1 + R * R * k * k + 1.0 - 2.0 * R1 + R1 * R1,
            a1: (2.0 * Q - 2.0 * Q * R1 + 2.0 * Q1 * R) * k,
            a2: Q * Q * k * k,
            b0: 2.0 * Q * R * k * tau,
        };
        let f_big = TrigQuad { a0: -Q * Q * tau, b0: -Q * R * k, ..Default::default() };
        let g_big = TrigQuad { a0: Q * Q, ..Default::default() };
        [e_big, f_big, g_big]
    }

    /// (e, f, g) as trig quadratics in t.
    pub fn second_form_trig(&self) -> [TrigQuad; 3] {
        let RQJet { R, R1, R2, Q, Q1, Q2, .. } = self.rq;
        let (k, tau) = (self.frenet.kappa, self.frenet.tau);
        let r = self.radius.r;
        let e = TrigQuad {
            a0: -Q * Q2 + R * R * k * k - R * R2 + Q * Q * tau * tau,
            a1: (2.0 * R * Q1 - 2.0 * Q * R1 + Q) * k,
            a2: Q * Q * k * k,
            b0: 2.0 * R * Q * k * tau,
        }
        .scale(-1.0 / r);
        let f = TrigQuad { a0: Q * Q * tau, b0: Q * R * k, ..Default::default() }.scale(1.0 / r);
        let g = TrigQuad { a0: -Q * Q / r, ..Default::default() };
        [e, f, g]
    }

    /// EG − F² in the factored form Q²{…}.
    pub fn area_element(&self, t: f64) -> f64 {
        let RQJet { R, R1, Q, Q1, .. } = self.rq;
        let k = self.frenet.kappa;
        let c = t.cos();
        Q * Q
            * (k * k * (R * R + Q * Q) * c * c
                + 2.0 * k * (Q1 * R - Q * R1 + Q) * c
                + 1.0
                - 2.0 * R1
                + R1 * R1
                + Q1 * Q1)
    }

    pub fn forms(&self, t: f64) -> FormCoefficients {
        let [eb, fb, gb] = self.first_form_trig();
        let [e, f, g] = self.second_form_trig();
        FormCoefficients::new((eb.eval(t), fb.eval(t), gb.eval(t)), (e.eval(t), f.eval(t), g.eval(t)))
    }
}

impl CanalSurface {
    /// Builds a surface and checks that r > 0 and |r′| < 1 on the s-domain.
    pub fn new(curve: CenterCurve, radius: RadiusFamily, q_sign: QSign, domain: ParamDomain) -> Result<Self> {
        let surface = Self::new_unchecked(curve, radius, q_sign, domain);
        for s in domain.samples(VALIDATION_SAMPLES) {
            let jet = surface.radius.eval(s)?;
            rq_jet_at(&jet, q_sign, s)?;
        }
        Ok(surface)
    }

    /// Skips validation; used to diagnose degenerate inputs.
    pub fn new_unchecked(curve: CenterCurve, radius: RadiusFamily, q_sign: QSign, domain: ParamDomain) -> Self {
        CanalSurface { curve, radius, q_sign, domain }
    }

    fn check(&self, s: f64, t: f64) -> Result<()> {
        finite("s", s)?;
        finite("t", t)?;
        if self.domain.contains(s) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { s, s_min: self.domain.s_min, s_max: self.domain.s_max })
        }
    }

    /// Frenet and radius data at `s` without the domain check.
    pub(crate) fn local(&self, s: f64) -> Result<LocalData> {
        let frenet = self.curve.frenet_unbounded(s);
        let radius = self.radius.eval(s)?;
        let rq = rq_jet_at(&radius, self.q_sign, s)?;
        Ok(LocalData { s, frenet, radius, rq })
    }

    pub(crate) fn local_checked(&self, s: f64, t: f64) -> Result<LocalData> {
        self.check(s, t)?;
        self.local(s)
    }

    /// C(s, t).
    pub fn point(&self, s: f64, t: f64) -> Result<Vec3> {
        self.check(s, t)?;
        self.point_unbounded(s, t)
    }

    /// C(s, t) for any s where the radius is valid; finite-difference
    /// stencils use this near the domain ends.
    pub fn point_unbounded(&self, s: f64, t: f64) -> Result<Vec3> {
        let l = self.local(s)?;
        let (sn, cs) = t.sin_cos();
        let f = &l.frenet;
        Ok(self.curve.position_unbounded(s) - l.rq.R * f.t - l.rq.Q * cs * f.n + l.rq.Q * sn * f.b)
    }

    /// Center α(s) without the domain check.
    pub fn center_unbounded(&self, s: f64) -> Vec3 {
        self.curve.position_unbounded(s)
    }

    /// Exact partial derivatives of C.
    #[allow(non_snake_case)]
    pub fn partials(&self, s: f64, t: f64) -> Result<SurfacePartials> {
        let l = self.local_checked(s, t)?;
        let FrenetData { t: tt, n, b, kappa: k, kappa_prime: k1, tau, tau_prime: tau1 } = l.frenet;
        let RQJet { R, R1, R2, Q, Q1, Q2, .. } = l.rq;
        let (sn, cs) = t.sin_cos();

        // C_s = a T + b N + d B
        let a = 1.0 - R1 + Q * k * cs;
        let bb = -R * k - Q1 * cs - Q * tau * sn;
        let d = -Q * tau * cs + Q1 * sn;
        let a_s = -R2 + Q1 * k * cs + Q * k1 * cs;
        let b_s = -R1 * k - R * k1 - Q2 * cs - Q1 * tau * sn - Q * tau1 * sn;
        let d_s = -Q1 * tau * cs - Q * tau1 * cs + Q2 * sn;

        let c_s = a * tt + bb * n + d * b;
        let c_t = Q * sn * n + Q * cs * b;
        let c_tt = Q * cs * n - Q * sn * b;
        let c_st = -Q * k * sn * tt + (Q1 * sn - Q * tau * cs) * n + (Q * tau * sn + Q1 * cs) * b;
        let c_ss = (a_s - bb * k) * tt + (a * k + b_s - d * tau) * n + (bb * tau + d_s) * b;
        Ok(SurfacePartials { c_s, c_t, c_ss, c_st, c_tt })
    }

    /// Radial unit normal (C − α)/r.
    pub fn normal(&self, s: f64, t: f64) -> Result<Vec3> {
        self.check(s, t)?;
        let l = self.local(s)?;
        let (sn, cs) = t.sin_cos();
        let f = &l.frenet;
        Ok((-l.rq.R * f.t - l.rq.Q * cs * f.n + l.rq.Q * sn * f.b) / l.radius.r)
    }

    /// (E, F, G).
    pub fn first_form(&self, s: f64, t: f64) -> Result<(f64, f64, f64)> {
        let [e, f, g] = self.local_checked(s, t)?.first_form_trig();
        Ok((e.eval(t), f.eval(t), g.eval(t)))
    }

    /// (e, f, g).
    pub fn second_form(&self, s: f64, t: f64) -> Result<(f64, f64, f64)> {
        let [e, f, g] = self.local_checked(s, t)?.second_form_trig();
        Ok((e.eval(t), f.eval(t), g.eval(t)))
    }

    pub fn forms(&self, s: f64, t: f64) -> Result<FormCoefficients> {
        Ok(self.local_checked(s, t)?.forms(t))
    }

    /// EG − F² from its factored closed form.
    pub fn area_element(&self, s: f64, t: f64) -> Result<f64> {
        Ok(self.local_checked(s, t)?.area_element(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn cylinder() -> CanalSurface {
        CanalSurface::new(
            CenterCurve::line(-10.0, 10.0).unwrap(),
            RadiusFamily::Constant { c: 1.0 },
            QSign::Plus,
            ParamDomain::new(-1.0, 2.0).unwrap(),
        )
        .unwrap()
    }

    fn cone() -> CanalSurface {
        CanalSurface::new(
            CenterCurve::line(-1.0, 3.0).unwrap(),
            RadiusFamily::Linear { c1: 0.5, c2: 1.0 },
            QSign::Plus,
            ParamDomain::new(0.0, 2.0).unwrap(),
        )
        .unwrap()
    }

    fn torus() -> CanalSurface {
        CanalSurface::new(
            CenterCurve::circle(3.0, 0.0, 20.0).unwrap(),
            RadiusFamily::Constant { c: 1.0 },
            QSign::Plus,
            ParamDomain::new(0.0, 6.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn surface_points() {
        let c = cylinder();
        assert!(close(c.point(0.0, 0.0).unwrap(), Vec3::new(0.0, -1.0, 0.0), 1e-15));
        assert!(close(c.point(1.0, FRAC_PI_2).unwrap(), Vec3::new(1.0, 0.0, 1.0), 1e-15));
        let k = cone();
        assert!(close(k.point(0.0, 0.0).unwrap(), Vec3::new(-0.5, -0.75f64.sqrt(), 0.0), 1e-15));
    }

    #[test]
    fn partials_examples() {
        let c = cylinder();
        for (s, t) in [(0.0, 0.0), (1.2, 2.0)] {
            let p = c.partials(s, t).unwrap();
            assert!(close(p.c_s, Vec3::new(1.0, 0.0, 0.0), 1e-15));
        }
        assert!(close(c.partials(0.0, 0.0).unwrap().c_tt, Vec3::new(0.0, 1.0, 0.0), 1e-15));
        let tor = torus();
        assert!((tor.partials(0.0, 0.0).unwrap().c_s.norm() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn normal_examples() {
        assert!(close(cylinder().normal(0.0, 0.0).unwrap(), Vec3::new(0.0, -1.0, 0.0), 1e-15));
        assert!(close(cone().normal(0.0, 0.0).unwrap(), Vec3::new(-0.5, -0.75f64.sqrt(), 0.0), 1e-15));
        let tor = torus();
        let p = tor.partials(1.0, 2.0).unwrap();
        assert!(tor.normal(1.0, 2.0).unwrap().dot(&p.c_t).abs() < 1e-15);
    }

    #[test]
    fn form_examples() {
        let c = cylinder();
        assert_eq!(c.first_form(0.3, 1.0).unwrap(), (1.0, 0.0, 1.0));
        let (e, f, g) = c.second_form(0.3, 1.0).unwrap();
        assert_eq!((e.abs(), f, g), (0.0, 0.0, -1.0));

        let tor = torus();
        let (eb, fb, gb) = tor.first_form(0.0, 0.0).unwrap();
        assert!((eb - 16.0 / 9.0).abs() < 1e-15);
        assert_eq!(fb.abs(), 0.0);
        assert_eq!(gb, 1.0);
    }

    #[test]
    fn area_element_examples() {
        assert_eq!(cylinder().area_element(0.0, 1.0).unwrap(), 1.0);
        assert!((torus().area_element(0.0, 0.0).unwrap() - 16.0 / 9.0).abs() < 1e-15);
        let tor = torus();
        assert!((tor.area_element(0.0, PI).unwrap() - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_linear_radius() {
        let bad = CanalSurface::new(
            CenterCurve::line(-1.0, 3.0).unwrap(),
            RadiusFamily::Linear { c1: 1.0, c2: 1.0 },
            QSign::Plus,
            ParamDomain::new(0.0, 2.0).unwrap(),
        );
        assert!(matches!(bad, Err(Error::DegenerateQ { .. })));
    }

    #[test]
    fn domain_violation() {
        assert!(matches!(cylinder().point(5.0, 0.0), Err(Error::OutOfDomain { .. })));
        assert!(cylinder().point_unbounded(5.0, 0.0).is_ok());
    }
}
