use nalgebra::{Matrix3, Vector4};

use super::{CurvatureValue, DiffConfig, Tolerances, Undefined};
use crate::canal::{CanalSurface, LocalData, TrigQuad};
use crate::diff;
use crate::error::Result;
use crate::geometry::RQJet;

/// Denominator used in the Brioschi formula for K_II.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BrioschiDenominator {
    /// (eg − f²)², the classical Brioschi denominator.
    #[default]
    Squared,
    /// (|eg| − f²)², kept for comparison with the printed variant.
    PrintedAbs,
}

/// `a + b sin t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SinCoupled {
    pub a: f64,
    pub b: f64,
}

impl SinCoupled {
    pub fn eval(&self, t: f64) -> f64 {
        self.a + self.b * t.sin()
    }
}

/// Numerator coefficients n₀…n₄ of the closed K_II; each may carry a
/// sin t coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KiiCoefficients {
    pub n: [SinCoupled; 5],
}

impl KiiCoefficients {
    /// Σ nᵢ cosⁱ t.
    pub fn eval(&self, t: f64) -> f64 {
        let c = t.cos();
        self.n.iter().rev().fold(0.0, |acc, ni| acc * c + ni.eval(t))
    }

    pub fn max_abs(&self) -> f64 {
        self.n.iter().map(|x| x.a.abs().max(x.b.abs())).fold(0.0, f64::max)
    }
}

/// Values, t-derivatives and s-derivatives of (e, f, g) needed by Brioschi.
struct SecondFormDerivatives {
    e: f64,
    f: f64,
    g: f64,
    e_s: f64,
    e_t: f64,
    e_tt: f64,
    f_s: f64,
    f_t: f64,
    f_st: f64,
    g_s: f64,
    g_t: f64,
    g_ss: f64,
}

fn second_form_derivatives(m: &CanalSurface, s: f64, t: f64, cfg: &DiffConfig) -> Result<SecondFormDerivatives> {
    form_derivatives(m, s, t, cfg, LocalData::second_form_trig)
}

fn form_derivatives(
    m: &CanalSurface,
    s: f64,
    t: f64,
    cfg: &DiffConfig,
    form: fn(&LocalData) -> [TrigQuad; 3],
) -> Result<SecondFormDerivatives> {
    let l = m.local_checked(s, t)?;
    let hs = cfg.stencil.step_at(s);
    let lv = cfg.stencil.levels;
    // [e, f, g, f_t] at shifted s
    let shifted = |x: f64| -> Result<Vector4<f64>> {
        let [e, f, g] = form(&m.local(x)?);
        let f_t = if cfg.exact_t {
            f.jet(t).d1
        } else {
            diff::first(|y| Ok(f.eval(y)), t, cfg.stencil.step_at(t), lv)?
        };
        Ok(Vector4::new(e.eval(t), f.eval(t), g.eval(t), f_t))
    };
    let d_s = diff::first(shifted, s, hs, lv)?;
    let d_ss = diff::second(shifted, s, hs, lv)?;

    let [e, f, g] = form(&l);
    let (e_t, e_tt, f_t, g_t) = if cfg.exact_t {
        let (ej, fj, gj) = (e.jet(t), f.jet(t), g.jet(t));
        (ej.d1, ej.d2, fj.d1, gj.d1)
    } else {
        let ht = cfg.stencil.step_at(t);
        (
            diff::first(|y| Ok(e.eval(y)), t, ht, lv)?,
            diff::second(|y| Ok(e.eval(y)), t, ht, lv)?,
            diff::first(|y| Ok(f.eval(y)), t, ht, lv)?,
            diff::first(|y| Ok(g.eval(y)), t, ht, lv)?,
        )
    };
    Ok(SecondFormDerivatives {
        e: e.eval(t),
        f: f.eval(t),
        g: g.eval(t),
        e_s: d_s[0],
        e_t,
        e_tt,
        f_s: d_s[1],
        f_t,
        f_st: d_s[3],
        g_s: d_s[2],
        g_t,
        g_ss: d_ss[2],
    })
}

/// The difference of the two Brioschi determinants built from (e, f, g),
/// i.e. K_II·(eg − f²)².
pub fn brioschi_numerator(m: &CanalSurface, s: f64, t: f64, cfg: &DiffConfig) -> Result<f64> {
    let d = second_form_derivatives(m, s, t, cfg)?;
    Ok(brioschi_determinants(&d))
}

fn brioschi_determinants(d: &SecondFormDerivatives) -> f64 {
    let first = Matrix3::new(
        -0.5 * d.e_tt + d.f_st - 0.5 * d.g_ss,
        0.5 * d.e_s,
        d.f_s - 0.5 * d.e_t,
        d.f_t - 0.5 * d.g_s,
        d.e,
        d.f,
        0.5 * d.g_t,
        d.f,
        d.g,
    );
    let second = Matrix3::new(0.0, 0.5 * d.e_t, 0.5 * d.g_s, 0.5 * d.e_t, d.e, d.f, 0.5 * d.g_s, d.f, d.g);
    first.determinant() - second.determinant()
}

/// K_II by the Brioschi formula on the second fundamental form.
pub fn brioschi_kii(m: &CanalSurface, s: f64, t: f64, cfg: &DiffConfig, tol: &Tolerances) -> Result<CurvatureValue> {
    let d = second_form_derivatives(m, s, t, cfg)?;
    let det2 = d.e * d.g - d.f * d.f;
    if !(det2.abs() > tol.ii) {
        return Ok(CurvatureValue::Undefined(Undefined::DegenerateSecondForm));
    }
    let denom = match cfg.denominator {
        BrioschiDenominator::Squared => det2 * det2,
        BrioschiDenominator::PrintedAbs => {
            let x = (d.e * d.g).abs() - d.f * d.f;
            x * x
        }
    };
    Ok(CurvatureValue::Defined(brioschi_determinants(&d) / denom))
}

/// Closed-form numerator coefficients n₀…n₄ at `s`.
#[allow(non_snake_case)]
pub fn kii_coefficients(m: &CanalSurface, s: f64) -> Result<KiiCoefficients> {
    let l = m.local(s)?;
    let RQJet { R, R1, R2, R3, Q, Q1, Q2, Q3 } = l.rq;
    let (k, k1, tau) = (l.frenet.kappa, l.frenet.kappa_prime, l.frenet.tau);
    let r = l.radius.r;
    let r1 = l.radius.r1;
    let r2 = l.radius.r2;
    let (k2, r_2) = (k * k, r * r);
    let (k3, k4) = (k2 * k, k2 * k2);
    let rr1 = r * r1;
    let rr2 = r * r2;

    let n0a = -Q * k2 * r_2 + 4.0 * Q * R1 * k2 * r_2 - 4.0 * Q * R1 * R1 * k2 * r_2 - 2.0 * Q1 * R * k2 * r_2
        - Q * Q * Q3 * rr1
        + 2.0 * Q * Q1 * Q3 * r_2
        - 4.0 * Q * Q * Q2 * k2 * r_2
        - 2.0 * Q * R * R2 * r1 * r1
        + 2.0 * Q * Q * Q2 * rr2
        + 2.0 * Q * R * R2 * rr2
        + 2.0 * Q1 * R1 * R2 * r_2
        + 2.0 * Q1 * R * R3 * r_2
        - 4.0 * Q2 * R * R2 * r_2
        - Q * R * rr1 * k2
        + 4.0 * Q1 * R * R1 * k2 * r_2
        + 2.0 * Q * R * R1 * rr1 * k2
        - 2.0 * Q1 * R * R * rr1 * k2
        - 4.0 * Q * Q2 * Q2 * r_2
        + 2.0 * Q1 * Q1 * Q2 * r_2
        + 2.0 * Q1 * R * R2 * rr1
        - 2.0 * Q * Q * Q2 * r1 * r1
        + Q * Q1 * Q2 * rr1
        - Q * R1 * R2 * rr1
        - Q * R * R3 * rr1
        - 4.0 * Q * R * R2 * k2 * r_2;
    let n0b = k
        * tau
        * ((4.0 * Q * Q2 * R + 4.0 * R * R * R2 + 2.0 * Q * Q1 + 4.0 * Q1 * Q1 * R - 4.0 * Q * Q1 * R1) * r_2
            + Q * (2.0 * Q * R1 - Q - 2.0 * Q1 * R) * rr1);

    let n1a = Q * Q * rr1 * k1 + 4.0 * R * R * R1 * r_2 * k3 - 4.0 * Q1 * Q1 * R * k1 * r_2 - 2.0 * Q * Q1 * k1 * r_2
        - 2.0 * R * R * R * k3 * rr1
        - 4.0 * Q * Q * R1 * r1 * r1 * k
        - 2.0 * Q * Q * rr2 * k
        - 4.0 * R * R * R2 * k1 * r_2
        - 2.0 * R * R * k3 * r_2
        - 2.0 * Q1 * Q1 * k * r_2
        + 2.0 * Q * Q * r1 * r1 * k
        - Q * Q1 * rr1 * k
        + 4.0 * Q * Q1 * R * r1 * r1 * k
        - 2.0 * Q * Q * R1 * rr1 * k1
        + 4.0 * Q * Q1 * R1 * rr1 * k
        + 2.0 * Q * Q1 * R * rr1 * k1
        - 4.0 * Q1 * Q1 * R * rr1 * k
        + 2.0 * R * R * R2 * rr1 * k
        - 6.0 * R * R1 * R2 * k * r_2
        + 4.0 * Q * Q1 * R * k3 * r_2
        + Q * Q1 * R1 * k1 * r_2
        - 2.0 * Q * Q * R * k3 * rr1
        + 2.0 * R * R * R3 * k * r_2
        + 2.0 * R * R2 * k * r_2
        + 6.0 * Q * Q2 * k * r_2
        + 4.0 * Q * Q2 * R * rr1 * k
        - 16.0 * Q * Q2 * R1 * k * r_2
        - 4.0 * Q * Q2 * R * k1 * r_2
        + 6.0 * Q1 * Q2 * R * k * r_2
        - 2.0 * Q * Q * R2 * rr1 * k
        + 4.0 * Q * Q * R1 * rr2 * k
        - 4.0 * Q * Q1 * R * rr2 * k
        + 2.0 * Q * Q3 * R * k * r_2
        + 4.0 * Q * Q1 * R2 * k * r_2;
    let n1b = k2 * tau * (2.0 * Q * r_2 * (2.0 * Q * Q1 + 2.0 * R * R1 - R) - 2.0 * Q * (R * R + Q * Q) * rr1);

    let n2a = k
        * (12.0 * Q * Q * Q2 * k * r_2 + 8.0 * Q * R1 * k * r_2
            - 12.0 * Q * R1 * R1 * k * r_2
            - 4.0 * Q * Q1 * Q1 * k * r_2
            + 2.0 * Q * R * R * r1 * r1 * k
            + 2.0 * Q * Q * Q * k1 * rr1
            - Q * R * k * rr1
            + 2.0 * Q * R * R * k1 * rr1
            - 2.0 * Q * Q * Q * k * rr2
            - Q * k * r_2
            + 2.0 * Q * Q * Q * r1 * r1 * k
            - 4.0 * Q * R * R1 * k1 * r_2
            + 12.0 * Q * R * R2 * k * r_2
            - 8.0 * Q1 * R * R1 * k * r_2
            + 2.0 * Q * R * k1 * r_2
            - 4.0 * Q1 * R * k * r_2
            - 4.0 * Q * Q * Q1 * k1 * r_2
            - 4.0 * Q1 * R * R * rr1 * k
            - 2.0 * Q * R * R * k * rr2
            + 4.0 * Q * R * R1 * rr1 * k);

    let n3a = 2.0 * Q * k3 * r_2 * (8.0 * Q * R1 - 8.0 * Q1 * R - 3.0 * Q);
    let n4a = -4.0 * Q * k4 * r_2 * (Q * Q + R * R);

    Ok(KiiCoefficients {
        n: [
            SinCoupled { a: n0a, b: n0b },
            SinCoupled { a: n1a, b: n1b },
            SinCoupled { a: n2a, b: 0.0 },
            SinCoupled { a: n3a, b: 0.0 },
            SinCoupled { a: n4a, b: 0.0 },
        ],
    })
}

/// Coefficients with the sign of the Q′RR′κr² term inside n₂ flipped to +8.
///
/// The printed −8 disagrees with the Brioschi formula on every surface with
/// κ ≠ 0 and r′ ≠ 0 by exactly 16κ²Q′RR′r²; with +8 the two agree to
/// finite-difference accuracy. The term vanishes on tubes (R = 0).
#[allow(non_snake_case)]
pub fn kii_coefficients_corrected(m: &CanalSurface, s: f64) -> Result<KiiCoefficients> {
    let mut c = kii_coefficients(m, s)?;
    let l = m.local(s)?;
    let RQJet { R, R1, Q1, .. } = l.rq;
    let (k, r) = (l.frenet.kappa, l.radius.r);
    c.n[2].a += 16.0 * k * k * Q1 * R * R1 * r * r;
    Ok(c)
}

/// n₀ in its reduced form for a straight center line (κ = 0), where n₁…n₄
/// vanish.
#[allow(non_snake_case)]
pub fn kii_n0_straight(rq: &RQJet, r: f64, r1: f64, r2: f64) -> f64 {
    let RQJet { R, R1, R2, R3, Q, Q1, Q2, Q3 } = *rq;
    -2.0 * Q * r1 * r1 * (R * R2 + Q * Q2)
        + 2.0 * Q * r * r2 * (Q * Q2 + R * R2)
        + 2.0
            * r
            * r
            * (Q1 * R * R3 - 2.0 * Q2 * R * R2 - 2.0 * Q * Q2 * Q2 + Q1 * R1 * R2 + Q * Q1 * Q3 + Q1 * Q1 * Q2)
        + r * r1 * (Q * Q1 * Q2 - Q * R1 * R2 - Q * R * R3 + 2.0 * Q1 * R * R2 - Q * Q * Q3)
}

/// Q³/(4r⁵) · Σ nᵢ cosⁱ t, the closed-form counterpart of
/// [`brioschi_numerator`].
pub fn kii_numerator_closed(m: &CanalSurface, s: f64, t: f64) -> Result<f64> {
    let l = m.local_checked(s, t)?;
    let coeffs = kii_coefficients(m, s)?;
    let (q, r) = (l.rq.Q, l.radius.r);
    Ok(q * q * q / (4.0 * r.powi(5)) * coeffs.eval(t))
}

/// Relative size below which every nᵢ counts as a structural zero.
const STRUCTURAL_ZERO: f64 = 1e-12;

/// K_II = Q³ Σ nᵢ cosⁱ t / (4r⁵ (eg − f²)²).
///
/// Where eg − f² vanishes but every nᵢ vanishes too (a straight tube), the
/// numerator is zero identically and 0 is returned.
pub fn kii_closed(m: &CanalSurface, s: f64, t: f64, tol: &Tolerances) -> Result<CurvatureValue> {
    let l = m.local_checked(s, t)?;
    let forms = l.forms(t);
    let coeffs = kii_coefficients(m, s)?;
    let (q, r) = (l.rq.Q, l.radius.r);
    if !(forms.det2.abs() > tol.ii) {
        let scale = q.abs().max(r).powi(3).max(1.0);
        if coeffs.max_abs() <= STRUCTURAL_ZERO * scale && forms.area2 > tol.deg {
            return Ok(CurvatureValue::Defined(0.0));
        }
        return Ok(CurvatureValue::Undefined(Undefined::DegenerateSecondForm));
    }
    let num = q * q * q / (4.0 * r.powi(5)) * coeffs.eval(t);
    Ok(CurvatureValue::Defined(num / (forms.det2 * forms.det2)))
}
