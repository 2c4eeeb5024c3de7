use nalgebra::Vector4;

use super::{mean_curvature, CurvatureValue, DiffConfig, Tolerances, Undefined};
use crate::canal::{CanalSurface, LocalData};
use crate::diff;
use crate::error::{Error, Result};
use crate::jet::Jet2;

/// Either a hard error or a reason the value does not exist.
enum Fail {
    Undef(Undefined),
    Err(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Err(e)
    }
}

/// t-jets of A^ss, A^st, A^tt (the √|D|·L^{ij} weights) and φ = ln√|K|.
struct Weights {
    a_ss: Jet2,
    a_st: Jet2,
    a_tt: Jet2,
    phi: Jet2,
}

fn weight_values(l: &LocalData, t: f64, tol: &Tolerances) -> std::result::Result<[f64; 4], Fail> {
    let w = exact_weights(l, t, tol)?;
    Ok([w.a_ss.v, w.a_st.v, w.a_tt.v, w.phi.v])
}

fn exact_weights(l: &LocalData, t: f64, tol: &Tolerances) -> std::result::Result<Weights, Fail> {
    let [eb, fb, gb] = l.first_form_trig();
    let [e, f, g] = l.second_form_trig();
    let (eb, fb, gb) = (eb.jet(t), fb.jet(t), gb.jet(t));
    let (e, f, g) = (e.jet(t), f.jet(t), g.jet(t));
    let area2 = eb * gb - fb * fb;
    if !(area2.v > tol.deg) {
        return Err(Fail::Undef(Undefined::DegenerateFirstForm));
    }
    let d = e * g - f * f;
    if !(d.v.abs() > tol.ii) {
        return Err(Fail::Undef(Undefined::DegenerateSecondForm));
    }
    let k = d / area2;
    if !(k.v.abs() > tol.k) {
        return Err(Fail::Undef(Undefined::VanishingGauss));
    }
    let root = d.abs().sqrt();
    Ok(Weights { a_ss: root * g / d, a_st: -(root * f / d), a_tt: root * e / d, phi: k.ln_abs().scale(0.5) })
}

fn weights(l: &LocalData, t: f64, cfg: &DiffConfig, tol: &Tolerances) -> std::result::Result<Weights, Fail> {
    if cfg.exact_t {
        return exact_weights(l, t, tol);
    }
    let ht = cfg.stencil.step_at(t);
    let lv = cfg.stencil.levels;
    let vals = |y: f64| weight_values(l, y, tol).map(Vector4::from);
    let v = Vector4::from(weight_values(l, t, tol)?);
    let d1 = diff::first(vals, t, ht, lv)?;
    let d2 = diff::second(vals, t, ht, lv)?;
    let j = |i: usize| Jet2::new(v[i], d1[i], d2[i]);
    Ok(Weights { a_ss: j(0), a_st: j(1), a_tt: j(2), phi: j(3) })
}

fn divergence_term(m: &CanalSurface, s: f64, t: f64, cfg: &DiffConfig, tol: &Tolerances) -> std::result::Result<f64, Fail> {
    let l = m.local_checked(s, t)?;
    let w = weights(&l, t, cfg, tol)?;
    // [A^ss, A^st, φ, φ_t] as functions of s at fixed t
    let shifted = |x: f64| -> std::result::Result<Vector4<f64>, Fail> {
        let w = weights(&m.local(x)?, t, cfg, tol)?;
        Ok(Vector4::new(w.a_ss.v, w.a_st.v, w.phi.v, w.phi.d1))
    };
    let hs = cfg.stencil.step_at(s);
    let lv = cfg.stencil.levels;
    let d_s = diff::first(shifted, s, hs, lv)?;
    let d_ss = diff::second(shifted, s, hs, lv)?;
    let (a_ss_s, a_st_s, phi_s, phi_st) = (d_s[0], d_s[1], d_s[2], d_s[3]);
    let phi_ss = d_ss[2];

    let div = (a_ss_s + w.a_st.d1) * phi_s
        + (a_st_s + w.a_tt.d1) * w.phi.d1
        + w.a_ss.v * phi_ss
        + 2.0 * w.a_st.v * phi_st
        + w.a_tt.v * w.phi.d2;
    let d = {
        let [e, f, g] = l.second_form_trig();
        e.eval(t) * g.eval(t) - f.eval(t) * f.eval(t)
    };
    Ok(div / (2.0 * d.abs().sqrt()))
}

/// H_II = H − (1/(2√|eg − f²|)) Σ ∂ᵢ(√|eg − f²| Lⁱʲ ∂ⱼ ln√|K|).
///
/// t-derivatives are exact (or central differences when `cfg.exact_t` is
/// off); s-derivatives use the stencil. Undefined when K or eg − f² gets
/// within tolerance of zero anywhere on the stencil.
pub fn second_mean_curvature(
    m: &CanalSurface,
    s: f64,
    t: f64,
    cfg: &DiffConfig,
    tol: &Tolerances,
) -> Result<CurvatureValue> {
    let forms = m.forms(s, t)?;
    let h = match mean_curvature(&forms, tol) {
        Ok(h) => h,
        Err(Error::DegenerateFirstForm { .. }) => {
            return Ok(CurvatureValue::Undefined(Undefined::DegenerateFirstForm))
        }
        Err(e) => return Err(e),
    };
    match divergence_term(m, s, t, cfg, tol) {
        Ok(div) => Ok(CurvatureValue::Defined(h - div)),
        Err(Fail::Undef(u)) => Ok(CurvatureValue::Undefined(u)),
        Err(Fail::Err(e)) => Err(e),
    }
}

/// −8r²M³N²·H_II with M = EG − F² and N = eg − f², the polynomial part
/// Σ wᵢ cosⁱ t of H_II.
pub fn hii_numerator(m: &CanalSurface, s: f64, t: f64, cfg: &DiffConfig, tol: &Tolerances) -> Result<CurvatureValue> {
    let l = m.local_checked(s, t)?;
    let forms = l.forms(t);
    let r = l.radius.r;
    Ok(match second_mean_curvature(m, s, t, cfg, tol)? {
        CurvatureValue::Defined(h) => {
            CurvatureValue::Defined(-8.0 * r * r * forms.area2.powi(3) * forms.det2 * forms.det2 * h)
        }
        u => u,
    })
}

/// w₁₀ = 8κ¹⁰Q¹⁰(Q² + R²)⁵ / r⁵.
pub fn w10_coefficient(m: &CanalSurface, s: f64) -> Result<f64> {
    let l = m.local(s)?;
    let (k, q, big_r, r) = (l.frenet.kappa, l.rq.Q, l.rq.R, l.radius.r);
    Ok(8.0 * k.powi(10) * q.powi(10) * (q * q + big_r * big_r).powi(5) / r.powi(5))
}
