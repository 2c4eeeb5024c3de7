//! Gaussian, mean, second Gaussian and second mean curvature.
//!
//! K and H come in two flavours: the generic quotients of the fundamental
//! forms and the canal-specific closed forms that factor out a polynomial in
//! cos t. K_II is available through the Brioschi formula applied to (e, f, g)
//! and through the closed numerator coefficients n₀…n₄; H_II through the
//! normal-variation formula with finite differences in s.

mod second_gauss;
mod second_mean;
mod trig;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canal::{CanalSurface, FormCoefficients};
use crate::diff::StencilConfig;
use crate::error::{Error, Result};
use crate::geometry::RQJet;

pub use second_gauss::{
    brioschi_kii, brioschi_numerator, kii_closed, kii_coefficients, kii_coefficients_corrected, kii_n0_straight, kii_numerator_closed, BrioschiDenominator,
    KiiCoefficients, SinCoupled,
};
pub use second_mean::{hii_numerator, second_mean_curvature, w10_coefficient};
pub use trig::{fit_trig_polynomial, fit_trig_samples, FitConfig, TrigFit, TrigPolynomial};

/// Degeneracy thresholds. Configuration, never baked into a formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// EG − F² at or below this is a degenerate first form.
    pub deg: f64,
    /// |eg − f²| at or below this is a degenerate second form.
    pub ii: f64,
    /// |K| at or below this makes ln√|K| (and so H_II) undefined.
    pub k: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { deg: 1e-12, ii: 1e-9, k: 1e-9 }
    }
}

impl Tolerances {
    pub const PROFILES: [&'static str; 3] = ["default", "strict", "loose"];

    /// Named threshold sets: `default`, `strict` (100× tighter) and `loose`
    /// (100× wider).
    pub fn profile(name: &str) -> Option<Self> {
        let d = Tolerances::default();
        let k = match name {
            "default" => 1.0,
            "strict" => 1e-2,
            "loose" => 1e2,
            _ => return None,
        };
        Some(Tolerances { deg: d.deg * k, ii: d.ii * k, k: d.k * k })
    }

    /// `self` with every field present in `o` replaced.
    pub fn with(self, o: &ToleranceOverrides) -> Self {
        Tolerances { deg: o.deg.unwrap_or(self.deg), ii: o.ii.unwrap_or(self.ii), k: o.k.unwrap_or(self.k) }
    }
}

/// Partial [`Tolerances`], as found in a surface spec or on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ii: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

/// How derivatives of the fundamental forms are taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffConfig {
    pub stencil: StencilConfig,
    /// Differentiate in t exactly (the coefficients are trig quadratics in t)
    /// instead of by central differences. s-derivatives always use the
    /// stencil.
    pub exact_t: bool,
    pub denominator: BrioschiDenominator,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            stencil: StencilConfig { h: 1e-4, levels: 1 },
            exact_t: true,
            denominator: BrioschiDenominator::Squared,
        }
    }
}

impl DiffConfig {
    pub fn halved(&self) -> Self {
        DiffConfig { stencil: self.stencil.halved(), ..*self }
    }
}

/// Why a curvature has no value at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Undefined {
    /// EG − F² ≈ 0.
    DegenerateFirstForm,
    /// eg − f² ≈ 0.
    DegenerateSecondForm,
    /// K ≈ 0 somewhere on the stencil, so ln√|K| blows up.
    VanishingGauss,
}

impl Undefined {
    pub fn tag(self) -> &'static str {
        match self {
            Undefined::DegenerateFirstForm => "det I",
            Undefined::DegenerateSecondForm => "det II",
            Undefined::VanishingGauss => "K",
        }
    }
}

/// A curvature value, or the reason it does not exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurvatureValue {
    Defined(f64),
    Undefined(Undefined),
}

impl CurvatureValue {
    pub fn value(self) -> Option<f64> {
        match self {
            CurvatureValue::Defined(v) => Some(v),
            CurvatureValue::Undefined(_) => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, CurvatureValue::Defined(_))
    }
}

impl fmt::Display for CurvatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvatureValue::Defined(v) => write!(f, "{v:.16e}"),
            CurvatureValue::Undefined(u) => write!(f, "undef({})", u.tag()),
        }
    }
}

impl Serialize for CurvatureValue {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CurvatureValue::Defined(v) => ser.serialize_f64(*v),
            CurvatureValue::Undefined(u) => ser.serialize_str(&format!("undef({})", u.tag())),
        }
    }
}

/// All four curvatures at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub k: CurvatureValue,
    pub h: CurvatureValue,
    /// Closed-form K_II (structural zeros resolve to 0).
    pub k_ii: CurvatureValue,
    /// Brioschi K_II from finite differences of (e, f, g).
    pub k_ii_brioschi: CurvatureValue,
    pub h_ii: CurvatureValue,
}

/// Which curvatures to compute on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurvatureSet {
    pub k: bool,
    pub h: bool,
    pub k_ii: bool,
    pub h_ii: bool,
}

impl CurvatureSet {
    pub const ALL: CurvatureSet = CurvatureSet { k: true, h: true, k_ii: true, h_ii: true };
    pub const FIRST_ORDER: CurvatureSet = CurvatureSet { k: true, h: true, k_ii: false, h_ii: false };
}

/// K = (eg − f²)/(EG − F²).
pub fn gauss_curvature(forms: &FormCoefficients, tol: &Tolerances) -> Result<f64> {
    if !(forms.area2 > tol.deg) {
        return Err(Error::DegenerateFirstForm { s: f64::NAN, t: f64::NAN, area2: forms.area2 });
    }
    Ok(forms.det2 / forms.area2)
}

/// H = (Eg − 2Ff + Ge)/(2(EG − F²)).
pub fn mean_curvature(forms: &FormCoefficients, tol: &Tolerances) -> Result<f64> {
    if !(forms.area2 > tol.deg) {
        return Err(Error::DegenerateFirstForm { s: f64::NAN, t: f64::NAN, area2: forms.area2 });
    }
    Ok(mean_numerator(forms) / (2.0 * forms.area2))
}

/// Eg − 2Ff + Ge.
pub fn mean_numerator(forms: &FormCoefficients) -> f64 {
    forms.e_big * forms.g - 2.0 * forms.f_big * forms.f + forms.g_big * forms.e
}

/// The brace of the closed-form K:
/// κ²(R² + Q²)cos²t + κ(2Q′R − 2QR′ + Q)cos t − (RR″ + QQ″).
#[allow(non_snake_case)]
pub fn gauss_numerator_closed(m: &CanalSurface, s: f64, t: f64) -> Result<f64> {
    let l = m.local_checked(s, t)?;
    let RQJet { R, R1, R2, Q, Q1, Q2, .. } = l.rq;
    let k = l.frenet.kappa;
    let c = t.cos();
    Ok(k * k * (R * R + Q * Q) * c * c + k * (2.0 * Q1 * R - 2.0 * Q * R1 + Q) * c - (R * R2 + Q * Q2))
}

/// The brace of the closed-form H:
/// 2κ²(Q² + R²)cos²t + κ(4(Q′R − QR′) + 3Q)cos t + R′² + Q′² − 2R′ − RR″ − QQ″ + 1.
#[allow(non_snake_case)]
pub fn mean_numerator_closed(m: &CanalSurface, s: f64, t: f64) -> Result<f64> {
    let l = m.local_checked(s, t)?;
    let RQJet { R, R1, R2, Q, Q1, Q2, .. } = l.rq;
    let k = l.frenet.kappa;
    let c = t.cos();
    Ok(2.0 * k * k * (Q * Q + R * R) * c * c + k * (4.0 * (Q1 * R - Q * R1) + 3.0 * Q) * c + R1 * R1 + Q1 * Q1
        - 2.0 * R1
        - R * R2
        - Q * Q2
        + 1.0)
}

/// K = Q²/(r²(EG − F²)) · {…}.
pub fn gauss_curvature_closed(m: &CanalSurface, s: f64, t: f64, tol: &Tolerances) -> Result<f64> {
    let l = m.local_checked(s, t)?;
    let area2 = l.area_element(t);
    if !(area2 > tol.deg) {
        return Err(Error::DegenerateFirstForm { s, t, area2 });
    }
    let q = l.rq.Q;
    let r = l.radius.r;
    Ok(q * q / (r * r * area2) * gauss_numerator_closed(m, s, t)?)
}

/// H = −Q²/(2r(EG − F²)) · {…}.
pub fn mean_curvature_closed(m: &CanalSurface, s: f64, t: f64, tol: &Tolerances) -> Result<f64> {
    let l = m.local_checked(s, t)?;
    let area2 = l.area_element(t);
    if !(area2 > tol.deg) {
        return Err(Error::DegenerateFirstForm { s, t, area2 });
    }
    let q = l.rq.Q;
    let r = l.radius.r;
    Ok(-q * q / (2.0 * r * area2) * mean_numerator_closed(m, s, t)?)
}

fn defined_or_first_form(v: Result<f64>) -> Result<CurvatureValue> {
    match v {
        Ok(x) => Ok(CurvatureValue::Defined(x)),
        Err(Error::DegenerateFirstForm { .. }) => Ok(CurvatureValue::Undefined(Undefined::DegenerateFirstForm)),
        Err(e) => Err(e),
    }
}

/// Evaluates the selected curvatures at `(s, t)`. Entries not in `which` are
/// left as `Undefined(DegenerateFirstForm)` and should be ignored.
pub fn evaluate(
    m: &CanalSurface,
    s: f64,
    t: f64,
    which: CurvatureSet,
    cfg: &DiffConfig,
    tol: &Tolerances,
) -> Result<CurvatureSample> {
    let skip = CurvatureValue::Undefined(Undefined::DegenerateFirstForm);
    let forms = m.forms(s, t)?;
    let k = if which.k { defined_or_first_form(gauss_curvature(&forms, tol))? } else { skip };
    let h = if which.h { defined_or_first_form(mean_curvature(&forms, tol))? } else { skip };
    let (k_ii, k_ii_brioschi) = if which.k_ii {
        (kii_closed(m, s, t, tol)?, brioschi_kii(m, s, t, cfg, tol)?)
    } else {
        (skip, skip)
    };
    let h_ii = if which.h_ii { second_mean_curvature(m, s, t, cfg, tol)? } else { skip };
    Ok(CurvatureSample { k, h, k_ii, k_ii_brioschi, h_ii })
}

/// All four curvatures at `(s, t)` with default settings.
pub fn sample(m: &CanalSurface, s: f64, t: f64) -> Result<CurvatureSample> {
    let cfg = DiffConfig::default();
    let tol = Tolerances::default();
    evaluate(m, s, t, CurvatureSet::ALL, &cfg, &tol)
}
