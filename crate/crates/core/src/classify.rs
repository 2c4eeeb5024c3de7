//! Degeneracy, regularity and the flat / minimal / II-flat / II-minimal
//! classification.
//!
//! Every vanishing condition first forces κ ≡ 0, after which it reduces to an
//! ODE in the radius. Verdicts combine that ODE residual with grid maxima of
//! the curvature itself.

use serde::Serialize;

use crate::canal::{t_samples, CanalSurface};
use crate::curvature::{brioschi_numerator, gauss_curvature, mean_curvature, DiffConfig, Tolerances};
use crate::geometry::{CurveFamily, RadiusFamily, RadiusJet};

/// r″(r r″ + r′² − 1); vanishes exactly on flat canal surfaces with κ = 0.
pub fn flatness_residual(j: &RadiusJet) -> f64 {
    j.r2 * (j.r * j.r2 + j.r1 * j.r1 - 1.0)
}

/// (r r″ + r′² − 1)(2r r″ + r′² − 1).
pub fn minimal_residual(j: &RadiusJet) -> f64 {
    let r1sq = j.r1 * j.r1;
    (j.r * j.r2 + r1sq - 1.0) * (2.0 * j.r * j.r2 + r1sq - 1.0)
}

/// −r r′ r‴ (r′ − 1)² + r″{4r³r″³ + 6r²r″²(r′² − 1) + 2r r″(1 − 3r′ + 2r′⁴) + r′²(2r′² − r′³ − 1)}.
pub fn iiflat_residual(j: &RadiusJet) -> f64 {
    let RadiusJet { r, r1, r2, r3, .. } = *j;
    let p = r1 - 1.0;
    -r * r1 * r3 * p * p
        + r2 * (4.0 * r.powi(3) * r2.powi(3)
            + 6.0 * r * r * r2 * r2 * (r1 * r1 - 1.0)
            + 2.0 * r * r2 * (1.0 - 3.0 * r1 + 2.0 * r1.powi(4))
            + r1 * r1 * (2.0 * r1 * r1 - r1.powi(3) - 1.0))
}

/// The two factors of w₀ on a κ = 0 surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IiMinimalResidual {
    /// r⁷ (r r″ + r′² − 1)⁴
    pub factor: f64,
    pub w: f64,
}

impl IiMinimalResidual {
    pub fn product(&self) -> f64 {
        self.factor * self.w
    }
}

pub fn iiminimal_residual(j: &RadiusJet) -> IiMinimalResidual {
    let RadiusJet { r, r1, r2, r3, r4 } = *j;
    let a = r * r2 + r1 * r1 - 1.0;
    let pm = (r1 - 1.0) * (r1 + 1.0);
    let w1 = r * pm * pm * (2.0 * r * r2 * a * r4 - 3.0 * r * (2.0 * r * r2 + r1 * r1 - 1.0) * r3 * r3 - 2.0 * r2.powi(3));
    let w2 = r1
        * r2
        * pm
        * (2.0 * r * (8.0 * r * r * r2 * r2 - 2.0 * r1 * r1 + r1.powi(4) + 1.0) * r3 + r1 * r2 * pm * pm);
    let w3 = r * r
        * r2.powi(4)
        * (8.0 * r * r * r2 * r2 - 4.0 * r * r2 * (3.0 + r1 * r1) - 20.0 * r1 * r1 + 14.0 * r1.powi(4) + 6.0);
    IiMinimalResidual { factor: r.powi(7) * a.powi(4), w: w1 + w2 + w3 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The surface is degenerate, so the property is not defined.
    NotApplicable,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Holds => "✓",
            Verdict::Fails => "✗",
            Verdict::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyLabel {
    Cylinder,
    Cone,
    SphereFamily,
    Tube,
    SurfaceOfRevolution,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyConfig {
    pub ns: usize,
    pub nt: usize,
    /// s-samples for the radius ODE residuals.
    pub ode_samples: usize,
    /// max |κ| at or below this counts as a straight center line.
    pub kappa_tol: f64,
    /// ODE residuals at or below this count as zero.
    pub residual_tol: f64,
    /// Tolerance for matching custom radii against the built-in families.
    pub family_tol: f64,
    pub tolerances: Tolerances,
    pub diff: DiffConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            ns: 20,
            nt: 20,
            ode_samples: 50,
            kappa_tol: 1e-10,
            residual_tol: 1e-10,
            family_tol: 1e-8,
            tolerances: Tolerances::default(),
            diff: DiffConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyReport {
    /// EG − F² vanishes (or Q is undefined) somewhere on the grid.
    pub first_form_degenerate: bool,
    pub first_form_witness: Option<f64>,
    /// eg − f² vanishes on the whole grid.
    pub second_form_degenerate: bool,
    pub second_form_witness: Option<f64>,
    pub min_area2: f64,
    pub max_abs_det2: f64,
}

/// Scans an ns × nt grid. Isolated zeros of eg − f² (parabolic lines of a
/// torus, say) do not count; the second form is degenerate when it vanishes
/// everywhere sampled.
pub fn degeneracy_check(m: &CanalSurface, cfg: &ClassifyConfig) -> DegeneracyReport {
    let tol = &cfg.tolerances;
    let mut rep = DegeneracyReport {
        first_form_degenerate: false,
        first_form_witness: None,
        second_form_degenerate: false,
        second_form_witness: None,
        min_area2: f64::INFINITY,
        max_abs_det2: 0.0,
    };
    let ts = t_samples(cfg.nt);
    let mut first_s = None;
    for s in m.domain.samples(cfg.ns) {
        first_s.get_or_insert(s);
        let local = match m.local(s) {
            Ok(l) => l,
            Err(_) => {
                rep.first_form_degenerate = true;
                rep.first_form_witness.get_or_insert(s);
                rep.second_form_degenerate = true;
                rep.second_form_witness.get_or_insert(s);
                rep.min_area2 = 0.0;
                continue;
            }
        };
        for &t in &ts {
            let f = local.forms(t);
            rep.min_area2 = rep.min_area2.min(f.area2);
            rep.max_abs_det2 = rep.max_abs_det2.max(f.det2.abs());
            if !(f.area2 > tol.deg) {
                rep.first_form_degenerate = true;
                rep.first_form_witness.get_or_insert(s);
            }
        }
    }
    if !(rep.max_abs_det2 > tol.ii) {
        rep.second_form_degenerate = true;
        rep.second_form_witness = rep.second_form_witness.or(first_s);
    }
    rep
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub regular: bool,
    pub diagnosis: String,
}

/// Regular unless Q vanishes, the first form degenerates on the grid, or the
/// center is straight and the radius is ±s + c or √(s² − 2c₁s + 2c₂).
pub fn regularity_check(m: &CanalSurface, cfg: &ClassifyConfig) -> RegularityReport {
    let deg = degeneracy_check(m, cfg);
    let straight = max_abs_kappa(m, cfg.ode_samples) <= cfg.kappa_tol;
    let shape = radius_shape(m, cfg);
    let diagnosis = if straight && shape == RadiusShape::UnitSlope {
        "radius is ±s + c: Q vanishes".to_string()
    } else if straight && shape == RadiusShape::SphereFamily {
        "straight center with r = √(s² − 2c₁s + 2c₂): the spheres share one circle".to_string()
    } else if let Some(s) = deg.first_form_witness {
        format!("first fundamental form degenerates at s = {s}")
    } else {
        return RegularityReport { regular: true, diagnosis: "regular".into() };
    };
    RegularityReport { regular: false, diagnosis }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RadiusShape {
    Constant,
    /// r′ constant with |r′| < 1
    Linear,
    /// |r′| = 1
    UnitSlope,
    SphereFamily,
    Other,
}

fn radius_shape(m: &CanalSurface, cfg: &ClassifyConfig) -> RadiusShape {
    match &m.radius {
        RadiusFamily::Constant { .. } => return RadiusShape::Constant,
        RadiusFamily::Linear { c1, .. } if *c1 == 0.0 => return RadiusShape::Constant,
        RadiusFamily::Linear { c1, .. } if c1.abs() == 1.0 => return RadiusShape::UnitSlope,
        RadiusFamily::Linear { .. } => return RadiusShape::Linear,
        RadiusFamily::SqrtQuadratic { .. } => return RadiusShape::SphereFamily,
        RadiusFamily::Sinusoidal { q, omega, .. } if *q == 0.0 || *omega == 0.0 => return RadiusShape::Constant,
        RadiusFamily::Sinusoidal { .. } => return RadiusShape::Other,
        RadiusFamily::Custom(_) => {}
    }
    let jets: Vec<RadiusJet> = m.domain.samples(cfg.ode_samples).into_iter().filter_map(|s| m.radius.eval(s).ok()).collect();
    if jets.is_empty() {
        return RadiusShape::Other;
    }
    let max = |f: &dyn Fn(&RadiusJet) -> f64| jets.iter().map(|j| f(j).abs()).fold(0.0, f64::max);
    let tol = cfg.family_tol;
    if max(&|j| j.r1) <= tol {
        RadiusShape::Constant
    } else if max(&|j| j.r2) <= tol {
        if max(&|j| j.r1.abs() - 1.0) <= tol {
            RadiusShape::UnitSlope
        } else {
            RadiusShape::Linear
        }
    } else if max(&|j| j.r * j.r2 + j.r1 * j.r1 - 1.0) <= tol {
        RadiusShape::SphereFamily
    } else {
        RadiusShape::Other
    }
}

fn max_abs_kappa(m: &CanalSurface, n: usize) -> f64 {
    match m.curve.family {
        CurveFamily::Line => 0.0,
        _ => m
            .domain
            .samples(n)
            .into_iter()
            .map(|s| m.curve.frenet_unbounded(s).kappa.abs())
            .fold(0.0, f64::max),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ResidualMaxima {
    pub flatness: f64,
    pub minimal: f64,
    pub ii_flat: f64,
    pub ii_minimal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub degeneracy: DegeneracyReport,
    pub regular: bool,
    pub regularity: String,
    pub flat: Verdict,
    pub minimal: Verdict,
    pub ii_flat: Verdict,
    pub ii_minimal: Verdict,
    /// Most specific label.
    pub family: FamilyLabel,
    /// Every label that applies, most specific first.
    pub labels: Vec<FamilyLabel>,
    pub max_abs_kappa: f64,
    pub max_abs_k: f64,
    pub max_abs_h: f64,
    /// max |K_II (eg − f²)²| over the grid, from the Brioschi determinants.
    pub max_abs_kii_numerator: f64,
    pub residuals: ResidualMaxima,
}

fn labels_for(straight: bool, shape: RadiusShape) -> Vec<FamilyLabel> {
    use FamilyLabel::*;
    match (straight, shape) {
        (true, RadiusShape::Constant) => vec![Cylinder, Tube, SurfaceOfRevolution],
        (true, RadiusShape::Linear) | (true, RadiusShape::UnitSlope) => vec![Cone, SurfaceOfRevolution],
        (true, RadiusShape::SphereFamily) => vec![SphereFamily, SurfaceOfRevolution],
        (true, RadiusShape::Other) => vec![SurfaceOfRevolution],
        (false, RadiusShape::Constant) => vec![Tube],
        (false, _) => vec![General],
    }
}

/// Classifies `m`; report-valued, never fails.
pub fn classify(m: &CanalSurface, cfg: &ClassifyConfig) -> ClassificationReport {
    let tol = &cfg.tolerances;
    let degeneracy = degeneracy_check(m, cfg);
    let regularity = regularity_check(m, cfg);
    let kappa = max_abs_kappa(m, cfg.ode_samples);
    let straight = kappa <= cfg.kappa_tol;
    let shape = radius_shape(m, cfg);
    let labels = labels_for(straight, shape);

    let mut residuals = ResidualMaxima::default();
    for s in m.domain.samples(cfg.ode_samples) {
        let Ok(j) = m.radius.eval(s) else { continue };
        residuals.flatness = residuals.flatness.max(flatness_residual(&j).abs());
        residuals.minimal = residuals.minimal.max(minimal_residual(&j).abs());
        residuals.ii_flat = residuals.ii_flat.max(iiflat_residual(&j).abs());
        residuals.ii_minimal = residuals.ii_minimal.max(iiminimal_residual(&j).product().abs());
    }

    let (mut max_k, mut max_h, mut max_kii) = (0.0f64, 0.0f64, 0.0f64);
    let ts = t_samples(cfg.nt);
    for s in m.domain.samples(cfg.ns) {
        let Ok(local) = m.local(s) else { continue };
        for &t in &ts {
            let f = local.forms(t);
            if let (Ok(k), Ok(h)) = (gauss_curvature(&f, tol), mean_curvature(&f, tol)) {
                max_k = max_k.max(k.abs());
                max_h = max_h.max(h.abs());
            }
            if let Ok(n) = brioschi_numerator(m, s, t, &cfg.diff) {
                max_kii = max_kii.max(n.abs());
            }
        }
    }

    let (flat, minimal, ii_flat, ii_minimal) = if degeneracy.first_form_degenerate {
        (Verdict::NotApplicable, Verdict::NotApplicable, Verdict::NotApplicable, Verdict::NotApplicable)
    } else if !straight {
        (Verdict::Fails, Verdict::Fails, Verdict::Fails, Verdict::Fails)
    } else {
        let rt = cfg.residual_tol;
        (
            Verdict::from_bool(residuals.flatness <= rt && max_k < tol.k),
            Verdict::from_bool(residuals.minimal <= rt && max_h < tol.k),
            // the printed solution set of the II-flat ODE is r = c (r = ±s + c
            // is excluded as degenerate); the ODE alone also admits every
            // linear radius
            Verdict::from_bool(residuals.ii_flat <= rt && shape == RadiusShape::Constant),
            Verdict::from_bool(residuals.ii_minimal <= rt),
        )
    };

    ClassificationReport {
        degeneracy,
        regular: regularity.regular,
        regularity: regularity.diagnosis,
        flat,
        minimal,
        ii_flat,
        ii_minimal,
        family: labels[0],
        labels,
        max_abs_kappa: kappa,
        max_abs_k: max_k,
        max_abs_h: max_h,
        max_abs_kii_numerator: max_kii,
        residuals,
    }
}
