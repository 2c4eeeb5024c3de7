//! Self-checks behind `canal verify`.
//!
//! [`verify_builtin`] runs every invariant on the reference surfaces and
//! [`verify_surface`] runs the subset that applies to a single surface. A
//! non-gating check documents a known disagreement with the printed closed
//! forms; it is reported but never fails the run.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canal::{t_samples, CanalSurface, ParamDomain};
use crate::classify::{
    classify, degeneracy_check, flatness_residual, iiflat_residual, iiminimal_residual, minimal_residual,
    ClassifyConfig, FamilyLabel, Verdict,
};
use crate::curvature::{
    brioschi_kii, brioschi_numerator, evaluate, fit_trig_polynomial, gauss_curvature, gauss_curvature_closed,
    hii_numerator, kii_closed, kii_coefficients, kii_coefficients_corrected, kii_n0_straight, mean_curvature,
    mean_curvature_closed, mean_numerator, mean_numerator_closed, second_mean_curvature, w10_coefficient,
    CurvatureSet, DiffConfig, FitConfig, Tolerances,
};
use crate::diff;
use crate::error::{Error, Result};
use crate::export::{parse_csv, render_csv, render_obj, sample_grid, NumberFormat, ObjOptions};
use crate::geometry::{check_jet_consistency, validate_unit_speed, CenterCurve, QSign, RadiusFamily, RadiusJet};
use crate::oracle::{oracle_canal, oracle_curvatures, OracleConfig};
use crate::spec::builtin;
use crate::Vec3;

/// The five non-degenerate reference surfaces.
pub const SUITE: [&str; 5] = ["cylinder", "cone", "torus", "helix-tube", "variable-tube"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// Passes when worst ≤ tolerance.
    AtMost,
    /// Passes when worst > tolerance.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub surface: String,
    pub relation: Relation,
    pub tolerance: f64,
    pub worst: f64,
    pub passed: bool,
    /// A failing non-gating check does not fail the run.
    pub gating: bool,
    pub note: Option<String>,
}

impl Check {
    fn known(&mut self, note: &str) -> &mut Self {
        self.gating = false;
        self.note = Some(note.to_string());
        self
    }

    fn note(&mut self, note: &str) -> &mut Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn status(&self) -> &'static str {
        match (self.passed, self.gating) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "known",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    /// True when every gating check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.gating)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && c.gating)
    }

    pub fn known_deviations(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && !c.gating)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<10} {:<56} {:<16} {:>11} {:>13}  status", "group", "check", "surface", "worst", "tolerance");
        for c in &self.checks {
            let rel = match c.relation {
                Relation::AtMost => "<=",
                Relation::Above => "> ",
            };
            let _ = writeln!(
                out,
                "{:<10} {:<56} {:<16} {:>11.3e} {} {:<9.1e}  {}",
                c.group,
                c.name,
                c.surface,
                c.worst,
                rel,
                c.tolerance,
                c.status()
            );
            if let Some(n) = &c.note {
                let _ = writeln!(out, "{:<10}   note: {n}", "");
            }
        }
        let _ = writeln!(
            out,
            "{} checks, {} failed, {} known deviations",
            self.checks.len(),
            self.failures().count(),
            self.known_deviations().count()
        );
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub ns: usize,
    pub nt: usize,
    /// Number of randomized κ > 0 surfaces for the nonexistence checks.
    pub random_surfaces: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub diff: DiffConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            ns: 20,
            nt: 20,
            random_surfaces: 20,
            seed: 20_240_611,
            tolerances: Tolerances::default(),
            diff: DiffConfig::default(),
        }
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn record(
        &mut self,
        group: &'static str,
        name: impl Into<String>,
        surface: &str,
        relation: Relation,
        tolerance: f64,
        worst: Result<f64>,
    ) -> &mut Check {
        let (worst, note) = match worst {
            Ok(w) => (w, None),
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        let passed = match relation {
            Relation::AtMost => worst <= tolerance,
            Relation::Above => worst > tolerance,
        };
        self.checks.push(Check {
            group,
            name: name.into(),
            surface: surface.to_string(),
            relation,
            tolerance,
            worst,
            passed,
            gating: true,
            note,
        });
        self.checks.last_mut().expect("just pushed")
    }

    fn at_most(
        &mut self,
        group: &'static str,
        name: impl Into<String>,
        surface: &str,
        tolerance: f64,
        worst: Result<f64>,
    ) -> &mut Check {
        self.record(group, name, surface, Relation::AtMost, tolerance, worst)
    }

    fn above(
        &mut self,
        group: &'static str,
        name: impl Into<String>,
        surface: &str,
        tolerance: f64,
        worst: Result<f64>,
    ) -> &mut Check {
        self.record(group, name, surface, Relation::Above, tolerance, worst)
    }
}

/// Maximum that lets NaN through, so a NaN residual fails its check.
fn worse(a: f64, b: f64) -> f64 {
    if b.is_nan() || b > a {
        b
    } else {
        a
    }
}

/// Relative error where the magnitude exceeds `near`, absolute error below.
#[derive(Debug, Clone, Copy, Default)]
struct Split {
    rel: f64,
    abs: f64,
}

impl Split {
    fn add(&mut self, a: f64, b: f64, near: f64) {
        let mag = a.abs().max(b.abs());
        let d = (a - b).abs();
        if mag > near {
            self.rel = worse(self.rel, d / mag);
        } else {
            self.abs = worse(self.abs, d);
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let mag = a.abs().max(b.abs());
    if mag == 0.0 {
        0.0
    } else {
        (a - b).abs() / mag
    }
}

fn grid(m: &CanalSurface, ns: usize, nt: usize) -> Vec<(f64, f64)> {
    let ts = t_samples(nt);
    m.domain.samples(ns).into_iter().flat_map(|s| ts.iter().map(move |&t| (s, t))).collect()
}

fn builtin_surface(name: &str) -> Result<CanalSurface> {
    builtin(name).ok_or_else(|| Error::Spec(format!("unknown builtin `{name}`")))?.build()
}

fn random_s(rng: &mut ChaCha8Rng, d: &ParamDomain, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(d.s_min..=d.s_max)).collect()
}

// ---------------------------------------------------------------- geometry

fn frame_error(curve: &CenterCurve, ss: &[f64]) -> Result<f64> {
    let mut w = 0.0;
    for &s in ss {
        let f = curve.eval(s)?;
        let errs = [
            f.t.norm() - 1.0,
            f.n.norm() - 1.0,
            f.b.norm() - 1.0,
            f.t.dot(&f.n),
            f.t.dot(&f.b),
            f.n.dot(&f.b),
            (f.b - f.t.cross(&f.n)).norm(),
        ];
        w = errs.iter().fold(w, |a, e| worse(a, e.abs()));
    }
    Ok(w)
}

/// κ and τ from finite differences of the position alone.
fn frenet_fd(curve: &CenterCurve, s: f64) -> (f64, f64) {
    let pos = |x: f64| -> std::result::Result<Vec3, ()> { Ok(curve.position_unbounded(x)) };
    let h = 1e-2;
    let d1 = diff::first4(pos, s, h, 1).expect("infallible");
    let d2 = diff::second4(pos, s, h, 1).expect("infallible");
    let d3 = diff::first4(|x| diff::second4(pos, x, h, 1), s, h, 1).expect("infallible");
    let c = d1.cross(&d2);
    let kappa = c.norm() / d1.norm().powi(3);
    let tau = if c.norm() > 1e-12 { c.dot(&d3) / c.norm_squared() } else { 0.0 };
    (kappa, tau)
}

fn frenet_fd_error(curve: &CenterCurve, ss: &[f64]) -> Result<f64> {
    let mut w = 0.0;
    for &s in ss {
        let f = curve.eval(s)?;
        let (k, t) = frenet_fd(curve, s);
        w = worse(w, (k - f.kappa).abs());
        w = worse(w, (t - f.tau).abs());
    }
    Ok(w)
}

fn jet_error(radius: &RadiusFamily, ss: &[f64]) -> Result<f64> {
    let mut w = 0.0;
    for &s in ss {
        w = worse(w, check_jet_consistency(radius, s, 1e-3)?.max_rel_error);
    }
    Ok(w)
}

fn rq_error(m: &CanalSurface, ss: &[f64]) -> Result<f64> {
    let mut w = 0.0;
    for &s in ss {
        let l = m.local(s)?;
        let r2 = l.radius.r * l.radius.r;
        w = worse(w, (l.rq.R * l.rq.R + l.rq.Q * l.rq.Q - r2).abs() / r2);
    }
    Ok(w)
}

fn geometry_checks(rec: &mut Recorder, name: &str, m: &CanalSurface, rng: &mut ChaCha8Rng) {
    let ss = random_s(rng, &m.domain, 100);
    rec.at_most("geometry", "frame orthonormal, B = T x N", name, 1e-12, frame_error(&m.curve, &ss));
    rec.at_most("geometry", "unit speed", name, 1e-8, Ok(validate_unit_speed(&m.curve, 100, 1e-8).worst_deviation));
    rec.at_most("geometry", "radius jet vs 5-point differences", name, 1e-5, jet_error(&m.radius, &ss));
    rec.at_most("geometry", "R^2 + Q^2 = r^2 (relative)", name, 1e-10, rq_error(m, &ss));
    if !m.curve.is_line() {
        let few: Vec<f64> = ss.iter().copied().take(20).collect();
        rec.at_most("geometry", "kappa, tau vs difference Frenet", name, 1e-6, frenet_fd_error(&m.curve, &few));
    }
}

// ---------------------------------------------------------------- canal

#[derive(Debug, Default)]
struct FormErrors {
    first: f64,
    second: f64,
    area: f64,
    exact: f64,
    normal: f64,
}

fn form_errors(m: &CanalSurface, pts: &[(f64, f64)]) -> Result<FormErrors> {
    let mut w = FormErrors::default();
    for &(s, t) in pts {
        let p = m.partials(s, t)?;
        let n = m.normal(s, t)?;
        let f = m.forms(s, t)?;
        let l = m.local(s)?;
        let first = [p.c_s.dot(&p.c_s), p.c_s.dot(&p.c_t), p.c_t.dot(&p.c_t)];
        let closed1 = [f.e_big, f.f_big, f.g_big];
        let second = [p.c_ss.dot(&n), p.c_st.dot(&n), p.c_tt.dot(&n)];
        let closed2 = [f.e, f.f, f.g];
        let scale1 = closed1.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let scale2 = closed2.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        for i in 0..3 {
            w.first = worse(w.first, (first[i] - closed1[i]).abs() / scale1);
            w.second = worse(w.second, (second[i] - closed2[i]).abs() / scale2);
        }
        let k2 = m.area_element(s, t)?;
        w.area = worse(w.area, (k2 - f.area2).abs() / (f.e_big * f.g_big));
        let (q, r) = (l.rq.Q, l.radius.r);
        w.exact = worse(w.exact, rel(f.g_big, q * q));
        w.exact = worse(w.exact, rel(f.g, -q * q / r));
        w.normal = worse(w.normal, (n.norm() - 1.0).abs());
        w.normal = worse(w.normal, n.dot(&p.c_s).abs() / p.c_s.norm());
        w.normal = worse(w.normal, n.dot(&p.c_t).abs() / p.c_t.norm());
    }
    Ok(w)
}

fn canal_checks(rec: &mut Recorder, name: &str, m: &CanalSurface, pts: &[(f64, f64)]) {
    let (e1, e2, e3, e4, e5) = match form_errors(m, pts) {
        Ok(w) => (Ok(w.first), Ok(w.second), Ok(w.area), Ok(w.exact), Ok(w.normal)),
        Err(e) => (Err(e.clone()), Err(e.clone()), Err(e.clone()), Err(e.clone()), Err(e)),
    };
    rec.at_most("canal", "E, F, G vs partial dot products", name, 1e-10, e1);
    rec.at_most("canal", "e, f, g vs partials against normal", name, 1e-10, e2);
    rec.at_most("canal", "factored EG - F^2 vs E G - F^2", name, 1e-12, e3);
    rec.at_most("canal", "G = Q^2, g = -Q^2/r", name, 1e-15, e4);
    rec.at_most("canal", "normal unit and orthogonal", name, 1e-10, e5);
}

// ---------------------------------------------------------------- curvature

#[derive(Debug, Default)]
struct Equivalence {
    k_closed: Split,
    h_closed: Split,
    k_oracle: Split,
    h_oracle: Split,
}

const NEAR_ZERO: f64 = 1e-6;

fn equivalence(m: &CanalSurface, pts: &[(f64, f64)], tol: &Tolerances) -> Result<Equivalence> {
    let mut w = Equivalence::default();
    let ocfg = OracleConfig::default();
    for &(s, t) in pts {
        let f = m.forms(s, t)?;
        let k = gauss_curvature(&f, tol)?;
        let h = mean_curvature(&f, tol)?;
        w.k_closed.add(k, gauss_curvature_closed(m, s, t, tol)?, NEAR_ZERO);
        w.h_closed.add(h, mean_curvature_closed(m, s, t, tol)?, NEAR_ZERO);
        let o = oracle_canal(m, s, t, &ocfg)?;
        w.k_oracle.add(k, o.k, NEAR_ZERO);
        w.h_oracle.add(h, o.h, NEAR_ZERO);
    }
    Ok(w)
}

fn oracle_sign_and_halving(m: &CanalSurface, pts: &[(f64, f64)]) -> Result<(f64, Split)> {
    let cfg = OracleConfig::default();
    let mut sign = 0.0;
    let mut halving = Split::default();
    for &(s, t) in pts {
        let p = |x: f64, y: f64| m.point_unbounded(x, y);
        let a = oracle_curvatures(p, s, t, &cfg)?;
        // swapping the parameters reverses C_s × C_t
        let b = oracle_curvatures(|y: f64, x: f64| p(x, y), t, s, &cfg)?;
        sign = worse(sign, (a.k - b.k).abs());
        sign = worse(sign, (a.h + b.h).abs());
        let c = oracle_canal(m, s, t, &cfg.halved())?;
        let d = oracle_canal(m, s, t, &cfg)?;
        halving.add(c.k, d.k, NEAR_ZERO);
        halving.add(c.h, d.h, NEAR_ZERO);
    }
    Ok((sign, halving))
}

fn curvature_checks(rec: &mut Recorder, name: &str, m: &CanalSurface, pts: &[(f64, f64)], tol: &Tolerances) {
    match equivalence(m, pts, tol) {
        Ok(w) => {
            rec.at_most("curvature", "K forms vs factored closed form (rel)", name, 1e-10, Ok(w.k_closed.rel));
            rec.at_most("curvature", "K forms vs factored closed form (abs, |K|<=1e-6)", name, 1e-12, Ok(w.k_closed.abs));
            rec.at_most("curvature", "H forms vs factored closed form (rel)", name, 1e-10, Ok(w.h_closed.rel));
            rec.at_most("curvature", "H forms vs factored closed form (abs, |H|<=1e-6)", name, 1e-12, Ok(w.h_closed.abs));
            rec.at_most("oracle", "K vs difference oracle (rel)", name, 1e-5, Ok(w.k_oracle.rel));
            rec.at_most("oracle", "K vs difference oracle (abs, |K|<=1e-6)", name, 1e-8, Ok(w.k_oracle.abs));
            rec.at_most("oracle", "H vs difference oracle (rel)", name, 1e-5, Ok(w.h_oracle.rel));
            rec.at_most("oracle", "H vs difference oracle (abs, |H|<=1e-6)", name, 1e-8, Ok(w.h_oracle.abs));
        }
        Err(e) => {
            rec.at_most("curvature", "K, H equivalence", name, 1e-10, Err(e));
        }
    }
    let coarse: Vec<(f64, f64)> = pts.iter().copied().step_by(17).collect();
    match oracle_sign_and_halving(m, &coarse) {
        Ok((sign, halving)) => {
            rec.at_most("oracle", "normal flip: K invariant, H negated", name, 1e-9, Ok(sign));
            rec.at_most("oracle", "step halving (rel)", name, 1e-6, Ok(halving.rel));
            rec.at_most("oracle", "step halving (abs, near zero)", name, 1e-8, Ok(halving.abs));
        }
        Err(e) => {
            rec.at_most("oracle", "normal flip and step halving", name, 1e-9, Err(e));
        }
    }
}

/// Largest 16κ²Q′RR′r², the amount by which the printed and recomputed n₂
/// differ, relative to the largest coefficient.
fn n2_correction(m: &CanalSurface, ss: &[f64]) -> Result<f64> {
    let mut w = 0.0;
    for &s in ss {
        let a = kii_coefficients(m, s)?;
        let b = kii_coefficients_corrected(m, s)?;
        let scale = a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE);
        w = worse(w, (a.n[2].a - b.n[2].a).abs() / scale);
    }
    Ok(w)
}

#[derive(Debug, Default)]
struct KiiErrors {
    printed: f64,
    corrected: f64,
    points: usize,
}

fn kii_errors(m: &CanalSurface, pts: &[(f64, f64)], cfg: &DiffConfig, tol: &Tolerances) -> Result<KiiErrors> {
    let mut w = KiiErrors::default();
    for &(s, t) in pts {
        let f = m.forms(s, t)?;
        if !(f.det2.abs() > 1e-6) {
            continue;
        }
        let (Some(b), Some(c)) = (brioschi_kii(m, s, t, cfg, tol)?.value(), kii_closed(m, s, t, tol)?.value()) else {
            continue;
        };
        let l = m.local(s)?;
        let (q, r) = (l.rq.Q, l.radius.r);
        let corrected = q.powi(3) / (4.0 * r.powi(5)) * kii_coefficients_corrected(m, s)?.eval(t) / (f.det2 * f.det2);
        w.printed = worse(w.printed, rel(b, c));
        w.corrected = worse(w.corrected, rel(b, corrected));
        w.points += 1;
    }
    Ok(w)
}

fn kii_checks(rec: &mut Recorder, name: &str, m: &CanalSurface, pts: &[(f64, f64)], cfg: &DiffConfig, tol: &Tolerances) {
    let ss = m.domain.samples(20);
    let correction = n2_correction(m, &ss);
    let affected = matches!(correction, Ok(c) if c > 1e-12);
    match kii_errors(m, pts, cfg, tol) {
        Ok(w) if w.points == 0 => {
            rec.at_most("k_ii", "Brioschi vs closed form (no point with |eg-f^2| > 1e-6)", name, 1e-5, Ok(0.0));
        }
        Ok(w) => {
            let c = rec.at_most("k_ii", "Brioschi vs printed closed form", name, 1e-5, Ok(w.printed));
            if affected {
                c.known(
                    "printed n2 carries -8Q'RR'kappa r^2 where the Brioschi determinant gives +8Q'RR'kappa r^2; \
                     the term vanishes on tubes (R = 0)",
                );
            }
            rec.at_most("k_ii", "Brioschi vs closed form with corrected n2", name, 1e-5, Ok(w.corrected));
        }
        Err(e) => {
            rec.at_most("k_ii", "Brioschi vs closed form", name, 1e-5, Err(e));
        }
    }
}

/// Fits `f` at degree `bound + 2`; the result is the larger of the
/// normalized excess above `bound` and the relative fit residual.
fn degree_excess<F: Fn(f64) -> Result<f64>>(f: F, bound: usize) -> Result<f64> {
    let fit = fit_trig_polynomial(f, bound + 2, FitConfig::default())?;
    Ok(fit.normalized().excess_above(bound).max(fit.relative_residual()))
}

fn kii_brace(m: &CanalSurface, s: f64, t: f64, cfg: &DiffConfig) -> Result<f64> {
    let l = m.local(s)?;
    let (q, r) = (l.rq.Q, l.radius.r);
    Ok(brioschi_numerator(m, s, t, cfg)? * 4.0 * r.powi(5) / q.powi(3))
}

fn degree_checks(rec: &mut Recorder, name: &str, m: &CanalSurface, cfg: &DiffConfig) {
    let ss = m.domain.samples(5);
    let inner = &ss[1..4];
    let run = |bound: usize, f: &dyn Fn(f64, f64) -> Result<f64>| -> Result<f64> {
        let mut w = 0.0;
        for &s in inner {
            w = worse(w, degree_excess(|t| f(s, t), bound)?);
        }
        Ok(w)
    };
    let k_brace = |s: f64, t: f64| -> Result<f64> {
        let l = m.local(s)?;
        let f = l.forms(t);
        Ok(f.det2 * l.radius.r * l.radius.r / (l.rq.Q * l.rq.Q))
    };
    let h_brace = |s: f64, t: f64| -> Result<f64> {
        let l = m.local(s)?;
        Ok(-l.radius.r * mean_numerator(&l.forms(t)) / (l.rq.Q * l.rq.Q))
    };
    rec.at_most("degree", "K numerator degree <= 2", name, 1e-8, run(2, &k_brace));
    rec.at_most("degree", "H numerator degree <= 2", name, 1e-8, run(2, &h_brace));
    rec.at_most("degree", "K_II numerator degree <= 4", name, 1e-8, run(4, &|s, t| kii_brace(m, s, t, cfg)));
}

fn straight_kii_checks(rec: &mut Recorder, name: &str, m: &CanalSurface, cfg: &DiffConfig) {
    let run = || -> Result<(f64, f64)> {
        let (mut excess, mut n0_err) = (0.0, 0.0);
        for s in m.domain.samples(5).into_iter().skip(1).take(3) {
            let fit = fit_trig_polynomial(|t| kii_brace(m, s, t, cfg), 4, FitConfig::default())?;
            let norm = fit.normalized();
            excess = worse(excess, norm.excess_above(0));
            excess = worse(excess, norm.b.iter().fold(0.0, |a, x| worse(a, x.abs())));
            let l = m.local(s)?;
            let n0 = kii_n0_straight(&l.rq, l.radius.r, l.radius.r1, l.radius.r2);
            n0_err = worse(n0_err, (fit.poly.a[0] - n0).abs() / n0.abs().max(1.0));
        }
        Ok((excess, n0_err))
    };
    let (a, b) = match run() {
        Ok((a, b)) => (Ok(a), Ok(b)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    rec.at_most("k_ii", "kappa = 0: K_II numerator has degree 0", name, 1e-8, a);
    rec.at_most("k_ii", "kappa = 0: constant term equals reduced n0", name, 1e-6, b);
}

/// Worst relative change of H_II when the s-step is halved, skipping points
/// where |K| is below 1e-4 of its grid maximum (H_II has a pole where K = 0).
fn hii_halving(m: &CanalSurface, pts: &[(f64, f64)], cfg: &DiffConfig, tol: &Tolerances) -> Result<f64> {
    let mut kmax = 0.0f64;
    for &(s, t) in pts {
        if let Ok(k) = gauss_curvature(&m.forms(s, t)?, tol) {
            kmax = kmax.max(k.abs());
        }
    }
    let mut w = 0.0;
    for &(s, t) in pts {
        let Ok(k) = gauss_curvature(&m.forms(s, t)?, tol) else { continue };
        if k.abs() < 1e-4 * kmax {
            continue;
        }
        let a = second_mean_curvature(m, s, t, cfg, tol)?;
        let b = second_mean_curvature(m, s, t, &cfg.halved(), tol)?;
        if let (Some(a), Some(b)) = (a.value(), b.value()) {
            w = worse(w, (a - b).abs() / b.abs());
        }
    }
    Ok(w)
}

struct LeadingFit {
    a10: f64,
    w10: f64,
    residual: f64,
    excess: f64,
}

fn hii_leading(m: &CanalSurface, s: f64, cfg: &DiffConfig, tol: &Tolerances) -> Result<LeadingFit> {
    let f = |t: f64| -> Result<f64> { Ok(hii_numerator(m, s, t, cfg, tol)?.value().unwrap_or(f64::NAN)) };
    let fit = fit_trig_polynomial(f, 10, FitConfig::default())?;
    let wide = fit_trig_polynomial(f, 12, FitConfig::default())?;
    Ok(LeadingFit {
        a10: fit.poly.a[10],
        w10: w10_coefficient(m, s)?,
        residual: fit.relative_residual(),
        excess: wide.normalized().excess_above(10).max(wide.relative_residual()),
    })
}

// ---------------------------------------------------------------- export

fn export_checks(rec: &mut Recorder, name: &str, m: &CanalSurface, cfg: &DiffConfig, tol: &Tolerances) {
    let run = || -> Result<(f64, f64)> {
        let a = sample_grid(m, 6, 6, CurvatureSet::ALL, cfg, tol)?;
        let b = sample_grid(m, 6, 6, CurvatureSet::ALL, cfg, tol)?;
        let num = NumberFormat::default();
        let opts = ObjOptions { triangulate: true, weld_seam: true };
        let same = render_obj(&a, opts, num) == render_obj(&b, opts, num) && render_csv(&a, num) == render_csv(&b, num);
        let mut w = 0.0;
        for r in parse_csv(&render_csv(&a, num))? {
            let c = evaluate(m, r.s, r.t, CurvatureSet::ALL, cfg, tol)?;
            for (got, want) in [(r.k, c.k), (r.h, c.h), (r.k_ii, c.k_ii), (r.h_ii, c.h_ii)] {
                match (got, want.value()) {
                    (Some(x), Some(y)) => w = worse(w, rel(x, y)),
                    (None, None) => {}
                    _ => w = f64::INFINITY,
                }
            }
        }
        Ok((if same { 0.0 } else { 1.0 }, w))
    };
    let (a, b) = match run() {
        Ok((a, b)) => (Ok(a), Ok(b)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    rec.at_most("export", "OBJ and CSV byte-stable across runs", name, 0.0, a);
    rec.at_most("export", "CSV round trip reproduces curvatures", name, 1e-12, b);
}

fn mesh_combinatorics(rec: &mut Recorder, cfg: &DiffConfig, tol: &Tolerances) {
    let run = || -> Result<(f64, f64, f64)> {
        let m = builtin_surface("cylinder")?;
        let g = sample_grid(&m, 10, 12, CurvatureSet::ALL, cfg, tol)?;
        let obj = render_obj(&g, ObjOptions { triangulate: true, weld_seam: true }, NumberFormat::default());
        let v = obj.lines().filter(|l| l.starts_with("v ")).count();
        let f = obj.lines().filter(|l| l.starts_with("f ")).count();
        let counts = (v as f64 - 120.0).abs() + (f as f64 - 216.0).abs();
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for l in obj.lines().filter(|l| l.starts_with("f ")) {
            let idx: Vec<usize> = l[2..].split(' ').filter_map(|x| x.parse().ok()).collect();
            for k in 0..idx.len() {
                let (a, b) = (idx[k], idx[(k + 1) % idx.len()]);
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let bad = edges.values().filter(|&&n| n > 2).count() as f64
            + (edges.values().filter(|&&n| n == 1).count() as f64 - 24.0).abs();
        let kmax = g.curvatures.iter().filter_map(|c| c.k.value()).fold(0.0, |a, x| worse(a, x.abs()));
        Ok((counts, bad, kmax))
    };
    match run() {
        Ok((counts, bad, kmax)) => {
            rec.at_most("export", "cylinder 10x12: 120 vertices, 2*9*12 triangles", "cylinder", 0.0, Ok(counts))
                .note("s is not periodic, so ns - 1 rows of quads");
            rec.at_most("export", "welded mesh edges manifold", "cylinder", 0.0, Ok(bad));
            rec.at_most("export", "cylinder grid K = 0", "cylinder", 0.0, Ok(kmax));
        }
        Err(e) => {
            rec.at_most("export", "mesh combinatorics", "cylinder", 0.0, Err(e));
        }
    }
    let torus = || -> Result<f64> {
        let m = builtin_surface("torus")?;
        let g = sample_grid(&m, 8, 8, CurvatureSet::FIRST_ORDER, cfg, tol)?;
        let k = g.curvatures[g.index(0, 0)].k.value().unwrap_or(f64::NAN);
        Ok((k - 0.25).abs())
    };
    rec.at_most("export", "torus 8x8 grid: K at t-index 0 is 1/4", "torus", 1e-12, torus());
}

// ---------------------------------------------------------------- classify

fn ode_max(radius: &RadiusFamily, domain: &ParamDomain, f: impl Fn(&RadiusJet) -> f64) -> Result<f64> {
    let mut w = 0.0;
    for s in domain.samples(50) {
        w = worse(w, f(&radius.eval(s)?).abs());
    }
    Ok(w)
}

fn ode_checks(rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    let d = ParamDomain::new(0.0, 2.0).expect("valid");
    let constant = RadiusFamily::Constant { c: 1.3 };
    let linear = RadiusFamily::Linear { c1: 0.4, c2: 1.0 };
    let sphere = RadiusFamily::SqrtQuadratic { c1: 0.3, c2: 1.0 };
    let g = "ode";
    rec.at_most(g, "flatness residual, r = c", "r=1.3", 1e-12, ode_max(&constant, &d, flatness_residual));
    rec.at_most(g, "flatness residual, r = c1 s + c2", "r=0.4s+1", 1e-12, ode_max(&linear, &d, flatness_residual));
    rec.at_most(g, "minimal residual, sqrt-quadratic", "sphere-family", 1e-12, ode_max(&sphere, &d, minimal_residual));
    rec.at_most(g, "II-flat residual, r = c", "r=1.3", 1e-12, ode_max(&constant, &d, iiflat_residual));
    rec.at_most(g, "II-minimal product, linear", "r=0.4s+1", 1e-12, ode_max(&linear, &d, |j| iiminimal_residual(j).product()));
    rec.at_most(g, "II-minimal product, sqrt-quadratic", "sphere-family", 1e-12, ode_max(&sphere, &d, |j| iiminimal_residual(j).product()));

    let min_over = |radii: &[RadiusFamily], f: fn(&RadiusJet) -> f64| -> Result<f64> {
        let mut w = f64::INFINITY;
        for r in radii {
            w = w.min(ode_max(r, &d, f)?);
        }
        Ok(w)
    };
    rec.above(g, "minimal residual nonzero, constant and linear", "r=1.3, 0.4s+1", 1e-6, min_over(&[constant.clone(), linear.clone()], minimal_residual));
    let random: Vec<RadiusFamily> = (0..20)
        .map(|_| RadiusFamily::Sinusoidal {
            p: rng.gen_range(1.0..2.0),
            q: rng.gen_range(0.05..0.3),
            omega: rng.gen_range(0.5..2.0),
        })
        .collect();
    rec.above(g, "flatness residual nonzero, 20 random radii", "random", 1e-6, min_over(&random, flatness_residual));

    // r = s² at s = 1
    let j = RadiusJet { r: 1.0, r1: 2.0, r2: 2.0, r3: 0.0, r4: 0.0 };
    let w = iiminimal_residual(&j);
    let err = [
        flatness_residual(&j) - 10.0,
        minimal_residual(&j) - 35.0,
        iiflat_residual(&j) - 416.0,
        w.w - 2304.0,
        w.factor - 625.0,
    ]
    .iter()
    .fold(0.0, |a, x| worse(a, x.abs()));
    rec.at_most(g, "r = s^2 at s = 1: 10, 35, 416, W = 2304", "r=s^2", 1e-12, Ok(err));
    rec.at_most(g, "II-flat residual, printed first term", "-", 0.0, Ok(0.0)).note(
        "the first term uses (r'-1)^2 where the II-minimal expression has (r'-1)^2(r'+1)^2; \
         implemented as printed, both solution families still vanish",
    );
}

fn expected_verdicts(name: &str) -> Option<([Verdict; 4], FamilyLabel)> {
    use Verdict::{Fails as F, Holds as H};
    Some(match name {
        "cylinder" => ([H, F, H, H], FamilyLabel::Cylinder),
        "cone" => ([H, F, F, H], FamilyLabel::Cone),
        "torus" | "helix-tube" => ([F, F, F, F], FamilyLabel::Tube),
        "variable-tube" => ([F, F, F, F], FamilyLabel::General),
        _ => return None,
    })
}

fn classify_checks(rec: &mut Recorder, name: &str, m: &CanalSurface, ccfg: &ClassifyConfig) -> f64 {
    let rep = classify(m, ccfg);
    let got = [rep.flat, rep.minimal, rep.ii_flat, rep.ii_minimal];
    if let Some((want, family)) = expected_verdicts(name) {
        let wrong = got.iter().zip(&want).filter(|(a, b)| a != b).count() + usize::from(rep.family != family);
        rec.at_most("classify", "verdicts and family as expected", name, 0.0, Ok(wrong as f64));
    }
    let consistent = (rep.flat == Verdict::Holds) == (rep.max_abs_k < 1e-9);
    rec.at_most("classify", "flat verdict agrees with max |K| < 1e-9", name, 0.0, Ok(if consistent { 0.0 } else { 1.0 }));
    rep.max_abs_h
}

/// A random regular canal surface over a circle or helix.
fn random_surface(rng: &mut ChaCha8Rng) -> Result<CanalSurface> {
    let domain = ParamDomain::new(0.0, 3.0)?;
    let curve = if rng.gen_bool(0.5) {
        CenterCurve::circle(rng.gen_range(3.0..6.0), domain.s_min, domain.s_max)?
    } else {
        CenterCurve::helix(rng.gen_range(2.0..4.0), rng.gen_range(0.5..2.0), domain.s_min, domain.s_max)?
    };
    let radius = match rng.gen_range(0..4) {
        0 => RadiusFamily::Constant { c: rng.gen_range(0.2..1.0) },
        1 => RadiusFamily::Linear { c1: rng.gen_range(-0.15..0.15), c2: rng.gen_range(0.6..1.0) },
        2 => RadiusFamily::Sinusoidal {
            p: rng.gen_range(0.5..1.0),
            q: rng.gen_range(0.05..0.2),
            omega: rng.gen_range(0.5..2.0),
        },
        _ => RadiusFamily::SqrtQuadratic { c1: 1.5, c2: rng.gen_range(1.2..1.5) },
    };
    let q_sign = if rng.gen_bool(0.5) { QSign::Plus } else { QSign::Minus };
    CanalSurface::new(curve, radius, q_sign, domain)
}

fn nonexistence_checks(rec: &mut Recorder, cfg: &VerifyConfig, ccfg: &ClassifyConfig, builtin_h: f64, rng: &mut ChaCha8Rng) {
    let mut min_h = f64::INFINITY;
    let (mut positive, mut none_fail, mut accepted, mut tries) = (0usize, 0usize, 0usize, 0usize);
    while accepted < cfg.random_surfaces && tries < 50 * cfg.random_surfaces.max(1) {
        tries += 1;
        let Ok(m) = random_surface(rng) else { continue };
        if degeneracy_check(&m, ccfg).first_form_degenerate {
            continue;
        }
        accepted += 1;
        let rep = classify(&m, ccfg);
        let v = [rep.flat, rep.minimal, rep.ii_flat, rep.ii_minimal];
        positive += v.iter().filter(|&&x| x == Verdict::Holds).count();
        none_fail += usize::from(!v.contains(&Verdict::Fails));
        min_h = min_h.min(rep.max_abs_h);
    }
    let label = format!("{accepted} random");
    rec.at_most("classify", "kappa > 0: no positive verdict", &label, 0.0, Ok(positive as f64));
    rec.at_most("classify", "kappa > 0: some verdict fails on every surface", &label, 0.0, Ok(none_fail as f64));
    rec.above("classify", "kappa > 0: max grid |H| (smallest over surfaces)", &label, 1e-4, Ok(min_h));
    rec.at_most("classify", "random surfaces generated", &label, 0.0, Ok((cfg.random_surfaces - accepted) as f64));
    rec.above("classify", "no minimal test surface: max grid |H|", "suite", 1e-9, Ok(builtin_h.min(min_h)));
}

fn sphere_family_checks(rec: &mut Recorder, cfg: &VerifyConfig, ccfg: &ClassifyConfig) {
    let name = "sphere-family";
    let m = match builtin_surface(name) {
        Ok(m) => m,
        Err(e) => {
            rec.at_most("degenerate", "build", name, 0.0, Err(e));
            return;
        }
    };
    let pts = grid(&m, cfg.ns, cfg.nt);
    let run = || -> Result<(f64, f64)> {
        let (mut h, mut det2) = (0.0, 0.0);
        for &(s, t) in &pts {
            let f = m.forms(s, t)?;
            h = worse(h, mean_numerator(&f).abs());
            h = worse(h, mean_numerator_closed(&m, s, t)?.abs());
            det2 = worse(det2, f.det2.abs());
        }
        Ok((h, det2))
    };
    let (h, det2) = match run() {
        Ok((a, b)) => (Ok(a), Ok(b)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    rec.at_most("degenerate", "H numerator vanishes", name, 1e-9, h)
        .note("EG - F^2 vanishes too, so H itself is 0/0; both numerators are checked");
    rec.at_most("degenerate", "max |eg - f^2|", name, 1e-10, det2);
    let rep = degeneracy_check(&m, ccfg);
    let flags = usize::from(!rep.first_form_degenerate) + usize::from(!rep.second_form_degenerate);
    rec.at_most("degenerate", "both fundamental forms flagged degenerate", name, 0.0, Ok(flags as f64));
    let undefined = || -> Result<f64> {
        let mut defined = 0usize;
        for (s, t) in grid(&m, 6, 6) {
            defined += usize::from(evaluate(&m, s, t, CurvatureSet::ALL, &cfg.diff, &cfg.tolerances)?.k_ii.is_defined());
        }
        Ok(defined as f64)
    };
    rec.at_most("degenerate", "K_II undefined everywhere", name, 0.0, undefined());
    let torus = builtin_surface("torus").map(|m| degeneracy_check(&m, ccfg));
    let flags = torus.map(|r| (usize::from(r.first_form_degenerate) + usize::from(r.second_form_degenerate)) as f64);
    rec.at_most("degenerate", "no degeneracy flagged", "torus", 0.0, flags);
    let unit = CanalSurface::new(
        CenterCurve::line(0.0, 2.0).expect("valid"),
        RadiusFamily::Linear { c1: 1.0, c2: 1.0 },
        QSign::Plus,
        ParamDomain::new(0.0, 2.0).expect("valid"),
    );
    let rejected = matches!(unit, Err(Error::DegenerateQ { .. }));
    rec.at_most("degenerate", "r = s + 1 rejected (Q = 0)", "r=s+1", 0.0, Ok(if rejected { 0.0 } else { 1.0 }));
}

// ---------------------------------------------------------------- suites

fn classify_config(cfg: &VerifyConfig) -> ClassifyConfig {
    ClassifyConfig { ns: cfg.ns, nt: cfg.nt, tolerances: cfg.tolerances, diff: cfg.diff, ..Default::default() }
}

fn hii_checks(rec: &mut Recorder, cfg: &VerifyConfig) {
    let (d, tol) = (&cfg.diff, &cfg.tolerances);
    for name in ["torus", "helix-tube", "variable-tube"] {
        let m = match builtin_surface(name) {
            Ok(m) => m,
            Err(e) => {
                rec.at_most("h_ii", "build", name, 0.0, Err(e));
                continue;
            }
        };
        let pts = grid(&m, cfg.ns, cfg.nt);
        rec.at_most("h_ii", "step halving (rel)", name, 1e-3, hii_halving(&m, &pts, d, tol));
        let s = 0.5 * (m.domain.s_min + m.domain.s_max);
        let fit = match hii_leading(&m, s, d, tol) {
            Ok(fit) => fit,
            Err(e) => {
                rec.at_most("h_ii", "degree-10 fit", name, 1e-6, Err(e));
                continue;
            }
        };
        let not_polynomial = match name {
            "helix-tube" => Some("with torsion the numerator is not a polynomial in cos t, sin t; the fit residual stays at percent level"),
            "variable-tube" => Some("with varying radius the numerator is not a polynomial in cos t, sin t; the fit residual stays at percent level"),
            _ => None,
        };
        let c = rec.at_most("h_ii", "numerator degree <= 10", name, 1e-8, Ok(fit.excess));
        if let Some(note) = not_polynomial {
            c.known(note);
        }
        if name == "variable-tube" {
            continue;
        }
        let c = rec.at_most("h_ii", "fitted a10 vs printed w10", name, 1e-6, Ok(rel(fit.a10, fit.w10)));
        if name == "helix-tube" {
            c.known("the fitted a10 is 8 kappa^10 r^17; the printed w10 gives 8 kappa^10 r^15 for tubes");
        }
        if name == "torus" {
            rec.at_most("h_ii", "fit residual", name, 1e-8, Ok(fit.residual));
            rec.at_most("h_ii", "w10 = 8/59049", name, 1e-15, Ok(rel(fit.w10, 8.0 / 59049.0)));
        }
    }
    // a tube with r ≠ 1 separates the two candidate powers of r
    let wide = CanalSurface::new(
        CenterCurve::circle(5.0, 0.0, 6.0).expect("valid"),
        RadiusFamily::Constant { c: 2.0 },
        QSign::Plus,
        ParamDomain::new(0.0, 6.0).expect("valid"),
    );
    let lead = wide.and_then(|m| hii_leading(&m, 3.0, d, tol));
    let (printed, scaled) = match lead {
        Ok(f) => (Ok(rel(f.a10, f.w10)), Ok(rel(f.a10, 4.0 * f.w10))),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    rec.at_most("h_ii", "fitted a10 vs printed w10", "torus a=5 r=2", 1e-6, printed)
        .known("printed w10 is short by a factor r^2");
    rec.at_most("h_ii", "fitted a10 vs r^2 w10", "torus a=5 r=2", 1e-6, scaled);
}

fn torus_coefficients(rec: &mut Recorder) {
    let run = || -> Result<f64> {
        let m = builtin_surface("torus")?;
        let mut w = 0.0;
        for s in m.domain.samples(5) {
            let n = kii_coefficients(&m, s)?;
            w = worse(w, rel(n.n[4].a, -4.0 / 81.0));
            w = worse(w, rel(n.n[3].a, -2.0 / 9.0));
        }
        Ok(w)
    };
    rec.at_most("k_ii", "n4 = -4/81, n3 = -2/9", "torus", 1e-15, run());
}

/// Every invariant on the reference surfaces.
pub fn verify_builtin(cfg: &VerifyConfig) -> VerifyReport {
    let mut rec = Recorder { checks: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ccfg = classify_config(cfg);
    let (d, tol) = (&cfg.diff, &cfg.tolerances);
    let mut min_h = f64::INFINITY;
    for name in SUITE {
        let m = match builtin_surface(name) {
            Ok(m) => m,
            Err(e) => {
                rec.at_most("build", "build", name, 0.0, Err(e));
                continue;
            }
        };
        let pts = grid(&m, cfg.ns, cfg.nt);
        geometry_checks(&mut rec, name, &m, &mut rng);
        canal_checks(&mut rec, name, &m, &pts);
        curvature_checks(&mut rec, name, &m, &pts, tol);
        kii_checks(&mut rec, name, &m, &pts, d, tol);
        degree_checks(&mut rec, name, &m, d);
        if m.curve.is_line() {
            straight_kii_checks(&mut rec, name, &m, d);
        }
        min_h = min_h.min(classify_checks(&mut rec, name, &m, &ccfg));
        if name == "torus" {
            export_checks(&mut rec, name, &m, d, tol);
        }
    }
    let revolution = CanalSurface::new(
        CenterCurve::line(0.0, 6.0).expect("valid"),
        RadiusFamily::Sinusoidal { p: 1.0, q: 0.3, omega: 1.7 },
        QSign::Plus,
        ParamDomain::new(0.0, 6.0).expect("valid"),
    );
    match revolution {
        Ok(m) => straight_kii_checks(&mut rec, "r=1+0.3sin1.7s", &m, d),
        Err(e) => {
            rec.at_most("k_ii", "build", "r=1+0.3sin1.7s", 0.0, Err(e));
        }
    }
    torus_coefficients(&mut rec);
    hii_checks(&mut rec, cfg);
    ode_checks(&mut rec, &mut rng);
    nonexistence_checks(&mut rec, cfg, &ccfg, min_h, &mut rng);
    sphere_family_checks(&mut rec, cfg, &ccfg);
    mesh_combinatorics(&mut rec, d, tol);
    VerifyReport { checks: rec.checks }
}

/// The invariants that apply to a single surface. Fails with the first
/// degeneracy found on the grid, since none of the curvature checks apply.
pub fn verify_surface(name: &str, m: &CanalSurface, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let ccfg = classify_config(cfg);
    let deg = degeneracy_check(m, &ccfg);
    if deg.first_form_degenerate {
        let s = deg.first_form_witness.unwrap_or(m.domain.s_min);
        // the report only records s; pick the worst t there
        let t = t_samples(cfg.nt)
            .into_iter()
            .min_by(|&a, &b| {
                let area = |t| m.area_element(s, t).unwrap_or(f64::NEG_INFINITY);
                area(a).total_cmp(&area(b))
            })
            .unwrap_or(0.0);
        return Err(Error::DegenerateFirstForm { s, t, area2: deg.min_area2 });
    }
    let mut rec = Recorder { checks: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (d, tol) = (&cfg.diff, &cfg.tolerances);
    let pts = grid(m, cfg.ns, cfg.nt);
    geometry_checks(&mut rec, name, m, &mut rng);
    canal_checks(&mut rec, name, m, &pts);
    curvature_checks(&mut rec, name, m, &pts, tol);
    kii_checks(&mut rec, name, m, &pts, d, tol);
    degree_checks(&mut rec, name, m, d);
    if m.curve.is_line() {
        straight_kii_checks(&mut rec, name, m, d);
    }
    if !deg.second_form_degenerate {
        rec.at_most("h_ii", "step halving (rel)", name, 1e-3, hii_halving(m, &pts, d, tol));
    }
    classify_checks(&mut rec, name, m, &ccfg);
    export_checks(&mut rec, name, m, d, tol);
    Ok(VerifyReport { checks: rec.checks })
}
