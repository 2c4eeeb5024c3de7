//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits nonzero when any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use canal::canal::t_samples;
use canal::classify::{
    classify, flatness_residual, iiflat_residual, iiminimal_residual, minimal_residual, ClassifyConfig, Verdict,
};
use canal::curvature::{
    brioschi_kii, brioschi_numerator, fit_trig_polynomial, gauss_curvature, gauss_curvature_closed, hii_numerator,
    kii_closed, kii_coefficients, mean_curvature, mean_curvature_closed, mean_numerator, w10_coefficient, CurvatureSet,
    DiffConfig, FitConfig, Tolerances,
};
use canal::export::{parse_csv, render_csv, render_obj, sample_grid, NumberFormat, ObjOptions};
use canal::geometry::{RadiusFamily, RadiusJet};
use canal::oracle::{oracle_canal, OracleConfig};
use canal::prelude::*;
use canal::spec::builtin;

const SUITE: [&str; 5] = ["cylinder", "cone", "torus", "helix-tube", "variable-tube"];

struct Outcome {
    lines: Vec<(bool, String)>,
}

impl Outcome {
    fn line(&mut self, pass: bool, text: String) {
        println!("{} {text}", if pass { "PASS" } else { "FAIL" });
        self.lines.push((pass, text));
    }

    /// `worst <= tol`, with errors counted as failures.
    fn at_most(&mut self, id: &str, what: &str, tol: f64, worst: Result<f64>) {
        match worst {
            Ok(w) => self.line(w <= tol, format!("[{id}] {what}: worst {w:.3e} (tol {tol:.0e})")),
            Err(e) => self.line(false, format!("[{id}] {what}: error: {e}")),
        }
    }
}

fn surface(name: &str) -> CanalSurface {
    builtin(name).expect("reference surface").build().expect("reference surface builds")
}

/// The 20 × 20 parameter grid.
fn grid(m: &CanalSurface) -> Vec<(f64, f64)> {
    let ts = t_samples(20);
    m.domain.samples(20).into_iter().flat_map(|s| ts.iter().map(move |&t| (s, t))).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn max_of(worst: f64, x: f64) -> f64 {
    if x.is_nan() {
        f64::NAN
    } else {
        worst.max(x)
    }
}

// 1 --------------------------------------------------------------------------

fn form_identities(m: &CanalSurface) -> Result<(f64, f64)> {
    let (mut forms_err, mut area_err) = (0.0f64, 0.0f64);
    for (s, t) in grid(m) {
        let f = m.forms(s, t)?;
        let p = m.partials(s, t)?;
        let cross = p.c_s.cross(&p.c_t);
        let n = cross / cross.norm();
        let first = [p.c_s.dot(&p.c_s), p.c_s.dot(&p.c_t), p.c_t.dot(&p.c_t)];
        let second = [p.c_ss.dot(&n), p.c_st.dot(&n), p.c_tt.dot(&n)];
        let a = [f.e_big, f.f_big, f.g_big];
        // the radial normal may point either way relative to C_s × C_t
        let sign = if second[2] * f.g >= 0.0 { 1.0 } else { -1.0 };
        let b = [f.e, f.f, f.g].map(|x| sign * x);
        let scale1 = first.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let scale2 = second.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..3 {
            forms_err = max_of(forms_err, (a[i] - first[i]).abs() / scale1);
            forms_err = max_of(forms_err, (b[i] - second[i]).abs() / scale2);
        }
        let det = first[0] * first[2] - first[1] * first[1];
        area_err = max_of(area_err, (m.area_element(s, t)? - det).abs() / det.abs());
    }
    Ok((forms_err, area_err))
}

fn criterion_1(out: &mut Outcome) {
    for name in SUITE {
        let m = surface(name);
        let r = form_identities(&m);
        out.at_most("1", &format!("{name}: E,F,G,e,f,g vs partial dot products, relative"), 1e-10, r.as_ref().map(|x| x.0).map_err(Clone::clone));
        out.at_most("1", &format!("{name}: factored EG-F^2 vs E*G-F^2, relative"), 1e-12, r.map(|x| x.1));
    }
}

// 2 --------------------------------------------------------------------------

/// Worst ratio of the error to what the criterion allows: relative `rel_tol`,
/// or absolute `abs_tol` where that is looser. Values <= 1 pass.
fn tolerance_ratio(got: f64, want: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    let d = (got - want).abs();
    if d == 0.0 {
        return 0.0;
    }
    (d / abs_tol).min(d / (want.abs() * rel_tol))
}

/// Relative error, with |want| floored at 1e-6 so exact zeros stay meaningful.
fn floored_rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-6)
}

fn criterion_2(out: &mut Outcome) {
    let tol = Tolerances::default();
    let ocfg = OracleConfig::default();
    for name in SUITE {
        let m = surface(name);
        let run = || -> Result<[f64; 4]> {
            let mut w = [0.0f64; 4];
            for (s, t) in grid(&m) {
                let f = m.forms(s, t)?;
                let k = gauss_curvature(&f, &tol)?;
                let h = mean_curvature(&f, &tol)?;
                let o = oracle_canal(&m, s, t, &ocfg)?;
                w[0] = max_of(w[0], floored_rel(gauss_curvature_closed(&m, s, t, &tol)?, k));
                w[1] = max_of(w[1], floored_rel(mean_curvature_closed(&m, s, t, &tol)?, h));
                w[2] = max_of(w[2], tolerance_ratio(k, o.k, 1e-5, 1e-8));
                w[3] = max_of(w[3], tolerance_ratio(h, o.h, 1e-5, 1e-8));
            }
            Ok(w)
        };
        match run() {
            Ok(w) => {
                out.at_most("2", &format!("{name}: K from forms vs closed form, relative (floor 1e-6)"), 1e-10, Ok(w[0]));
                out.at_most("2", &format!("{name}: H from forms vs closed form, relative (floor 1e-6)"), 1e-10, Ok(w[1]));
                out.at_most("2", &format!("{name}: K vs oracle, error / (1e-5 rel or 1e-8 abs)"), 1.0, Ok(w[2]));
                out.at_most("2", &format!("{name}: H vs oracle, error / (1e-5 rel or 1e-8 abs)"), 1.0, Ok(w[3]));
            }
            Err(e) => out.line(false, format!("[2] {name}: error: {e}")),
        }
    }
}

// 3 --------------------------------------------------------------------------

fn radius_samples(m: &CanalSurface, n: usize) -> Result<Vec<RadiusJet>> {
    m.domain.samples(n).into_iter().map(|s| m.radius.eval(s)).collect()
}

fn criterion_3(out: &mut Outcome) {
    let tol = Tolerances::default();
    let cfg = DiffConfig::default();
    for name in ["cylinder", "cone"] {
        let m = surface(name);
        let k = grid(&m).into_iter().try_fold(0.0f64, |w, (s, t)| Ok(max_of(w, gauss_curvature(&m.forms(s, t)?, &tol)?.abs())));
        out.at_most("3", &format!("{name}: max |K| on the grid"), 1e-10, k);
        let product = radius_samples(&m, 50).map(|js| js.iter().fold(0.0f64, |w, j| max_of(w, iiminimal_residual(j).product().abs())));
        out.at_most("3", &format!("{name}: II-minimal residual product, 50 samples"), 1e-10, product);
    }
    let m = surface("cylinder");
    let fitted = m.domain.samples(20).into_iter().try_fold(0.0f64, |w, s| {
        let fit = fit_trig_polynomial(|t| brioschi_numerator(&m, s, t, &cfg), 4, FitConfig::default())?;
        let c = fit.poly.a.iter().chain(&fit.poly.b).fold(0.0f64, |m, x| max_of(m, x.abs()));
        Ok(max_of(w, c.max(fit.max_residual)))
    });
    out.at_most("3", "cylinder: fitted K_II numerator coefficients and residual", 1e-10, fitted);
}

// 4 --------------------------------------------------------------------------

fn random_surface(rng: &mut ChaCha8Rng) -> Result<CanalSurface> {
    let domain = ParamDomain::new(0.0, 2.0)?;
    let curve = if rng.gen_bool(0.5) {
        CenterCurve::circle(rng.gen_range(2.5..8.0), 0.0, 2.0)?
    } else {
        CenterCurve::helix(rng.gen_range(1.5..5.0), rng.gen_range(0.3..2.5), 0.0, 2.0)?
    };
    let radius = match rng.gen_range(0..3) {
        0 => RadiusFamily::Constant { c: rng.gen_range(0.1..0.9) },
        1 => RadiusFamily::Linear { c1: rng.gen_range(-0.2..0.2), c2: rng.gen_range(0.5..0.9) },
        _ => RadiusFamily::Sinusoidal { p: rng.gen_range(0.4..0.9), q: rng.gen_range(0.02..0.2), omega: rng.gen_range(0.3..2.5) },
    };
    let sign = if rng.gen_bool(0.5) { QSign::Plus } else { QSign::Minus };
    CanalSurface::new(curve, radius, sign, domain)
}

fn criterion_4(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let cfg = ClassifyConfig::default();
    let (mut min_h, mut undecided, mut errors) = (f64::INFINITY, 0, 0);
    for _ in 0..20 {
        match random_surface(&mut rng) {
            Ok(m) => {
                let rep = classify(&m, &cfg);
                min_h = min_h.min(rep.max_abs_h);
                let verdicts = [rep.flat, rep.minimal, rep.ii_flat, rep.ii_minimal];
                if rep.max_abs_kappa <= 0.0 || !verdicts.contains(&Verdict::Fails) {
                    undecided += 1;
                }
            }
            Err(_) => errors += 1,
        }
    }
    out.line(min_h > 1e-4 && errors == 0, format!("[4] 20 random surfaces with kappa > 0: smallest max |H| {min_h:.3e} (must exceed 1e-4)"));
    out.line(undecided == 0 && errors == 0, format!("[4] 20 random surfaces: {undecided} without a failing verdict, {errors} not built"));

    // H is 0/0 on this family, so its numerator stands in for it
    let m = surface("sphere-family");
    let run = || -> Result<(f64, f64, f64)> {
        let (mut num, mut det2, mut area2) = (0.0f64, f64::INFINITY, 0.0f64);
        for (s, t) in grid(&m) {
            let f = m.forms(s, t)?;
            num = max_of(num, mean_numerator(&f).abs());
            det2 = det2.min(f.det2.abs());
            area2 = max_of(area2, f.area2.abs());
        }
        Ok((num, det2, area2))
    };
    match run() {
        Ok((num, det2, area2)) => {
            out.line(num < 1e-9, format!("[4] sphere family: max |H numerator| {num:.3e} (tol 1e-9); H itself is 0/0, max |EG-F^2| {area2:.3e}"));
            out.line(det2 < 1e-10, format!("[4] sphere family: min |eg-f^2| {det2:.3e} (tol 1e-10)"));
        }
        Err(e) => out.line(false, format!("[4] sphere family: error: {e}")),
    }
}

// 5 --------------------------------------------------------------------------

fn criterion_5(out: &mut Outcome) {
    let tol = Tolerances::default();
    let cfg = DiffConfig::default();
    for name in ["torus", "helix-tube"] {
        let m = surface(name);
        let run = || -> Result<(f64, usize)> {
            let (mut w, mut used) = (0.0f64, 0);
            for (s, t) in grid(&m) {
                if m.forms(s, t)?.det2.abs() <= 1e-6 {
                    continue;
                }
                let (Some(a), Some(b)) = (brioschi_kii(&m, s, t, &cfg, &tol)?.value(), kii_closed(&m, s, t, &tol)?.value()) else {
                    return Err(Error::Spec(format!("K_II undefined at ({s}, {t})")));
                };
                w = max_of(w, rel(a, b));
                used += 1;
            }
            Ok((w, used))
        };
        match run() {
            Ok((w, used)) => out.line(w <= 1e-5, format!("[5] {name}: Brioschi K_II vs coefficient form over {used} points, relative: worst {w:.3e} (tol 1e-5)")),
            Err(e) => out.line(false, format!("[5] {name}: error: {e}")),
        }
    }
    let m = surface("torus");
    let n = kii_coefficients(&m, 1.0).map(|c| {
        let e4 = rel(c.n[4].a, -4.0 / 81.0).max(c.n[4].b.abs());
        let e3 = rel(c.n[3].a, -2.0 / 9.0).max(c.n[3].b.abs());
        (e4, e3)
    });
    out.at_most("5", "torus: n4 = -4/81, relative", 1e-15, n.as_ref().map(|x| x.0).map_err(Clone::clone));
    out.at_most("5", "torus: n3 = -2/9, relative", 1e-15, n.map(|x| x.1));
}

// 6 --------------------------------------------------------------------------

fn criterion_6(out: &mut Outcome) {
    let tol = Tolerances::default();
    let cfg = DiffConfig::default();
    let m = surface("helix-tube");
    let run = || -> Result<(f64, f64)> {
        let (mut w, mut scaled) = (0.0f64, 0.0f64);
        for s in [1.0, 2.5, 4.0] {
            let f = |t: f64| Ok(hii_numerator(&m, s, t, &cfg, &tol)?.value().unwrap_or(f64::NAN));
            let fit = fit_trig_polynomial(f, 10, FitConfig::default())?;
            let w10 = w10_coefficient(&m, s)?;
            let r = m.radius.value(s)?;
            w = max_of(w, rel(fit.poly.a[10], w10));
            scaled = max_of(scaled, rel(fit.poly.a[10], r * r * w10));
        }
        Ok((w, scaled))
    };
    let r = run();
    if let Ok((_, scaled)) = &r {
        println!("INFO [6] helix tube: fitted a10 vs r^2 w10, relative {scaled:.3e} (not a criterion)");
    }
    out.at_most("6", "helix tube: fitted a10 vs w10, relative", 1e-6, r.map(|x| x.0));
    let torus = surface("torus");
    let w = w10_coefficient(&torus, 1.0);
    out.at_most("6", "torus: w10 vs 8/59049, relative", 1e-15, w.clone().map(|w| rel(w, 8.0 / 59049.0)));
    // the decimal is given to six digits, so agreement means within one unit of the last
    out.at_most("6", "torus: w10 vs 1.35480e-4, absolute", 1e-9, w.map(|w| (w - 1.35480e-4).abs()));
}

// 7 --------------------------------------------------------------------------

fn family_max(radius: RadiusFamily, f: impl Fn(&RadiusJet) -> f64) -> Result<f64> {
    let d = ParamDomain::new(0.1, 2.0)?;
    d.samples(50).into_iter().try_fold(0.0f64, |w, s| Ok(max_of(w, f(&radius.eval(s)?).abs())))
}

fn criterion_7(out: &mut Outcome) {
    let constant = || RadiusFamily::Constant { c: 0.8 };
    let linear = || RadiusFamily::Linear { c1: 0.35, c2: 0.6 };
    let sphere = || RadiusFamily::SqrtQuadratic { c1: 0.4, c2: 0.9 };
    out.at_most("7", "flatness residual on r = c", 1e-12, family_max(constant(), flatness_residual));
    out.at_most("7", "flatness residual on r = c1 s + c2", 1e-12, family_max(linear(), flatness_residual));
    out.at_most("7", "minimality product on r = sqrt(s^2 - 2c1 s + 2c2)", 1e-12, family_max(sphere(), minimal_residual));
    out.at_most("7", "II-flat residual on r = c", 1e-12, family_max(constant(), iiflat_residual));
    out.at_most("7", "II-minimal product on r = c1 s + c2", 1e-12, family_max(linear(), |j| iiminimal_residual(j).product()));
    out.at_most("7", "II-minimal product on r = sqrt(s^2 - 2c1 s + 2c2)", 1e-12, family_max(sphere(), |j| iiminimal_residual(j).product()));

    let j = RadiusJet { r: 1.0, r1: 2.0, r2: 2.0, r3: 0.0, r4: 0.0 };
    let got = [flatness_residual(&j), minimal_residual(&j), iiflat_residual(&j), iiminimal_residual(&j).w];
    let want = [10.0, 35.0, 416.0, 2304.0];
    let err = got.iter().zip(&want).fold(0.0f64, |w, (a, b)| max_of(w, rel(*a, *b)));
    out.line(err <= 1e-15, format!("[7] r = s^2 at s = 1: {got:?} vs [10, 35, 416, 2304], relative {err:.3e} (tol 1e-15)"));
}

// 8 --------------------------------------------------------------------------

fn criterion_8(out: &mut Outcome) {
    let started = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_canal")).args(["verify", "--builtin"]).output();
    let elapsed = started.elapsed();
    match status {
        Ok(o) => out.line(
            o.status.code() == Some(0) && elapsed < Duration::from_secs(30),
            format!("[8] verify --builtin: exit {:?} in {:.2} s (limit 30 s)", o.status.code(), elapsed.as_secs_f64()),
        ),
        Err(e) => out.line(false, format!("[8] verify --builtin: could not run: {e}")),
    }

    let dir = tempfile::tempdir().expect("temp dir");
    let mesh = |tag: &str| -> std::io::Result<(Vec<u8>, Vec<u8>)> {
        let obj = dir.path().join(format!("{tag}.obj"));
        let o = Command::new(env!("CARGO_BIN_EXE_canal"))
            .args(["mesh", "--surface", "helix-tube", "--triangulate", "--out"])
            .arg(&obj)
            .output()?;
        if !o.status.success() {
            return Err(std::io::Error::other(String::from_utf8_lossy(&o.stderr).into_owned()));
        }
        Ok((std::fs::read(&obj)?, std::fs::read(obj.with_extension("csv"))?))
    };
    match (mesh("a"), mesh("b")) {
        (Ok(a), Ok(b)) => out.line(
            a == b && !a.0.is_empty(),
            format!("[8] mesh OBJ ({} bytes) and CSV ({} bytes) byte-identical across runs", a.0.len(), a.1.len()),
        ),
        (Err(e), _) | (_, Err(e)) => out.line(false, format!("[8] mesh: {e}")),
    }

    let run = || -> Result<f64> {
        let mut w = 0.0f64;
        for name in SUITE {
            let m = surface(name);
            let g = sample_grid(&m, 12, 10, CurvatureSet::ALL, &DiffConfig::default(), &Tolerances::default())?;
            let rows = parse_csv(&render_csv(&g, NumberFormat::default()))?;
            for (row, c) in rows.iter().zip(&g.curvatures) {
                let pairs = [(row.k, c.k.value()), (row.h, c.h.value()), (row.k_ii, c.k_ii.value()), (row.h_ii, c.h_ii.value())];
                for (read, orig) in pairs {
                    match (read, orig) {
                        (Some(a), Some(b)) => w = max_of(w, (a - b).abs() / b.abs().max(1.0)),
                        (None, None) => {}
                        _ => w = f64::INFINITY,
                    }
                }
            }
        }
        Ok(w)
    };
    out.at_most("8", "CSV round trip of curvature fields", 1e-12, run());
    let torus = surface("torus");
    let stable = sample_grid(&torus, 8, 8, CurvatureSet::ALL, &DiffConfig::default(), &Tolerances::default()).map(|g| {
        let a = render_obj(&g, ObjOptions::default(), NumberFormat::default());
        let b = render_obj(&g, ObjOptions::default(), NumberFormat::default());
        if a == b { 0.0 } else { 1.0 }
    });
    out.at_most("8", "in-process OBJ rendering stable", 0.0, stable);
}

fn main() -> ExitCode {
    let mut out = Outcome { lines: Vec::new() };
    criterion_1(&mut out);
    criterion_2(&mut out);
    criterion_3(&mut out);
    criterion_4(&mut out);
    criterion_5(&mut out);
    criterion_6(&mut out);
    criterion_7(&mut out);
    criterion_8(&mut out);
    let failed = out.lines.iter().filter(|(p, _)| !p).count();
    println!("acceptance: {} checks, {} failed", out.lines.len(), failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
