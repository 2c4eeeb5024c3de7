//! Brute-force curvatures straight from a point evaluator.
//!
//! Nothing here knows about R, Q or the closed-form coefficients; the only
//! input is a map (s, t) ↦ point. For canal surfaces that map is
//! [`CanalSurface::point_unbounded`] and the center α is used solely to fix
//! the normal's orientation.

use crate::canal::{CanalSurface, SurfacePartials};
use crate::diff::{self, StencilConfig};
use crate::error::{Error, Result};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub stencil: StencilConfig,
    /// EG − F² at or below this is rejected.
    pub tol_deg: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { stencil: StencilConfig { h: 1e-3, levels: 1 }, tol_deg: 1e-12 }
    }
}

impl OracleConfig {
    pub fn halved(&self) -> Self {
        OracleConfig { stencil: self.stencil.halved(), ..*self }
    }
}

fn wrap(s: f64) -> impl Fn(Error) -> Error {
    move |e| match e {
        e @ Error::StencilOutOfDomain { .. } => e,
        e => Error::StencilOutOfDomain { s, source: Box::new(e) },
    }
}

/// Five-point differences with Richardson extrapolation; C_st by nesting.
pub fn numeric_partials<P>(p: P, s: f64, t: f64, cfg: &StencilConfig) -> Result<SurfacePartials>
where
    P: Fn(f64, f64) -> Result<Vec3>,
{
    cfg.validate()?;
    let (hs, ht, lv) = (cfg.step_at(s), cfg.step_at(t), cfg.levels);
    let along_s = |x: f64| p(x, t);
    let along_t = |y: f64| p(s, y);
    let c_s = diff::first4(along_s, s, hs, lv).map_err(wrap(s))?;
    let c_ss = diff::second4(along_s, s, hs, lv).map_err(wrap(s))?;
    let c_t = diff::first4(along_t, t, ht, lv).map_err(wrap(s))?;
    let c_tt = diff::second4(along_t, t, ht, lv).map_err(wrap(s))?;
    let c_st = diff::first4(|x| diff::first4(|y| p(x, y), t, ht, lv), s, hs, lv).map_err(wrap(s))?;
    Ok(SurfacePartials { c_s, c_t, c_ss, c_st, c_tt })
}

/// Numeric K and H with respect to `normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCurvatures {
    pub k: f64,
    pub h: f64,
    pub normal: Vec3,
    pub area2: f64,
}

fn from_partials(d: &SurfacePartials, normal: Vec3, tol_deg: f64, s: f64, t: f64) -> Result<OracleCurvatures> {
    let (eb, fb, gb) = (d.c_s.dot(&d.c_s), d.c_s.dot(&d.c_t), d.c_t.dot(&d.c_t));
    let (e, f, g) = (d.c_ss.dot(&normal), d.c_st.dot(&normal), d.c_tt.dot(&normal));
    let area2 = eb * gb - fb * fb;
    if !(area2 > tol_deg) {
        return Err(Error::DegenerateFirstForm { s, t, area2 });
    }
    Ok(OracleCurvatures {
        k: (e * g - f * f) / area2,
        h: (eb * g - 2.0 * fb * f + gb * e) / (2.0 * area2),
        normal,
        area2,
    })
}

/// K and H of the map `p` using the normal C_s × C_t / |C_s × C_t|.
pub fn oracle_curvatures<P>(p: P, s: f64, t: f64, cfg: &OracleConfig) -> Result<OracleCurvatures>
where
    P: Fn(f64, f64) -> Result<Vec3>,
{
    let d = numeric_partials(p, s, t, &cfg.stencil)?;
    let cross = d.c_s.cross(&d.c_t);
    let len = cross.norm();
    if !(len * len > cfg.tol_deg) {
        return Err(Error::DegenerateFirstForm { s, t, area2: len * len });
    }
    from_partials(&d, cross / len, cfg.tol_deg, s, t)
}

/// Oracle K and H of a canal surface with the normal flipped, if needed, to
/// point along C − α.
pub fn oracle_canal(m: &CanalSurface, s: f64, t: f64, cfg: &OracleConfig) -> Result<OracleCurvatures> {
    let p = |x: f64, y: f64| m.point_unbounded(x, y);
    let mut out = oracle_curvatures(p, s, t, cfg)?;
    let radial = p(s, t)? - m.center_unbounded(s);
    if out.normal.dot(&radial) < 0.0 {
        out.normal = -out.normal;
        out.h = -out.h;
    }
    Ok(out)
}
