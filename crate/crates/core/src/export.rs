//! Grid sampling and Wavefront OBJ / CSV output.
//!
//! OBJ files carry geometry only. Curvatures go to a CSV sidecar with header
//! `s,t,x,y,z,K,H,K_II,H_II`; missing values are the literal `undef`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::canal::{t_samples, CanalSurface};
use crate::curvature::{evaluate, CurvatureSample, CurvatureSet, CurvatureValue, DiffConfig, Tolerances};
use crate::error::{Error, Result};
use crate::Vec3;

/// Vertices and curvatures on an ns × nt parameter grid, s-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub points: Vec<Vec3>,
    pub curvatures: Vec<CurvatureSample>,
    pub which: CurvatureSet,
    /// t covers a full period, so the last column joins the first.
    pub closed_t: bool,
}

impl SurfaceGrid {
    pub fn ns(&self) -> usize {
        self.s.len()
    }

    pub fn nt(&self) -> usize {
        self.t.len()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nt() + j
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }
}

/// Samples `m` on `ns` values of s (endpoints included) and `nt` values of t
/// in [0, 2π).
pub fn sample_grid(
    m: &CanalSurface,
    ns: usize,
    nt: usize,
    which: CurvatureSet,
    cfg: &DiffConfig,
    tol: &Tolerances,
) -> Result<SurfaceGrid> {
    if ns < 2 || nt < 3 {
        return Err(Error::InvalidConfig(format!("grid needs ns >= 2 and nt >= 3, got {ns} x {nt}")));
    }
    let s = m.domain.samples(ns);
    let t = t_samples(nt);
    let mut points = Vec::with_capacity(ns * nt);
    let mut curvatures = Vec::with_capacity(ns * nt);
    for &si in &s {
        for &tj in &t {
            points.push(m.point(si, tj)?);
            curvatures.push(evaluate(m, si, tj, which, cfg, tol)?);
        }
    }
    Ok(SurfaceGrid { s, t, points, curvatures, which, closed_t: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjOptions {
    /// Split each quad into two triangles.
    pub triangulate: bool,
    /// Join the last t-column to the first instead of leaving a seam.
    pub weld_seam: bool,
}

impl Default for ObjOptions {
    fn default() -> Self {
        ObjOptions { triangulate: false, weld_seam: true }
    }
}

/// Formatting for numbers in OBJ and CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NumberFormat {
    /// Significant digits, 1 to 17.
    pub digits: usize,
}

impl Default for NumberFormat {
    fn default() -> Self {
        NumberFormat { digits: 17 }
    }
}

impl NumberFormat {
    pub fn new(digits: usize) -> Result<Self> {
        if !(1..=17).contains(&digits) {
            return Err(Error::InvalidConfig(format!("digits must be in 1..=17, got {digits}")));
        }
        Ok(NumberFormat { digits })
    }

    pub fn fmt(&self, x: f64) -> String {
        // normalise −0 so sign noise does not leak into the files
        let x = if x == 0.0 { 0.0 } else { x };
        format!("{:.*e}", self.digits - 1, x)
    }
}

/// OBJ text for `grid`.
pub fn render_obj(grid: &SurfaceGrid, opts: ObjOptions, num: NumberFormat) -> String {
    let mut out = String::new();
    for p in &grid.points {
        let _ = writeln!(out, "v {} {} {}", num.fmt(p.x), num.fmt(p.y), num.fmt(p.z));
    }
    let (ns, nt) = (grid.ns(), grid.nt());
    let cols = if opts.weld_seam && grid.closed_t { nt } else { nt - 1 };
    for i in 0..ns - 1 {
        for j in 0..cols {
            let jn = (j + 1) % nt;
            // OBJ indices are 1-based
            let a = grid.index(i, j) + 1;
            let b = grid.index(i + 1, j) + 1;
            let c = grid.index(i + 1, jn) + 1;
            let d = grid.index(i, jn) + 1;
            if opts.triangulate {
                let _ = writeln!(out, "f {a} {b} {c}");
                let _ = writeln!(out, "f {a} {c} {d}");
            } else {
                let _ = writeln!(out, "f {a} {b} {c} {d}");
            }
        }
    }
    out
}

pub const CSV_HEADER: &str = "s,t,x,y,z,K,H,K_II,H_II";

fn field(v: CurvatureValue, requested: bool, num: NumberFormat) -> String {
    match v {
        CurvatureValue::Defined(x) if requested => num.fmt(x),
        _ => "undef".to_string(),
    }
}

/// CSV text for `grid`.
pub fn render_csv(grid: &SurfaceGrid, num: NumberFormat) -> String {
    let mut out = String::with_capacity(grid.vertex_count() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    let w = grid.which;
    for (i, &s) in grid.s.iter().enumerate() {
        for (j, &t) in grid.t.iter().enumerate() {
            let idx = grid.index(i, j);
            let p = grid.points[idx];
            let c = &grid.curvatures[idx];
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                num.fmt(s),
                num.fmt(t),
                num.fmt(p.x),
                num.fmt(p.y),
                num.fmt(p.z),
                field(c.k, w.k, num),
                field(c.h, w.h, num),
                field(c.k_ii, w.k_ii, num),
                field(c.h_ii, w.h_ii, num),
            );
        }
    }
    out
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn write_obj(grid: &SurfaceGrid, path: &Path, opts: ObjOptions) -> Result<()> {
    write_text(path, &render_obj(grid, opts, NumberFormat::default()))
}

pub fn write_csv(grid: &SurfaceGrid, path: &Path) -> Result<()> {
    write_text(path, &render_csv(grid, NumberFormat::default()))
}

/// One parsed CSV row; `None` for `undef`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub s: f64,
    pub t: f64,
    pub point: Vec3,
    pub k: Option<f64>,
    pub h: Option<f64>,
    pub k_ii: Option<f64>,
    pub h_ii: Option<f64>,
}

/// Parses text produced by [`render_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Spec(format!("CSV header must be `{CSV_HEADER}`")));
    }
    let num = |x: &str| -> Result<f64> { x.parse().map_err(|_| Error::Spec(format!("bad CSV number `{x}`"))) };
    let opt = |x: &str| -> Result<Option<f64>> { if x == "undef" { Ok(None) } else { num(x).map(Some) } };
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(Error::Spec(format!("CSV line {} has {} fields", n + 2, f.len())));
        }
        rows.push(CsvRow {
            s: num(f[0])?,
            t: num(f[1])?,
            point: Vec3::new(num(f[2])?, num(f[3])?, num(f[4])?),
            k: opt(f[5])?,
            h: opt(f[6])?,
            k_ii: opt(f[7])?,
            h_ii: opt(f[8])?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canal::ParamDomain;
    use crate::geometry::{CenterCurve, QSign, RadiusFamily};

    fn cylinder() -> CanalSurface {
        CanalSurface::new(
            CenterCurve::line(-10.0, 10.0).unwrap(),
            RadiusFamily::Constant { c: 1.0 },
            QSign::Plus,
            ParamDomain::new(0.0, 2.0).unwrap(),
        )
        .unwrap()
    }

    fn grid(m: &CanalSurface, ns: usize, nt: usize, which: CurvatureSet) -> SurfaceGrid {
        sample_grid(m, ns, nt, which, &DiffConfig::default(), &Tolerances::default()).unwrap()
    }

    #[test]
    fn cylinder_grid_counts() {
        let g = grid(&cylinder(), 10, 12, CurvatureSet::ALL);
        assert_eq!(g.vertex_count(), 120);
        assert!(g.curvatures.iter().all(|c| c.k == CurvatureValue::Defined(0.0) || c.k.value() == Some(-0.0)));
        let obj = render_obj(&g, ObjOptions { triangulate: true, weld_seam: true }, NumberFormat::default());
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 120);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2 * 9 * 12);
        let quads = render_obj(&g, ObjOptions::default(), NumberFormat::default());
        assert_eq!(quads.lines().filter(|l| l.starts_with("f ")).count(), 9 * 12);
        let open = render_obj(&g, ObjOptions { triangulate: false, weld_seam: false }, NumberFormat::default());
        assert_eq!(open.lines().filter(|l| l.starts_with("f ")).count(), 9 * 11);
        let csv = render_csv(&g, NumberFormat::default());
        assert_eq!(csv.lines().count(), 121);
    }

    #[test]
    fn welded_mesh_edges_are_manifold() {
        use std::collections::HashMap;
        let g = grid(&cylinder(), 5, 6, CurvatureSet::FIRST_ORDER);
        let obj = render_obj(&g, ObjOptions { triangulate: true, weld_seam: true }, NumberFormat::default());
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for l in obj.lines().filter(|l| l.starts_with("f ")) {
            let v: Vec<usize> = l[2..].split(' ').map(|x| x.parse().unwrap()).collect();
            for k in 0..3 {
                let (a, b) = (v[k], v[(k + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        assert!(edges.values().all(|&n| n == 1 || n == 2));
        // only the two boundary circles are open
        assert_eq!(edges.values().filter(|&&n| n == 1).count(), 2 * 6);
    }

    #[test]
    fn unrequested_columns_are_undef() {
        let g = grid(&cylinder(), 3, 4, CurvatureSet::FIRST_ORDER);
        let rows = parse_csv(&render_csv(&g, NumberFormat::default())).unwrap();
        assert!(rows.iter().all(|r| r.k_ii.is_none() && r.h_ii.is_none() && r.k.is_some()));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let m = cylinder();
        let g = grid(&m, 4, 5, CurvatureSet::FIRST_ORDER);
        for r in parse_csv(&render_csv(&g, NumberFormat::default())).unwrap() {
            assert_eq!(m.point(r.s, r.t).unwrap(), r.point);
        }
    }

    #[test]
    fn number_format() {
        let f = NumberFormat::default();
        assert_eq!(f.fmt(0.25), "2.5000000000000000e-1");
        assert_eq!(f.fmt(-0.0), "0.0000000000000000e0");
        assert_eq!(NumberFormat::new(3).unwrap().fmt(1.0 / 3.0), "3.33e-1");
        assert!(NumberFormat::new(0).is_err());
    }

    #[test]
    fn unwritable_path() {
        let g = grid(&cylinder(), 2, 3, CurvatureSet::FIRST_ORDER);
        let err = write_obj(&g, Path::new("/nonexistent-dir/x.obj"), ObjOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
