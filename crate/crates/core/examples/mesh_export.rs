//! Writes a helix tube as OBJ with a curvature CSV next to it.
//!
//! ```text
//! cargo run --example mesh_export -- /tmp/helix.obj
//! ```

use std::path::PathBuf;

use canal::curvature::CurvatureSet;
use canal::export::{parse_csv, sample_grid, write_csv, write_obj, ObjOptions};
use canal::prelude::*;

fn main() -> Result<()> {
    let out: PathBuf = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("helix-tube.obj"));
    let m = CanalSurface::new(
        CenterCurve::helix(2.0, 1.0, 0.0, 12.0)?,
        RadiusFamily::Sinusoidal { p: 0.5, q: 0.1, omega: 2.0 },
        QSign::Plus,
        ParamDomain::new(0.0, 12.0)?,
    )?;
    let grid = sample_grid(&m, 60, 24, CurvatureSet::ALL, &DiffConfig::default(), &Tolerances::default())?;
    write_obj(&grid, &out, ObjOptions { triangulate: true, weld_seam: true })?;
    let csv = out.with_extension("csv");
    write_csv(&grid, &csv)?;

    let text = std::fs::read_to_string(&csv).map_err(|e| Error::Io { path: csv.display().to_string(), message: e.to_string() })?;
    let rows = parse_csv(&text)?;
    let undefined = rows.iter().filter(|r| r.h_ii.is_none()).count();
    println!("{}: {} vertices", out.display(), grid.vertex_count());
    println!("{}: {} rows, {} without H_II", csv.display(), rows.len(), undefined);
    Ok(())
}
