//! Fundamental forms and all four curvatures at a few points of a torus.

use canal::curvature::{sample, CurvatureSample};
use canal::prelude::*;

fn main() -> Result<()> {
    let torus = CanalSurface::new(
        CenterCurve::circle(3.0, 0.0, 20.0)?,
        RadiusFamily::Constant { c: 1.0 },
        QSign::Plus,
        ParamDomain::new(0.0, 6.0)?,
    )?;

    for t in [0.0, 1.0, std::f64::consts::PI] {
        let f = torus.forms(1.0, t)?;
        let CurvatureSample { k, h, k_ii, k_ii_brioschi, h_ii } = sample(&torus, 1.0, t)?;
        println!("t = {t:.4}");
        println!("  E F G     = {:.6} {:.6} {:.6}", f.e_big, f.f_big, f.g_big);
        println!("  e f g     = {:.6} {:.6} {:.6}", f.e, f.f, f.g);
        println!("  K H       = {k} {h}");
        println!("  K_II      = {k_ii} (Brioschi {k_ii_brioschi})");
        println!("  H_II      = {h_ii}");
    }

    // K = cos t / (r (a + r cos t)) on a torus
    let k = gauss_curvature_closed(&torus, 2.0, 0.0, &Tolerances::default())?;
    assert!((k - 0.25).abs() < 1e-14);
    Ok(())
}
