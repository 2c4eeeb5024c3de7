//! A caller-supplied radius along a caller-supplied center curve.

use std::sync::Arc;

use canal::geometry::{FrenetData, CurveModel, RadiusJet, RadiusModel};
use canal::prelude::*;

/// r = 1 + 0.1 s².
#[derive(Debug)]
struct Bulge;

impl RadiusModel for Bulge {
    fn jet(&self, s: f64) -> RadiusJet {
        RadiusJet { r: 1.0 + 0.1 * s * s, r1: 0.2 * s, r2: 0.2, r3: 0.0, r4: 0.0 }
    }
}

/// Circle of radius 4 in the xz-plane.
#[derive(Debug)]
struct Hoop;

impl CurveModel for Hoop {
    fn position(&self, s: f64) -> Vec3 {
        let (sn, cs) = (s / 4.0).sin_cos();
        Vec3::new(4.0 * cs, 0.0, 4.0 * sn)
    }

    fn frenet(&self, s: f64) -> FrenetData {
        let (sn, cs) = (s / 4.0).sin_cos();
        let t = Vec3::new(-sn, 0.0, cs);
        let n = Vec3::new(-cs, 0.0, -sn);
        FrenetData { t, n, b: t.cross(&n), kappa: 0.25, kappa_prime: 0.0, tau: 0.0, tau_prime: 0.0 }
    }
}

fn main() -> Result<()> {
    let m = CanalSurface::new(
        CenterCurve::custom(Arc::new(Hoop), -1.0, 3.0)?,
        RadiusFamily::Custom(Arc::new(Bulge)),
        QSign::Plus,
        ParamDomain::new(-1.0, 3.0)?,
    )?;
    let report = classify(&m, &Default::default());
    println!("family {:?}, max |K| {:.4}, max |H| {:.4}", report.family, report.max_abs_k, report.max_abs_h);
    println!("K(1, 0.5) = {:.10}", gauss_curvature_closed(&m, 1.0, 0.5, &Tolerances::default())?);
    Ok(())
}
