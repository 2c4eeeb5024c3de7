//! Closed-form K and H against brute-force finite differences of the
//! parametrization, on a tube around a helix with varying radius.

use canal::oracle::{oracle_canal, OracleConfig};
use canal::prelude::*;

fn main() -> Result<()> {
    let m = CanalSurface::new(
        CenterCurve::helix(2.0, 1.0, 0.0, 6.0)?,
        RadiusFamily::Sinusoidal { p: 0.5, q: 0.1, omega: 1.3 },
        QSign::Minus,
        ParamDomain::new(0.0, 6.0)?,
    )?;
    let tol = Tolerances::default();
    let cfg = OracleConfig::default();
    let (mut dk, mut dh) = (0.0f64, 0.0f64);
    for i in 0..=12 {
        let s = 0.5 * i as f64;
        for j in 0..16 {
            let t = std::f64::consts::TAU * j as f64 / 16.0;
            let o = oracle_canal(&m, s, t, &cfg)?;
            let k = gauss_curvature_closed(&m, s, t, &tol)?;
            let h = mean_curvature_closed(&m, s, t, &tol)?;
            dk = dk.max((k - o.k).abs() / k.abs().max(1e-6));
            dh = dh.max((h - o.h).abs() / h.abs().max(1e-6));
        }
    }
    println!("worst relative gap: K {dk:.2e}, H {dh:.2e}");
    Ok(())
}
