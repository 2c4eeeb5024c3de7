//! K_II two ways, and the leading cos¹⁰ t coefficient of the H_II numerator.

use canal::curvature::{
    brioschi_kii, fit_trig_polynomial, hii_numerator, kii_closed, kii_coefficients, w10_coefficient, FitConfig,
};
use canal::prelude::*;

fn main() -> Result<()> {
    let tol = Tolerances::default();
    let cfg = DiffConfig::default();
    let torus = CanalSurface::new(
        CenterCurve::circle(3.0, 0.0, 20.0)?,
        RadiusFamily::Constant { c: 1.0 },
        QSign::Plus,
        ParamDomain::new(0.0, 6.0)?,
    )?;

    let n = kii_coefficients(&torus, 1.0)?;
    for (i, c) in n.n.iter().enumerate() {
        println!("n{i} = {:+.12} {:+.12} sin t", c.a, c.b);
    }
    for t in [0.3, 1.2, 2.5] {
        let a = brioschi_kii(&torus, 1.0, t, &cfg, &tol)?;
        let b = kii_closed(&torus, 1.0, t, &tol)?;
        println!("t = {t}: K_II Brioschi {a}, closed {b}");
    }

    let f = |t: f64| Ok(hii_numerator(&torus, 1.0, t, &cfg, &tol)?.value().unwrap_or(f64::NAN));
    let fit = fit_trig_polynomial(f, 10, FitConfig::default())?;
    println!("a10 = {:.10e}, w10 = {:.10e}, relative fit residual {:.1e}", fit.poly.a[10], w10_coefficient(&torus, 1.0)?, fit.relative_residual());
    Ok(())
}
