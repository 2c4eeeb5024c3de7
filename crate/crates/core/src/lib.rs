//! Canal surfaces in Euclidean 3-space.
//!
//! A canal surface is the envelope of spheres of radius r(s) centered on a
//! unit-speed curve α(s):
//!
//! ```text
//! C(s, t) = α(s) − R(s) T − Q(s) cos t N + Q(s) sin t B,   R = r r′,  Q = ±r√(1 − r′²)
//! ```
//!
//! The crate evaluates the fundamental forms and the curvatures K, H, K_II and
//! H_II, checks them against a finite-difference oracle, classifies surfaces
//! as flat / minimal / II-flat / II-minimal, and writes meshes.
//!
//! ```
//! use canal::prelude::*;
//!
//! let torus = CanalSurface::new(
//!     CenterCurve::circle(3.0, 0.0, 20.0)?,
//!     RadiusFamily::Constant { c: 1.0 },
//!     QSign::Plus,
//!     ParamDomain::new(0.0, 6.0)?,
//! )?;
//! let k = gauss_curvature_closed(&torus, 0.0, 0.0, &Tolerances::default())?;
//! assert!((k - 0.25).abs() < 1e-14);
//! # Ok::<(), canal::Error>(())
//! ```

pub mod canal;
pub mod classify;
pub mod curvature;
pub mod diff;
pub mod error;
pub mod export;
pub mod geometry;
mod jet;
pub mod oracle;
pub mod spec;
pub mod verify;

pub use error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;

pub mod prelude {
    pub use crate::canal::{CanalSurface, FormCoefficients, ParamDomain, SurfacePartials};
    pub use crate::classify::{classify, ClassificationReport, Verdict};
    pub use crate::curvature::{
        gauss_curvature, gauss_curvature_closed, mean_curvature, mean_curvature_closed, CurvatureValue, DiffConfig,
        Tolerances,
    };
    pub use crate::geometry::{CenterCurve, QSign, RadiusFamily};
    pub use crate::{Error, Result, Vec3};
}
