//! JSON surface descriptions.
//!
//! ```json
//! {
//!   "curve": { "type": "circle", "a": 3.0 },
//!   "radius": { "type": "constant", "c": 1.0 },
//!   "q_sign": "+",
//!   "domain": { "s_min": 0.0, "s_max": 6.0 },
//!   "grid": { "ns": 20, "nt": 20 },
//!   "tolerances": { "ii": 1e-9 }
//! }
//! ```
//!
//! Unknown keys are rejected. `q_sign`, `grid` and `tolerances` are optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::canal::{CanalSurface, ParamDomain};
use crate::curvature::{ToleranceOverrides, Tolerances};
use crate::error::{Error, Result};
use crate::geometry::{CenterCurve, QSign, RadiusFamily};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Line {},
    Circle { a: f64 },
    Helix { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadiusSpec {
    Constant { c: f64 },
    Linear { c1: f64, c2: f64 },
    SqrtQuadratic { c1: f64, c2: f64 },
    Sinusoidal { p: f64, q: f64, omega: f64 },
}

impl RadiusSpec {
    pub fn family(&self) -> RadiusFamily {
        match *self {
            RadiusSpec::Constant { c } => RadiusFamily::Constant { c },
            RadiusSpec::Linear { c1, c2 } => RadiusFamily::Linear { c1, c2 },
            RadiusSpec::SqrtQuadratic { c1, c2 } => RadiusFamily::SqrtQuadratic { c1, c2 },
            RadiusSpec::Sinusoidal { p, q, omega } => RadiusFamily::Sinusoidal { p, q, omega },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub s_min: f64,
    pub s_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub ns: usize,
    pub nt: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { ns: 20, nt: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub curve: CurveSpec,
    pub radius: RadiusSpec,
    #[serde(default)]
    pub q_sign: QSign,
    pub domain: DomainSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

impl SurfaceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// The spec's overrides applied to the default thresholds.
    pub fn tolerances(&self) -> Tolerances {
        self.tolerances_over(Tolerances::default())
    }

    /// The spec's overrides applied to `base`.
    pub fn tolerances_over(&self, base: Tolerances) -> Tolerances {
        base.with(&self.tolerances.unwrap_or_default())
    }

    /// Builds the surface, checking r > 0 and |r′| < 1 on the domain.
    pub fn build(&self) -> Result<CanalSurface> {
        let domain = ParamDomain::new(self.domain.s_min, self.domain.s_max)?;
        if self.grid.ns < 2 || self.grid.nt < 3 {
            return Err(Error::Spec(format!("grid needs ns >= 2 and nt >= 3, got {} x {}", self.grid.ns, self.grid.nt)));
        }
        let (a, b) = (domain.s_min, domain.s_max);
        let curve = match self.curve {
            CurveSpec::Line {} => CenterCurve::line(a, b)?,
            CurveSpec::Circle { a: radius } => CenterCurve::circle(radius, a, b)?,
            CurveSpec::Helix { a: ha, b: hb } => CenterCurve::helix(ha, hb, a, b)?,
        };
        CanalSurface::new(curve, self.radius.family(), self.q_sign, domain)
    }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 6] = ["cylinder", "cone", "torus", "helix-tube", "variable-tube", "sphere-family"];

/// The reference surfaces used throughout the test suite.
pub fn builtin(name: &str) -> Option<SurfaceSpec> {
    let spec = |curve, radius, s_min, s_max| SurfaceSpec {
        curve,
        radius,
        q_sign: QSign::Plus,
        domain: DomainSpec { s_min, s_max },
        grid: GridSpec::default(),
        tolerances: None,
    };
    Some(match name {
        "cylinder" => spec(CurveSpec::Line {}, RadiusSpec::Constant { c: 1.0 }, 0.0, 2.0),
        "cone" => spec(CurveSpec::Line {}, RadiusSpec::Linear { c1: 0.5, c2: 1.0 }, 0.0, 2.0),
        "torus" => spec(CurveSpec::Circle { a: 3.0 }, RadiusSpec::Constant { c: 1.0 }, 0.0, 6.0),
        "helix-tube" => spec(CurveSpec::Helix { a: 2.0, b: 1.0 }, RadiusSpec::Constant { c: 0.5 }, 0.0, 6.0),
        "variable-tube" => spec(
            CurveSpec::Circle { a: 3.0 },
            RadiusSpec::Sinusoidal { p: 1.0, q: 0.2, omega: 1.0 },
            0.0,
            6.0,
        ),
        "sphere-family" => spec(CurveSpec::Line {}, RadiusSpec::SqrtQuadratic { c1: 0.0, c2: 0.5 }, 0.1, 2.0),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_spec() {
        let s = SurfaceSpec::from_json(
            r#"{"curve":{"type":"helix","a":2,"b":1},"radius":{"type":"sinusoidal","p":0.5,"q":0.1,"omega":1.3},
                "q_sign":"-","domain":{"s_min":0,"s_max":4},"grid":{"ns":5,"nt":8},"tolerances":{"k":1e-7}}"#,
        )
        .unwrap();
        assert_eq!(s.q_sign, QSign::Minus);
        assert_eq!(s.tolerances().k, 1e-7);
        assert_eq!(s.tolerances().ii, 1e-9);
        let strict = Tolerances::profile("strict").unwrap();
        assert_eq!(s.tolerances_over(strict).k, 1e-7);
        assert_eq!(s.tolerances_over(strict).ii, strict.ii);
        assert!(s.build().is_ok());
    }

    #[test]
    fn defaults() {
        let s = SurfaceSpec::from_json(
            r#"{"curve":{"type":"line"},"radius":{"type":"constant","c":1},"domain":{"s_min":0,"s_max":1}}"#,
        )
        .unwrap();
        assert_eq!(s.q_sign, QSign::Plus);
        assert_eq!(s.grid, GridSpec { ns: 20, nt: 20 });
        assert_eq!(s.tolerances(), Tolerances::default());
    }

    #[test]
    fn rejects_unknown_keys() {
        for bad in [
            r#"{"curve":{"type":"line"},"radius":{"type":"constant","c":1},"domain":{"s_min":0,"s_max":1},"extra":1}"#,
            r#"{"curve":{"type":"line","a":1},"radius":{"type":"constant","c":1},"domain":{"s_min":0,"s_max":1}}"#,
            r#"{"curve":{"type":"spiral"},"radius":{"type":"constant","c":1},"domain":{"s_min":0,"s_max":1}}"#,
            r#"{"curve":{"type":"line"},"radius":{"type":"constant","c":1},"domain":{"s_min":0,"s_max":1,"x":0}}"#,
            r#"{"curve":{"type":"line"},"radius":{"type":"constant","c":1},"domain":{"s_min":0,"s_max":1},"tolerances":{"kk":1}}"#,
        ] {
            assert!(matches!(SurfaceSpec::from_json(bad), Err(Error::Spec(_))), "{bad}");
        }
    }

    #[test]
    fn steep_radius_is_degenerate() {
        let s = SurfaceSpec::from_json(
            r#"{"curve":{"type":"line"},"radius":{"type":"linear","c1":1.5,"c2":4},"domain":{"s_min":0,"s_max":1}}"#,
        )
        .unwrap();
        assert!(matches!(s.build(), Err(Error::DegenerateQ { .. })));
    }

    #[test]
    fn builtins_round_trip() {
        for name in BUILTIN_NAMES {
            let spec = builtin(name).unwrap();
            assert_eq!(SurfaceSpec::from_json(&spec.to_json()).unwrap(), spec);
        }
        assert!(builtin("klein-bottle").is_none());
    }
}
