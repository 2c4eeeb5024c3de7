use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::jet::Taylor3;

/// r and its first four arc-length derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RadiusJet {
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
}

/// Offsets R = r r′ (along T) and Q = ±r√(1 − r′²) (in the normal plane),
/// each with derivatives up to third order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[allow(non_snake_case)]
pub struct RQJet {
    pub R: f64,
    pub R1: f64,
    pub R2: f64,
    pub R3: f64,
    pub Q: f64,
    pub Q1: f64,
    pub Q2: f64,
    pub Q3: f64,
}

/// Branch of the square root in Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum QSign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl QSign {
    pub fn value(self) -> f64 {
        match self {
            QSign::Plus => 1.0,
            QSign::Minus => -1.0,
        }
    }
}

/// Radius supplied by the caller. Jets must be analytic; nothing here
/// differentiates a black box.
pub trait RadiusModel: Send + Sync + fmt::Debug {
    fn jet(&self, s: f64) -> RadiusJet;
}

#[derive(Debug, Clone)]
pub enum RadiusFamily {
    /// r = c.
    Constant { c: f64 },
    /// r = c₁ s + c₂.
    Linear { c1: f64, c2: f64 },
    /// r = √(s² − 2c₁s + 2c₂). Along a straight center line this is the
    /// degenerate sphere-like family.
    SqrtQuadratic { c1: f64, c2: f64 },
    /// r = p + q sin(ω s).
    Sinusoidal { p: f64, q: f64, omega: f64 },
    Custom(Arc<dyn RadiusModel>),
}

impl RadiusFamily {
    /// Exact derivative jet at `s`.
    pub fn eval(&self, s: f64) -> Result<RadiusJet> {
        finite("s", s)?;
        let jet = match self {
            RadiusFamily::Constant { c } => RadiusJet { r: *c, ..Default::default() },
            RadiusFamily::Linear { c1, c2 } => RadiusJet { r: c1 * s + c2, r1: *c1, ..Default::default() },
            RadiusFamily::SqrtQuadratic { c1, c2 } => {
                let u = s * s - 2.0 * c1 * s + 2.0 * c2;
                if !(u > 0.0) {
                    return Err(Error::RadiusDomain { s, reason: "s² − 2c₁s + 2c₂ must be positive" });
                }
                let r = u.sqrt();
                // r r″ + r′² = 1 after differentiating r² = u twice
                let k = 2.0 * c2 - c1 * c1;
                let r1 = (s - c1) / r;
                let r2 = k / (r * r * r);
                let r3 = -3.0 * r2 * r1 / r;
                let r4 = -3.0 * (r3 * r1 + r2 * r2) / r + 3.0 * r2 * r1 * r1 / (r * r);
                RadiusJet { r, r1, r2, r3, r4 }
            }
            RadiusFamily::Sinusoidal { p, q, omega } => {
                let (sn, cs) = (omega * s).sin_cos();
                let w = *omega;
                RadiusJet {
                    r: p + q * sn,
                    r1: q * w * cs,
                    r2: -q * w * w * sn,
                    r3: -q * w * w * w * cs,
                    r4: q * w * w * w * w * sn,
                }
            }
            RadiusFamily::Custom(m) => m.jet(s),
        };
        for v in [jet.r, jet.r1, jet.r2, jet.r3, jet.r4] {
            finite("radius jet", v)?;
        }
        if jet.r <= 0.0 {
            return Err(Error::NonPositiveRadius { s, r: jet.r });
        }
        Ok(jet)
    }

    /// Value of r only, for finite-difference checks.
    pub fn value(&self, s: f64) -> Result<f64> {
        self.eval(s).map(|j| j.r)
    }
}

/// R = r r′ and Q = sign·r√(1 − r′²) with chain-rule derivatives.
pub fn rq_jet(jet: &RadiusJet, sign: QSign) -> Result<RQJet> {
    rq_jet_at(jet, sign, f64::NAN)
}

pub(crate) fn rq_jet_at(jet: &RadiusJet, sign: QSign, s: f64) -> Result<RQJet> {
    if !(jet.r1.abs() < 1.0) {
        return Err(Error::DegenerateQ { s, r1: jet.r1 });
    }
    let r = Taylor3::from_derivatives([jet.r, jet.r1, jet.r2, jet.r3]);
    let rp = Taylor3::from_derivatives([jet.r1, jet.r2, jet.r3, jet.r4]);
    let big_r = r * rp;
    let w = (Taylor3::constant(1.0) - rp * rp).sqrt();
    let big_q = (r * w).scale(sign.value());
    let [r0, r1, r2, r3] = big_r.derivatives();
    let [q0, q1, q2, q3] = big_q.derivatives();
    Ok(RQJet { R: r0, R1: r1, R2: r2, R3: r3, Q: q0, Q1: q1, Q2: q2, Q3: q3 })
}

/// Largest relative disagreement between a jet and five-point central
/// differences of r (and of the jet's own lower derivatives).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetConsistency {
    pub max_rel_error: f64,
    pub worst_order: usize,
}

pub fn check_jet_consistency(radius: &RadiusFamily, s: f64, h: f64) -> Result<JetConsistency> {
    let jet = radius.eval(s)?;
    let order = |j: &RadiusJet, k: usize| [j.r, j.r1, j.r2, j.r3, j.r4][k];
    let mut stencil = Vec::with_capacity(4);
    for k in [-2.0, -1.0, 1.0, 2.0] {
        stencil.push(radius.eval(s + k * h)?);
    }
    let exact = [jet.r1, jet.r2, jet.r3, jet.r4];
    let mut worst = JetConsistency { max_rel_error: 0.0, worst_order: 1 };
    for k in 1..=4 {
        let f = |i: usize| order(&stencil[i], k - 1);
        let fd = (f(0) - 8.0 * f(1) + 8.0 * f(2) - f(3)) / (12.0 * h);
        let scale = exact[k - 1].abs().max(jet.r.abs()).max(1.0);
        let err = (fd - exact[k - 1]).abs() / scale;
        if err > worst.max_rel_error {
            worst = JetConsistency { max_rel_error: err, worst_order: k };
        }
    }
    Ok(worst)
}
