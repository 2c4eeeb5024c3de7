//! Center curves with exact Frenet data and radius families with exact
//! derivative jets.

mod curve;
mod radius;

pub use curve::{validate_unit_speed, CenterCurve, CurveFamily, CurveModel, FrenetData, UnitSpeedReport};
pub(crate) use radius::rq_jet_at;
pub use radius::{check_jet_consistency, rq_jet, JetConsistency, QSign, RQJet, RadiusFamily, RadiusJet, RadiusModel};
