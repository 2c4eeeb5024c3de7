use thiserror::Error;

/// Errors raised while evaluating or analysing a canal surface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter s = {s} lies outside [{s_min}, {s_max}]")]
    OutOfDomain { s: f64, s_min: f64, s_max: f64 },

    #[error("non-finite parameter ({what} = {value})")]
    NonFinite { what: &'static str, value: f64 },

    #[error("radius must be positive, got r({s}) = {r}")]
    NonPositiveRadius { s: f64, r: f64 },

    #[error("radius family undefined at s = {s}: {reason}")]
    RadiusDomain { s: f64, reason: &'static str },

    /// |r'| >= 1 makes Q = ±r√(1−r'²) vanish or become imaginary; the
    /// envelope collapses (the radius is locally r = ±s + c).
    #[error("degenerate-Q: |r'({s})| = {r1} >= 1, the radius behaves like r = ±s + c")]
    DegenerateQ { s: f64, r1: f64 },

    #[error("center curve is not unit speed at s = {s}: |α'(s)| = {speed}")]
    NotUnitSpeed { s: f64, speed: f64 },

    #[error("invalid curve parameters: {0}")]
    InvalidCurve(String),

    #[error("invalid radius parameters: {0}")]
    InvalidRadius(String),

    /// EG − F² at or below the degeneracy threshold. For canal surfaces this
    /// happens where Q = 0 or on the excluded radius families r = ±s + c and
    /// r = √(s² − 2c₁s + 2c₂) along a straight center line.
    #[error("degenerate first fundamental form at (s, t) = ({s}, {t}): EG − F² = {area2}")]
    DegenerateFirstForm { s: f64, t: f64, area2: f64 },

    #[error("finite-difference stencil left the evaluable region at s = {s}: {source}")]
    StencilOutOfDomain { s: f64, source: Box<Error> },

    #[error("rank-deficient trigonometric fit: {samples} samples for {unknowns} unknowns (rank {rank})")]
    RankDeficientFit { samples: usize, unknowns: usize, rank: usize },

    #[error("non-finite sample in trigonometric fit at t = {t}")]
    NonFiniteSample { t: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid surface spec: {0}")]
    Spec(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Exit status used by the command-line tool: 1 for I/O, 4 for a
    /// degenerate surface, 3 for anything wrong with the input itself.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Io { .. } => 1,
            Error::StencilOutOfDomain { source, .. } => source.exit_code(),
            Error::DegenerateQ { .. }
            | Error::DegenerateFirstForm { .. }
            | Error::NonPositiveRadius { .. }
            | Error::RadiusDomain { .. }
            | Error::RankDeficientFit { .. }
            | Error::NonFiniteSample { .. } => 4,
            _ => 3,
        }
    }
}

pub(crate) fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
