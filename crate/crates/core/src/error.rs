use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the numerical engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("image curve passes within {distance:e} of the origin")]
    OriginTooClose { distance: f64 },

    #[error("refinement exhausted at depth {depth} (requested tolerance {tol:e})")]
    RefinementExhausted { depth: u32, tol: f64 },

    #[error("function vanishes on the path near {at}")]
    ZeroOnPath { at: Complex64 },

    #[error("zero on the path of radius {radius}")]
    ZeroOnRadius { radius: f64 },

    #[error("phase unwrapping ({phase}) and f'/f quadrature ({quadrature}) disagree")]
    QuadratureMismatch { phase: f64, quadrature: f64 },

    #[error("closed-path index {value} is not within {tol:e} of an integer")]
    NonIntegerResult { value: f64, tol: f64 },

    #[error("region has no stated index bound")]
    UnsupportedRegion,

    #[error("declared zero {at} does not lie on radius {radius}")]
    ZeroOffRadius { at: Complex64, radius: f64 },

    #[error("epsilon extrapolation did not converge: {0:?}")]
    ExtrapolationDiverged(Vec<f64>),

    #[error("function has a zero near radius {radius}")]
    ZeroNearRadius { radius: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("Blaschke factor has a pole at {0}")]
    PoleAtZ(Complex64),

    #[error("Cayley transform pole at {0}")]
    PoleInput(Complex64),

    #[error("pointwise bound violated at (m={m}, n={n})")]
    BoundViolated { m: i64, n: u64 },

    #[error("tail bound {bound:e} exceeds requested {requested:e}")]
    TailNotCertified { bound: f64, requested: f64 },

    #[error("input is the origin")]
    OriginInput,

    #[error("|f| underflows before the order stabilizes (deepest reliable scale {deepest_scale:e})")]
    UnderflowDominated { deepest_scale: f64 },

    #[error("comparison function vanishes at {0}")]
    GVanishes(Complex64),

    #[error("profile is nonpositive at x = {0}")]
    AlphaNonpositive(f64),

    #[error("quadrature failed: {0}")]
    QuadratureFailed(String),

    #[error("leading coefficient is zero")]
    LeadingCoefficientZero,

    #[error("degenerate factory spec: {0}")]
    DegenerateSpec(String),

    #[error("search budget of {0} candidates exhausted")]
    BudgetExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable positive integer per variant, shared with the C interface.
    pub fn code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 1,
            Error::OriginTooClose { .. } => 2,
            Error::RefinementExhausted { .. } => 3,
            Error::ZeroOnPath { .. } => 4,
            Error::ZeroOnRadius { .. } => 5,
            Error::QuadratureMismatch { .. } => 6,
            Error::NonIntegerResult { .. } => 7,
            Error::UnsupportedRegion => 8,
            Error::ZeroOffRadius { .. } => 9,
            Error::ExtrapolationDiverged(_) => 10,
            Error::ZeroNearRadius { .. } => 11,
            Error::GridTooCoarse(_) => 12,
            Error::PoleAtZ(_) => 13,
            Error::PoleInput(_) => 14,
            Error::BoundViolated { .. } => 15,
            Error::TailNotCertified { .. } => 16,
            Error::OriginInput => 17,
            Error::UnderflowDominated { .. } => 18,
            Error::GVanishes(_) => 19,
            Error::AlphaNonpositive(_) => 20,
            Error::QuadratureFailed(_) => 21,
            Error::LeadingCoefficientZero => 22,
            Error::DegenerateSpec(_) => 23,
            Error::BudgetExhausted(_) => 24,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::OriginTooClose { .. } => "OriginTooClose",
            Error::RefinementExhausted { .. } => "RefinementExhausted",
            Error::ZeroOnPath { .. } => "ZeroOnPath",
            Error::ZeroOnRadius { .. } => "ZeroOnRadius",
            Error::QuadratureMismatch { .. } => "QuadratureMismatch",
            Error::NonIntegerResult { .. } => "NonIntegerResult",
            Error::UnsupportedRegion => "UnsupportedRegion",
            Error::ZeroOffRadius { .. } => "ZeroOffRadius",
            Error::ExtrapolationDiverged(_) => "ExtrapolationDiverged",
            Error::ZeroNearRadius { .. } => "ZeroNearRadius",
            Error::GridTooCoarse(_) => "GridTooCoarse",
            Error::PoleAtZ(_) => "PoleAtZ",
            Error::PoleInput(_) => "PoleInput",
            Error::BoundViolated { .. } => "BoundViolated",
            Error::TailNotCertified { .. } => "TailNotCertified",
            Error::OriginInput => "OriginInput",
            Error::UnderflowDominated { .. } => "UnderflowDominated",
            Error::GVanishes(_) => "GVanishes",
            Error::AlphaNonpositive(_) => "AlphaNonpositive",
            Error::QuadratureFailed(_) => "QuadratureFailed",
            Error::LeadingCoefficientZero => "LeadingCoefficientZero",
            Error::DegenerateSpec(_) => "DegenerateSpec",
            Error::BudgetExhausted(_) => "BudgetExhausted",
        }
    }
}
