use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("constant term {modulus:e} is below tolerance; series is not invertible")]
    NearZeroConstantTerm { modulus: f64 },

    #[error("root branch requires constant term 1, found {found}")]
    BranchBase { found: Complex64 },

    #[error("f vanishes or has a pole at z = {z}")]
    PoleOrZeroHit { z: Complex64 },

    #[error("function nearly vanishes on |z| = {radius} (min modulus {min_modulus:e}); perturb the radius")]
    BoundaryZero { radius: f64, min_modulus: f64 },

    #[error("|a2| = {modulus} does not exceed 1 + lambda = {bound}; the iteration is not a contraction")]
    NotContracting { modulus: f64, bound: f64 },

    #[error("coefficient b_{index} = {value} is negative")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("bracket [{lo}, {hi}] does not enclose a sign change")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("quadratic and linear coefficients both vanish")]
    DegenerateQuadratic,

    #[error("limacon does not cross the unit circle transversally")]
    NoIntersection,

    #[error("value {c} is attained by f in the disk")]
    ValueAttained { c: Complex64 },

    #[error("z/f has {zero_count} zero(s) in |z| < {radius}")]
    NonvanishingViolated { zero_count: i64, radius: f64 },

    #[error("weight constraint violated: {0}")]
    WeightConstraint(String),

    #[error("{0} consecutive rejections while sampling members")]
    RejectionBudgetExceeded(usize),

    #[error("invalid Schwarz generator: {0}")]
    InvalidGenerator(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("operation needs a {0} backed map")]
    UnsupportedBacking(&'static str),

    #[error("unknown builtin function {0:?}")]
    UnknownBuiltin(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
