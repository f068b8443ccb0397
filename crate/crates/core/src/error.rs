use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {z} lies outside the open unit disk")]
    OutsideDisk { z: Complex64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("map is not normalized (a1 = {a1})")]
    NotNormalized { a1: Complex64 },

    #[error("h' is degenerate at {at} (|h'| = {modulus:e})")]
    DegenerateDerivative { at: Complex64, modulus: f64 },

    #[error("affine normalization 1 + c*b1 is singular (|1 + c*b1| = {modulus:e})")]
    SingularNormalization { modulus: f64 },

    #[error("gamma pole at {x}")]
    Pole { x: Complex64 },

    #[error("hypergeometric series did not converge in {terms} terms (last tail estimate {tail:e})")]
    ConvergenceBudgetExceeded { terms: usize, tail: f64 },

    #[error("parameter domain violated: {0}")]
    ParameterDomain(String),

    #[error("sense-preservation fails at {witness} (J = {jacobian:e})")]
    NotSensePreserving { witness: Complex64, jacobian: f64 },

    #[error("coincident points z = zeta = {0}")]
    CoincidentPoints(Complex64),

    #[error("vanishing denominator at z = {z}, zeta = {zeta}")]
    VanishingDenominator { z: Complex64, zeta: Complex64 },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("quadrature failed to reach tolerance on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64 },

    #[error("degenerate polyline: repeated image point near {0}")]
    DegeneratePolyline(Complex64),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
