use crate::C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate curve: branch points {a} and {b} are {distance:e} apart (tolerance {tolerance:e})")]
    DegenerateCurve {
        a: C64,
        b: C64,
        distance: f64,
        tolerance: f64,
    },
    #[error("leading coefficient must be 1, got {0}")]
    BadLeadingCoefficient(C64),
    #[error("coefficient list of length {0} is not 2g+2 for some g >= 1")]
    BadCoefficientCount(usize),
    #[error("quadrature failed for {what} after {nodes} nodes (estimated error {error:e})")]
    QuadratureFailure {
        what: String,
        nodes: usize,
        error: f64,
    },
    #[error("imaginary part of tau is not positive definite (smallest eigenvalue {0:e})")]
    NonPositiveImTau(f64),
    #[error("point lies on the theta divisor (|sigma| scale {0:e})")]
    OnThetaDivisor(f64),
    #[error("divisor point x = {x} coincides with branch point b_{r}")]
    BranchPointCollision { r: usize, x: C64 },
    #[error("integration path from infinity to {0} passes through a branch point")]
    PathThroughBranchPoint(C64),
    #[error("special divisor: Abel matrix condition number {0:e}")]
    SpecialDivisor(f64),
    #[error("step size collapsed to {step:e} at flow parameter {at}")]
    StepCollapse { step: f64, at: f64 },
    #[error("series diverges: rho = {0} >= 1")]
    SeriesDiverges(f64),
    #[error("zero speed: |dZ| = {0:e}")]
    ZeroSpeed(f64),
    #[error("sample is not unit speed (max deviation {0:e})")]
    NotUnitSpeed(f64),
    #[error("sample is not closed (endpoint gap {0:e})")]
    NotClosed(f64),
    #[error("no consistent mirror phase (residual {0:e})")]
    NoConsistentPhase(f64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("partition sum diverges: Re(beta E) = {0} <= 0")]
    DivergentSum(f64),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
