use thiserror::Error;

/// Every failure mode of the library. Variants carry enough context to tell
/// which guard tripped; numeric values are rendered with a few digits only.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("duplicate interpolation node at index {0} and {1}")]
    DuplicateNode(usize, usize),
    #[error("holdout sample {index} misses the interpolant by {residual:.3e} (tol {tol:.1e})")]
    HoldoutMismatch { index: usize, residual: f64, tol: f64 },
    #[error("singular 2x2 matrix: |det| = {0:.3e}")]
    SingularMatrix(f64),
    #[error("polynomial does not have the expected profile: {0}")]
    ProfileMismatch(String),
    #[error("divided difference taken at x = 0")]
    ZeroNode,
    #[error("lattice base q = 1")]
    DegenerateBase,
    #[error("infinite q-product needs |q| < 1")]
    DivergentBase,
    #[error("integrand not finite at lattice point {0}")]
    NonFiniteIntegrand(String),
    #[error("zero argument passed to {0}")]
    ZeroArgument(&'static str),
    #[error("pole hit in {0}")]
    PoleHit(&'static str),
    #[error("weight has a pole at x = {0}")]
    WeightPole(String),
    #[error("factor {0} vanishes at the evaluation point")]
    FactorVanishes(&'static str),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("Hankel determinant of order {0} vanishes")]
    DegenerateHankel(usize),
    #[error("index {index} outside 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("point {0} lies on the support lattice")]
    OnSupportLattice(String),
    #[error("weight vanishes at x = {0}")]
    WeightZero(String),
    #[error("Y matrix is singular at x = {0}")]
    SingularY(String),
    #[error("lambda = 0")]
    ZeroLambda,
    #[error("singular configuration: {0}")]
    SingularConfiguration(&'static str),
    #[error("excluded value: {0}")]
    ExcludedValue(&'static str),
    #[error("denominator vanishes: {0}")]
    DenominatorZero(&'static str),
    #[error("singular step at index {step}: {locus}")]
    SingularStep { step: usize, locus: &'static str },
    #[error("spectral (1,2) entry vanishes at a shifted point")]
    ZeroTheta,
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
