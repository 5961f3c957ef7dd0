use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("spectral radius {radius:.6e} exceeds 0.95 of the series radius {limit:.6e}")]
    RadiusExceeded { radius: f64, limit: f64 },
    #[error("spectrum meets the singular set i*pi*Z* (distance {distance:.3e})")]
    SpectrumOnSingularSet { distance: f64 },
    #[error("no evaluator applies: {0}")]
    EvaluationFailed(String),
    #[error("eigenvalue iteration did not converge")]
    EigenConvergence,
    #[error("singular matrix")]
    Singular,
    #[error("singular block (condition {condition:.3e})")]
    SingularBlock { condition: f64 },
    #[error("linear map is not invertible")]
    SingularMap,
    #[error("finite-difference stencil leaves the domain: {0}")]
    DomainViolation(String),
    #[error("subalgebra is not lagrangian (residual {0:.3e})")]
    NotLagrangian(f64),
    #[error("complement is not an isotropic complement (residual {0:.3e})")]
    NotIsotropicComplement(f64),
    #[error("map is not skew-symmetric (residual {0:.3e})")]
    NotSkew(f64),
    #[error("point outside the domain U: {0}")]
    OutOfDomain(String),
    #[error("quasi-bialgebra is not canonically compatible: {0}")]
    NotCanonicalCompatible(String),
    #[error("gauge is not l-equivariant (residual {0:.3e})")]
    NonEquivariantSigma(f64),
    #[error("cocycle is neither zero nor exact (residual {0:.3e})")]
    UnsupportedCocycle(f64),
    #[error("precondition failed: {what} (residual {residual:.3e})")]
    PreconditionFailed { what: String, residual: f64 },
    #[error("Lie algebra is not semisimple")]
    NotSemisimple,
    #[error("map is not an involutive automorphism (residual {0:.3e})")]
    NotInvolution(f64),
    #[error("mu lies on a singular hyperplane")]
    SingularMu,
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("catalog fixtures failed: {0}")]
    FixtureFailed(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
