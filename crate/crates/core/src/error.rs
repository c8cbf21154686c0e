use thiserror::Error;

/// Errors produced while building quadrature rules.
///
/// Numeric payloads are reported as `f64` for diagnostics regardless of the
/// working precision.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree must be at least 1")]
    DegreeZero,
    #[error("alpha must be greater than -1, got {0}")]
    AlphaOutOfRange(f64),
    #[error("unsupported quadrature kind for this operation")]
    UnsupportedKind,

    #[error("fixed-point step requires positive coefficient, got A = {0}")]
    NonPositiveCoefficient(f64),
    #[error("fixed-point step requires negative coefficient, got A = {0}")]
    NonNegativeCoefficient(f64),
    #[error("degenerate state: y and y' both vanish at {0}")]
    DegenerateState(f64),
    #[error("atanh argument {0} outside (-1, 1); iterate not in convergence basin")]
    AtanhDomain(f64),
    #[error("no convergence after {max_iter} iterations at node index {node_index}")]
    MaxIterationsExceeded { node_index: usize, max_iter: u32 },
    #[error("iterate {0} left the evaluator's domain of validity")]
    BoundViolation(f64),

    #[error("Taylor series did not converge within {0} terms")]
    TermLimitExceeded(u32),
    #[error("target {target} outside convergence disc of series centered at {center}")]
    OutsideDisc { center: f64, target: f64 },

    #[error("ratio recurrence hit a zero denominator at x = {0}")]
    RatioBlowup(f64),
    #[error("continued fraction did not converge within {0} partial quotients")]
    CfNoConvergence(u32),
    #[error("assembled {got} nodes, expected {expected}")]
    CountMismatch { expected: usize, got: usize },
    #[error("derivative values mix normalization segments without a Taylor re-join")]
    InconsistentNormalization,

    #[error("derivative vanished at node {0}; corrupted sweep")]
    ZeroDerivative(f64),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("value {0} not representable at the working precision/range")]
    Unrepresentable(f64),
    #[error("malformed rule serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
