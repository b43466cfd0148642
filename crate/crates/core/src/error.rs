use thiserror::Error;

/// Errors produced by the solver pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    /// Argument outside the legal evaluation domain.
    #[error("argument x = {x} lies outside [-1, 1]")]
    OutsideInterval { x: f64 },

    /// Potentials are singular at the origin and undefined for r <= 0.
    #[error("potential evaluated at r = {r}; requires r > 0")]
    PotentialDomain { r: f64 },

    /// Newton iteration for a collocation node failed to settle.
    #[error("node {index} of order-{order} Lobatto set did not converge in {max_iter} iterations")]
    NodeConvergence {
        order: usize,
        index: usize,
        max_iter: usize,
    },

    /// Matrix handed to the eigensolver is not symmetric within tolerance.
    #[error("matrix asymmetry {deviation:.3e} exceeds tolerance {tolerance:.3e}")]
    NotSymmetric { deviation: f64, tolerance: f64 },

    /// QL iteration exceeded its sweep budget on one eigenvalue.
    #[error("QL iteration failed to converge for eigenvalue {index} after {max_sweeps} sweeps")]
    EigenIterationLimit { index: usize, max_sweeps: usize },

    /// Grid-stability escalation exhausted without the requested agreement.
    /// Signals an unbound or critically screened state.
    #[error(
        "state n={n}, l={l} not converged: best agreement {best_digits} significant digits \
         (need >= {required_digits}) after full grid escalation"
    )]
    NotConverged {
        n: u32,
        l: u32,
        best_digits: u32,
        required_digits: u32,
    },

    /// Critical-screening search could not establish an unbound upper bracket.
    #[error("state n={n}, l={l} is still bound at delta = {delta}; no upper bracket")]
    NoUpperBracket { n: u32, l: u32, delta: f64 },

    /// Critical-screening search never found a bound lower bracket.
    #[error("state n={n}, l={l} not bound anywhere down to delta = {delta}")]
    NoLowerBracket { n: u32, l: u32, delta: f64 },

    /// A caller violated an operation precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed input text (potential strings, state labels, golden data).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SolverError>;
