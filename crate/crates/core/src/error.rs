use thiserror::Error;

/// Error type shared by all modules of the crate. Numerical refusals carry
/// enough context (witness radii, offending pairs) to be actionable.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("kernel is not p-Lévy integrable: {reason}")]
    NotPLevy { reason: String },

    #[error("tail integral diverges (tail exponent {exponent} ≥ -d)")]
    DivergentTail { exponent: f64 },

    #[error("w saturates; φ undefined beyond r* = {radius:.6e}")]
    WSaturates { radius: f64 },

    #[error("curve is not invertible: flat region starting at {at:.6e}")]
    NotInvertible { at: f64 },

    #[error("not convex: midpoint test fails at (t₋, t, t₊) = ({0:.6e}, {1:.6e}, {2:.6e})", witness.0, witness.1, witness.2)]
    NotConvex { witness: (f64, f64, f64) },

    #[error("growth condition fails: witness pair (s, t) = ({0:.6e}, {1:.6e}); {reason}", witness.0, witness.1)]
    GrowthFails { witness: (f64, f64), reason: String },

    #[error("almost-decreasing constant degenerates: ν({0:.6e})/ν({1:.6e}) ≈ 0", witness.0, witness.1)]
    KappaDegenerate { witness: (f64, f64) },

    #[error("recovered kernel density is negative at radius {radius:.6e}")]
    NegativeDensity { radius: f64 },

    #[error("grid function has negative values; take the absolute value first")]
    NegativeValues,

    #[error("composite t ↦ ψ(t^q) is not convex; refusing the rescaled norm")]
    NonConvexComposite,

    #[error("Young function flagged possibly non-convex; apply the minorant correction before computing norms")]
    PossiblyNonConvex,

    #[error("domination φ₁(t) ≤ φ₂(ct) fails at t = {at:.6e}")]
    DominationFails { at: f64 },

    #[error("Luxemburg bisection bracket exhausted (modular never reaches 1 on the search range)")]
    BracketExhausted,

    #[error("quadrature did not converge: error estimate {estimate:.3e} exceeds budget")]
    QuadratureNotConverged { estimate: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("constant is infinite: {0}")]
    InfiniteConstant(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CoreError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CoreError::Invalid(msg.into())
    }
}

impl From<std::io::Error> for CoreError {
    fn from(e: std::io::Error) -> Self {
        CoreError::Io(e.to_string())
    }
}
