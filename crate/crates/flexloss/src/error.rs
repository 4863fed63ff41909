use crate::model::FlexibilityDesign;

/// Unified error type for the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter lies outside its admissible range. Names exactly one
    /// offending field (the first violation in declaration order).
    #[error("domain error on `{field}`: {reason}")]
    Domain {
        /// Name of the offending parameter (`"rho"`, `"k"`, `"gamma"`, ...).
        field: &'static str,
        /// Human-readable description of the violated constraint.
        reason: String,
    },

    /// The requested operation is not defined for this design.
    #[error("operation not supported for the {0} design")]
    UnsupportedDesign(FlexibilityDesign),

    /// The chain has no unique stationary distribution reachable by an
    /// ordinary solve (the state space decomposes under `gamma = 0`).
    #[error("singular chain: {0}")]
    SingularChain(String),

    /// A closed form was requested outside the parameter slice it covers.
    #[error("closed form requires {requirement}, got {actual}")]
    CaseMismatch {
        /// The slice the closed form covers, e.g. `"gamma == 1"`.
        requirement: &'static str,
        /// The offending actual value, e.g. `"gamma = 0.5"`.
        actual: String,
    },

    /// A root search could not certify its bracket or its result.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// The computed thresholds violate their proven ordering.
    #[error("threshold ordering violated: {0}")]
    OrderingViolation(String),

    /// The queried `gamma` is too close to a threshold to rank the designs.
    #[error(
        "gamma = {gamma} lies within {tol:e} of threshold {threshold_name} = {threshold}; \
         the design ranking is a tie at this resolution"
    )]
    TieBreakUnresolved {
        /// The queried prolonged-rate coefficient.
        gamma: f64,
        /// Which threshold was hit (`"gamma_g"`, `"gamma_b"`, `"gamma_r"`).
        threshold_name: &'static str,
        /// Value of that threshold.
        threshold: f64,
        /// Half-width of the tie window.
        tol: f64,
    },

    /// The regime predicted from the thresholds disagrees with a direct
    /// throughput comparison (indicates a numerical breakdown; never
    /// expected for validated inputs).
    #[error("regime prediction disagrees with direct comparison: {0}")]
    InconsistentOrdering(String),

    /// A simulation or sweep configuration is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Shorthand for a [`Error::Domain`] value.
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }
}
