use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("recession ladder did not converge: {0}")]
    NonConvergent(String),
    #[error("anisotropy vanishes on a nonzero vector: {0}")]
    DegenerateAnisotropy(String),
    #[error("integrand has no finite H4 constant: {0}")]
    H4Violation(String),
    #[error("atom at {at} lies on the domain boundary")]
    AtomOnBoundary { at: f64 },
    #[error("divergence of the field does not match the measure: {0}")]
    DivergenceMismatch(String),
    #[error("measures are not mutually singular: {0}")]
    NonSingularPair(String),
    #[error("identity gap {gap:.3e} exceeds tolerance {tol:.3e}")]
    IdentityViolation { gap: f64, tol: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("singular quadrature: {0}")]
    Singularity(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
}

impl Error {
    /// True for errors caused by user input rather than by numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::InvalidFunction(_)
                | Error::InvalidMeasure(_)
                | Error::Parameter(_)
                | Error::UnknownKey(_)
                | Error::AtomOnBoundary { .. }
                | Error::NonSingularPair(_)
        )
    }
}
