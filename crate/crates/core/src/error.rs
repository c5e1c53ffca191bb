use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// |τ(p)| p^{-11/2} exceeded 2; only possible if τ was computed wrongly.
    #[error("Ramanujan bound violated at p = {p}: |t_p| = {t}")]
    RamanujanBound { p: u64, t: f64 },

    #[error("singular local factor: {0}")]
    Singular(String),

    #[error("series does not converge: {0}")]
    Divergent(String),

    /// A numerical result could not be certified to the requested tolerance.
    #[error("tolerance not met: {0}")]
    Tolerance(String),

    /// A finite oracle did not stabilize where the theory says it must.
    #[error("stabilization failure: {0}")]
    Stabilization(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
