use thiserror::Error;

/// Failure modes shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KgError {
    /// Inputs outside the physical domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no propagating channel: {0}")]
    NoPropagatingChannel(String),

    #[error("no propagating interior mode: q^2 = {q_squared:e} <= 0")]
    NoInteriorMode { q_squared: f64 },

    #[error("no real z0: radicand {radicand:e} < 0")]
    NoRealZ0 { radicand: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("oracle failure: {0}")]
    Oracle(String),
}

impl KgError {
    /// True for errors caused by the caller's physical parameters rather
    /// than by the numerics.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            KgError::Domain(_)
                | KgError::NoPropagatingChannel(_)
                | KgError::NoInteriorMode { .. }
                | KgError::NoRealZ0 { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, KgError>;
