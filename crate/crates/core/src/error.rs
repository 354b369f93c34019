use alloc::boxed::Box;

use crate::model::SteadyState;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error(
        "steady state did not converge after {} iterations (residual {:e})",
        last.iterations,
        last.residual
    )]
    NonConvergence { last: SteadyState },

    #[error("matrix is singular to working precision (condition estimate {condition:e})")]
    SingularMatrix { condition: f64 },

    #[error("eigenvalue iteration did not converge")]
    EigenFailure,

    #[error("dynamics matrix is already in the normal-mode basis")]
    BasisError,

    #[error("both router orientations pass; thresholds are too loose")]
    Ambiguous,

    #[error("invalid sweep grid: {0}")]
    InvalidGrid(&'static str),

    #[error("unstable operating point at grid index {index} (min Re λ = {min_re:e})")]
    UnstablePoint { index: usize, min_re: f64 },

    #[error("at grid index {index}: {source}")]
    AtGridPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::InvalidParameter { .. }
            | Error::InvalidGrid(_)
            | Error::BasisError
            | Error::Ambiguous => false,
            Error::AtGridPoint { source, .. } => source.is_numerical(),
            _ => true,
        }
    }
}
