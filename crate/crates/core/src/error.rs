//! Error type shared across the crate.

use thiserror::Error;

use crate::coords::SpacetimePoint;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor or operation received a parameter outside its contract.
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// Cylindrical radius must be non-negative.
    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(f64),

    /// An argument left the validated domain of a special function.
    #[error("{func}: argument {argument} outside validated domain ({requirement})")]
    OutsideDomain {
        func: &'static str,
        argument: String,
        requirement: &'static str,
    },

    /// A series failed to meet its tail bound within the term budget.
    #[error("series did not converge within {max_terms} terms")]
    SeriesNonConvergence { max_terms: usize },

    /// An evaluation point landed on (or a contour crossed) the principal
    /// branch cut of a square root.
    #[error("branch cut violation: {0}")]
    BranchCut(String),

    /// A finite-difference stencil point could not be evaluated.
    #[error("field evaluation failed at stencil point {point:?}: {source}")]
    Stencil {
        point: SpacetimePoint,
        #[source]
        source: Box<Error>,
    },

    /// A family/engine pairing that the compare command does not support.
    #[error("family `{family}` does not support engine `{engine}`")]
    UnsupportedEngine {
        family: &'static str,
        engine: &'static str,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }

    pub(crate) fn at_stencil(self, point: SpacetimePoint) -> Self {
        Error::Stencil {
            point,
            source: Box::new(self),
        }
    }
}
