use thiserror::Error;

use crate::model::Regime;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The channel parameters sit exactly on a regime boundary, where only
    /// strict inequalities define physical states.
    #[error("boundary is unphysical: {0}")]
    BoundaryUnphysical(String),

    /// The intermediate-j window supports no normalizable state with finite
    /// momentum uncertainty.
    #[error("no bound state: {detail}")]
    NoBoundState { detail: String },

    /// A quantity that must be nonnegative in a valid regime came out negative.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("operation not defined for regime {regime:?}: {detail}")]
    Contract { regime: Regime, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    /// Order doubling disagrees beyond the allowed relative tolerance.
    #[error(
        "divergence suspected: order {order} gives {coarse:e}, order {fine} gives {fine_value:e}"
    )]
    DivergenceSuspected {
        order: usize,
        coarse: f64,
        fine: usize,
        fine_value: f64,
    },
}
