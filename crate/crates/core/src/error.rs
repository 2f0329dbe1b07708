use thiserror::Error;

use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid net: {0}")]
    InvalidNet(ValidationReport),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("cycle detected among features: {}", .0.join(", "))]
    CycleDetected(Vec<String>),

    #[error("outcome has {found} features, net has {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("outcomes must be distinct")]
    EqualOutcomes,

    #[error("state budget exceeded: more than {cap} outcomes visited")]
    StateBudgetExceeded { cap: usize },

    #[error("instance too large: {features} features exceeds the bound of {bound}")]
    InstanceTooLarge { features: usize, bound: usize },

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("variable x{var} out of range 1..={num_vars}")]
    VariableOutOfRange { var: usize, num_vars: usize },

    #[error("interconnecting net needs at least one input feature")]
    EmptyInterconnect,

    #[error("unknown lemma tag `{0}`")]
    UnknownLemma(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Budget and size failures signal that an instance is out of exact reach,
    /// as opposed to malformed input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::StateBudgetExceeded { .. } | Error::InstanceTooLarge { .. }
        )
    }
}
