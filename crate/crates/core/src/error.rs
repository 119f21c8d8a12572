use thiserror::Error;

/// Errors reported by generators, samplers and graph statistics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("empty range [{lo}, {hi})")]
    EmptyRange { lo: u64, hi: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("degree sequence is not graphical")]
    NonGraphical,

    #[error("budget of {0} attempts exceeded")]
    BudgetExceeded(u64),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("node {node} out of range for graph with {n} nodes")]
    OutOfRange { node: u64, n: u64 },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid trade: {0}")]
    InvalidTrade(String),
}

impl GraphError {
    /// True for errors caused by parameters that admit no output at all.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, GraphError::Infeasible(_) | GraphError::NonGraphical)
    }
}

pub type Result<T, E = GraphError> = std::result::Result<T, E>;

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GraphError::InvalidProbability(p))
    }
}
