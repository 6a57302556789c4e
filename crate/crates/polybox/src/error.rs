//! Error and resource-budget types shared by all modules.

use std::time::{Duration, Instant};

/// Errors surfaced by the engine.
///
/// `InvalidInput` maps to CLI exit code 3, `BudgetExceeded` to exit code 2,
/// and mismatches detected by verification commands to exit code 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown class name {0:?}")]
    UnknownClass(String),
    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("words are not pairwise dichotomous: {0}")]
    NotDichotomous(String),
    #[error("duplicate word in code: {0}")]
    DuplicateWord(String),
    #[error("grid too large: k*d = {kd} exceeds cap {cap}")]
    GridCapExceeded { kd: usize, cap: usize },
    #[error("denominator {denominator} exceeds cap {cap}")]
    DenominatorCapExceeded { denominator: u64, cap: u64 },
    #[error("resource budget exceeded after {nodes} search nodes")]
    BudgetExceeded { nodes: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Explicit resource budget for searches. Exceeding a budget is an error,
/// never a silent truncation: callers always learn that results are partial.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    /// Maximum number of search nodes (branch points) to expand.
    pub max_nodes: Option<u64>,
    /// Maximum wall-clock time for the whole search.
    pub max_seconds: Option<u64>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: None, max_seconds: None };

    pub fn nodes(max_nodes: u64) -> Budget {
        Budget { max_nodes: Some(max_nodes), max_seconds: None }
    }

    pub fn start(&self) -> BudgetMeter {
        BudgetMeter { budget: *self, nodes: 0, started: Instant::now() }
    }
}

/// Running meter for a budget. `tick` must be called once per search node;
/// the wall clock is only consulted every few thousand nodes to keep the
/// common path cheap.
#[derive(Debug, Clone)]
pub struct BudgetMeter {
    budget: Budget,
    nodes: u64,
    started: Instant,
}

impl BudgetMeter {
    pub fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if let Some(max) = self.budget.max_nodes {
            if self.nodes > max {
                return Err(Error::BudgetExceeded { nodes: self.nodes });
            }
        }
        if self.nodes % 8192 == 0 {
            if let Some(secs) = self.budget.max_seconds {
                if self.started.elapsed() > Duration::from_secs(secs) {
                    return Err(Error::BudgetExceeded { nodes: self.nodes });
                }
            }
        }
        Ok(())
    }

    pub fn nodes_used(&self) -> u64 {
        self.nodes
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}
