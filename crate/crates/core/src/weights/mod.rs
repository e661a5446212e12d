//! Weight computation: the bipartite decrease-only iteration, the layered
//! framework with forced decreases, epsilon schedules and the transfer of
//! layered weights back to the original DAG.

mod bipartite;
mod file;
mod framework;
mod schedule;
mod state;
mod transfer;

pub use bipartite::{bipartite_default_iterations, bipartite_weights};
pub use file::{read_weight_file, write_dag_weights, write_weight_file, LayeredPart, WeightFile};
pub use framework::{cond, d_layer_weights, d_layer_weights_observed, three_layer_weights, IterationView};
pub use schedule::{make_exact_schedule, make_schedule, EpsilonSchedule, ScheduleKind, UNDERFLOW_LIMIT};
pub use state::{DagWeights, WeightState};
pub use transfer::{transfer_to_dag, Transfer};

use crate::textio::ParseError;
use thiserror::Error;

/// Default hard limit on weight iterations.
pub const DEFAULT_ITERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("smallest layer epsilon {epsilon_min:e} is below {limit:e}; instance too deep or wide")]
    UnderflowRisk { epsilon_min: f64, limit: f64 },
    #[error("copies of {0} hold different decrement counts")]
    DependenceViolated(String),
    #[error("expected {expected} offline layers, found {got}")]
    WrongDepth { expected: usize, got: usize },
    #[error("weight file does not match the instance: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
