//! Online arrival simulation: direct proportional routing, maximal routing
//! around blocked nodes, the adaptive bipartite algorithm, a greedy integral
//! baseline, and adversarial instance generators.

mod adaptive;
mod eta;
mod generators;
mod policy;
mod trace;

pub use adaptive::{simulate_adaptive_bipartite, AdaptiveConfig, AdaptiveRun};
pub use eta::{parameter_error, perturb_weights, ParameterError};
pub use generators::{gen_bipartite_lowerbound, gen_worstcase_dag, LowerBound, WorstCaseAdversary};
pub use policy::{
    blocked_closure, run_adversary, run_policy, simulate_direct, simulate_greedy, simulate_maximal, Adversary,
    DirectPolicy, GreedyPolicy, MaximalPolicy, OnlineState, Policy,
};
pub use trace::ArrivalTrace;

use crate::flow_eval::FlowError;
use crate::textio::ParseError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OnlineError {
    #[error("unknown impression type {0}")]
    UnknownType(String),
    #[error("the adaptive algorithm needs a single offline layer, found {0}")]
    NotBipartite(usize),
    #[error("predicted weights must be finite and cover every advertiser")]
    BadWeights,
    #[error("weight decrements exceeded {limit} after {arrivals} arrivals; instance violates the algorithm's assumptions")]
    NonTermination { limit: u64, arrivals: usize },
    #[error("type counts must be whole numbers to build a static trace (type {0})")]
    FractionalCount(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
