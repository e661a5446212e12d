//! Impression-type distributions, sampling, the averaged-instance learner,
//! Monte Carlo evaluation and instance-robustness sweeps.

mod distribution;
mod learner;
mod robustness;

pub use distribution::{parse_distribution, random_iid_bipartite, write_distribution, DrawKind, TypeDistribution};
pub use learner::{
    averaged_instance, averaged_instance_with, check_learnability, estimate_expected_value, instance_distance,
    learn_weights, sample_count, sample_instance, Estimate, InstanceVector, LearnedWeights, Rounding,
};
pub use robustness::{random_perturbations, robustness_sweep, SweepRow};

use crate::flow_eval::FlowError;
use crate::graph::GraphError;
use crate::online::OnlineError;
use crate::textio::ParseError;
use crate::weights::WeightError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearningError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("no samples given")]
    NoSamples,
    #[error("unknown impression type {0}")]
    UnknownType(String),
    #[error("{what} of node {node} is {value}, below the required {floor}")]
    AssumptionViolated { node: String, what: &'static str, value: f64, floor: f64 },
    #[error("base weights reach only {ratio:.6} of the optimum, below 1 - eps = {required:.6}")]
    BaseNotApproximate { ratio: f64, required: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Online(#[from] OnlineError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
