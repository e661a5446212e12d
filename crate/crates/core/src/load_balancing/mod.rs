//! Restricted-assignment load balancing with proportional machine weights.
//!
//! Job `j` of size `p_j` may run on the machines `N(j)`; given weights `w`
//! it is split as `x_ij = w_i / sum_{i' in N(j)} w_i'`.

mod distribution;
mod file;
mod instance;
mod weights;

pub use distribution::{perturb_types, random_schedule, JobDistribution, JobOption};
pub use file::{
    parse_job_distribution, parse_schedule, read_machine_weights, write_job_distribution, write_machine_weights,
    write_schedule,
};
pub use instance::{fractional_assign, instance_ratio, opt_makespan, Job, LoadProfile, ScheduleInstance};
pub use weights::{
    iteration_rounds, lb_robustness_check, learn_machine_weights, machine_weight_iteration, makespan_weights,
    MachineWeights, RobustnessReport, WeightRun, DEFAULT_ROUNDS_CONSTANT,
};

use crate::textio::ParseError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LbError {
    #[error("job {0} has an empty neighbourhood")]
    EmptyNeighborhood(String),
    #[error("job {0} has a non-positive or non-finite size")]
    BadSize(String),
    #[error("job {job} references machine {machine}, only {machines} exist")]
    UnknownMachine { job: String, machine: usize, machines: usize },
    #[error("type {0} has zero total size on one side only")]
    UndefinedRatio(String),
    #[error("instances have {0} and {1} machines")]
    MachineMismatch(usize, usize),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("step {0:e} is too small for floating point")]
    UnderflowRisk(f64),
    #[error("base weights give makespan {alg}, above (1 + eps) OPT = {limit}")]
    BaseNotApproximate { alg: f64, limit: f64 },
    #[error("estimated E[OPT] = {expected} is below the floor {floor}")]
    OptFloor { expected: f64, floor: f64 },
    #[error("no samples given")]
    NoSamples,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
