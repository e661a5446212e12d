//! The full offline pipeline: distances, layered reduction, layered weights
//! and transfer back to the DAG.

use crate::graph::{longest_distances, reduce_to_layered, DagInstance, DistanceMap, LayeredGraph};
use crate::weights::{
    bipartite_default_iterations, d_layer_weights, make_exact_schedule, make_schedule, transfer_to_dag, DagWeights,
    EpsilonSchedule, ScheduleKind, WeightError, WeightState, DEFAULT_ITERATION_CAP,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub epsilon: f64,
    /// Explicit iteration budget; the default comes from the schedule.
    pub max_iterations: Option<u64>,
    pub iteration_cap: u64,
    pub schedule: ScheduleKind,
}

impl PipelineConfig {
    pub fn new(epsilon: f64) -> Self {
        PipelineConfig { epsilon, max_iterations: None, iteration_cap: DEFAULT_ITERATION_CAP, schedule: ScheduleKind::Exact }
    }

    pub fn with_max_iterations(mut self, t: u64) -> Self {
        self.max_iterations = Some(t);
        self
    }

    pub fn with_schedule(mut self, kind: ScheduleKind) -> Self {
        self.schedule = kind;
        self
    }
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub dist: DistanceMap,
    pub layered: LayeredGraph,
    pub state: WeightState,
    pub dag_weights: DagWeights,
    pub drift: f64,
}

impl PipelineRun {
    pub fn schedule(&self) -> &EpsilonSchedule {
        &self.state.schedule
    }
}

/// Schedule for a layered graph; empty graphs get a one-layer placeholder.
pub fn schedule_for(layered: &LayeredGraph, eps: f64, kind: ScheduleKind) -> Result<EpsilonSchedule, WeightError> {
    let d = layered.depth().max(1);
    let n = layered.max_layer_size().max(1);
    match kind {
        ScheduleKind::Linear => make_schedule(d, n, eps),
        ScheduleKind::Exact => make_exact_schedule(d, n, eps),
    }
}

/// Default iteration budget: the bipartite formula for one layer, the
/// layered formula otherwise, both capped.
pub fn default_iterations(layered: &LayeredGraph, schedule: &EpsilonSchedule, cap: u64) -> u64 {
    if layered.depth() <= 1 {
        bipartite_default_iterations(schedule.n(), schedule.top_epsilon()).min(cap)
    } else {
        schedule.default_iterations(cap)
    }
}

pub fn compute_dag_weights(inst: &DagInstance, cfg: &PipelineConfig) -> Result<PipelineRun, WeightError> {
    let dist = longest_distances(inst);
    let layered = reduce_to_layered(inst, &dist);
    let schedule = schedule_for(&layered, cfg.epsilon, cfg.schedule)?;
    let t = cfg.max_iterations.unwrap_or_else(|| default_iterations(&layered, &schedule, cfg.iteration_cap));
    let state = if layered.depth() == 0 {
        WeightState::initial(&layered, schedule, t)
    } else {
        d_layer_weights(&layered, &schedule, t)?
    };
    let transfer = transfer_to_dag(&state, &layered, inst)?;
    Ok(PipelineRun { dist, layered, state, dag_weights: transfer.weights, drift: transfer.drift })
}
