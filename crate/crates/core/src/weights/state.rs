use super::EpsilonSchedule;
use crate::graph::LayeredGraph;

/// Decrement counts of a layered weight run. The weight of node `v` in
/// layer `j` is `(1 + eps_j)^(-k_v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightState {
    pub decrements: Vec<u32>,
    pub schedule: EpsilonSchedule,
    pub iterations_run: u64,
    pub max_iterations: u64,
    /// The last iteration performed no decrement.
    pub fixed_point: bool,
    layer: Vec<usize>,
}

impl WeightState {
    pub fn initial(layered: &LayeredGraph, schedule: EpsilonSchedule, max_iterations: u64) -> Self {
        WeightState {
            decrements: vec![0; layered.node_count()],
            schedule,
            iterations_run: 0,
            max_iterations,
            fixed_point: false,
            layer: layered.nodes().iter().map(|n| n.layer).collect(),
        }
    }

    pub fn log_weight(&self, v: usize) -> f64 {
        -(self.decrements[v] as f64) * self.schedule.log_base(self.layer[v])
    }

    pub fn log_weights(&self) -> Vec<f64> {
        (0..self.decrements.len()).map(|v| self.log_weight(v)).collect()
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.log_weight(v).exp()
    }

    /// `Lev(v) = T - k_v`.
    pub fn level(&self, v: usize) -> i64 {
        self.max_iterations as i64 - self.decrements[v] as i64
    }

    pub fn layer_of(&self, v: usize) -> usize {
        self.layer[v]
    }
}

/// Weights on the original DAG: one log-weight per offline node plus the
/// exponent base `2n`. The sink has log-weight 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DagWeights {
    pub names: Vec<String>,
    pub weight_log: Vec<f64>,
    pub rho_base: f64,
}

impl DagWeights {
    /// All weights 1.
    pub fn uniform(names: Vec<String>, rho_base: f64) -> Self {
        let n = names.len();
        DagWeights { names, weight_log: vec![0.0; n], rho_base }
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weight_log[v].exp()
    }

    /// Shifted so the smallest weight is 1.
    pub fn normalized(&self) -> DagWeights {
        let min = self.weight_log.iter().copied().fold(f64::INFINITY, f64::min);
        let min = if min.is_finite() { min } else { 0.0 };
        DagWeights {
            names: self.names.clone(),
            weight_log: self.weight_log.iter().map(|w| w - min).collect(),
            rho_base: self.rho_base,
        }
    }
}
