use super::{DagWeights, WeightError, WeightState};
use crate::graph::{DagInstance, LayeredGraph, Vertex};

/// Outcome of moving layered weights onto the DAG.
#[derive(Debug, Clone, PartialEq)]
pub struct Transfer {
    pub weights: DagWeights,
    /// Largest `|ln(1+eps_j) / ln(1+eps_{j+1}) - 1/(2n)|` over consecutive
    /// layers spanned by a chain with a non-zero count.
    pub drift: f64,
}

/// Each DAG node takes the weight of its real copy. Fails if the copies of
/// some node disagree on their decrement count, since the DAG exponents then
/// no longer reproduce the layered routing.
pub fn transfer_to_dag(state: &WeightState, layered: &LayeredGraph, inst: &DagInstance) -> Result<Transfer, WeightError> {
    let sched = &state.schedule;
    let rho = sched.rho_base();
    let mut weight_log = vec![0.0; inst.node_count()];
    let mut drift: f64 = 0.0;
    for (origin, chain) in layered.chains() {
        let k = state.decrements[chain[0]];
        if chain.iter().any(|&c| state.decrements[c] != k) {
            return Err(WeightError::DependenceViolated(inst.vertex_name(origin).to_string()));
        }
        match origin {
            Vertex::Sink => {
                if k != 0 {
                    return Err(WeightError::DependenceViolated(inst.sink_name().to_string()));
                }
            }
            Vertex::Node(v) => {
                let real = *chain.last().unwrap();
                weight_log[v] = state.log_weight(real);
            }
        }
        if k > 0 {
            for w in chain.windows(2) {
                let (j, j1) = (layered.node(w[0]).layer, layered.node(w[1]).layer);
                let ratio = sched.log_base(j) / sched.log_base(j1);
                drift = drift.max((ratio - 1.0 / rho).abs());
            }
        }
    }
    let names = (0..inst.node_count()).map(|v| inst.name(v).to_string()).collect();
    Ok(Transfer { weights: DagWeights { names, weight_log, rho_base: rho }, drift })
}
