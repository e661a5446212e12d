//! Proportional allocation: every node splits the flow it keeps,
//! `min(Alloc_v, C_v)`, among its out-neighbours in proportion to their
//! weights. The value is what reaches the sink.

use crate::graph::{DagInstance, DistanceMap, LayeredGraph, Vertex};
use crate::weights::{DagWeights, WeightState};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("exponent base {rho}^{slack} on edges into {node} is not representable")]
    ExponentOverflow { node: String, rho: f64, slack: u32 },
    #[error("weights cover {got} nodes, instance has {expected}")]
    WeightMismatch { expected: usize, got: usize },
    #[error("count vector has {got} entries, instance has {expected} types")]
    CountMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Layered,
    DirectDag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowEntry {
    pub node: String,
    pub alloc: f64,
    pub truncated: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport {
    pub mode: Mode,
    pub entries: Vec<FlowEntry>,
    pub value: f64,
}

impl FlowReport {
    pub fn entry(&self, node: &str) -> Option<&FlowEntry> {
        self.entries.iter().find(|e| e.node == node)
    }
}

/// Adds `amount * softmax(logs)` to `alloc[targets]`.
fn spread(amount: f64, targets: &[usize], logs: impl Fn(usize) -> f64, alloc: &mut [f64], scratch: &mut Vec<f64>) {
    if amount == 0.0 || targets.is_empty() {
        return;
    }
    if let [only] = targets {
        alloc[*only] += amount;
        return;
    }
    scratch.clear();
    scratch.extend(targets.iter().map(|&t| logs(t)));
    let max = scratch.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for x in scratch.iter_mut() {
        *x = (*x - max).exp();
        total += *x;
    }
    for (&t, x) in targets.iter().zip(scratch.iter()) {
        alloc[t] += amount * x / total;
    }
}

/// Normalized proportions for a list of log-weights.
pub fn softmax(logs: &[f64]) -> Vec<f64> {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// Forward pass over a layered graph. Fills `alloc` and returns the value.
pub fn layered_forward(layered: &LayeredGraph, log_w: &[f64], counts: &[f64], caps: &[f64], alloc: &mut [f64]) -> f64 {
    alloc.iter_mut().for_each(|a| *a = 0.0);
    let mut scratch = Vec::new();
    for (t, &m) in counts.iter().enumerate() {
        spread(m, layered.entry(t), |v| log_w[v], alloc, &mut scratch);
    }
    let depth = layered.depth();
    let mut value = 0.0;
    for j in 1..=depth {
        for &v in layered.layer(j) {
            let kept = alloc[v].min(caps[v]);
            if j == depth {
                value += kept;
            } else {
                spread(kept, layered.out(v), |w| log_w[w], alloc, &mut scratch);
            }
        }
    }
    value
}

pub fn route_layered(layered: &LayeredGraph, weights: &WeightState, counts: &[f64]) -> FlowReport {
    route_layered_logs(layered, &weights.log_weights(), counts)
}

/// Layered routing from explicit log-weights.
pub fn route_layered_logs(layered: &LayeredGraph, log_w: &[f64], counts: &[f64]) -> FlowReport {
    let caps: Vec<f64> = layered.nodes().iter().map(|v| v.capacity.as_f64()).collect();
    let mut alloc = vec![0.0; layered.node_count()];
    let value = layered_forward(layered, log_w, counts, &caps, &mut alloc);
    let entries = (0..layered.node_count())
        .map(|v| FlowEntry { node: layered.label(v).to_string(), alloc: alloc[v], truncated: alloc[v].min(caps[v]) })
        .collect();
    FlowReport { mode: Mode::Layered, entries, value }
}

/// Effective log-weights on DAG edges: `weight_log(v) / (2n)^{d_uv}`.
#[derive(Debug, Clone)]
pub struct DagRouter {
    /// Per offline node: successors with their effective log-weights.
    pub node_out: Vec<Vec<(Vertex, f64)>>,
    /// Per impression type: neighbours with their effective log-weights.
    pub type_out: Vec<Vec<(usize, f64)>>,
}

impl DagRouter {
    pub fn new(inst: &DagInstance, weights: &DagWeights, dist: &DistanceMap) -> Result<Self, FlowError> {
        if weights.weight_log.len() != inst.node_count() {
            return Err(FlowError::WeightMismatch { expected: inst.node_count(), got: weights.weight_log.len() });
        }
        let rho = weights.rho_base;
        let eff = |v: Vertex, slack: u32| -> Result<f64, FlowError> {
            let w = match v {
                Vertex::Node(i) => weights.weight_log[i],
                Vertex::Sink => return Ok(0.0),
            };
            if slack == 0 {
                return Ok(w);
            }
            let p = rho.powi(slack as i32);
            if !p.is_finite() {
                return Err(FlowError::ExponentOverflow { node: inst.vertex_name(v).to_string(), rho, slack });
            }
            Ok(w / p)
        };
        let node_out = (0..inst.node_count())
            .map(|u| inst.successors(u).iter().map(|&v| Ok((v, eff(v, dist.edge_slack(u, v))?))).collect())
            .collect::<Result<_, FlowError>>()?;
        let type_out = inst
            .types()
            .iter()
            .map(|t| t.neighbors.iter().map(|&v| Ok((v, eff(Vertex::Node(v), dist.impression_slack(v))?))).collect())
            .collect::<Result<_, FlowError>>()?;
        Ok(DagRouter { node_out, type_out })
    }

    /// Fractions a unit at node `u` sends to each successor.
    pub fn node_fractions(&self, u: usize) -> Vec<(Vertex, f64)> {
        let out = &self.node_out[u];
        let p = softmax(&out.iter().map(|(_, l)| *l).collect::<Vec<_>>());
        out.iter().map(|(v, _)| *v).zip(p).collect()
    }

    pub fn type_fractions(&self, t: usize) -> Vec<(usize, f64)> {
        let out = &self.type_out[t];
        let p = softmax(&out.iter().map(|(_, l)| *l).collect::<Vec<_>>());
        out.iter().map(|(v, _)| *v).zip(p).collect()
    }
}

/// Per-node allocation in DAG mode: `(alloc per node, sink inflow)`.
pub fn dag_forward(inst: &DagInstance, router: &DagRouter, counts: &[f64]) -> (Vec<f64>, f64) {
    let n = inst.node_count();
    let mut alloc = vec![0.0; n];
    let mut sink = 0.0;
    for (t, &m) in counts.iter().enumerate() {
        if m == 0.0 {
            continue;
        }
        for (v, f) in router.type_fractions(t) {
            alloc[v] += m * f;
        }
    }
    for &u in inst.topological_order() {
        let kept = alloc[u].min(inst.capacity_f64(u));
        if kept == 0.0 {
            continue;
        }
        for (v, f) in router.node_fractions(u) {
            match v {
                Vertex::Node(j) => alloc[j] += kept * f,
                Vertex::Sink => sink += kept * f,
            }
        }
    }
    (alloc, sink)
}

/// Direct routing on the DAG at the instance's own counts.
pub fn route_dag(inst: &DagInstance, weights: &DagWeights, dist: &DistanceMap) -> Result<FlowReport, FlowError> {
    route_dag_counts(inst, weights, dist, &inst.counts_f64())
}

pub fn route_dag_counts(inst: &DagInstance, weights: &DagWeights, dist: &DistanceMap, counts: &[f64]) -> Result<FlowReport, FlowError> {
    if counts.len() != inst.types().len() {
        return Err(FlowError::CountMismatch { expected: inst.types().len(), got: counts.len() });
    }
    let router = DagRouter::new(inst, weights, dist)?;
    let (alloc, sink) = dag_forward(inst, &router, counts);
    let mut entries: Vec<FlowEntry> = (0..inst.node_count())
        .map(|v| FlowEntry { node: inst.name(v).to_string(), alloc: alloc[v], truncated: alloc[v].min(inst.capacity_f64(v)) })
        .collect();
    entries.push(FlowEntry { node: inst.sink_name().to_string(), alloc: sink, truncated: sink });
    Ok(FlowReport { mode: Mode::DirectDag, entries, value: sink })
}
