use super::{ArrivalTrace, OnlineError};
use crate::flow_eval::{dag_forward, DagRouter};
use crate::graph::{longest_distances, DagInstance, Vertex};
use crate::weights::DagWeights;

/// Residuals at or below this are treated as exhausted.
const EXHAUSTED: f64 = 1e-12;

/// Mutable state of one online run.
#[derive(Debug, Clone, PartialEq)]
pub struct OnlineState {
    pub capacity: Vec<f64>,
    pub residual: Vec<f64>,
    /// Flow routed through each node so far.
    pub used: Vec<f64>,
    pub blocked: Vec<bool>,
    pub value: f64,
    /// Delivered fraction of each processed arrival.
    pub gamma: Vec<f64>,
    pub arrivals: Vec<usize>,
    /// Flow of the most recent arrival into each node, straight from the impression.
    pub last_entry_flow: Vec<f64>,
    /// Flow of the most recent arrival on each edge, aligned with
    /// `DagInstance::successors`.
    pub last_out_flow: Vec<Vec<f64>>,
}

impl OnlineState {
    pub fn new(inst: &DagInstance) -> Self {
        let capacity: Vec<f64> = (0..inst.node_count()).map(|v| inst.capacity_f64(v)).collect();
        let blocked = blocked_closure(inst, &capacity);
        OnlineState {
            residual: capacity.clone(),
            capacity,
            used: vec![0.0; inst.node_count()],
            blocked,
            value: 0.0,
            gamma: Vec::new(),
            arrivals: Vec::new(),
            last_entry_flow: vec![0.0; inst.node_count()],
            last_out_flow: (0..inst.node_count()).map(|u| vec![0.0; inst.successors(u).len()]).collect(),
        }
    }

    fn clear_last(&mut self) {
        self.last_entry_flow.iter_mut().for_each(|x| *x = 0.0);
        for row in &mut self.last_out_flow {
            row.iter_mut().for_each(|x| *x = 0.0);
        }
    }

    /// True if every arrival that is not fully served has all of its
    /// neighbours blocked.
    pub fn is_maximal(&self, inst: &DagInstance) -> bool {
        self.arrivals.iter().zip(&self.gamma).all(|(&t, &g)| {
            g >= 1.0 - 1e-9 || inst.types()[t].neighbors.iter().all(|&v| self.blocked[v])
        })
    }

    /// Path followed by the largest share of the last arrival's flow, ties to
    /// the lowest node index.
    pub fn heaviest_last_path(&self, inst: &DagInstance) -> Vec<usize> {
        let argmax = |xs: &[f64]| {
            xs.iter()
                .enumerate()
                .filter(|(_, x)| **x > 0.0)
                .fold(None, |best: Option<(usize, f64)>, (i, &x)| match best {
                    Some((_, b)) if b >= x => best,
                    _ => Some((i, x)),
                })
                .map(|(i, _)| i)
        };
        let mut path = Vec::new();
        let mut cur = argmax(&self.last_entry_flow);
        while let Some(u) = cur {
            path.push(u);
            cur = argmax(&self.last_out_flow[u]).and_then(|k| match inst.successors(u)[k] {
                Vertex::Node(j) => Some(j),
                Vertex::Sink => None,
            });
        }
        path
    }
}

/// A node is blocked when its residual is exhausted or every successor is
/// blocked. The sink is never blocked.
pub fn blocked_closure(inst: &DagInstance, residual: &[f64]) -> Vec<bool> {
    let mut blocked = vec![false; inst.node_count()];
    for &u in inst.topological_order().iter().rev() {
        blocked[u] = residual[u] <= EXHAUSTED
            || inst.successors(u).iter().all(|v| match v {
                Vertex::Node(j) => blocked[*j],
                Vertex::Sink => false,
            });
    }
    blocked
}

/// An online algorithm: serves one arrival at a time.
pub trait Policy {
    fn name(&self) -> &'static str;
    fn arrive(&mut self, inst: &DagInstance, state: &mut OnlineState, t: usize);
    /// Called once after the last arrival.
    fn finish(&mut self, _inst: &DagInstance, _state: &mut OnlineState) {}
}

/// Chooses the next arrival from the public state; `None` ends the run.
pub trait Adversary {
    fn next(&mut self, inst: &DagInstance, state: &OnlineState) -> Option<usize>;
}

pub fn run_policy(inst: &DagInstance, policy: &mut dyn Policy, trace: &ArrivalTrace) -> OnlineState {
    let mut state = OnlineState::new(inst);
    for &t in &trace.arrivals {
        policy.arrive(inst, &mut state, t);
    }
    policy.finish(inst, &mut state);
    state
}

pub fn run_adversary(inst: &DagInstance, policy: &mut dyn Policy, adversary: &mut dyn Adversary) -> (OnlineState, ArrivalTrace) {
    let mut state = OnlineState::new(inst);
    while let Some(t) = adversary.next(inst, &state) {
        policy.arrive(inst, &mut state, t);
    }
    policy.finish(inst, &mut state);
    let trace = ArrivalTrace::new(state.arrivals.clone());
    (state, trace)
}

/// Flow pattern of `amount` units from type `t`, split proportionally over
/// nodes that are not blocked. Returns the inflow per node.
fn pattern(inst: &DagInstance, router: &DagRouter, t: usize, amount: f64, blocked: Option<&[bool]>, state_scratch: &mut OnlineState) -> Vec<f64> {
    let open = |v: usize| blocked.map_or(true, |b| !b[v]);
    let mut inflow = vec![0.0; inst.node_count()];
    let entry: Vec<(usize, f64)> = router.type_out[t].iter().copied().filter(|(v, _)| open(*v)).collect();
    let p = crate::flow_eval::softmax(&entry.iter().map(|e| e.1).collect::<Vec<_>>());
    for ((v, _), f) in entry.iter().zip(p) {
        inflow[*v] += amount * f;
        state_scratch.last_entry_flow[*v] += amount * f;
    }
    for &u in inst.topological_order() {
        if inflow[u] == 0.0 {
            continue;
        }
        let succ = &router.node_out[u];
        let idx: Vec<usize> = (0..succ.len())
            .filter(|&k| match succ[k].0 {
                Vertex::Node(j) => open(j),
                Vertex::Sink => true,
            })
            .collect();
        let p = crate::flow_eval::softmax(&idx.iter().map(|&k| succ[k].1).collect::<Vec<_>>());
        for (&k, f) in idx.iter().zip(p) {
            let x = inflow[u] * f;
            state_scratch.last_out_flow[u][k] += x;
            if let Vertex::Node(j) = succ[k].0 {
                inflow[j] += x;
            }
        }
    }
    inflow
}

/// Routes each arrival by the proportional fractions, ignoring capacities;
/// the value is settled at the end by the truncated recurrence.
pub struct DirectPolicy {
    router: DagRouter,
    counts: Vec<f64>,
}

impl DirectPolicy {
    pub fn new(inst: &DagInstance, weights: &DagWeights) -> Result<Self, OnlineError> {
        let dist = longest_distances(inst);
        Ok(DirectPolicy { router: DagRouter::new(inst, weights, &dist)?, counts: vec![0.0; inst.types().len()] })
    }
}

impl Policy for DirectPolicy {
    fn name(&self) -> &'static str {
        "direct"
    }

    fn arrive(&mut self, inst: &DagInstance, state: &mut OnlineState, t: usize) {
        state.clear_last();
        pattern(inst, &self.router, t, 1.0, None, state);
        self.counts[t] += 1.0;
        state.arrivals.push(t);
        state.gamma.push(0.0);
    }

    fn finish(&mut self, inst: &DagInstance, state: &mut OnlineState) {
        let (alloc, sink) = dag_forward(inst, &self.router, &self.counts);
        // share of each node's inflow that survives truncation there
        let keep: Vec<f64> = (0..inst.node_count())
            .map(|v| if alloc[v] > state.capacity[v] { state.capacity[v] / alloc[v] } else { 1.0 })
            .collect();
        // delivered fraction of one unit entering node u
        let mut reach = vec![0.0; inst.node_count()];
        for &u in inst.topological_order().iter().rev() {
            let onward: f64 = self
                .router
                .node_fractions(u)
                .into_iter()
                .map(|(v, f)| match v {
                    Vertex::Node(j) => f * reach[j],
                    Vertex::Sink => f,
                })
                .sum();
            reach[u] = keep[u] * onward;
        }
        let per_type: Vec<f64> = (0..inst.types().len())
            .map(|t| self.router.type_fractions(t).into_iter().map(|(v, f)| f * reach[v]).sum())
            .collect();
        for (g, &t) in state.gamma.iter_mut().zip(&state.arrivals) {
            *g = per_type[t];
        }
        for v in 0..inst.node_count() {
            let kept = alloc[v].min(state.capacity[v]);
            state.used[v] = kept;
            state.residual[v] = (state.capacity[v] - kept).max(0.0);
        }
        state.blocked = blocked_closure(inst, &state.residual);
        state.value = sink;
    }
}

/// Repeatedly routes the unserved remainder over unblocked nodes, scaled to
/// the largest feasible multiple, until the arrival is served or cut off.
pub struct MaximalPolicy {
    router: DagRouter,
}

impl MaximalPolicy {
    pub fn new(inst: &DagInstance, weights: &DagWeights) -> Result<Self, OnlineError> {
        let dist = longest_distances(inst);
        Ok(MaximalPolicy { router: DagRouter::new(inst, weights, &dist)? })
    }
}

impl Policy for MaximalPolicy {
    fn name(&self) -> &'static str {
        "maximal"
    }

    fn arrive(&mut self, inst: &DagInstance, state: &mut OnlineState, t: usize) {
        state.clear_last();
        let mut gamma = 0.0;
        let mut scratch = OnlineState::new(inst);
        for _ in 0..=inst.node_count() {
            let blocked = blocked_closure(inst, &state.residual);
            if inst.types()[t].neighbors.iter().all(|&v| blocked[v]) {
                break;
            }
            scratch.clear_last();
            let remaining = 1.0 - gamma;
            let inflow = pattern(inst, &self.router, t, remaining, Some(&blocked), &mut scratch);
            let mut lambda = 1.0;
            let mut tight = None;
            for (v, &f) in inflow.iter().enumerate() {
                if f > 0.0 && state.residual[v] < lambda * f {
                    lambda = state.residual[v] / f;
                    tight = Some(v);
                }
            }
            for (v, &f) in inflow.iter().enumerate() {
                if f > 0.0 {
                    state.residual[v] = (state.residual[v] - lambda * f).max(0.0);
                    state.used[v] += lambda * f;
                    debug_assert!(state.used[v] <= state.capacity[v] * (1.0 + 1e-9) + 1e-9);
                }
            }
            if let Some(v) = tight {
                state.residual[v] = 0.0;
            }
            for (v, x) in scratch.last_entry_flow.iter().enumerate() {
                state.last_entry_flow[v] += lambda * x;
            }
            for (row, srow) in state.last_out_flow.iter_mut().zip(&scratch.last_out_flow) {
                for (a, b) in row.iter_mut().zip(srow) {
                    *a += lambda * b;
                }
            }
            gamma += lambda * remaining;
            if tight.is_none() {
                gamma = 1.0;
                break;
            }
        }
        state.blocked = blocked_closure(inst, &state.residual);
        state.value += gamma;
        state.gamma.push(gamma);
        state.arrivals.push(t);
    }
}

/// Integral baseline: each arrival takes the lexicographically smallest path
/// (by node index) whose nodes all have a full unit left, or is dropped.
pub struct GreedyPolicy;

impl GreedyPolicy {
    fn find(inst: &DagInstance, residual: &[f64], u: usize, dead: &mut [bool], path: &mut Vec<usize>) -> bool {
        if dead[u] || residual[u] < 1.0 - 1e-9 {
            return false;
        }
        path.push(u);
        for v in inst.successors(u) {
            let ok = match *v {
                Vertex::Sink => true,
                Vertex::Node(j) => Self::find(inst, residual, j, dead, path),
            };
            if ok {
                return true;
            }
        }
        path.pop();
        dead[u] = true;
        false
    }
}

impl Policy for GreedyPolicy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn arrive(&mut self, inst: &DagInstance, state: &mut OnlineState, t: usize) {
        state.clear_last();
        let mut dead = vec![false; inst.node_count()];
        let mut path = Vec::new();
        let found = inst.types()[t].neighbors.iter().any(|&v| {
            path.clear();
            Self::find(inst, &state.residual, v, &mut dead, &mut path)
        });
        let gamma = if found {
            for w in path.windows(2) {
                let k = inst.successors(w[0]).iter().position(|&x| x == Vertex::Node(w[1])).unwrap();
                state.last_out_flow[w[0]][k] = 1.0;
            }
            let last = *path.last().unwrap();
            let k = inst.successors(last).iter().position(|&x| x == Vertex::Sink).unwrap();
            state.last_out_flow[last][k] = 1.0;
            state.last_entry_flow[path[0]] = 1.0;
            for &v in &path {
                state.residual[v] = (state.residual[v] - 1.0).max(0.0);
                state.used[v] += 1.0;
            }
            1.0
        } else {
            0.0
        };
        state.blocked = blocked_closure(inst, &state.residual);
        state.value += gamma;
        state.gamma.push(gamma);
        state.arrivals.push(t);
    }
}

pub fn simulate_direct(inst: &DagInstance, weights: &DagWeights, trace: &ArrivalTrace) -> Result<(f64, OnlineState), OnlineError> {
    let state = run_policy(inst, &mut DirectPolicy::new(inst, weights)?, trace);
    Ok((state.value, state))
}

pub fn simulate_maximal(inst: &DagInstance, weights: &DagWeights, trace: &ArrivalTrace) -> Result<(f64, OnlineState), OnlineError> {
    let state = run_policy(inst, &mut MaximalPolicy::new(inst, weights)?, trace);
    Ok((state.value, state))
}

pub fn simulate_greedy(inst: &DagInstance, trace: &ArrivalTrace) -> (f64, OnlineState) {
    let state = run_policy(inst, &mut GreedyPolicy, trace);
    (state.value, state)
}
