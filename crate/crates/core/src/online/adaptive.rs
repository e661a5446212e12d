use super::{ArrivalTrace, OnlineError, OnlineState};
use crate::flow_eval::softmax;
use crate::graph::{longest_distances, DagInstance};
use crate::weights::DagWeights;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveConfig {
    pub epsilon: f64,
    /// Largest prediction error the run is prepared for; bounds the number of
    /// weight decrements before the run is aborted.
    pub eta_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveRun {
    pub value: f64,
    pub state: OnlineState,
    /// Real allocation per advertiser (may exceed capacity).
    pub alloc: Vec<f64>,
    /// Final log-weights; weights only decrease, so these are also the minima.
    pub log_weights: Vec<f64>,
    pub decrements: Vec<u32>,
}

/// The adaptive algorithm for one offline layer.
///
/// Real and imaginary allocations grow together until the arrival is fully
/// assigned or some imaginary load hits `(1+eps)^2 C_a`. Each hit divides
/// that advertiser's weight by `1+eps`, after which the imaginary allocation
/// of every processed arrival is recomputed from scratch. Real allocations
/// are never revised.
pub fn simulate_adaptive_bipartite(
    inst: &DagInstance,
    predicted: &DagWeights,
    cfg: AdaptiveConfig,
    trace: &ArrivalTrace,
) -> Result<AdaptiveRun, OnlineError> {
    let depth = longest_distances(inst).depth();
    if depth > 1 {
        return Err(OnlineError::NotBipartite(depth));
    }
    let n = inst.node_count();
    if predicted.weight_log.len() != n || predicted.weight_log.iter().any(|w| !w.is_finite()) {
        return Err(OnlineError::BadWeights);
    }
    let eps = cfg.epsilon;
    let step = eps.ln_1p();
    let limit = (2.0 * n as f64 * cfg.eta_bound.ln() / step).ceil().max(0.0) as u64;
    let caps: Vec<f64> = (0..n).map(|v| inst.capacity_f64(v)).collect();
    let thr: Vec<f64> = caps.iter().map(|c| (1.0 + eps) * (1.0 + eps) * c).collect();
    let hit = |imag: f64, a: usize| imag >= thr[a] - 1e-12 * thr[a].max(1.0);

    let mut logw = predicted.weight_log.clone();
    let mut decrements = vec![0u32; n];
    let mut total_dec = 0u64;
    let mut alloc = vec![0.0; n];
    let mut past = vec![0.0; inst.types().len()];
    let mut assigned: Vec<Vec<(usize, f64)>> = Vec::with_capacity(trace.len());

    let shares = |t: usize, logw: &[f64]| -> Vec<f64> {
        softmax(&inst.types()[t].neighbors.iter().map(|&a| logw[a]).collect::<Vec<_>>())
    };
    let imaginary = |logw: &[f64], past: &[f64], cur: Option<(usize, f64)>| -> Vec<f64> {
        let mut imag = vec![0.0; n];
        let mut add = |t: usize, m: f64| {
            if m > 0.0 {
                for (&a, p) in inst.types()[t].neighbors.iter().zip(shares(t, logw)) {
                    imag[a] += m * p;
                }
            }
        };
        for (t, &m) in past.iter().enumerate() {
            add(t, m);
        }
        if let Some((t, g)) = cur {
            add(t, g);
        }
        imag
    };

    for (i, &t) in trace.arrivals.iter().enumerate() {
        let nbrs = &inst.types()[t].neighbors;
        let mut x = vec![0.0; nbrs.len()];
        if nbrs.is_empty() {
            assigned.push(Vec::new());
            past[t] += 1.0;
            continue;
        }
        let mut g: f64 = 0.0;
        let mut imag = imaginary(&logw, &past, None);
        loop {
            let rate = shares(t, &logw);
            let mut delta = 1.0 - g;
            for (&a, &r) in nbrs.iter().zip(&rate) {
                if r > 0.0 {
                    delta = delta.min(((thr[a] - imag[a]) / r).max(0.0));
                }
            }
            g += delta;
            for (k, (&a, &r)) in nbrs.iter().zip(&rate).enumerate() {
                x[k] += delta * r;
                alloc[a] += delta * r;
                imag[a] += delta * r;
            }
            let done = g >= 1.0 - 1e-15;
            loop {
                let over: Vec<usize> = (0..n).filter(|&a| hit(imag[a], a)).collect();
                if over.is_empty() {
                    break;
                }
                for a in over {
                    logw[a] -= step;
                    decrements[a] += 1;
                    total_dec += 1;
                }
                if total_dec > limit {
                    return Err(OnlineError::NonTermination { limit, arrivals: i + 1 });
                }
                imag = imaginary(&logw, &past, Some((t, g)));
            }
            if done {
                break;
            }
        }
        past[t] += 1.0;
        assigned.push(nbrs.iter().copied().zip(x).collect());
    }

    let mut state = OnlineState::new(inst);
    let keep: Vec<f64> = (0..n).map(|a| if alloc[a] > caps[a] { caps[a] / alloc[a] } else { 1.0 }).collect();
    for (row, &t) in assigned.iter().zip(&trace.arrivals) {
        state.gamma.push(row.iter().map(|&(a, x)| x * keep[a]).sum());
        state.arrivals.push(t);
    }
    for a in 0..n {
        state.used[a] = alloc[a];
        state.residual[a] = (caps[a] - alloc[a]).max(0.0);
    }
    state.blocked = super::blocked_closure(inst, &state.residual);
    let value = (0..n).map(|a| alloc[a].min(caps[a])).sum();
    state.value = value;
    Ok(AdaptiveRun { value, state, alloc, log_weights: logw, decrements })
}
