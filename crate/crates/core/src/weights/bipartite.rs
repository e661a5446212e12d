use super::{make_schedule, WeightError, WeightState};
use crate::graph::LayeredGraph;

/// `ceil((2 / eps^2) ln(n / eps))`.
pub fn bipartite_default_iterations(n: usize, eps: f64) -> u64 {
    ((2.0 / (eps * eps)) * (n.max(1) as f64 / eps).ln()).ceil().max(1.0) as u64
}

/// Decrease-only proportional iteration on a single offline layer.
///
/// Every round computes the proportional allocation and divides the weight of
/// each advertiser with `Alloc_a > (1 + eps) C_a` by `1 + eps`. Stops early
/// at a fixed point.
pub fn bipartite_weights(layered: &LayeredGraph, iterations: u64, eps: f64) -> Result<WeightState, WeightError> {
    if layered.depth() != 1 {
        return Err(WeightError::WrongDepth { expected: 1, got: layered.depth() });
    }
    let n = layered.max_layer_size();
    let schedule = make_schedule(1, n, eps)?;
    let step = schedule.log_base(1);
    let mut state = WeightState::initial(layered, schedule, iterations);
    let counts = layered.counts_f64();
    let caps: Vec<f64> = layered.nodes().iter().map(|v| v.capacity.as_f64()).collect();
    let mut alloc = vec![0.0; layered.node_count()];
    for t in 1..=iterations {
        alloc.iter_mut().for_each(|a| *a = 0.0);
        for (ty, &m) in counts.iter().enumerate() {
            let nb = layered.entry(ty);
            if nb.is_empty() || m == 0.0 {
                continue;
            }
            // weights relative to the heaviest neighbour
            let kmin = nb.iter().map(|&a| state.decrements[a]).min().unwrap();
            let rel: Vec<f64> = nb.iter().map(|&a| (-((state.decrements[a] - kmin) as f64) * step).exp()).collect();
            let total: f64 = rel.iter().sum();
            for (&a, r) in nb.iter().zip(&rel) {
                alloc[a] += m * r / total;
            }
        }
        let mut any = false;
        for (a, &c) in caps.iter().enumerate() {
            if alloc[a] > (1.0 + eps) * c + 1e-12 {
                state.decrements[a] += 1;
                any = true;
            }
        }
        state.iterations_run = t;
        if !any {
            state.fixed_point = true;
            break;
        }
    }
    Ok(state)
}
