use super::{EpsilonSchedule, WeightError, WeightState};
use crate::flow_eval::layered_forward;
use crate::graph::LayeredGraph;

/// What an observer sees after each iteration of the layered framework.
pub struct IterationView<'a> {
    pub iteration: u64,
    /// Allocations computed at the start of the iteration.
    pub alloc: &'a [f64],
    /// Counts before and after this iteration's sweep.
    pub before: &'a [u32],
    pub after: &'a [u32],
    pub decreased: &'a [bool],
}

/// Forced-decrease test for node `a`.
///
/// `N*` is the set of out-neighbours with the smallest count at the start of
/// the iteration (the maximum-weight ones). The result is true iff every
/// member of `N*` has decreased during the current sweep and its level is
/// less than `gap` above the level of `a`.
pub fn cond(layered: &LayeredGraph, a: usize, before: &[u32], current: &[u32], decreased: &[bool], gap: f64) -> bool {
    let out = layered.out(a);
    let Some(kmin) = out.iter().map(|&b| before[b]).min() else {
        return false;
    };
    out.iter().filter(|&&b| before[b] == kmin).all(|&b| {
        // Lev(b) - Lev(a) = k_a - k_b
        decreased[b] && ((current[a] as f64 - current[b] as f64) < gap)
    })
}

/// Runs the layered framework for at most `max_iterations` rounds.
pub fn d_layer_weights(layered: &LayeredGraph, schedule: &EpsilonSchedule, max_iterations: u64) -> Result<WeightState, WeightError> {
    d_layer_weights_observed(layered, schedule, max_iterations, |_| {})
}

/// The framework restricted to two offline layers.
pub fn three_layer_weights(layered: &LayeredGraph, schedule: &EpsilonSchedule, max_iterations: u64) -> Result<WeightState, WeightError> {
    if layered.depth() != 2 {
        return Err(WeightError::WrongDepth { expected: 2, got: layered.depth() });
    }
    d_layer_weights(layered, schedule, max_iterations)
}

pub fn d_layer_weights_observed(
    layered: &LayeredGraph,
    schedule: &EpsilonSchedule,
    max_iterations: u64,
    mut observe: impl FnMut(&IterationView<'_>),
) -> Result<WeightState, WeightError> {
    let depth = layered.depth();
    if depth != schedule.depth() {
        return Err(WeightError::WrongDepth { expected: schedule.depth(), got: depth });
    }
    let mut state = WeightState::initial(layered, schedule.clone(), max_iterations);
    let n = layered.node_count();
    let caps: Vec<f64> = layered.nodes().iter().map(|v| v.capacity.as_f64()).collect();
    let factors: Vec<f64> = (1..=depth).map(|j| schedule.threshold_factor(j)).collect();
    let gap = schedule.gap_threshold();
    let counts = layered.counts_f64();
    let mut alloc = vec![0.0; n];
    let mut log_w = vec![0.0; n];
    let mut decreased = vec![false; n];
    let mut before = vec![0u32; n];
    for t in 1..=max_iterations {
        for (v, lw) in log_w.iter_mut().enumerate() {
            *lw = state.log_weight(v);
        }
        layered_forward(layered, &log_w, &counts, &caps, &mut alloc);
        before.copy_from_slice(&state.decrements);
        decreased.iter_mut().for_each(|d| *d = false);
        let mut any = false;
        for j in (1..=depth).rev() {
            let factor = factors[j - 1];
            for &v in layered.layer(j) {
                let over = caps[v].is_finite() && alloc[v] > factor * caps[v] + 1e-12;
                if over || (j < depth && cond(layered, v, &before, &state.decrements, &decreased, gap)) {
                    state.decrements[v] += 1;
                    decreased[v] = true;
                    any = true;
                }
            }
        }
        state.iterations_run = t;
        observe(&IterationView { iteration: t, alloc: &alloc, before: &before, after: &state.decrements, decreased: &decreased });
        if !any {
            state.fixed_point = true;
            break;
        }
    }
    Ok(state)
}
