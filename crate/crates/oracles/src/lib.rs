//! Slow, dense reference computations for tiny instances.
//!
//! Nothing here calls into the routing, max-flow or makespan code of
//! `propflow`; only the instance types are shared. Inputs above the size
//! limits are rejected rather than run slowly.

use propflow::graph::{Capacity, DagInstance, LayeredGraph, Vertex};
use propflow::load_balancing::ScheduleInstance;
use thiserror::Error;

pub const MAX_DENSE_NODES: usize = 12;
pub const MAX_ENUM_MACHINES: usize = 3;
pub const MAX_ENUM_JOBS: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{what} is {got}, the oracle accepts at most {limit}")]
    SizeLimit { what: &'static str, got: usize, limit: usize },
    #[error("grid step must divide 1, got {0}")]
    BadStep(f64),
}

fn limit(what: &'static str, got: usize, limit: usize) -> Result<(), OracleError> {
    if got > limit {
        Err(OracleError::SizeLimit { what, got, limit })
    } else {
        Ok(())
    }
}

/// Value of proportional routing on a layered graph, recomputed with dense
/// matrices: row `u` of the split matrix holds `w_v / sum w` for every
/// out-neighbour `v`, and flow is pushed one layer at a time.
///
/// `log_w` is indexed like the layered nodes.
pub fn dense_route_reference(layered: &LayeredGraph, log_w: &[f64], counts: &[f64]) -> Result<f64, OracleError> {
    let originals = layered.nodes().iter().filter(|v| v.real && v.origin != Vertex::Sink).count();
    limit("offline node count", originals, MAX_DENSE_NODES)?;
    let n = layered.node_count();
    let row = |targets: &[usize]| -> Vec<f64> {
        let mut r = vec![0.0; n];
        if targets.is_empty() {
            return r;
        }
        let top = targets.iter().map(|&v| log_w[v]).fold(f64::NEG_INFINITY, f64::max);
        let total: f64 = targets.iter().map(|&v| (log_w[v] - top).exp()).sum();
        for &v in targets {
            r[v] = (log_w[v] - top).exp() / total;
        }
        r
    };
    let split: Vec<Vec<f64>> = (0..n).map(|u| row(layered.out(u))).collect();
    let entry: Vec<Vec<f64>> = (0..counts.len()).map(|t| row(layered.entry(t))).collect();

    let mut inflow = vec![0.0; n];
    for (t, &m) in counts.iter().enumerate() {
        for v in 0..n {
            inflow[v] += m * entry[t][v];
        }
    }
    let depth = layered.depth();
    let mut value = 0.0;
    for j in 1..=depth {
        let mut next = inflow.clone();
        for u in 0..n {
            let node = layered.node(u);
            if node.layer != j {
                continue;
            }
            let kept = match node.capacity {
                Capacity::Unbounded => inflow[u],
                cap => inflow[u].min(cap.as_f64()),
            };
            if j == depth {
                value += kept;
                continue;
            }
            for v in 0..n {
                next[v] += kept * split[u][v];
            }
        }
        inflow = next;
    }
    Ok(value)
}

/// Maximum s-t flow of a DAG instance by breadth-first augmenting paths on a
/// dense residual matrix. Every offline node is split into an in and out
/// half joined by its capacity.
pub fn dense_max_flow(inst: &DagInstance) -> Result<f64, OracleError> {
    let n = inst.node_count();
    limit("offline node count", n, MAX_DENSE_NODES)?;
    let k = inst.types().len();
    // 0 = source, 1 = sink, then types, then node halves
    let size = 2 + k + 2 * n;
    let ty = |t: usize| 2 + t;
    let vin = |v: usize| 2 + k + 2 * v;
    let vout = |v: usize| 3 + k + 2 * v;
    let counts = inst.counts_f64();
    let big = 1.0 + counts.iter().sum::<f64>();
    let mut cap = vec![vec![0.0f64; size]; size];
    for (t, it) in inst.types().iter().enumerate() {
        cap[0][ty(t)] += counts[t];
        for &v in &it.neighbors {
            cap[ty(t)][vin(v)] += big;
        }
    }
    for v in 0..n {
        cap[vin(v)][vout(v)] += inst.capacity_f64(v);
    }
    for (u, w) in inst.edges() {
        match w {
            Vertex::Node(w) => cap[vout(u)][vin(w)] += big,
            Vertex::Sink => cap[vout(u)][1] += big,
        }
    }
    let mut total = 0.0;
    loop {
        let mut prev = vec![usize::MAX; size];
        prev[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for v in 0..size {
                if prev[v] == usize::MAX && cap[u][v] > 1e-12 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[1] == usize::MAX {
            return Ok(total);
        }
        let mut push = f64::INFINITY;
        let mut v = 1;
        while v != 0 {
            push = push.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = 1;
        while v != 0 {
            cap[prev[v]][v] -= push;
            cap[v][prev[v]] += push;
            v = prev[v];
        }
        total += push;
    }
}

/// Minimum makespan over fractional assignments whose fractions are
/// multiples of `step`. Exhaustive with branch and bound.
pub fn enumerate_assignments(inst: &ScheduleInstance, step: f64) -> Result<f64, OracleError> {
    limit("machine count", inst.machines(), MAX_ENUM_MACHINES)?;
    limit("job count", inst.jobs().len(), MAX_ENUM_JOBS)?;
    let parts = (1.0 / step).round();
    if !(step > 0.0 && step <= 1.0 && ((parts * step) - 1.0).abs() < 1e-12) {
        return Err(OracleError::BadStep(step));
    }
    let parts = parts as usize;
    let mut best = f64::INFINITY;
    let mut loads = vec![0.0; inst.machines()];
    search(inst, 0, parts, &mut loads, &mut best);
    Ok(if inst.jobs().is_empty() { 0.0 } else { best })
}

fn search(inst: &ScheduleInstance, j: usize, parts: usize, loads: &mut [f64], best: &mut f64) {
    let cur = loads.iter().copied().fold(0.0, f64::max);
    if cur >= *best {
        return;
    }
    let Some(job) = inst.jobs().get(j) else {
        *best = cur;
        return;
    };
    let mut shares = vec![0usize; job.machines.len()];
    compositions(&mut shares, 0, parts, &mut |shares: &[usize]| {
        for (&i, &s) in job.machines.iter().zip(shares) {
            loads[i] += job.size * s as f64 / parts as f64;
        }
        search(inst, j + 1, parts, loads, best);
        for (&i, &s) in job.machines.iter().zip(shares) {
            loads[i] -= job.size * s as f64 / parts as f64;
        }
    });
}

/// Calls `f` with every way of writing `left` as an ordered sum over
/// `shares[pos..]`.
fn compositions(shares: &mut [usize], pos: usize, left: usize, f: &mut dyn FnMut(&[usize])) {
    if pos + 1 == shares.len() {
        shares[pos] = left;
        f(shares);
        return;
    }
    for s in 0..=left {
        shares[pos] = s;
        compositions(shares, pos + 1, left - s, f);
    }
}

/// Exact fractional makespan from the subset characterisation: the largest
/// total size of jobs confined to a machine set, divided by its size.
pub fn subset_makespan(inst: &ScheduleInstance) -> Result<f64, OracleError> {
    let m = inst.machines();
    limit("machine count", m, 16)?;
    let mut best: f64 = 0.0;
    for mask in 1u32..(1 << m) {
        let inside: f64 = inst
            .jobs()
            .iter()
            .filter(|j| j.machines.iter().all(|&i| mask & (1 << i) != 0))
            .map(|j| j.size)
            .sum();
        best = best.max(inside / mask.count_ones() as f64);
    }
    Ok(best)
}

/// Proportional loads recomputed from plain weights `w_i`.
pub fn naive_loads(inst: &ScheduleInstance, w: &[f64]) -> Vec<f64> {
    let mut loads = vec![0.0; inst.machines()];
    for j in inst.jobs() {
        let total: f64 = j.machines.iter().map(|&i| w[i]).sum();
        for &i in &j.machines {
            loads[i] += j.size * w[i] / total;
        }
    }
    loads
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub reference: f64,
    pub candidate: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Passes when the absolute gap or the relative gap is within `tolerance`.
pub fn compare(reference: f64, candidate: f64, tolerance: f64) -> ComparisonReport {
    let abs_gap = (reference - candidate).abs();
    let rel_gap = abs_gap / reference.abs().max(candidate.abs()).max(f64::MIN_POSITIVE);
    ComparisonReport { reference, candidate, abs_gap, rel_gap, tolerance, pass: abs_gap <= tolerance || rel_gap <= tolerance }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean, with the `n - 1` variance.
pub fn std_error(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    let var = xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use propflow::load_balancing::Job;

    fn job(id: &str, size: f64, machines: &[usize]) -> Job {
        Job { id: id.into(), size, machines: machines.to_vec() }
    }

    #[test]
    fn pinned_jobs_exact() {
        let inst = ScheduleInstance::new(2, vec![job("a", 2.0, &[0]), job("b", 3.0, &[1])]).unwrap();
        assert_eq!(enumerate_assignments(&inst, 0.25).unwrap(), 3.0);
        assert_eq!(subset_makespan(&inst).unwrap(), 3.0);
    }

    #[test]
    fn empty_job_list() {
        let inst = ScheduleInstance::new(3, vec![]).unwrap();
        assert_eq!(enumerate_assignments(&inst, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn size_limits() {
        let jobs = (0..7).map(|i| job(&format!("j{i}"), 1.0, &[0])).collect();
        let inst = ScheduleInstance::new(2, jobs).unwrap();
        assert!(matches!(enumerate_assignments(&inst, 0.5), Err(OracleError::SizeLimit { .. })));
        assert!(matches!(enumerate_assignments(&ScheduleInstance::new(1, vec![]).unwrap(), 0.3), Err(OracleError::BadStep(_))));
    }

    #[test]
    fn three_flexible_unit_jobs() {
        let jobs = (0..3).map(|i| job(&format!("j{i}"), 1.0, &[0, 1])).collect();
        let inst = ScheduleInstance::new(2, jobs).unwrap();
        assert_eq!(subset_makespan(&inst).unwrap(), 1.5);
        assert_eq!(enumerate_assignments(&inst, 0.5).unwrap(), 1.5);
    }

    #[test]
    fn statistics() {
        assert_eq!(mean(&[1.0, 2.0, 3.0]), 2.0);
        assert!((std_error(&[1.0, 2.0, 3.0]) - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(compare(1.0, 1.0 + 1e-10, 1e-9).pass);
        assert!(!compare(1.0, 1.1, 1e-9).pass);
    }
}
