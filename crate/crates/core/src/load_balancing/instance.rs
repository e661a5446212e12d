use super::{LbError, MachineWeights};
use crate::flow_eval::softmax;
use crate::graph::maxflow::FlowNetwork;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub id: String,
    pub size: f64,
    /// Sorted machine indices.
    pub machines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleInstance {
    machines: usize,
    jobs: Vec<Job>,
}

impl ScheduleInstance {
    pub fn new(machines: usize, mut jobs: Vec<Job>) -> Result<Self, LbError> {
        for j in &mut jobs {
            j.machines.sort_unstable();
            j.machines.dedup();
            if j.machines.is_empty() {
                return Err(LbError::EmptyNeighborhood(j.id.clone()));
            }
            if let Some(&m) = j.machines.iter().find(|&&m| m >= machines) {
                return Err(LbError::UnknownMachine { job: j.id.clone(), machine: m, machines });
            }
            if !(j.size.is_finite() && j.size > 0.0) {
                return Err(LbError::BadSize(j.id.clone()));
            }
        }
        Ok(ScheduleInstance { machines, jobs })
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn total_size(&self) -> f64 {
        self.jobs.iter().map(|j| j.size).sum()
    }

    /// Total size per neighbourhood (the job type).
    pub fn type_totals(&self) -> BTreeMap<Vec<usize>, f64> {
        let mut m = BTreeMap::new();
        for j in &self.jobs {
            *m.entry(j.machines.clone()).or_insert(0.0) += j.size;
        }
        m
    }

    /// Every job of the given type scaled by `factor`.
    pub fn scale_type(&self, machines: &[usize], factor: f64) -> Result<Self, LbError> {
        let jobs = self
            .jobs
            .iter()
            .map(|j| Job { size: if j.machines == machines { j.size * factor } else { j.size }, ..j.clone() })
            .collect();
        ScheduleInstance::new(self.machines, jobs)
    }

    /// Jobs of several instances on the same machines, concatenated.
    pub fn stack(parts: &[ScheduleInstance]) -> Result<Self, LbError> {
        let m = parts.first().ok_or(LbError::NoSamples)?.machines;
        let mut jobs = Vec::new();
        for (a, p) in parts.iter().enumerate() {
            if p.machines != m {
                return Err(LbError::MachineMismatch(m, p.machines));
            }
            jobs.extend(p.jobs.iter().map(|j| Job { id: format!("s{a}_{}", j.id), ..j.clone() }));
        }
        ScheduleInstance::new(m, jobs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadProfile {
    pub loads: Vec<f64>,
    pub makespan: f64,
}

/// Loads under the proportional split.
pub fn fractional_assign(inst: &ScheduleInstance, w: &MachineWeights) -> LoadProfile {
    let logs = w.log_weights();
    let mut loads = vec![0.0; inst.machines()];
    for j in inst.jobs() {
        let p = softmax(&j.machines.iter().map(|&i| logs[i]).collect::<Vec<_>>());
        for (&i, x) in j.machines.iter().zip(p) {
            loads[i] += j.size * x;
        }
    }
    let makespan = loads.iter().copied().fold(0.0, f64::max);
    LoadProfile { loads, makespan }
}

fn feasible(inst: &ScheduleInstance, t: f64) -> bool {
    let (n, m) = (inst.jobs().len(), inst.machines());
    let mut net = FlowNetwork::<f64>::new(2 + n + m);
    let total = inst.total_size();
    for (k, j) in inst.jobs().iter().enumerate() {
        net.add_arc(0, 2 + k, j.size);
        for &i in &j.machines {
            net.add_arc(2 + k, 2 + n + i, total);
        }
    }
    for i in 0..m {
        net.add_arc(2 + n + i, 1, t);
    }
    net.max_flow(0, 1, total * 2.0 + 1.0) >= total * (1.0 - 1e-12) - 1e-12
}

/// Optimal fractional makespan by bisection on `T` with a max-flow
/// feasibility test, to within `1e-9`.
pub fn opt_makespan(inst: &ScheduleInstance) -> f64 {
    let total = inst.total_size();
    if inst.jobs().is_empty() {
        return 0.0;
    }
    let mut lo = total / inst.machines() as f64;
    let mut hi = total;
    if feasible(inst, lo) {
        return lo;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if feasible(inst, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `max_j max(S_j / S'_j, S'_j / S_j)` over job types.
pub fn instance_ratio(a: &ScheduleInstance, b: &ScheduleInstance) -> Result<f64, LbError> {
    if a.machines() != b.machines() {
        return Err(LbError::MachineMismatch(a.machines(), b.machines()));
    }
    let (sa, sb) = (a.type_totals(), b.type_totals());
    let mut eta: f64 = 1.0;
    for key in sa.keys().chain(sb.keys()) {
        let x = sa.get(key).copied().unwrap_or(0.0);
        let y = sb.get(key).copied().unwrap_or(0.0);
        match (x > 0.0, y > 0.0) {
            (true, true) => eta = eta.max(x / y).max(y / x),
            (false, false) => {}
            _ => {
                let name: Vec<String> = key.iter().map(|m| m.to_string()).collect();
                return Err(LbError::UndefinedRatio(format!("{{{}}}", name.join(","))));
            }
        }
    }
    Ok(eta)
}
