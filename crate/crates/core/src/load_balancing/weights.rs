use super::{fractional_assign, instance_ratio, opt_makespan, LbError, ScheduleInstance};

pub const DEFAULT_ROUNDS_CONSTANT: f64 = 4.0;

/// Machine weights `w_i = (1 + step)^{k_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineWeights {
    pub k: Vec<i64>,
    pub step: f64,
    /// Grid bound `R`; every `k_i` lies in `[-R, R]`.
    pub bound: u64,
}

impl MachineWeights {
    pub fn uniform(machines: usize, step: f64) -> Self {
        MachineWeights { k: vec![0; machines], step, bound: 0 }
    }

    pub fn log_weights(&self) -> Vec<f64> {
        let base = self.step.ln_1p();
        self.k.iter().map(|&k| k as f64 * base).collect()
    }

    pub fn weight(&self, i: usize) -> f64 {
        (self.k[i] as f64 * self.step.ln_1p()).exp()
    }

    pub fn in_bounds(&self) -> bool {
        self.k.iter().all(|k| k.unsigned_abs() <= self.bound)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightRun {
    pub weights: MachineWeights,
    /// Per-machine load target used by the iteration.
    pub target: f64,
    pub rounds_run: u64,
    pub fixed_point: bool,
}

/// `R = ceil(c / delta^2 * ln(m / delta))` with `delta = eps / m`.
pub fn iteration_rounds(machines: usize, eps: f64, c: f64) -> u64 {
    let delta = eps / machines as f64;
    (c / (delta * delta) * (machines as f64 / delta).ln()).ceil().max(1.0) as u64
}

/// Decrease-only proportional iteration with load target `target` on every
/// machine. A machine whose load exceeds `(1 + delta) target` loses one grid
/// step. Job sizes weight the loads directly.
pub fn machine_weight_iteration(
    inst: &ScheduleInstance,
    target: f64,
    delta: f64,
    rounds: u64,
) -> Result<WeightRun, LbError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(LbError::InvalidEpsilon(delta));
    }
    if delta < 1e-12 {
        return Err(LbError::UnderflowRisk(delta));
    }
    let mut weights = MachineWeights { k: vec![0; inst.machines()], step: delta, bound: rounds };
    let limit = (1.0 + delta) * target + 1e-12;
    let mut rounds_run = 0;
    let mut fixed_point = false;
    for r in 1..=rounds {
        let profile = fractional_assign(inst, &weights);
        let mut any = false;
        for (i, &l) in profile.loads.iter().enumerate() {
            if l > limit {
                weights.k[i] -= 1;
                any = true;
            }
        }
        rounds_run = r;
        if !any {
            fixed_point = true;
            break;
        }
    }
    Ok(WeightRun { weights, target, rounds_run, fixed_point })
}

fn check_eps(eps: f64) -> Result<(), LbError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(LbError::InvalidEpsilon(eps))
    }
}

/// Weights for a single instance, targeting its optimal makespan.
pub fn makespan_weights(inst: &ScheduleInstance, eps: f64, c: f64) -> Result<WeightRun, LbError> {
    check_eps(eps)?;
    let m = inst.machines();
    machine_weight_iteration(inst, opt_makespan(inst), eps / m as f64, iteration_rounds(m, eps, c))
}

/// Weights from samples: the iteration runs on all sampled jobs at once with
/// target `sum OPT(S_a)`.
pub fn learn_machine_weights(samples: &[ScheduleInstance], eps: f64, c: f64) -> Result<WeightRun, LbError> {
    check_eps(eps)?;
    let stacked = ScheduleInstance::stack(samples)?;
    let target: f64 = samples.iter().map(opt_makespan).sum();
    let m = stacked.machines();
    machine_weight_iteration(&stacked, target, eps / m as f64, iteration_rounds(m, eps, c))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport {
    pub eta: f64,
    pub alg: f64,
    pub opt: f64,
    pub bound: f64,
    pub slack: f64,
    pub ok: bool,
}

/// Checks `ALG(perturbed, w) <= (1 + eps)^2 eta^2 OPT(perturbed)` for weights
/// that are verified to be `(1 + eps)`-approximate on `base`.
pub fn lb_robustness_check(
    base: &ScheduleInstance,
    perturbed: &ScheduleInstance,
    weights: &MachineWeights,
    eps: f64,
) -> Result<RobustnessReport, LbError> {
    let base_alg = fractional_assign(base, weights).makespan;
    let limit = (1.0 + eps) * opt_makespan(base) + 1e-6;
    if base_alg > limit {
        return Err(LbError::BaseNotApproximate { alg: base_alg, limit });
    }
    let eta = instance_ratio(base, perturbed)?;
    let alg = fractional_assign(perturbed, weights).makespan;
    let opt = opt_makespan(perturbed);
    let bound = (1.0 + eps).powi(2) * eta * eta * opt;
    let slack = bound + 1e-6 - alg;
    Ok(RobustnessReport { eta, alg, opt, bound, slack, ok: slack >= 0.0 })
}
