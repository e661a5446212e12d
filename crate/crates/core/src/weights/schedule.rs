use super::WeightError;

/// Schedules with a smallest epsilon below this are refused.
pub const UNDERFLOW_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    /// `eps_j = eps_{j+1} / (2n)`.
    Linear,
    /// `ln(1 + eps_j) = ln(1 + eps_{j+1}) / (2n)`, so a weight in layer
    /// `j + 1` is exactly the `2n`-th power of the same count in layer `j`.
    Exact,
}

impl ScheduleKind {
    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::Linear => "linear",
            ScheduleKind::Exact => "exact",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "linear" => Some(ScheduleKind::Linear),
            "exact" => Some(ScheduleKind::Exact),
            _ => None,
        }
    }
}

/// Per-layer step sizes; the top layer gets `eps / d`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSchedule {
    kind: ScheduleKind,
    top_epsilon: f64,
    n: usize,
    per_layer: Vec<f64>,
    log_base: Vec<f64>,
}

fn check(d: usize, n: usize, eps: f64) -> Result<(), WeightError> {
    assert!(d >= 1 && n >= 1, "schedule needs d >= 1 and n >= 1");
    if !(eps > 0.0 && eps < 1.0) {
        return Err(WeightError::InvalidEpsilon(eps));
    }
    Ok(())
}

fn finish(s: EpsilonSchedule) -> Result<EpsilonSchedule, WeightError> {
    let min = s.epsilon_min();
    if min < UNDERFLOW_LIMIT {
        return Err(WeightError::UnderflowRisk { epsilon_min: min, limit: UNDERFLOW_LIMIT });
    }
    Ok(s)
}

pub fn make_schedule(d: usize, n: usize, eps: f64) -> Result<EpsilonSchedule, WeightError> {
    check(d, n, eps)?;
    let mut per_layer = vec![0.0; d];
    per_layer[d - 1] = eps / d as f64;
    for j in (0..d - 1).rev() {
        per_layer[j] = per_layer[j + 1] / (2 * n) as f64;
    }
    let log_base = per_layer.iter().map(|e: &f64| e.ln_1p()).collect();
    finish(EpsilonSchedule { kind: ScheduleKind::Linear, top_epsilon: eps, n, per_layer, log_base })
}

pub fn make_exact_schedule(d: usize, n: usize, eps: f64) -> Result<EpsilonSchedule, WeightError> {
    check(d, n, eps)?;
    let top = (eps / d as f64).ln_1p();
    let rho = (2 * n) as f64;
    let log_base: Vec<f64> = (1..=d).map(|j| top / rho.powi((d - j) as i32)).collect();
    let per_layer = log_base.iter().map(|l| l.exp_m1()).collect();
    finish(EpsilonSchedule { kind: ScheduleKind::Exact, top_epsilon: eps, n, per_layer, log_base })
}

impl EpsilonSchedule {
    /// Rebuilds a schedule from stored values (used by the weight file).
    pub(crate) fn from_parts(kind: ScheduleKind, top_epsilon: f64, n: usize, per_layer: Vec<f64>, log_base: Vec<f64>) -> Self {
        EpsilonSchedule { kind, top_epsilon, n, per_layer, log_base }
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn top_epsilon(&self) -> f64 {
        self.top_epsilon
    }

    /// The `n` the schedule was built for (largest layer size).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.per_layer.len()
    }

    /// `eps_j` for 1-based layer `j`.
    pub fn epsilon(&self, j: usize) -> f64 {
        self.per_layer[j - 1]
    }

    /// `ln(1 + eps_j)`.
    pub fn log_base(&self, j: usize) -> f64 {
        self.log_base[j - 1]
    }

    pub fn per_layer(&self) -> &[f64] {
        &self.per_layer
    }

    pub fn log_bases(&self) -> &[f64] {
        &self.log_base
    }

    pub fn epsilon_min(&self) -> f64 {
        self.per_layer[0]
    }

    pub fn epsilon_max(&self) -> f64 {
        *self.per_layer.last().unwrap()
    }

    /// `prod_{j' <= j} (1 + eps_j')`, the over-allocation factor of layer `j`.
    pub fn threshold_factor(&self, j: usize) -> f64 {
        self.per_layer[..j].iter().map(|e| 1.0 + e).product()
    }

    /// Level gap beyond which forced decreases stop: `ln(n / eps_max) / eps_min`.
    pub fn gap_threshold(&self) -> f64 {
        (self.n as f64 / self.epsilon_max()).ln() / self.epsilon_min()
    }

    /// `ceil(n ln(n / eps_max) / (eps_max eps_min))`, capped at `cap`.
    pub fn default_iterations(&self, cap: u64) -> u64 {
        let n = self.n as f64;
        let t = (n * (n / self.epsilon_max()).ln() / (self.epsilon_max() * self.epsilon_min())).ceil();
        if t.is_finite() && t < cap as f64 {
            (t as u64).max(1)
        } else {
            cap
        }
    }

    /// `2n`, the exponent base relating consecutive layers.
    pub fn rho_base(&self) -> f64 {
        (2 * self.n) as f64
    }
}
