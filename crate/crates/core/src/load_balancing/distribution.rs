use super::{opt_makespan, Job, LbError, ScheduleInstance};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

/// One possible realisation of a job slot.
#[derive(Debug, Clone, PartialEq)]
pub struct JobOption {
    pub size: f64,
    pub machines: Vec<usize>,
    pub prob: f64,
}

/// Product distribution: job slot `j` draws independently from its own list
/// of options.
#[derive(Debug, Clone, PartialEq)]
pub struct JobDistribution {
    machines: usize,
    slots: Vec<Vec<JobOption>>,
}

impl JobDistribution {
    pub fn new(machines: usize, slots: Vec<Vec<JobOption>>) -> Result<Self, LbError> {
        for (j, opts) in slots.iter().enumerate() {
            let s: f64 = opts.iter().map(|o| o.prob).sum();
            if opts.is_empty() || opts.iter().any(|o| !(o.prob >= 0.0)) || (s - 1.0).abs() > 1e-9 {
                return Err(LbError::InvalidDistribution(format!("slot {j} is not a probability vector")));
            }
            // validates sizes and machine ids
            let jobs = opts
                .iter()
                .map(|o| Job { id: format!("j{j}"), size: o.size, machines: o.machines.clone() })
                .collect();
            ScheduleInstance::new(machines, jobs)?;
        }
        Ok(JobDistribution { machines, slots })
    }

    /// `n` unit jobs whose neighbourhood is drawn i.i.d. from `options`.
    pub fn iid_unit(machines: usize, n: usize, options: &[(Vec<usize>, f64)]) -> Result<Self, LbError> {
        let row: Vec<JobOption> =
            options.iter().map(|(m, p)| JobOption { size: 1.0, machines: m.clone(), prob: *p }).collect();
        Self::new(machines, vec![row; n])
    }

    /// Random product distribution: every slot gets `choices` options with
    /// integer sizes in `1..=max_size` and random neighbourhoods.
    pub fn random(rng: &mut impl Rng, machines: usize, n: usize, choices: usize, max_size: u32) -> Self {
        let slots = (0..n)
            .map(|_| {
                let raw: Vec<f64> = (0..choices).map(|_| rng.gen_range(1..=4) as f64).collect();
                let total: f64 = raw.iter().sum();
                raw.iter()
                    .map(|r| JobOption {
                        size: rng.gen_range(1..=max_size) as f64,
                        machines: random_neighborhood(rng, machines),
                        prob: r / total,
                    })
                    .collect()
            })
            .collect();
        JobDistribution { machines, slots }
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn slots(&self) -> &[Vec<JobOption>] {
        &self.slots
    }

    pub fn sample(&self, rng: &mut impl Rng) -> ScheduleInstance {
        let jobs = self
            .slots
            .iter()
            .enumerate()
            .map(|(j, opts)| {
                let o = if opts.len() == 1 {
                    &opts[0]
                } else {
                    &opts[WeightedIndex::new(opts.iter().map(|o| o.prob)).expect("validated").sample(rng)]
                };
                Job { id: format!("j{j}"), size: o.size, machines: o.machines.clone() }
            })
            .collect();
        ScheduleInstance::new(self.machines, jobs).expect("validated options")
    }

    /// `(1 / eps^2) ln(m / eps)`, times `constant`.
    pub fn opt_floor(&self, eps: f64, constant: f64) -> f64 {
        constant / (eps * eps) * (self.machines as f64 / eps).ln()
    }

    /// Monte Carlo estimate of `E[OPT]`; fails if it falls below the floor.
    pub fn check_opt_floor(&self, eps: f64, constant: f64, rng: &mut impl Rng, trials: usize) -> Result<f64, LbError> {
        let mean = (0..trials).map(|_| opt_makespan(&self.sample(rng))).sum::<f64>() / trials.max(1) as f64;
        let floor = self.opt_floor(eps, constant);
        if mean < floor {
            return Err(LbError::OptFloor { expected: mean, floor });
        }
        Ok(mean)
    }
}

fn random_neighborhood(rng: &mut impl Rng, machines: usize) -> Vec<usize> {
    loop {
        let set: Vec<usize> = (0..machines).filter(|_| rng.gen_bool(0.5)).collect();
        if !set.is_empty() {
            return set;
        }
    }
}

/// Random instance with `n` jobs of integer size in `1..=max_size`.
pub fn random_schedule(rng: &mut impl Rng, machines: usize, n: usize, max_size: u32) -> ScheduleInstance {
    let jobs = (0..n)
        .map(|j| Job {
            id: format!("j{j}"),
            size: rng.gen_range(1..=max_size) as f64,
            machines: random_neighborhood(rng, machines),
        })
        .collect();
    ScheduleInstance::new(machines, jobs).expect("generated jobs are valid")
}

/// Scales the total size of every job type by an independent factor drawn
/// uniformly from `[1 - spread, 1 + spread]`.
pub fn perturb_types(rng: &mut impl Rng, inst: &ScheduleInstance, spread: f64) -> ScheduleInstance {
    let mut out = inst.clone();
    for key in inst.type_totals().keys() {
        let f = rng.gen_range(1.0 - spread..=1.0 + spread);
        out = out.scale_type(key, f).expect("positive factor");
    }
    out
}
