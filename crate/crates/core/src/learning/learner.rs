use super::{LearningError, TypeDistribution};
use crate::flow_eval::{dag_forward, DagRouter};
use crate::graph::{longest_distances, max_flow_oracle, DagInstance};
use crate::online::ArrivalTrace;
use crate::pipeline::{compute_dag_weights, PipelineConfig, PipelineRun};
use crate::rational::{self, Rational};
use crate::weights::DagWeights;
use num_traits::{Signed, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Type counts keyed by type id. Missing types count as zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstanceVector {
    pub counts: BTreeMap<String, Rational>,
}

impl InstanceVector {
    pub fn from_instance(inst: &DagInstance) -> Self {
        InstanceVector { counts: inst.types().iter().map(|t| (t.id.clone(), t.count)).collect() }
    }

    pub fn get(&self, id: &str) -> Rational {
        self.counts.get(id).copied().unwrap_or_else(Rational::zero)
    }

    /// Counts aligned with the skeleton's type list.
    pub fn to_counts(&self, skeleton: &DagInstance) -> Result<Vec<Rational>, LearningError> {
        if let Some(id) = self.counts.keys().find(|id| skeleton.type_index(id).is_none()) {
            return Err(LearningError::UnknownType(id.clone()));
        }
        Ok(skeleton.types().iter().map(|t| self.get(&t.id)).collect())
    }

    pub fn apply(&self, skeleton: &DagInstance) -> Result<DagInstance, LearningError> {
        Ok(skeleton.with_counts(&self.to_counts(skeleton)?)?)
    }
}

/// Draws `m` impressions. Deterministic in `seed`.
pub fn sample_instance(dist: &TypeDistribution, seed: u64) -> (InstanceVector, ArrivalTrace) {
    sample_with(dist, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub(crate) fn sample_with(dist: &TypeDistribution, rng: &mut ChaCha8Rng) -> (InstanceVector, ArrivalTrace) {
    let skel = dist.skeleton();
    let mut arrivals = Vec::with_capacity(dist.m());
    let iid = match dist.kind() {
        super::DrawKind::Iid(p) => Some(WeightedIndex::new(p).expect("validated probabilities")),
        super::DrawKind::Product(_) => None,
    };
    for j in 0..dist.m() {
        let t = match &iid {
            Some(w) => w.sample(rng),
            None => WeightedIndex::new(dist.slot(j)).expect("validated probabilities").sample(rng),
        };
        arrivals.push(t);
    }
    let trace = ArrivalTrace::new(arrivals);
    let counts = trace.counts(skel.types().len());
    let vector = InstanceVector {
        counts: skel.types().iter().zip(counts).map(|(t, c)| (t.id.clone(), c)).collect(),
    };
    (vector, trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Nearest integer, halves rounded up.
    Nearest,
    /// Keep the exact rational mean.
    Exact,
}

pub fn averaged_instance(samples: &[InstanceVector]) -> Result<InstanceVector, LearningError> {
    averaged_instance_with(samples, Rounding::Nearest)
}

pub fn averaged_instance_with(samples: &[InstanceVector], rounding: Rounding) -> Result<InstanceVector, LearningError> {
    if samples.is_empty() {
        return Err(LearningError::NoSamples);
    }
    let s = Rational::from_integer(samples.len() as i64);
    let mut sums: BTreeMap<String, Rational> = BTreeMap::new();
    for v in samples {
        for (id, c) in &v.counts {
            *sums.entry(id.clone()).or_insert_with(Rational::zero) += c;
        }
    }
    let half = Rational::new(1, 2);
    let counts = sums
        .into_iter()
        .map(|(id, total)| {
            let mean = total / s;
            let c = match rounding {
                Rounding::Exact => mean,
                Rounding::Nearest => (mean + half).floor(),
            };
            (id, c)
        })
        .collect();
    Ok(InstanceVector { counts })
}

/// `sum_i |a_i - b_i|` over the union of types.
pub fn instance_distance(a: &InstanceVector, b: &InstanceVector) -> Rational {
    let mut keys: Vec<&String> = a.counts.keys().chain(b.counts.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().map(|k| (a.get(k) - b.get(k)).abs()).sum()
}

#[derive(Debug, Clone)]
pub struct LearnedWeights {
    pub averaged: InstanceVector,
    pub instance: DagInstance,
    pub run: PipelineRun,
    /// `R(w, I_hat)` on the averaged instance.
    pub value_on_average: f64,
}

impl LearnedWeights {
    pub fn weights(&self) -> &DagWeights {
        &self.run.dag_weights
    }
}

/// Averages the samples and computes weights on the averaged instance.
pub fn learn_weights(samples: &[InstanceVector], skeleton: &DagInstance, cfg: &PipelineConfig) -> Result<LearnedWeights, LearningError> {
    let averaged = averaged_instance(samples)?;
    let instance = averaged.apply(skeleton)?;
    let run = compute_dag_weights(&instance, cfg)?;
    let value_on_average = crate::flow_eval::route_dag(&instance, &run.dag_weights, &run.dist)?.value;
    Ok(LearnedWeights { averaged, instance, run, value_on_average })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Mean and standard error of `R(w, I)` over `trials` sampled instances.
pub fn estimate_expected_value(weights: &DagWeights, dist: &TypeDistribution, trials: usize, seed: u64) -> Result<Estimate, LearningError> {
    assert!(trials >= 2, "need at least two trials");
    let skel = dist.skeleton();
    let router = DagRouter::new(skel, weights, &longest_distances(skel))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..trials)
        .map(|_| {
            let (_, trace) = sample_with(dist, &mut rng);
            dag_forward(skel, &router, &trace.counts_f64(skel.types().len())).1
        })
        .collect();
    let n = trials as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(Estimate { mean, std_error: (var / n).sqrt(), trials })
}

/// Capacity floor `ceil(c / eps^2 * ln(1 / eps))` on every node and, for
/// graphs with two or more offline layers, the same floor on the load each
/// node carries in an optimal flow of `inst`.
pub fn check_learnability(inst: &DagInstance, eps: f64, constant: f64) -> Result<(), LearningError> {
    let floor = (constant / (eps * eps) * (1.0 / eps).ln()).ceil();
    for v in 0..inst.node_count() {
        let c = inst.capacity_f64(v);
        if c < floor {
            return Err(LearningError::AssumptionViolated { node: inst.name(v).into(), what: "capacity", value: c, floor });
        }
    }
    if longest_distances(inst).depth() >= 2 {
        let opt = max_flow_oracle(inst)?;
        for (v, f) in opt.per_node_flow.iter().enumerate() {
            let load = rational::to_f64(f);
            if load < floor {
                return Err(LearningError::AssumptionViolated { node: inst.name(v).into(), what: "optimal load", value: load, floor });
            }
        }
    }
    Ok(())
}

/// `ceil(c n^2 / eps^2 ln(n ln n / delta))` samples, at least one.
pub fn sample_count(n: usize, eps: f64, delta: f64, constant: f64) -> usize {
    let n = n.max(2) as f64;
    (constant * n * n / (eps * eps) * (n * n.ln() / delta).ln()).ceil().max(1.0) as usize
}
