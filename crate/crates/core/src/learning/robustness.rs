use super::LearningError;
use crate::flow_eval::route_dag;
use crate::graph::{longest_distances, max_flow_oracle, DagInstance};
use crate::online::{simulate_direct, simulate_maximal, ArrivalTrace};
use crate::rational::{self, Rational};
use crate::weights::DagWeights;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub opt: f64,
    pub direct: f64,
    pub maximal: f64,
    /// `(1 - eps) OPT - 2 gamma`.
    pub bound_direct: f64,
    /// `max((1 - eps) OPT - 2 gamma, OPT / (d + 1))`.
    pub bound_maximal: f64,
    pub ok: bool,
}

/// Count vectors at `l1` distance at most `max_gamma` from the base, built
/// from random unit steps that never drive a count negative.
pub fn random_perturbations(base: &DagInstance, rows: usize, max_gamma: u32, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = base.types().len();
    let one = Rational::from_integer(1);
    (0..rows)
        .map(|_| {
            let mut c = base.counts();
            if k == 0 {
                return c;
            }
            for _ in 0..rng.gen_range(0..=max_gamma) {
                let t = rng.gen_range(0..k);
                if rng.gen_bool(0.5) || c[t] < one {
                    c[t] += one;
                } else {
                    c[t] -= one;
                }
            }
            c
        })
        .collect()
}

/// Runs both online policies on every perturbed count vector and checks
/// them against the instance-robustness bounds. The weights must be a
/// `(1 - eps)`-approximation on `base`; that is verified first.
pub fn robustness_sweep(
    base: &DagInstance,
    weights: &DagWeights,
    perturbed: &[Vec<Rational>],
    eps: f64,
    seed: u64,
) -> Result<Vec<SweepRow>, LearningError> {
    let dist = longest_distances(base);
    let depth = dist.depth().max(1) as f64;
    let base_opt = max_flow_oracle(base)?.opt_f64();
    let base_val = route_dag(base, weights, &dist)?.value;
    if base_val < (1.0 - eps) * base_opt - 1e-9 {
        return Err(LearningError::BaseNotApproximate { ratio: base_val / base_opt, required: 1.0 - eps });
    }
    let base_counts = base.counts();
    perturbed
        .iter()
        .enumerate()
        .map(|(i, counts)| {
            let inst = base.with_counts(counts)?;
            let gamma: f64 = counts.iter().zip(&base_counts).map(|(a, b)| rational::to_f64(&(a - b)).abs()).sum();
            let opt = max_flow_oracle(&inst)?.opt_f64();
            let trace = ArrivalTrace::shuffled(&inst, seed.wrapping_add(i as u64))?;
            let (direct, _) = simulate_direct(&inst, weights, &trace)?;
            let (maximal, _) = simulate_maximal(&inst, weights, &trace)?;
            let bound_direct = (1.0 - eps) * opt - 2.0 * gamma;
            let bound_maximal = bound_direct.max(opt / (depth + 1.0));
            let ok = direct >= bound_direct - 1e-6 && maximal >= bound_maximal - 1e-6;
            Ok(SweepRow { gamma, opt, direct, maximal, bound_direct, bound_maximal, ok })
        })
        .collect()
}
