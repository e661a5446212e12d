use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use crate::weights::DagWeights;

/// Multiplicative distance between two weight vectors after both are
/// scaled so their smallest weight is 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterError {
    pub eta: f64,
}

pub fn parameter_error(predicted: &DagWeights, reference: &DagWeights) -> ParameterError {
    assert_eq!(predicted.weight_log.len(), reference.weight_log.len(), "weight maps cover different nodes");
    let p = predicted.normalized();
    let r = reference.normalized();
    let gap = p.weight_log.iter().zip(&r.weight_log).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ParameterError { eta: gap.exp() }
}

/// Every weight multiplied by an independent factor `e^u`, `u` uniform in
/// `[-ln eta, ln eta]`.
pub fn perturb_weights(weights: &DagWeights, eta: f64, seed: u64) -> DagWeights {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = eta.ln();
    let mut out = weights.clone();
    if r > 0.0 {
        for w in &mut out.weight_log {
            *w += rng.gen_range(-r..=r);
        }
    }
    out
}
