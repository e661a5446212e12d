//! Learning weights from sampled instances and checking them on fresh draws.

use propflow::gen;
use propflow::learning::{estimate_expected_value, learn_weights, random_iid_bipartite, sample_count, sample_instance};
use propflow::pipeline::PipelineConfig;
use propflow::weights::DagWeights;
use rand::Rng;

fn main() {
    let eps = 0.25;
    let mut rng = gen::rng(3);
    let dist = random_iid_bipartite(&mut rng, 3, 5, 150, eps, 1.0).unwrap();
    let skel = dist.skeleton();
    let s = sample_count(skel.node_count(), eps, 0.1, 1.0);
    println!("{} advertisers, {} types, {} impressions per draw, {s} samples", skel.node_count(), skel.types().len(), dist.m());

    let samples: Vec<_> = (0..s).map(|_| sample_instance(&dist, rng.gen()).0).collect();
    let learned = learn_weights(&samples, skel, &PipelineConfig::new(eps)).unwrap();
    for t in skel.types() {
        println!("  averaged count of {:<3} {}", t.id, learned.averaged.get(&t.id));
    }

    let names = (0..skel.node_count()).map(|v| skel.name(v).to_string()).collect();
    let uniform = DagWeights::uniform(names, 2.0 * skel.node_count() as f64);
    let a = estimate_expected_value(learned.weights(), &dist, 500, 11).unwrap();
    let b = estimate_expected_value(&uniform, &dist, 500, 11).unwrap();
    println!("learned E[R] {:.2} +- {:.2}", a.mean, a.std_error);
    println!("uniform E[R] {:.2} +- {:.2}", b.mean, b.std_error);
    println!("value on the averaged instance {:.2}", learned.value_on_average);
}
