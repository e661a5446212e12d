use propflow::flow_eval::route_dag_counts;
use propflow::gen;
use propflow::graph::{longest_distances, DagInstance};
use propflow::learning::{
    averaged_instance, averaged_instance_with, check_learnability, estimate_expected_value, instance_distance,
    learn_weights, parse_distribution, random_iid_bipartite, random_perturbations, sample_count, sample_instance,
    write_distribution, DrawKind, InstanceVector, LearningError, Rounding, TypeDistribution,
};
use propflow::pipeline::PipelineConfig;
use propflow::Rational;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn vector(entries: &[(&str, i64)]) -> InstanceVector {
    InstanceVector { counts: entries.iter().map(|(k, v)| (k.to_string(), Rational::from_integer(*v))).collect() }
}

fn counts() -> impl Strategy<Value = InstanceVector> {
    prop::collection::btree_map(prop::sample::select(vec!["a", "b", "c", "d"]), 0i64..20, 0..4).prop_map(|m| {
        InstanceVector { counts: m.into_iter().map(|(k, v)| (k.to_string(), Rational::from_integer(v))).collect::<BTreeMap<_, _>>() }
    })
}

fn distribution(seed: u64) -> TypeDistribution {
    let mut rng = gen::rng(seed);
    random_iid_bipartite(&mut rng, 3, 4, 120, 0.3, 1.0).unwrap()
}

proptest! {
    #[test]
    fn distance_is_a_metric(a in counts(), b in counts(), c in counts()) {
        let zero = Rational::from_integer(0);
        prop_assert!(instance_distance(&a, &b) >= zero);
        prop_assert_eq!(instance_distance(&a, &a), zero);
        prop_assert_eq!(instance_distance(&a, &b), instance_distance(&b, &a));
        prop_assert!(instance_distance(&a, &c) <= instance_distance(&a, &b) + instance_distance(&b, &c));
    }
}

#[test]
fn averaging_rounds_half_up() {
    let s = [vector(&[("a", 1), ("b", 2)]), vector(&[("a", 2)])];
    let avg = averaged_instance(&s).unwrap();
    assert_eq!(avg.get("a"), Rational::from_integer(2));
    assert_eq!(avg.get("b"), Rational::from_integer(1));
    let exact = averaged_instance_with(&s, Rounding::Exact).unwrap();
    assert_eq!(exact.get("a"), Rational::new(3, 2));
    assert!(matches!(averaged_instance(&[]), Err(LearningError::NoSamples)));
}

#[test]
fn learning_is_deterministic() {
    let dist = distribution(4);
    let samples: Vec<_> = (0..30).map(|s| sample_instance(&dist, s).0).collect();
    let cfg = PipelineConfig::new(0.25);
    let a = learn_weights(&samples, dist.skeleton(), &cfg).unwrap();
    let b = learn_weights(&samples, dist.skeleton(), &cfg).unwrap();
    assert_eq!(a.weights(), b.weights());
    assert_eq!(a.averaged, b.averaged);
    assert_eq!(sample_instance(&dist, 9), sample_instance(&dist, 9));
}

// Routing is concave in the counts, so the value at the mean instance sits
// above the mean value.
#[test]
fn value_at_the_mean_beats_the_mean_value() {
    for seed in 0..10 {
        let dist = distribution(seed);
        let samples: Vec<_> = (0..40).map(|s| sample_instance(&dist, 1000 * seed + s).0).collect();
        let learned = learn_weights(&samples, dist.skeleton(), &PipelineConfig::new(0.25)).unwrap();
        let skel = dist.skeleton();
        let at_mean =
            route_dag_counts(skel, learned.weights(), &longest_distances(skel), &dist.expected_counts()).unwrap().value;
        let est = estimate_expected_value(learned.weights(), &dist, 300, seed).unwrap();
        assert!(at_mean >= est.mean - 3.0 * est.std_error, "seed {seed}: {at_mean} vs {est:?}");
    }
}

#[test]
fn generated_distributions_meet_the_capacity_floor() {
    let dist = distribution(11);
    check_learnability(dist.skeleton(), 0.3, 1.0).unwrap();
    assert!(matches!(
        check_learnability(dist.skeleton(), 0.3, 10.0),
        Err(LearningError::AssumptionViolated { what: "capacity", .. })
    ));
    let mut rng = gen::rng(1);
    let deep = gen::random_layered(&mut rng, 2, 2, 2, &gen::Shape { max_capacity: 500, max_count: 3, halves: false });
    assert!(check_learnability(&deep, 0.3, 1.0).is_err());
}

#[test]
fn distribution_text_round_trip() {
    let dist = distribution(2);
    assert_eq!(parse_distribution(&write_distribution(&dist)).unwrap(), dist);
    let skel = dist.skeleton().clone();
    let product = TypeDistribution::new(skel.clone(), 2, DrawKind::Product(vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.25; 4]])).unwrap();
    assert_eq!(parse_distribution(&write_distribution(&product)).unwrap(), product);
    assert_eq!(product.expected_counts(), vec![1.25, 0.25, 0.25, 0.25]);
    assert!(TypeDistribution::new(skel, 5, DrawKind::Iid(vec![0.5, 0.5, 0.5, -0.5])).is_err());
}

#[test]
fn point_mass_reproduces_the_instance() {
    let spec = "[nodes]\na 2\n[sink]\nt\n[edges]\na t\n[types]\nx 2 a\ny 1 a\n".parse().unwrap();
    let inst = DagInstance::from_spec(&spec).unwrap();
    let dist = TypeDistribution::point_mass(&inst).unwrap();
    for s in 0..5 {
        assert_eq!(sample_instance(&dist, s).0, InstanceVector::from_instance(&inst));
    }
}

#[test]
fn perturbations_stay_within_gamma() {
    let mut rng = gen::rng(8);
    let inst = gen::random_bipartite(&mut rng, 4, 4, &gen::Shape::default());
    let base = InstanceVector::from_instance(&inst);
    for counts in random_perturbations(&inst, 50, 7, 3) {
        let other = InstanceVector::from_instance(&inst.with_counts(&counts).unwrap());
        assert!(instance_distance(&base, &other) <= Rational::from_integer(7));
        assert!(counts.iter().all(|c| *c >= Rational::from_integer(0)));
    }
}

#[test]
fn sample_count_grows_with_precision() {
    assert!(sample_count(4, 0.1, 0.1, 1.0) > sample_count(4, 0.2, 0.1, 1.0));
    assert!(sample_count(8, 0.2, 0.1, 1.0) > sample_count(4, 0.2, 0.1, 1.0));
    assert_eq!(sample_count(1, 0.5, 0.1, 1.0), sample_count(2, 0.5, 0.1, 1.0));
}
