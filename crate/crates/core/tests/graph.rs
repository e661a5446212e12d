use propflow::gen::{self, Shape};
use propflow::graph::{
    layered_max_flow, longest_distances, max_flow_oracle, reduce_to_layered, write_instance, Capacity, DagInstance,
    GraphError, InstanceSpec, Vertex,
};
use propflow::Rational;
use propflow_oracles::{compare, dense_max_flow};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn random_instance(seed: u64) -> DagInstance {
    let mut rng = gen::rng(seed);
    let k = rng.gen_range(1..=4);
    match seed % 3 {
        0 => {
            let n = rng.gen_range(1..=6);
            gen::random_bipartite(&mut rng, n, k, &Shape::default())
        }
        1 => {
            let depth = rng.gen_range(1..=3);
            gen::random_layered(&mut rng, depth, 3, k, &Shape::default())
        }
        _ => {
            let n = rng.gen_range(2..=8);
            gen::random_dag(&mut rng, n, 0.4, k, &Shape::default())
        }
    }
}

fn parse(text: &str) -> Result<DagInstance, GraphError> {
    let spec: InstanceSpec = text.parse().expect("syntactically valid");
    DagInstance::from_spec(&spec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_keeps_max_flow(seed in any::<u64>()) {
        let inst = random_instance(seed);
        let layered = reduce_to_layered(&inst, &longest_distances(&inst));
        let direct = max_flow_oracle(&inst).unwrap().opt_value;
        prop_assert_eq!(layered_max_flow(&layered, &layered.counts()).unwrap(), direct);
    }

    #[test]
    fn max_flow_matches_dense_reference(seed in any::<u64>()) {
        let inst = random_instance(seed);
        let fast = max_flow_oracle(&inst).unwrap().opt_f64();
        let slow = dense_max_flow(&inst).unwrap();
        let r = compare(slow, fast, 1e-9);
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn oracle_flow_respects_capacities(seed in any::<u64>()) {
        let inst = random_instance(seed);
        let res = max_flow_oracle(&inst).unwrap();
        for v in 0..inst.node_count() {
            prop_assert!(res.per_node_flow[v] >= Rational::from_integer(0));
            prop_assert!(res.per_node_flow[v] <= inst.capacity(v));
        }
        prop_assert!(res.opt_value <= inst.total_supply());
        // everything reaching the sink passes through one of its predecessors
        let into_sink: Rational = inst.sink_predecessors().iter().map(|&v| res.per_node_flow[v]).sum();
        prop_assert!(res.opt_value <= into_sink);
    }

    #[test]
    fn distances_ignore_listing_order(seed in any::<u64>()) {
        let inst = random_instance(seed);
        let mut spec = inst.to_spec();
        let mut rng = gen::rng(seed ^ 0x5eed);
        spec.nodes.shuffle(&mut rng);
        spec.edges.shuffle(&mut rng);
        let other = DagInstance::from_spec(&spec).unwrap();
        let (a, b) = (longest_distances(&inst), longest_distances(&other));
        prop_assert_eq!(a.sink(), b.sink());
        for v in 0..inst.node_count() {
            prop_assert_eq!(a.node(v), b.node(other.node_index(inst.name(v)).unwrap()));
        }
        prop_assert_eq!(longest_distances(&inst), a);
    }

    #[test]
    fn instance_text_round_trip(seed in any::<u64>()) {
        let inst = random_instance(seed);
        prop_assert_eq!(parse(&write_instance(&inst)).unwrap(), inst);
    }
}

#[test]
fn layered_copies_and_labels() {
    // a -> b -> t and a -> t: a sits two steps from the sink, so its edge to t
    // lands on a virtual copy of the sink in the last layer
    let inst = parse("[nodes]\na 2\nb 1\n[sink]\nt\n[edges]\na b\nb t\na t\n[types]\nx 3 a\n").unwrap();
    let dist = longest_distances(&inst);
    assert_eq!(dist.depth(), 2);
    assert_eq!(dist.node(0), 2);
    let layered = reduce_to_layered(&inst, &dist);
    assert_eq!(layered.depth(), 2);
    assert_eq!(layered.virtual_count(), 1);
    let copy = layered.nodes().iter().find(|v| !v.real).unwrap();
    assert_eq!(copy.capacity, Capacity::Unbounded);
    assert_eq!(copy.origin, Vertex::Sink);
    assert_eq!(copy.layer, 2);
    assert!(layered.find_label("t@2").is_some());
    assert!(layered.find_label("a@1").is_some());
    // b@1 exists as a candidate but nothing reaches it
    assert!(layered.find_label("b@1").is_none());
    assert_eq!(layered_max_flow(&layered, &layered.counts()).unwrap(), Rational::from_integer(2));
}

#[test]
fn zero_capacity_is_legal() {
    let inst = parse("[nodes]\na 0\nb 1\n[sink]\nt\n[edges]\na t\nb t\n[types]\nx 2 a b\n").unwrap();
    assert_eq!(max_flow_oracle(&inst).unwrap().opt_value, Rational::from_integer(1));
}

#[test]
fn rejects_malformed_graphs() {
    let cyc = parse("[nodes]\na 1\nb 1\n[sink]\nt\n[edges]\na b\nb a\nb t\n[types]\nx 1 a\n");
    assert!(matches!(cyc, Err(GraphError::CyclicGraph(_))));
    let unreachable = parse("[nodes]\na 1\nb 1\n[sink]\nt\n[edges]\na t\n[types]\nx 1 a\n");
    assert!(matches!(unreachable, Err(GraphError::UnreachableSink(_))));
    let unknown = parse("[nodes]\na 1\n[sink]\nt\n[edges]\na t\n[types]\nx 1 zz\n");
    assert!(matches!(unknown, Err(GraphError::UnknownNodeReference { .. })));
    let dup = parse("[nodes]\na 1\na 2\n[sink]\nt\n[edges]\na t\n[types]\nx 1 a\n");
    assert!(matches!(dup, Err(GraphError::DuplicateId(_))));
    let sink_out = parse("[nodes]\na 1\n[sink]\nt\n[edges]\na t\nt a\n[types]\nx 1 a\n");
    assert!(sink_out.is_err());
    let negative = parse("[nodes]\na -1\n[sink]\nt\n[edges]\na t\n[types]\nx 1 a\n");
    assert!(matches!(negative, Err(GraphError::NegativeValue(_))));
}

#[test]
fn fractional_values_are_exact() {
    let inst = parse("[nodes]\na 1/3\nb 1/2\n[sink]\nt\n[edges]\na t\nb t\n[types]\nx 1 a b\n").unwrap();
    assert_eq!(max_flow_oracle(&inst).unwrap().opt_value, Rational::new(5, 6));
}
