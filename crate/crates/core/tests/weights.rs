use propflow::gen::{self, Shape};
use propflow::graph::{longest_distances, reduce_to_layered, DagInstance, LayeredGraph, Vertex};
use propflow::pipeline::{compute_dag_weights, default_iterations, schedule_for, PipelineConfig};
use propflow::weights::{
    bipartite_default_iterations, bipartite_weights, cond, d_layer_weights, d_layer_weights_observed, make_exact_schedule,
    make_schedule, read_weight_file, three_layer_weights, write_weight_file, ScheduleKind, WeightError,
};
use proptest::prelude::*;
use rand::Rng;

fn layered_instance(seed: u64, depth: usize) -> (DagInstance, LayeredGraph) {
    let mut rng = gen::rng(seed);
    let k = rng.gen_range(1..=4);
    let inst = gen::random_layered(&mut rng, depth, 3, k, &Shape::default());
    let layered = reduce_to_layered(&inst, &longest_distances(&inst));
    (inst, layered)
}

#[test]
fn schedule_values() {
    let s = make_exact_schedule(2, 3, 0.2).unwrap();
    assert!((s.log_base(2) - 0.1f64.ln_1p()).abs() < 1e-15);
    assert!((s.log_base(1) - 0.1f64.ln_1p() / 6.0).abs() < 1e-15);
    assert!((s.threshold_factor(2) - (1.0 + s.epsilon(1)) * (1.0 + s.epsilon(2))).abs() < 1e-15);
    let lin = make_schedule(2, 3, 0.2).unwrap();
    assert_eq!(lin.per_layer(), &[0.1 / 6.0, 0.1]);
    assert_eq!(lin.kind(), ScheduleKind::Linear);
    assert!(matches!(make_schedule(2, 3, 1.0), Err(WeightError::InvalidEpsilon(_))));
    assert!(matches!(make_exact_schedule(1, 3, 0.0), Err(WeightError::InvalidEpsilon(_))));
    assert!(matches!(make_schedule(12, 50, 0.1), Err(WeightError::UnderflowRisk { .. })));
}

#[test]
fn three_layer_needs_depth_two() {
    let (_, layered) = layered_instance(3, 3);
    let s = make_exact_schedule(3, layered.max_layer_size(), 0.25).unwrap();
    assert!(matches!(three_layer_weights(&layered, &s, 10), Err(WeightError::WrongDepth { expected: 2, got: 3 })));
    let s2 = make_exact_schedule(2, layered.max_layer_size(), 0.25).unwrap();
    assert!(matches!(d_layer_weights(&layered, &s2, 10), Err(WeightError::WrongDepth { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    // With one offline layer the framework threshold is (1 + eps) C, the same
    // as the bipartite algorithm, so the two runs agree count for count.
    #[test]
    fn bipartite_matches_framework_at_depth_one(seed in any::<u64>()) {
        let (_, layered) = layered_instance(seed, 1);
        let eps = 0.2;
        let t = bipartite_default_iterations(layered.max_layer_size(), eps);
        let a = bipartite_weights(&layered, t, eps).unwrap();
        let s = make_exact_schedule(1, layered.max_layer_size(), eps).unwrap();
        let b = d_layer_weights(&layered, &s, t).unwrap();
        prop_assert_eq!(a.decrements, b.decrements);
    }

    #[test]
    fn chains_move_in_lock_step(seed in any::<u64>(), depth in 2usize..=3) {
        let (_, layered) = layered_instance(seed, depth);
        let s = schedule_for(&layered, 0.25, ScheduleKind::Exact).unwrap();
        let chains: Vec<Vec<usize>> = layered.chains().map(|(_, c)| c.to_vec()).collect();
        let sink: Vec<usize> = layered.chain(Vertex::Sink).map(|c| c.to_vec()).unwrap_or_default();
        let mut bad = 0;
        d_layer_weights_observed(&layered, &s, 20_000, |view| {
            for c in &chains {
                bad += usize::from(c.iter().any(|&v| view.after[v] != view.after[c[0]]));
            }
            bad += sink.iter().filter(|&&v| view.after[v] != 0).count();
        }).unwrap();
        prop_assert_eq!(bad, 0);
    }

    #[test]
    fn fixed_point_is_final(seed in any::<u64>()) {
        let (_, layered) = layered_instance(seed, 2);
        let s = schedule_for(&layered, 0.25, ScheduleKind::Exact).unwrap();
        let t = default_iterations(&layered, &s, 1_000_000);
        let a = d_layer_weights(&layered, &s, t).unwrap();
        prop_assume!(a.fixed_point);
        let b = d_layer_weights(&layered, &s, a.iterations_run + 500).unwrap();
        prop_assert_eq!(&a.decrements, &b.decrements);
        prop_assert_eq!(a.iterations_run, b.iterations_run);
    }

    // A forced decrease never happens when some heaviest out-neighbour is
    // still at the top level or sits too far above.
    #[test]
    fn forced_decrease_exemptions(
        seed in any::<u64>(),
        raw in prop::collection::vec((0u32..4, any::<bool>()), 64),
        gap in 0.5f64..4.0,
    ) {
        let (_, layered) = layered_instance(seed, 2);
        let n = layered.node_count();
        let before: Vec<u32> = raw.iter().take(n).map(|r| r.0).collect();
        let decreased: Vec<bool> = raw.iter().take(n).map(|r| r.1).collect();
        let current: Vec<u32> = before.iter().zip(&decreased).map(|(&k, &d)| k + u32::from(d)).collect();
        for &a in layered.layer(1) {
            let out = layered.out(a);
            let Some(kmin) = out.iter().map(|&b| before[b]).min() else { continue };
            let heaviest: Vec<usize> = out.iter().copied().filter(|&b| before[b] == kmin).collect();
            let top = heaviest.iter().any(|&b| current[b] == 0);
            let far = heaviest.iter().any(|&b| current[a] as f64 - current[b] as f64 >= gap);
            if top || far {
                prop_assert!(!cond(&layered, a, &before, &current, &decreased, gap));
            }
        }
    }

    #[test]
    fn weight_file_round_trip(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let n = rng.gen_range(2..=6);
        let inst = gen::random_dag(&mut rng, n, 0.4, 3, &Shape::default());
        let run = compute_dag_weights(&inst, &PipelineConfig::new(0.25).with_max_iterations(5_000)).unwrap();
        let text = write_weight_file(&run.state, &run.layered, &run.dag_weights);
        let file = read_weight_file(&text).unwrap();
        prop_assert_eq!(&file.dag, &run.dag_weights);
        prop_assert_eq!(file.to_state(&run.layered).unwrap(), run.state);
    }
}

#[test]
fn weights_never_increase() {
    let (_, layered) = layered_instance(17, 3);
    let s = schedule_for(&layered, 0.25, ScheduleKind::Linear).unwrap();
    let mut bad = 0;
    d_layer_weights_observed(&layered, &s, 50_000, |view| {
        for v in 0..view.after.len() {
            bad += usize::from(view.after[v] < view.before[v] || (view.after[v] > view.before[v]) != view.decreased[v]);
            bad += usize::from(view.after[v] > view.before[v] + 1);
        }
    })
    .unwrap();
    assert_eq!(bad, 0);
}

#[test]
fn over_allocated_single_node_decreases() {
    let spec = "[nodes]\na 1\nb 4\n[sink]\nt\n[edges]\na t\nb t\n[types]\nx 4 a b\n".parse().unwrap();
    let inst = DagInstance::from_spec(&spec).unwrap();
    let run = compute_dag_weights(&inst, &PipelineConfig::new(0.2)).unwrap();
    let a = run.layered.find_label("a@1").unwrap();
    let b = run.layered.find_label("b@1").unwrap();
    assert!(run.state.decrements[a] > 0);
    assert_eq!(run.state.decrements[b], 0);
    assert!(run.dag_weights.weight_log[0] < run.dag_weights.weight_log[1]);
}
