//! End-to-end quality checks. Each test prints one `[PASS]` or `[FAIL]`
//! line straight to stderr (visible without `--nocapture`) and then asserts.

use propflow::flow_eval::{layered_forward, route_dag, route_layered};
use propflow::gen::{self, Shape};
use propflow::graph::{longest_distances, max_flow_oracle, reduce_to_layered, DagInstance, InstanceSpec, TypeSpec, Vertex};
use propflow::learning::{estimate_expected_value, learn_weights, random_iid_bipartite, random_perturbations, robustness_sweep, sample_count, sample_instance, LearningError};
use propflow::load_balancing::{
    fractional_assign, lb_robustness_check, learn_machine_weights, makespan_weights, opt_makespan, perturb_types,
    random_schedule, JobDistribution, DEFAULT_ROUNDS_CONSTANT,
};
use propflow::online::{
    gen_bipartite_lowerbound, gen_worstcase_dag, parameter_error, perturb_weights, run_adversary,
    simulate_adaptive_bipartite, simulate_direct, simulate_maximal, AdaptiveConfig, ArrivalTrace, GreedyPolicy,
    MaximalPolicy,
};
use propflow::pipeline::{compute_dag_weights, default_iterations, schedule_for, PipelineConfig};
use propflow::weights::{bipartite_default_iterations, bipartite_weights, d_layer_weights_observed, ScheduleKind, DEFAULT_ITERATION_CAP};
use propflow::Rational;
use rand::Rng;
use std::io::Write;
use std::time::Instant;

fn report(name: &str, pass: bool, detail: String, started: Instant) {
    let line = format!(
        "[{}] {name}: {detail} ({:.1}s)\n",
        if pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{line}");
}

fn opt(inst: &DagInstance) -> f64 {
    max_flow_oracle(inst).unwrap().opt_f64()
}

fn ratio(value: f64, opt: f64) -> f64 {
    if opt == 0.0 {
        1.0
    } else {
        value / opt
    }
}

#[test]
fn bipartite_near_optimality() {
    let started = Instant::now();
    let eps = 0.2;
    let shape = Shape { max_capacity: 10, max_count: 20, halves: true };
    let mut rng = gen::rng(101);
    let (mut worst, mut bad) = (f64::INFINITY, 0);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=6);
        let inst = gen::random_bipartite(&mut rng, n, k, &shape);
        let layered = reduce_to_layered(&inst, &longest_distances(&inst));
        let t = bipartite_default_iterations(layered.max_layer_size(), eps);
        let state = bipartite_weights(&layered, t, eps).unwrap();
        let value = route_layered(&layered, &state, &layered.counts_f64()).value;
        let o = opt(&inst);
        worst = worst.min(ratio(value, o));
        bad += usize::from(value < (1.0 - 5.0 * eps) * o - 1e-9);
    }
    report(
        "bipartite_near_optimality",
        bad == 0,
        format!("200 instances, eps {eps}, violations of (1-5eps)OPT: {bad}, worst value/OPT {worst:.4}"),
        started,
    );
}

#[test]
fn layered_near_optimality_and_framework_properties() {
    let started = Instant::now();
    let eps = 0.25;
    let mut rng = gen::rng(202);
    let (mut worst, mut bad_value, mut bad_mono, mut bad_dom, mut iters) = (f64::INFINITY, 0, 0usize, 0usize, 0u64);
    for _ in 0..100 {
        let k = rng.gen_range(1..=5);
        let inst = gen::random_layered(&mut rng, 3, 4, k, &Shape::default());
        let layered = reduce_to_layered(&inst, &longest_distances(&inst));
        assert_eq!(layered.depth(), 3);
        let schedule = schedule_for(&layered, eps, ScheduleKind::Exact).unwrap();
        let t = default_iterations(&layered, &schedule, DEFAULT_ITERATION_CAP);
        let counts = layered.counts_f64();
        let caps: Vec<f64> = layered.nodes().iter().map(|v| v.capacity.as_f64()).collect();
        let mut prev: Option<(Vec<f64>, Vec<bool>)> = None;
        let check_mono = |old: &[f64], dec: &[bool], new: &[f64]| -> usize {
            (0..old.len())
                .filter(|&v| if dec[v] { new[v] > old[v] + 1e-9 } else { new[v] < old[v] - 1e-9 })
                .count()
        };
        let state = d_layer_weights_observed(&layered, &schedule, t, |view| {
            if let Some((old, dec)) = &prev {
                bad_mono += check_mono(old, dec, view.alloc);
            }
            prev = Some((view.alloc.to_vec(), view.decreased.to_vec()));
            for v in 0..layered.node_count() {
                let out = layered.out(v);
                if layered.node(v).layer < 3 && !out.iter().any(|&b| view.after[b] <= view.after[v]) {
                    bad_dom += 1;
                }
            }
        })
        .unwrap();
        let mut last = vec![0.0; layered.node_count()];
        layered_forward(&layered, &state.log_weights(), &counts, &caps, &mut last);
        if let Some((old, dec)) = &prev {
            bad_mono += check_mono(old, dec, &last);
        }
        iters += state.iterations_run;
        let value = route_layered(&layered, &state, &counts).value;
        let o = opt(&inst);
        worst = worst.min(ratio(value, o));
        bad_value += usize::from(value < (1.0 - 10.0 * eps) * o - 1e-9);
    }
    report(
        "layered_near_optimality_and_framework_properties",
        bad_value == 0 && bad_mono == 0 && bad_dom == 0,
        format!(
            "100 three-layer instances, eps {eps}, value violations {bad_value}, worst value/OPT {worst:.4}, \
             monotonicity violations {bad_mono}, dominance violations {bad_dom}, iterations {iters}"
        ),
        started,
    );
}

#[test]
fn dag_transfer_consistency() {
    let started = Instant::now();
    let eps = 0.25;
    let mut rng = gen::rng(303);
    let cfg = PipelineConfig::new(eps);
    let (mut bad_chain, mut worst_gap, mut depths) = (0, 0.0f64, [0usize; 9]);
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let k = rng.gen_range(1..=4);
        let p = rng.gen_range(0.2..0.6);
        let inst = gen::random_dag(&mut rng, n, p, k, &Shape::default());
        let run = compute_dag_weights(&inst, &cfg).unwrap();
        depths[run.layered.depth()] += 1;
        for (origin, chain) in run.layered.chains() {
            let k0 = run.state.decrements[chain[0]];
            if chain.iter().any(|&c| run.state.decrements[c] != k0) || (origin == Vertex::Sink && k0 != 0) {
                bad_chain += 1;
            }
        }
        let dag = route_dag(&inst, &run.dag_weights, &run.dist).unwrap().value;
        let lay = route_layered(&run.layered, &run.state, &run.layered.counts_f64()).value;
        worst_gap = worst_gap.max((dag - lay).abs() / dag.abs().max(lay.abs()).max(1e-300));
    }
    report(
        "dag_transfer_consistency",
        bad_chain == 0 && worst_gap <= 1e-9,
        format!("100 DAGs (depth histogram {depths:?}), unequal chains {bad_chain}, worst relative gap {worst_gap:.2e}"),
        started,
    );
}

#[test]
fn maximal_flow_floor() {
    let started = Instant::now();
    let eps = 0.25;
    let mut rng = gen::rng(404);
    let (mut rows, mut bad_floor, mut bad_dom) = (0, 0, 0);
    let mut worst = f64::INFINITY;
    for i in 0..60 {
        let k = rng.gen_range(1..=4);
        let inst = if i % 2 == 0 {
            let depth = rng.gen_range(1..=3);
            gen::random_layered(&mut rng, depth, 3, k, &Shape::default())
        } else {
            let n = rng.gen_range(2..=7);
            gen::random_dag(&mut rng, n, 0.4, k, &Shape::default())
        };
        let d = longest_distances(&inst).depth().max(1) as f64;
        let o = opt(&inst);
        let good = compute_dag_weights(&inst, &PipelineConfig::new(eps)).unwrap().dag_weights;
        let candidates = [good.clone(), perturb_weights(&good, 4.0, i), perturb_weights(&good, 50.0, i + 1000)];
        for (j, w) in candidates.iter().enumerate() {
            let trace = ArrivalTrace::shuffled(&inst, 7 * i + j as u64).unwrap();
            let (direct, _) = simulate_direct(&inst, w, &trace).unwrap();
            let (maximal, _) = simulate_maximal(&inst, w, &trace).unwrap();
            rows += 1;
            worst = worst.min(ratio(maximal, o) * (d + 1.0));
            bad_floor += usize::from(maximal < o / (d + 1.0) - 1e-9);
            bad_dom += usize::from(maximal < direct - 1e-9);
        }
    }
    let mut worst_case = Vec::new();
    let mut bad_wc = 0;
    for d in 1..=3usize {
        let (inst, mut adv) = gen_worstcase_dag(d);
        let w = propflow::weights::DagWeights::uniform(
            (0..inst.node_count()).map(|v| inst.name(v).to_string()).collect(),
            2.0 * inst.node_count() as f64,
        );
        let (greedy, trace) = run_adversary(&inst, &mut GreedyPolicy, &mut adv);
        let realized = inst.with_counts(&trace.counts(inst.types().len())).unwrap();
        let o = opt(&realized);
        let (inst2, mut adv2) = gen_worstcase_dag(d);
        let mut maximal = MaximalPolicy::new(&inst2, &w).unwrap();
        let (mstate, mtrace) = run_adversary(&inst2, &mut maximal, &mut adv2);
        let mo = opt(&inst2.with_counts(&mtrace.counts(inst2.types().len())).unwrap());
        let exact = (greedy.value - 1.0).abs() < 1e-12 && (o - (d as f64 + 1.0)).abs() < 1e-12;
        bad_wc += usize::from(!exact || mstate.value < mo / (d as f64 + 1.0) - 1e-9);
        worst_case.push(format!("d={d}: greedy {}/{} maximal {:.3}/{}", greedy.value, o, mstate.value, mo));
    }
    report(
        "maximal_flow_floor",
        bad_floor == 0 && bad_dom == 0 && bad_wc == 0,
        format!(
            "{rows} random rows, floor violations {bad_floor}, maximal<direct {bad_dom}, worst maximal/(OPT/(d+1)) {worst:.3}; \
             worst case [{}]",
            worst_case.join(", ")
        ),
        started,
    );
}

#[test]
fn parameter_robustness() {
    let started = Instant::now();
    let eps = 0.25;
    let mut rng = gen::rng(505);
    let (mut runs, mut skipped, mut bad, mut bad_nominal) = (0, 0, 0, 0);
    let mut min_slack = f64::INFINITY;
    for &level in &[1.0f64, 1.5, 2.0] {
        let mut done = 0;
        while done < 100 {
            let k = rng.gen_range(1..=4);
            let inst = gen::random_layered(&mut rng, 2, 3, k, &Shape::default());
            let o = opt(&inst);
            if o == 0.0 {
                continue;
            }
            let run = compute_dag_weights(&inst, &PipelineConfig::new(eps)).unwrap();
            let base = route_dag(&inst, &run.dag_weights, &run.dist).unwrap().value;
            if base < (1.0 - eps) * o - 1e-9 {
                skipped += 1;
                continue;
            }
            let seed: u64 = rng.gen();
            let w = perturb_weights(&run.dag_weights, level, seed);
            let eta = parameter_error(&w, &run.dag_weights).eta;
            let trace = ArrivalTrace::shuffled(&inst, seed).unwrap();
            let (direct, _) = simulate_direct(&inst, &w, &trace).unwrap();
            let (maximal, _) = simulate_maximal(&inst, &w, &trace).unwrap();
            let bound = (1.0 - eps) / eta.powi(4) * o;
            let nominal = (1.0 - eps) / level.powi(4) * o;
            bad += usize::from(direct < bound - 1e-9 || maximal < bound.max(o / 3.0) - 1e-9);
            bad_nominal += usize::from(direct < nominal - 1e-9);
            min_slack = min_slack.min(direct - bound);
            runs += 1;
            done += 1;
        }
    }
    report(
        "parameter_robustness",
        bad == 0,
        format!(
            "{runs} runs ({skipped} base instances skipped), violations {bad}, smallest direct-bound slack {min_slack:.4}; \
             against the nominal level instead of the measured error: {bad_nominal} below"
        ),
        started,
    );
}

/// Bipartite instance whose optimum assigns every impression and fills every
/// advertiser: capacities and counts are the two margins of a random integer
/// flow.
fn filled_bipartite(rng: &mut impl Rng, n: usize, k: usize) -> DagInstance {
    let names: Vec<String> = (0..n).map(|a| format!("a{a}")).collect();
    let mut cap = vec![0i64; n];
    let mut types = Vec::new();
    for t in 0..k {
        let mut nb: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if nb.is_empty() {
            nb.push(rng.gen_range(0..n));
        }
        let mut count = 0;
        for &a in &nb {
            let f = rng.gen_range(2..=12);
            cap[a] += f;
            count += f;
        }
        types.push(TypeSpec {
            id: format!("i{t}"),
            count: Rational::from_integer(count),
            neighbors: nb.iter().map(|&a| names[a].clone()).collect(),
        });
    }
    let spec = InstanceSpec {
        nodes: names.iter().zip(&cap).filter(|(_, &c)| c > 0).map(|(a, &c)| (a.clone(), Rational::from_integer(c))).collect(),
        sink: "t".into(),
        edges: names.iter().zip(&cap).filter(|(_, &c)| c > 0).map(|(a, _)| (a.clone(), "t".into())).collect(),
        types,
    };
    DagInstance::from_spec(&spec).unwrap()
}

#[test]
fn adaptive_bipartite_bound() {
    let started = Instant::now();
    let eps = 0.1;
    let eta_max: f64 = 3.0;
    let mut rng = gen::rng(606);
    let (mut runs, mut skipped, mut bad_alloc, mut bad_value) = (0, 0, 0, 0);
    let (mut worst_alloc, mut worst_value) = (f64::INFINITY, f64::INFINITY);
    while runs < 100 {
        let (n, k) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
        let inst = filled_bipartite(&mut rng, n, k);
        let total: f64 = inst.counts_f64().iter().sum();
        let o = opt(&inst);
        let caps: f64 = (0..inst.node_count()).map(|v| inst.capacity_f64(v)).sum();
        // optimal weights: every advertiser strictly below (1 + eps) C_a
        let star = compute_dag_weights(&inst, &PipelineConfig::new(eps)).unwrap();
        let report_star = route_dag(&inst, &star.dag_weights, &star.dist).unwrap();
        let below = (0..inst.node_count())
            .all(|v| report_star.entry(inst.name(v)).unwrap().alloc < (1.0 + eps) * inst.capacity_f64(v));
        if (o - total).abs() > 1e-9 || (o - caps).abs() > 1e-9 || !below {
            skipped += 1;
            continue;
        }
        let level = rng.gen_range(1.0..=eta_max.sqrt());
        let predicted = perturb_weights(&star.dag_weights, level, rng.gen());
        let eta = parameter_error(&predicted, &star.dag_weights).eta;
        if eta > eta_max {
            skipped += 1;
            continue;
        }
        let trace = ArrivalTrace::shuffled(&inst, rng.gen()).unwrap();
        let run = simulate_adaptive_bipartite(&inst, &predicted, AdaptiveConfig { epsilon: eps, eta_bound: eta_max }, &trace).unwrap();
        let steps = eta.ln() / eps.ln_1p();
        let alloc_factor = 1.0 + 3.0 * eps + 4.0 * eps * steps;
        for v in 0..inst.node_count() {
            let c = inst.capacity_f64(v);
            worst_alloc = worst_alloc.min(alloc_factor * c - run.alloc[v]);
            bad_alloc += usize::from(run.alloc[v] > alloc_factor * c + 1e-9);
        }
        let value_factor = 1.0 - 4.0 * eps * steps - 3.0 * eps;
        worst_value = worst_value.min(run.value / o - value_factor);
        bad_value += usize::from(run.value < value_factor * o - 1e-9);
        runs += 1;
    }
    report(
        "adaptive_bipartite_bound",
        bad_alloc == 0 && bad_value == 0,
        format!(
            "{runs} runs ({skipped} candidates failed the assumptions), allocation violations {bad_alloc} \
             (smallest slack {worst_alloc:.4}), value violations {bad_value} (smallest ratio slack {worst_value:.4})"
        ),
        started,
    );
}

#[test]
fn instance_robustness() {
    let started = Instant::now();
    let eps = 0.25;
    let mut rng = gen::rng(707);
    let (mut bases, mut skipped, mut rows, mut bad) = (0, 0, 0, 0);
    let mut min_slack = f64::INFINITY;
    while bases < 50 {
        let k = rng.gen_range(1..=4);
        let inst = if bases % 2 == 0 {
            let depth = rng.gen_range(1..=3);
            gen::random_layered(&mut rng, depth, 3, k, &Shape::default())
        } else {
            let n = rng.gen_range(2..=6);
            gen::random_dag(&mut rng, n, 0.4, k, &Shape::default())
        };
        if opt(&inst) == 0.0 {
            continue;
        }
        let w = compute_dag_weights(&inst, &PipelineConfig::new(eps)).unwrap().dag_weights;
        let perturbed = random_perturbations(&inst, 10, 10, rng.gen());
        match robustness_sweep(&inst, &w, &perturbed, eps, rng.gen()) {
            Ok(sweep) => {
                for r in &sweep {
                    rows += 1;
                    bad += usize::from(!r.ok);
                    if r.opt > 0.0 {
                        min_slack = min_slack.min((r.direct - r.bound_direct).min(r.maximal - r.bound_maximal));
                    }
                }
                bases += 1;
            }
            Err(LearningError::BaseNotApproximate { .. }) => skipped += 1,
            Err(e) => panic!("{e}"),
        }
    }
    report(
        "instance_robustness",
        bad == 0,
        format!("{bases} bases ({skipped} skipped), {rows} rows, violations {bad}, smallest slack where OPT > 0: {min_slack:.4}"),
        started,
    );
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[test]
fn lower_bound_reproduction() {
    let started = Instant::now();
    let eps = 0.1;
    let (mut direct, mut maximal, mut planted_bad) = (Vec::new(), Vec::new(), 0);
    let mut p = 0.0;
    for seed in 0..500 {
        let lb = gen_bipartite_lowerbound(10, 5, seed);
        p = lb.p();
        let o = opt(&lb.instance.with_counts(&lb.trace.counts(lb.instance.types().len())).unwrap());
        let w = lb.uniform_weights();
        direct.push(simulate_direct(&lb.instance, &w, &lb.trace).unwrap().0 / o);
        maximal.push(simulate_maximal(&lb.instance, &w, &lb.trace).unwrap().0 / o);
        let planted = lb.planted_weights(eps);
        let pd = simulate_direct(&lb.instance, &planted, &lb.trace).unwrap().0;
        let pm = simulate_maximal(&lb.instance, &planted, &lb.trace).unwrap().0;
        planted_bad += usize::from(pd.min(pm) < (1.0 - eps) * o - 1e-9);
    }
    let limit = 1.0 - p * (1.0 - p);
    let (md, sd) = mean_se(&direct);
    let (mm, sm) = mean_se(&maximal);
    // both standard errors can be zero with the ratio sitting exactly on the limit
    let ok_d = md <= limit + 3.0 * sd + 1e-9;
    let ok_m = mm <= limit + 3.0 * sm + 1e-9;
    report(
        "lower_bound_reproduction",
        ok_d && ok_m && planted_bad == 0,
        format!(
            "500 seeds, limit {limit}, direct mean {md:.4} (se {sd:.4}), maximal mean {mm:.4} (se {sm:.4}), \
             planted below (1-eps)OPT: {planted_bad}"
        ),
        started,
    );
}

#[test]
fn flow_learnability() {
    let started = Instant::now();
    let eps = 0.25;
    let mut rng = gen::rng(909);
    let cfg = PipelineConfig::new(eps);
    let (mut successes, mut worst) = (0, f64::INFINITY);
    let mut sizes = Vec::new();
    for _ in 0..10 {
        let n = rng.gen_range(2..=4);
        let k = rng.gen_range(2..=5);
        let dist = random_iid_bipartite(&mut rng, n, k, 100, eps, 1.0).unwrap();
        let skel = dist.skeleton();
        let s = sample_count(skel.node_count(), eps, 0.1, 1.0);
        sizes.push(s);
        let few: Vec<_> = (0..s).map(|_| sample_instance(&dist, rng.gen()).0).collect();
        let many: Vec<_> = (0..10 * s).map(|_| sample_instance(&dist, rng.gen()).0).collect();
        let learned = learn_weights(&few, skel, &cfg).unwrap();
        let proxy = learn_weights(&many, skel, &cfg).unwrap();
        propflow::learning::check_learnability(&learned.instance, eps, 1.0).unwrap();
        let seed: u64 = rng.gen();
        let el = estimate_expected_value(learned.weights(), &dist, 400, seed).unwrap();
        let ep = estimate_expected_value(proxy.weights(), &dist, 400, seed).unwrap();
        worst = worst.min(el.mean / ep.mean);
        successes += usize::from(el.mean >= (1.0 - 5.0 * eps) * ep.mean);
    }
    report(
        "flow_learnability",
        successes >= 9,
        format!("{successes}/10 repetitions succeed, sample sizes {sizes:?}, worst learned/proxy {worst:.4}"),
        started,
    );
}

#[test]
fn load_balancing_weights() {
    let started = Instant::now();
    let eps = 0.25;
    let mut rng = gen::rng(1010);
    let (mut bad, mut worst, mut bad_rob, mut min_slack) = (0, 0.0f64, 0, f64::INFINITY);
    for _ in 0..100 {
        let m = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=20);
        let inst = random_schedule(&mut rng, m, n, 5);
        let run = makespan_weights(&inst, eps, DEFAULT_ROUNDS_CONSTANT).unwrap();
        let alg = fractional_assign(&inst, &run.weights).makespan;
        let o = opt_makespan(&inst);
        worst = worst.max(alg / o);
        bad += usize::from(alg > (1.0 + eps) * o + 1e-6);
        if alg <= (1.0 + eps) * o + 1e-6 {
            let p = perturb_types(&mut rng, &inst, 0.5);
            let r = lb_robustness_check(&inst, &p, &run.weights, eps).unwrap();
            bad_rob += usize::from(!r.ok);
            min_slack = min_slack.min(r.slack);
        }
    }
    let options = [(vec![0], 0.2), (vec![0, 1], 0.4), (vec![1, 2], 0.2), (vec![0, 1, 2], 0.2)];
    let dist = JobDistribution::iid_unit(3, 150, &options).unwrap();
    let expected_opt = dist.check_opt_floor(eps, 1.0, &mut rng, 50).unwrap();
    let samples: Vec<_> = (0..30).map(|_| dist.sample(&mut rng)).collect();
    let learned = learn_machine_weights(&samples, eps, DEFAULT_ROUNDS_CONSTANT).unwrap();
    let (mut alg, mut o) = (0.0, 0.0);
    for _ in 0..300 {
        let s = dist.sample(&mut rng);
        alg += fractional_assign(&s, &learned.weights).makespan;
        o += opt_makespan(&s);
    }
    let learn_ratio = alg / o;
    report(
        "load_balancing_weights",
        bad == 0 && bad_rob == 0 && learn_ratio <= 1.0 + 2.0 * eps,
        format!(
            "100 instances, violations {bad}, worst makespan/OPT {worst:.4}; robustness violations {bad_rob} \
             (smallest slack {min_slack:.4}); learned E[ALG]/E[OPT] {learn_ratio:.4} with E[OPT] {expected_opt:.1}"
        ),
        started,
    );
}

mod determinism {
    use super::*;
    use std::path::Path;
    use std::process::Command;

    fn run(dir: &Path, args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
        let out = Command::new(env!("CARGO_BIN_EXE_propflow")).current_dir(dir).args(args).output().unwrap();
        (out.status.code().unwrap_or(-1), out.stdout, out.stderr)
    }

    /// Runs every command in a fresh directory and returns everything it
    /// produced: exit codes, streams and written files.
    fn session(commands: &[Vec<&str>]) -> Vec<(String, Vec<u8>)> {
        let dir = tempfile::tempdir().unwrap();
        let mut seen = Vec::new();
        for (i, c) in commands.iter().enumerate() {
            let (code, stdout, stderr) = run(dir.path(), c);
            assert!(code == 0, "{c:?} exited with {code}: {}", String::from_utf8_lossy(&stderr));
            seen.push((format!("{i} code"), code.to_string().into_bytes()));
            seen.push((format!("{i} stdout"), stdout));
            seen.push((format!("{i} stderr"), stderr));
        }
        let mut files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        for f in files {
            seen.push((f.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&f).unwrap()));
        }
        seen
    }

    #[test]
    fn cli_determinism() {
        let started = Instant::now();
        let s = ["--seed", "11"];
        let with = |args: &[&'static str]| -> Vec<&'static str> { args.iter().chain(s.iter()).copied().collect() };
        let commands: Vec<Vec<&str>> = vec![
            with(&["gen", "bipartite", "--out", "bip.txt"]),
            with(&["gen", "layered", "--depth", "2", "--out", "lay.txt"]),
            with(&["gen", "dag", "--nodes", "6", "--out", "dag.txt"]),
            with(&["gen", "worstcase", "--depth", "2", "--out", "wc.txt"]),
            with(&["gen", "lowerbound", "--nodes", "6", "--early", "2", "--trace", "lb.trace", "--out", "lb.txt"]),
            with(&["gen", "flow-distribution", "--nodes", "3", "--out", "fd.txt"]),
            with(&["gen", "schedule", "--out", "s.txt"]),
            with(&["gen", "job-distribution", "--jobs", "150", "--out", "jd.txt"]),
            with(&["weights", "lay.txt", "--with-oracle", "--max-iters", "5000", "--out", "w.txt"]),
            with(&["eval", "lay.txt", "--weights", "w.txt", "--with-oracle", "--out", "eval.csv"]),
            with(&["simulate", "lay.txt", "--weights", "w.txt", "--trials", "3", "--out", "sim.csv"]),
            with(&["simulate", "lb.txt", "--trace", "lb.trace", "--policy", "adaptive", "--out", "ad.csv"]),
            with(&["simulate", "--adversary", "worstcase:3", "--out", "adv.csv"]),
            with(&["learn", "fd.txt", "--samples", "40", "--trials", "50", "--out", "lw.txt"]),
            with(&["lb", "s.txt", "--perturb", "5", "--weights-out", "mw.txt", "--out", "lb.csv"]),
            with(&["lb", "--distribution", "jd.txt", "--trials", "20", "--out", "lbd.csv"]),
            with(&["sweep", "lay.txt", "--weights", "w.txt", "--rows", "4", "--out", "sw.csv"]),
            with(&["sweep", "lay.txt", "--kind", "parameter", "--weights", "w.txt", "--rows", "2", "--out", "swp.csv"]),
        ];
        let a = session(&commands);
        let b = session(&commands);
        let differing: Vec<&str> = a.iter().zip(&b).filter(|(x, y)| x != y).map(|(x, _)| x.0.as_str()).collect();
        super::report(
            "cli_determinism",
            a.len() == b.len() && differing.is_empty(),
            format!("{} commands, {} outputs compared, differing {:?}", commands.len(), a.len(), differing),
            started,
        );
    }
}
