use super::*;
use crate::flow_eval::{route_dag, route_dag_counts};
use crate::gen::{self, Shape, RNG_NAME};
use crate::graph::{longest_distances, max_flow_oracle, write_instance, DagInstance, GraphError, InstanceSpec};
use crate::learning::{
    check_learnability, estimate_expected_value, learn_weights, parse_distribution, random_iid_bipartite,
    random_perturbations, robustness_sweep, sample_count, sample_instance, write_distribution, InstanceVector,
    LearningError,
};
use crate::load_balancing::{
    fractional_assign, lb_robustness_check, learn_machine_weights, makespan_weights, opt_makespan,
    parse_job_distribution, parse_schedule, perturb_types, random_schedule, write_job_distribution,
    write_machine_weights, write_schedule, JobDistribution, LbError, MachineWeights, RobustnessReport,
};
use crate::online::{
    gen_bipartite_lowerbound, gen_worstcase_dag, parameter_error, perturb_weights, run_adversary,
    simulate_adaptive_bipartite, simulate_direct, simulate_greedy, simulate_maximal, AdaptiveConfig, ArrivalTrace,
    DirectPolicy, GreedyPolicy, MaximalPolicy, OnlineError, Policy,
};
use crate::pipeline::{compute_dag_weights, PipelineConfig};
use crate::rational;
use crate::textio::{sig12, ParseError};
use crate::weights::{read_weight_file, write_weight_file, DagWeights, ScheduleKind, WeightError};
use rand::Rng;
use std::path::Path;

pub(super) fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a),
        Command::Weights(a) => cmd_weights(cli, a),
        Command::Eval(a) => cmd_eval(cli, a),
        Command::Simulate(a) => cmd_simulate(cli, a),
        Command::Learn(a) => cmd_learn(cli, a),
        Command::Lb(a) => cmd_lb(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
    }
}

// ---- error mapping

fn parse_err(path: &Path, e: &ParseError) -> CliError {
    CliError::input(format!("{}: {e}", path.display()))
}

fn graph_err(path: &Path, e: GraphError) -> CliError {
    CliError::input(format!("{}: {e}", path.display()))
}

fn weight_err(e: WeightError) -> CliError {
    match e {
        WeightError::Parse(_) | WeightError::InvalidEpsilon(_) => CliError::input(e),
        _ => CliError::runtime(e),
    }
}

fn online_err(e: OnlineError) -> CliError {
    match e {
        OnlineError::Parse(_) | OnlineError::UnknownType(_) => CliError::input(e),
        _ => CliError::runtime(e),
    }
}

fn learning_err(e: LearningError) -> CliError {
    match e {
        LearningError::AssumptionViolated { .. } | LearningError::BaseNotApproximate { .. } => CliError::assumption(e),
        LearningError::Parse(_) | LearningError::InvalidDistribution(_) | LearningError::UnknownType(_) => {
            CliError::input(e)
        }
        _ => CliError::runtime(e),
    }
}

fn lb_err(e: LbError) -> CliError {
    match e {
        LbError::UndefinedRatio(_) | LbError::OptFloor { .. } | LbError::BaseNotApproximate { .. } => {
            CliError::assumption(e)
        }
        LbError::Parse(_)
        | LbError::InvalidDistribution(_)
        | LbError::BadSize(_)
        | LbError::EmptyNeighborhood(_)
        | LbError::UnknownMachine { .. }
        | LbError::MachineMismatch(..)
        | LbError::InvalidEpsilon(_) => CliError::input(e),
        _ => CliError::runtime(e),
    }
}

// ---- inputs

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path) -> impl Fn(CliError) -> CliError + '_ {
    move |e| CliError { message: format!("{}: {}", path.display(), e.message), ..e }
}

fn load_instance(path: &Path) -> Result<DagInstance, CliError> {
    let spec: InstanceSpec = read(path)?.parse().map_err(|e| parse_err(path, &e))?;
    DagInstance::from_spec(&spec).map_err(|e| graph_err(path, e))
}

/// DAG weights from a weight file, reordered to the instance's node order.
fn load_weights(path: &Path, inst: &DagInstance) -> Result<DagWeights, CliError> {
    let file = read_weight_file(&read(path)?).map_err(weight_err).map_err(with_path(path))?;
    let mut weight_log = vec![0.0; inst.node_count()];
    let mut seen = vec![false; inst.node_count()];
    for (name, w) in file.dag.names.iter().zip(&file.dag.weight_log) {
        let v = inst
            .node_index(name)
            .ok_or_else(|| CliError::input(format!("{}: node {name} is not in the instance", path.display())))?;
        weight_log[v] = *w;
        seen[v] = true;
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(CliError::input(format!("{}: no weight for node {}", path.display(), inst.name(v))));
    }
    Ok(DagWeights { names: names(inst), weight_log, rho_base: file.dag.rho_base })
}

fn names(inst: &DagInstance) -> Vec<String> {
    (0..inst.node_count()).map(|v| inst.name(v).to_string()).collect()
}

fn weights_or_uniform(path: Option<&PathBuf>, inst: &DagInstance) -> Result<DagWeights, CliError> {
    match path {
        Some(p) => load_weights(p, inst),
        None => Ok(DagWeights::uniform(names(inst), 2.0 * inst.node_count().max(1) as f64)),
    }
}

fn seed(cli: &Cli, what: &str) -> Result<u64, CliError> {
    cli.seed.ok_or_else(|| CliError::input(format!("{what} needs --seed")))
}

fn pipeline_config(cli: &Cli) -> PipelineConfig {
    let cfg = PipelineConfig::new(cli.epsilon);
    match cli.max_iters {
        Some(t) => cfg.with_max_iterations(t),
        None => cfg,
    }
}

fn opt_of(inst: &DagInstance) -> Result<f64, CliError> {
    Ok(max_flow_oracle(inst).map_err(CliError::runtime)?.opt_f64())
}

fn ratio(value: f64, opt: f64) -> f64 {
    if opt == 0.0 {
        1.0
    } else {
        value / opt
    }
}

// ---- outputs

fn header(seed: Option<u64>) -> String {
    match seed {
        Some(s) => format!("# rng={RNG_NAME} seed={s}\n"),
        None => format!("# rng={RNG_NAME} seed=none\n"),
    }
}

fn table(seed: Option<u64>, columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(columns).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 fields");
    header(seed) + &body
}

fn num(x: f64) -> String {
    sig12(x)
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

// ---- gen

fn cmd_gen(cli: &Cli, a: &GenArgs) -> Result<Output, CliError> {
    let shape = Shape { max_capacity: a.max_capacity.max(1), max_count: a.max_count.max(0), ..Shape::default() };
    let kind = a.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut extra = Vec::new();
    let (body, seed) = match a.kind {
        GenKind::Worstcase => {
            if a.depth == 0 {
                return Err(CliError::input("--depth must be at least 1"));
            }
            (write_instance(&gen_worstcase_dag(a.depth).0), None)
        }
        _ => {
            let s = seed(cli, "gen")?;
            let mut r = gen::rng(s);
            let body = match a.kind {
                GenKind::Bipartite => write_instance(&gen::random_bipartite(&mut r, a.nodes.max(1), a.types, &shape)),
                GenKind::Layered => {
                    write_instance(&gen::random_layered(&mut r, a.depth.max(1), a.width.max(1), a.types, &shape))
                }
                GenKind::Dag => write_instance(&gen::random_dag(&mut r, a.nodes.max(1), a.prob, a.types, &shape)),
                GenKind::Lowerbound => {
                    if !(0 < a.early && a.early < a.nodes) {
                        return Err(CliError::input("lowerbound needs 0 < --early < --nodes"));
                    }
                    let lb = gen_bipartite_lowerbound(a.nodes, a.early, s);
                    if let Some(p) = &a.trace {
                        extra.push((p.clone(), lb.trace.write(&lb.instance)));
                    }
                    write_instance(&lb.instance)
                }
                GenKind::FlowDistribution => {
                    let d = random_iid_bipartite(&mut r, a.nodes.max(1), a.types.max(1), a.impressions, cli.epsilon, 1.0)
                        .map_err(learning_err)?;
                    write_distribution(&d)
                }
                GenKind::Schedule => write_schedule(&random_schedule(&mut r, a.machines.max(1), a.jobs, a.max_size.max(1))),
                GenKind::JobDistribution => {
                    write_job_distribution(&JobDistribution::random(&mut r, a.machines.max(1), a.jobs, 2, a.max_size.max(1)))
                }
                GenKind::Worstcase => unreachable!(),
            };
            (body, Some(s))
        }
    };
    let head = match seed {
        Some(s) => format!("# propflow gen {kind} seed={s} rng={RNG_NAME}\n"),
        None => format!("# propflow gen {kind}\n"),
    };
    Ok(Output { artifact: head + &body, summary: None, extra })
}

// ---- weights

fn cmd_weights(cli: &Cli, a: &WeightsArgs) -> Result<Output, CliError> {
    let inst = load_instance(&a.instance)?;
    let kind = match a.schedule {
        ScheduleArg::Exact => ScheduleKind::Exact,
        ScheduleArg::Linear => ScheduleKind::Linear,
    };
    let run = compute_dag_weights(&inst, &pipeline_config(cli).with_schedule(kind)).map_err(weight_err)?;
    diag(|| format!("layered graph: {} nodes, depth {}", run.layered.node_count(), run.layered.depth()));
    let value = route_dag(&inst, &run.dag_weights, &run.dist).map_err(CliError::runtime)?.value;
    let mut summary = format!("value={}", num(value));
    if cli.with_oracle {
        let opt = opt_of(&inst)?;
        summary += &format!(" opt={} ratio={}", num(opt), num(ratio(value, opt)));
    }
    summary += &format!(" iterations={} fixed_point={}", run.state.iterations_run, run.state.fixed_point);
    Ok(Output {
        artifact: write_weight_file(&run.state, &run.layered, &run.dag_weights),
        summary: Some(summary),
        extra: vec![],
    })
}

// ---- eval

fn cmd_eval(cli: &Cli, a: &EvalArgs) -> Result<Output, CliError> {
    let inst = load_instance(&a.instance)?;
    let w = weights_or_uniform(a.weights.as_ref(), &inst)?;
    let counts = match &a.trace {
        Some(p) => {
            let t = ArrivalTrace::parse(&read(p)?, &inst).map_err(online_err).map_err(with_path(p))?;
            t.counts(inst.types().len())
        }
        None => inst.counts(),
    };
    let inst = inst.with_counts(&counts).map_err(CliError::runtime)?;
    let report = route_dag_counts(&inst, &w, &longest_distances(&inst), &inst.counts_f64()).map_err(CliError::runtime)?;
    let rows: Vec<Vec<String>> =
        report.entries.iter().map(|e| vec![e.node.clone(), num(e.alloc), num(e.truncated)]).collect();
    let mut summary = format!("value={}", num(report.value));
    if cli.with_oracle {
        let opt = opt_of(&inst)?;
        summary += &format!(" opt={} ratio={}", num(opt), num(ratio(report.value, opt)));
    }
    Ok(Output { artifact: table(cli.seed, &["node", "alloc", "truncated"], &rows), summary: Some(summary), extra: vec![] })
}

// ---- simulate

fn policies(p: PolicyArg) -> Vec<PolicyArg> {
    match p {
        PolicyArg::All => vec![PolicyArg::Direct, PolicyArg::Maximal, PolicyArg::Greedy],
        p => vec![p],
    }
}

fn policy_name(p: PolicyArg) -> &'static str {
    match p {
        PolicyArg::Direct => "direct",
        PolicyArg::Maximal => "maximal",
        PolicyArg::Greedy => "greedy",
        PolicyArg::Adaptive => "adaptive",
        PolicyArg::All => "all",
    }
}

fn parse_adversary(spec: &str) -> Result<usize, CliError> {
    let d = spec
        .strip_prefix("worstcase:")
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&d| d >= 1)
        .ok_or_else(|| CliError::input(format!("unknown adversary {spec:?}; expected worstcase:D with D >= 1")))?;
    Ok(d)
}

struct SimRow {
    policy: &'static str,
    trial: usize,
    value: f64,
    opt: f64,
    eta: Option<f64>,
    gamma: Option<f64>,
}

fn cmd_simulate(cli: &Cli, a: &SimulateArgs) -> Result<Output, CliError> {
    let mut rows = Vec::new();
    if let Some(spec) = &a.adversary {
        let d = parse_adversary(spec)?;
        let (inst, _) = gen_worstcase_dag(d);
        let w = weights_or_uniform(a.weights.as_ref(), &inst)?;
        for p in policies(a.policy) {
            let (inst, mut adv) = gen_worstcase_dag(d);
            let mut policy: Box<dyn Policy> = match p {
                PolicyArg::Direct => Box::new(DirectPolicy::new(&inst, &w).map_err(online_err)?),
                PolicyArg::Maximal => Box::new(MaximalPolicy::new(&inst, &w).map_err(online_err)?),
                PolicyArg::Greedy => Box::new(GreedyPolicy),
                _ => return Err(CliError::input("the adaptive policy needs a trace, not an adversary")),
            };
            let (state, trace) = run_adversary(&inst, policy.as_mut(), &mut adv);
            let realized = inst.with_counts(&trace.counts(inst.types().len())).map_err(CliError::runtime)?;
            rows.push(SimRow { policy: policy_name(p), trial: 0, value: state.value, opt: opt_of(&realized)?, eta: None, gamma: None });
        }
    } else {
        let path = a.instance.as_ref().ok_or_else(|| CliError::input("simulate needs an instance or --adversary"))?;
        let inst = load_instance(path)?;
        let w = weights_or_uniform(a.weights.as_ref(), &inst)?;
        let eta = match &a.reference_weights {
            Some(p) => Some(parameter_error(&w, &load_weights(p, &inst)?).eta),
            None => None,
        };
        let reference = a.reference_instance.as_ref().map(|p| load_instance(p)).transpose()?;
        let fixed = match &a.trace {
            Some(p) => Some(ArrivalTrace::parse(&read(p)?, &inst).map_err(online_err).map_err(with_path(p))?),
            None => None,
        };
        let trials = if fixed.is_some() { 1 } else { a.trials.max(1) };
        for trial in 0..trials {
            let trace = match &fixed {
                Some(t) => t.clone(),
                None => {
                    let s = seed(cli, "simulate without --trace")?;
                    ArrivalTrace::shuffled(&inst, s.wrapping_add(trial as u64)).map_err(online_err)?
                }
            };
            let realized = inst.with_counts(&trace.counts(inst.types().len())).map_err(CliError::runtime)?;
            let opt = opt_of(&realized)?;
            let gamma = reference.as_ref().map(|r| {
                let d = crate::learning::instance_distance(&InstanceVector::from_instance(&realized), &InstanceVector::from_instance(r));
                rational::to_f64(&d)
            });
            for p in policies(a.policy) {
                let value = match p {
                    PolicyArg::Direct => simulate_direct(&realized, &w, &trace).map_err(online_err)?.0,
                    PolicyArg::Maximal => simulate_maximal(&realized, &w, &trace).map_err(online_err)?.0,
                    PolicyArg::Greedy => simulate_greedy(&realized, &trace).0,
                    PolicyArg::Adaptive => {
                        let cfg = AdaptiveConfig { epsilon: cli.epsilon, eta_bound: a.eta_bound };
                        simulate_adaptive_bipartite(&realized, &w, cfg, &trace).map_err(online_err)?.value
                    }
                    PolicyArg::All => unreachable!(),
                };
                rows.push(SimRow { policy: policy_name(p), trial, value, opt, eta, gamma });
            }
        }
    }
    let seed_col = cli.seed.map(|s| s.to_string()).unwrap_or_default();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.policy.to_string(),
                seed_col.clone(),
                r.trial.to_string(),
                num(r.value),
                num(r.opt),
                num(ratio(r.value, r.opt)),
                opt_num(r.eta),
                opt_num(r.gamma),
            ]
        })
        .collect();
    let columns = ["policy", "seed", "trial", "value", "opt", "ratio", "eta", "gamma"];
    Ok(Output { artifact: table(cli.seed, &columns, &cells), summary: None, extra: vec![] })
}

// ---- learn

fn cmd_learn(cli: &Cli, a: &LearnArgs) -> Result<Output, CliError> {
    let s = seed(cli, "learn")?;
    let dist = parse_distribution(&read(&a.distribution)?).map_err(learning_err).map_err(with_path(&a.distribution))?;
    if a.trials < 2 {
        return Err(CliError::input("--trials must be at least 2"));
    }
    let skel = dist.skeleton();
    let count = a.samples.unwrap_or_else(|| sample_count(skel.node_count(), cli.epsilon, a.delta, 1.0)).max(1);
    let mut r = gen::rng(s);
    let samples: Vec<InstanceVector> = (0..count).map(|_| sample_instance(&dist, r.gen()).0).collect();
    let learned = learn_weights(&samples, skel, &pipeline_config(cli)).map_err(learning_err)?;
    if !a.skip_checks {
        check_learnability(&learned.instance, cli.epsilon, a.floor_constant).map_err(learning_err)?;
    }
    let est = estimate_expected_value(learned.weights(), &dist, a.trials, r.gen()).map_err(learning_err)?;
    let run = &learned.run;
    let summary = format!(
        "samples={count} value_on_average={} mean={} std_error={} trials={}",
        num(learned.value_on_average),
        num(est.mean),
        num(est.std_error),
        est.trials
    );
    Ok(Output { artifact: write_weight_file(&run.state, &run.layered, &run.dag_weights), summary: Some(summary), extra: vec![] })
}

// ---- lb

fn report_row(kind: &str, r: &RobustnessReport) -> Vec<String> {
    vec![
        kind.to_string(),
        num(r.eta),
        num(r.alg),
        num(r.opt),
        num(ratio(r.alg, r.opt)),
        num(r.bound),
        num(r.slack),
        r.ok.to_string(),
    ]
}

fn cmd_lb(cli: &Cli, a: &LbArgs) -> Result<Output, CliError> {
    let eps = cli.epsilon;
    let mut rows = Vec::new();
    let (weights, summary) = if let Some(dpath) = &a.distribution {
        let s = seed(cli, "lb --distribution")?;
        let dist = parse_job_distribution(&read(dpath)?).map_err(lb_err).map_err(with_path(dpath))?;
        let mut r = gen::rng(s);
        let expected_opt = dist.check_opt_floor(eps, a.floor_constant, &mut r, a.trials.max(1)).map_err(lb_err)?;
        diag(|| format!("estimated E[OPT] = {expected_opt}"));
        let samples: Vec<_> = (0..a.samples.max(1)).map(|_| dist.sample(&mut r)).collect();
        let run = learn_machine_weights(&samples, eps, a.rounds_constant).map_err(lb_err)?;
        let uniform = MachineWeights::uniform(dist.machines(), run.weights.step);
        let (mut alg, mut base, mut opt) = (0.0, 0.0, 0.0);
        for _ in 0..a.trials.max(1) {
            let inst = dist.sample(&mut r);
            alg += fractional_assign(&inst, &run.weights).makespan;
            base += fractional_assign(&inst, &uniform).makespan;
            opt += opt_makespan(&inst);
        }
        let t = a.trials.max(1) as f64;
        let (alg, base, opt) = (alg / t, base / t, opt / t);
        let bound = (1.0 + 2.0 * eps) * opt;
        for (kind, v) in [("learned", alg), ("uniform", base)] {
            rows.push(vec![
                kind.to_string(),
                String::new(),
                num(v),
                num(opt),
                num(ratio(v, opt)),
                num(bound),
                num(bound - v),
                (v <= bound).to_string(),
            ]);
        }
        let summary = format!(
            "samples={} rounds={} fixed_point={} mean_alg={} mean_opt={} ratio={}",
            samples.len(),
            run.rounds_run,
            run.fixed_point,
            num(alg),
            num(opt),
            num(ratio(alg, opt))
        );
        (run.weights, summary)
    } else {
        let path = a.instance.as_ref().ok_or_else(|| CliError::input("lb needs an instance or --distribution"))?;
        let inst = parse_schedule(&read(path)?).map_err(lb_err).map_err(with_path(path))?;
        let run = makespan_weights(&inst, eps, a.rounds_constant).map_err(lb_err)?;
        let alg = fractional_assign(&inst, &run.weights).makespan;
        let opt = opt_makespan(&inst);
        let bound = (1.0 + eps) * opt;
        let base = RobustnessReport { eta: 1.0, alg, opt, bound, slack: bound + 1e-6 - alg, ok: alg <= bound + 1e-6 };
        rows.push(report_row("base", &base));
        if let Some(p) = &a.against {
            let other = parse_schedule(&read(p)?).map_err(lb_err).map_err(with_path(p))?;
            rows.push(report_row("against", &lb_robustness_check(&inst, &other, &run.weights, eps).map_err(lb_err)?));
        }
        if a.perturb > 0 {
            if !(a.spread > 0.0 && a.spread < 1.0) {
                return Err(CliError::input("--spread must lie in (0, 1)"));
            }
            let mut r = gen::rng(seed(cli, "lb --perturb")?);
            for _ in 0..a.perturb {
                let p = perturb_types(&mut r, &inst, a.spread);
                rows.push(report_row("perturbed", &lb_robustness_check(&inst, &p, &run.weights, eps).map_err(lb_err)?));
            }
        }
        let summary = format!(
            "makespan={} opt={} ratio={} rounds={} fixed_point={}",
            num(alg),
            num(opt),
            num(ratio(alg, opt)),
            run.rounds_run,
            run.fixed_point
        );
        (run.weights, summary)
    };
    let extra = a.weights_out.iter().map(|p| (p.clone(), write_machine_weights(&weights))).collect();
    let columns = ["kind", "eta", "alg", "opt", "ratio", "bound", "slack", "ok"];
    Ok(Output { artifact: table(cli.seed, &columns, &rows), summary: Some(summary), extra })
}

// ---- sweep

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> Result<Output, CliError> {
    let s = seed(cli, "sweep")?;
    let eps = cli.epsilon;
    let inst = load_instance(&a.instance)?;
    let w = match &a.weights {
        Some(p) => load_weights(p, &inst)?,
        None => compute_dag_weights(&inst, &pipeline_config(cli)).map_err(weight_err)?.dag_weights,
    };
    match a.kind {
        SweepKind::Instance => {
            let perturbed = random_perturbations(&inst, a.rows, a.max_gamma, s);
            let rows = robustness_sweep(&inst, &w, &perturbed, eps, s).map_err(learning_err)?;
            let cells: Vec<Vec<String>> = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    vec![
                        i.to_string(),
                        num(r.gamma),
                        num(r.opt),
                        num(r.direct),
                        num(r.maximal),
                        num(r.bound_direct),
                        num(r.bound_maximal),
                        r.ok.to_string(),
                    ]
                })
                .collect();
            let bad = rows.iter().filter(|r| !r.ok).count();
            let columns = ["row", "gamma", "opt", "direct", "maximal", "bound_direct", "bound_maximal", "ok"];
            Ok(Output {
                artifact: table(Some(s), &columns, &cells),
                summary: Some(format!("rows={} violations={bad}", rows.len())),
                extra: vec![],
            })
        }
        SweepKind::Parameter => {
            let dist = longest_distances(&inst);
            let d = dist.depth().max(1) as i32;
            let opt = opt_of(&inst)?;
            let base = route_dag(&inst, &w, &dist).map_err(CliError::runtime)?.value;
            if base < (1.0 - eps) * opt - 1e-9 {
                return Err(CliError::assumption(format!(
                    "reference weights reach only {} of the optimum, below 1 - eps",
                    num(ratio(base, opt))
                )));
            }
            let mut cells = Vec::new();
            let mut bad = 0;
            let mut idx = 0u64;
            for &level in &a.eta {
                if !(level >= 1.0) {
                    return Err(CliError::input(format!("--eta values must be at least 1, got {level}")));
                }
                for _ in 0..a.rows {
                    let pw = perturb_weights(&w, level, s.wrapping_add(idx));
                    let trace = ArrivalTrace::shuffled(&inst, s.wrapping_add(idx)).map_err(online_err)?;
                    idx += 1;
                    let eta = parameter_error(&pw, &w).eta;
                    let direct = simulate_direct(&inst, &pw, &trace).map_err(online_err)?.0;
                    let maximal = simulate_maximal(&inst, &pw, &trace).map_err(online_err)?.0;
                    let bound_direct = (1.0 - eps) / eta.powi(2 * d) * opt;
                    let bound_maximal = bound_direct.max(opt / (d as f64 + 1.0));
                    let ok = direct >= bound_direct - 1e-9 && maximal >= bound_maximal - 1e-9;
                    bad += usize::from(!ok);
                    cells.push(vec![
                        num(level),
                        num(eta),
                        num(opt),
                        num(direct),
                        num(maximal),
                        num(bound_direct),
                        num(bound_maximal),
                        ok.to_string(),
                    ]);
                }
            }
            let columns = ["eta_level", "eta", "opt", "direct", "maximal", "bound_direct", "bound_maximal", "ok"];
            Ok(Output {
                artifact: table(Some(s), &columns, &cells),
                summary: Some(format!("rows={} violations={bad}", cells.len())),
                extra: vec![],
            })
        }
    }
}
