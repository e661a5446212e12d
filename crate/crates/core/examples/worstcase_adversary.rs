//! The adaptive adversary on depth-d trees: greedy keeps one unit, the
//! maximal policy keeps at least OPT / (d + 1).

use propflow::graph::max_flow_oracle;
use propflow::online::{gen_worstcase_dag, run_adversary, GreedyPolicy, MaximalPolicy};
use propflow::weights::DagWeights;

fn main() {
    for d in 1..=4 {
        let (inst, mut adv) = gen_worstcase_dag(d);
        let (greedy, trace) = run_adversary(&inst, &mut GreedyPolicy, &mut adv);
        let k = inst.types().len();
        let opt = max_flow_oracle(&inst.with_counts(&trace.counts(k)).unwrap()).unwrap().opt_f64();

        let (inst, mut adv) = gen_worstcase_dag(d);
        let names = (0..inst.node_count()).map(|v| inst.name(v).to_string()).collect();
        let w = DagWeights::uniform(names, 2.0 * inst.node_count() as f64);
        let mut policy = MaximalPolicy::new(&inst, &w).unwrap();
        let (maximal, mtrace) = run_adversary(&inst, &mut policy, &mut adv);
        let mopt = max_flow_oracle(&inst.with_counts(&mtrace.counts(k)).unwrap()).unwrap().opt_f64();

        println!(
            "d={d}: {} nodes, greedy {}/{opt}, maximal {:.3}/{mopt} (floor {:.3})",
            inst.node_count(),
            greedy.value,
            maximal.value,
            mopt / (d as f64 + 1.0)
        );
    }
}
