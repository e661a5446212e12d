//! Proportional weights for a small ad-allocation instance, compared with the
//! exact optimum.
//!
//! ```bash
//! cargo run --example bipartite_weights
//! ```

use propflow::flow_eval::route_dag;
use propflow::graph::{max_flow_oracle, DagInstance, InstanceSpec};
use propflow::pipeline::{compute_dag_weights, PipelineConfig};

const INSTANCE: &str = "
[nodes]
shoes 4
books 2
games 3
[sink]
t
[edges]
shoes t
books t
games t
[types]
sport 3 shoes games
reader 4 books shoes
teen 3 games books
any 2 shoes books games
";

fn main() {
    let spec: InstanceSpec = INSTANCE.parse().expect("valid instance text");
    let inst = DagInstance::from_spec(&spec).expect("valid graph");
    let opt = max_flow_oracle(&inst).unwrap().opt_f64();

    for eps in [0.5, 0.2, 0.05] {
        let run = compute_dag_weights(&inst, &PipelineConfig::new(eps)).unwrap();
        let report = route_dag(&inst, &run.dag_weights, &run.dist).unwrap();
        println!(
            "eps {eps:<5} iterations {:>6}  value {:.4} / OPT {opt}  ratio {:.4}",
            run.state.iterations_run,
            report.value,
            report.value / opt
        );
        let top = run.dag_weights.weight_log.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (v, name) in run.dag_weights.names.iter().enumerate() {
            let e = report.entry(name).unwrap();
            println!(
                "    {name:<6} log-weight {:>8.4}  alloc {:.3}  cap {}",
                run.dag_weights.weight_log[v] - top,
                e.alloc,
                inst.capacity_f64(v)
            );
        }
    }
}
