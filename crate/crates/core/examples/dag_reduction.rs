//! Layered reduction of a DAG, weights on the layered graph and their
//! transfer back to the original nodes.

use propflow::flow_eval::{route_dag, route_layered};
use propflow::gen::{self, Shape};
use propflow::graph::max_flow_oracle;
use propflow::pipeline::{compute_dag_weights, PipelineConfig};

fn main() {
    let mut rng = gen::rng(42);
    let inst = gen::random_dag(&mut rng, 7, 0.45, 4, &Shape::default());
    let run = compute_dag_weights(&inst, &PipelineConfig::new(0.25)).unwrap();
    let layered = &run.layered;

    println!("{} offline nodes, {} layers after reduction", inst.node_count(), layered.depth());
    for j in 1..=layered.depth() {
        let labels: Vec<&str> = layered.layer(j).iter().map(|&v| layered.label(v)).collect();
        println!("  layer {j}: {}", labels.join(" "));
    }
    println!("virtual copies: {}", layered.virtual_count());

    let s = run.schedule();
    println!("per-layer eps: {:?}", s.per_layer());
    println!("iterations {} (fixed point: {})", run.state.iterations_run, run.state.fixed_point);

    let on_dag = route_dag(&inst, &run.dag_weights, &run.dist).unwrap().value;
    let on_layers = route_layered(layered, &run.state, &layered.counts_f64()).value;
    let opt = max_flow_oracle(&inst).unwrap().opt_f64();
    println!("value on the DAG {on_dag:.6}, on the layered graph {on_layers:.6}, OPT {opt}");
}
