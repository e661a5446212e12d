//! Direct, maximal and greedy online allocation on shuffled arrival orders.
//!
//! Type `x` can only use `a`; type `y` can use `a` or `b`. Every `y` that
//! lands on `a` costs an `x` later.

use propflow::graph::{longest_distances, max_flow_oracle, DagInstance, InstanceSpec};
use propflow::online::{perturb_weights, simulate_direct, simulate_greedy, simulate_maximal, ArrivalTrace};
use propflow::pipeline::{compute_dag_weights, PipelineConfig};

const INSTANCE: &str = "
[nodes]
a 3
b 3
c 2
d 4
[sink]
t
[edges]
a c
a d
b d
c t
d t
[types]
x 3 a
y 3 a b
";

fn main() {
    let spec: InstanceSpec = INSTANCE.parse().unwrap();
    let inst = DagInstance::from_spec(&spec).unwrap();
    let opt = max_flow_oracle(&inst).unwrap().opt_f64();
    let d = longest_distances(&inst).depth();
    let good = compute_dag_weights(&inst, &PipelineConfig::new(0.1)).unwrap().dag_weights;

    println!("OPT {opt}, {d} offline layers, worst-case floor for maximal {:.3}", opt / (d as f64 + 1.0));
    println!("{:>6} {:>8} {:>8} {:>8} {:>8}", "seed", "direct", "maximal", "greedy", "noisy");
    for seed in 0..8 {
        let trace = ArrivalTrace::shuffled(&inst, seed).unwrap();
        let (direct, _) = simulate_direct(&inst, &good, &trace).unwrap();
        let (maximal, state) = simulate_maximal(&inst, &good, &trace).unwrap();
        let (greedy, _) = simulate_greedy(&inst, &trace);
        let noisy = perturb_weights(&good, 3.0, seed);
        let (noisy_max, _) = simulate_maximal(&inst, &noisy, &trace).unwrap();
        assert!(state.is_maximal(&inst));
        println!("{seed:>6} {direct:>8.3} {maximal:>8.3} {greedy:>8.3} {noisy_max:>8.3}");
    }
}
