//! Weights computed for one instance, run on perturbed count vectors.

use propflow::gen::{self, Shape};
use propflow::learning::{random_perturbations, robustness_sweep};
use propflow::pipeline::{compute_dag_weights, PipelineConfig};

fn main() {
    let eps = 0.25;
    let mut rng = gen::rng(5);
    let base = gen::random_layered(&mut rng, 2, 4, 6, &Shape { max_capacity: 12, max_count: 10, halves: false });
    let w = compute_dag_weights(&base, &PipelineConfig::new(eps)).unwrap().dag_weights;
    let rows = random_perturbations(&base, 12, 10, 1);
    let sweep = robustness_sweep(&base, &w, &rows, eps, 2).expect("weights are near-optimal on the base");

    println!("{:>6} {:>6} {:>8} {:>8} {:>10} {:>10}", "gamma", "OPT", "direct", "maximal", "bound_dir", "bound_max");
    for r in &sweep {
        println!(
            "{:>6} {:>6} {:>8.3} {:>8.3} {:>10.3} {:>10.3}{}",
            r.gamma,
            r.opt,
            r.direct,
            r.maximal,
            r.bound_direct,
            r.bound_maximal,
            if r.ok { "" } else { "  VIOLATED" }
        );
    }
}
