//! Random-order lower bound: uniform weights lose about p(1 - p) of OPT,
//! planted weights recover almost all of it.

use propflow::online::{gen_bipartite_lowerbound, simulate_direct, simulate_maximal};

fn main() {
    let (n, s, eps) = (10, 5, 0.1);
    let (mut uniform, mut maximal, mut planted) = (0.0, 0.0, 0.0);
    let trials = 200;
    let mut p = 0.0;
    for seed in 0..trials {
        let lb = gen_bipartite_lowerbound(n, s, seed);
        p = lb.p();
        uniform += simulate_direct(&lb.instance, &lb.uniform_weights(), &lb.trace).unwrap().0 / n as f64;
        maximal += simulate_maximal(&lb.instance, &lb.uniform_weights(), &lb.trace).unwrap().0 / n as f64;
        planted += simulate_direct(&lb.instance, &lb.planted_weights(eps), &lb.trace).unwrap().0 / n as f64;
    }
    let t = trials as f64;
    println!("n={n} s={s} p={p}: limit 1 - p(1-p) = {}", 1.0 - p * (1.0 - p));
    println!("uniform direct  {:.4}", uniform / t);
    println!("uniform maximal {:.4}", maximal / t);
    println!("planted direct  {:.4} (eta {:.1})", planted / t, gen_bipartite_lowerbound(n, s, 0).planted_eta(eps));
}
