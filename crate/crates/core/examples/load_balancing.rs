//! Machine weights for restricted assignment: one instance, a perturbed
//! copy, and weights learned from a job distribution.

use propflow::gen;
use propflow::load_balancing::{
    fractional_assign, lb_robustness_check, learn_machine_weights, makespan_weights, opt_makespan, perturb_types,
    random_schedule, JobDistribution, MachineWeights, DEFAULT_ROUNDS_CONSTANT,
};

fn main() {
    let eps = 0.25;
    let mut rng = gen::rng(9);
    let inst = random_schedule(&mut rng, 4, 16, 5);
    let run = makespan_weights(&inst, eps, DEFAULT_ROUNDS_CONSTANT).unwrap();
    let opt = opt_makespan(&inst);
    let alg = fractional_assign(&inst, &run.weights);
    let uni = fractional_assign(&inst, &MachineWeights::uniform(4, eps / 4.0));
    println!("OPT {opt:.3}  weighted {:.3}  uniform {:.3}", alg.makespan, uni.makespan);
    println!("exponents {:?} after {} rounds", run.weights.k, run.rounds_run);

    let moved = perturb_types(&mut rng, &inst, 0.3);
    let r = lb_robustness_check(&inst, &moved, &run.weights, eps).unwrap();
    println!("perturbed: eta {:.3}, makespan {:.3}, bound {:.3}", r.eta, r.alg, r.bound);

    let options = [(vec![0], 0.2), (vec![0, 1], 0.4), (vec![1, 2], 0.2), (vec![0, 1, 2], 0.2)];
    let dist = JobDistribution::iid_unit(3, 150, &options).unwrap();
    let samples: Vec<_> = (0..30).map(|_| dist.sample(&mut rng)).collect();
    let learned = learn_machine_weights(&samples, eps, DEFAULT_ROUNDS_CONSTANT).unwrap();
    let (mut a, mut u, mut o) = (0.0, 0.0, 0.0);
    for _ in 0..200 {
        let s = dist.sample(&mut rng);
        a += fractional_assign(&s, &learned.weights).makespan;
        u += fractional_assign(&s, &MachineWeights::uniform(3, 0.1)).makespan;
        o += opt_makespan(&s);
    }
    println!("learned E[ALG]/E[OPT] {:.4}, uniform {:.4}", a / o, u / o);
}
