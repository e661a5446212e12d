use super::{Adversary, ArrivalTrace, OnlineState};
use crate::graph::{DagInstance, InstanceSpec, TypeSpec};
use crate::rational::Rational;
use crate::weights::DagWeights;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random-permutation lower-bound instance for one offline layer.
#[derive(Debug, Clone)]
pub struct LowerBound {
    pub instance: DagInstance,
    pub trace: ArrivalTrace,
    /// The permutation; advertisers `perm[..s]` are the ones early
    /// impressions should favour.
    pub perm: Vec<usize>,
    pub s: usize,
}

impl LowerBound {
    /// `p = (n - s) / n`.
    pub fn p(&self) -> f64 {
        let n = self.instance.node_count();
        (n - self.s) as f64 / n as f64
    }

    /// All-ones predictions.
    pub fn uniform_weights(&self) -> DagWeights {
        DagWeights::uniform(names(&self.instance), 2.0 * self.instance.node_count() as f64)
    }

    /// `w_1 = p / eps` on `perm[..s]`, 1 elsewhere.
    pub fn planted_weights(&self, eps: f64) -> DagWeights {
        let mut w = self.uniform_weights();
        let boost = (self.p() / eps).ln();
        for &a in &self.perm[..self.s] {
            w.weight_log[a] = boost;
        }
        w
    }

    /// Parameter error of the all-ones prediction against the planted
    /// weights, `p / eps` when `p > eps`.
    pub fn planted_eta(&self, eps: f64) -> f64 {
        (self.p() / eps).max(eps / self.p())
    }
}

fn names(inst: &DagInstance) -> Vec<String> {
    (0..inst.node_count()).map(|v| inst.name(v).to_string()).collect()
}

/// `n` unit-capacity advertisers; `s` early impressions see everyone, the
/// `n - s` late ones only the advertisers `perm[s..]`.
pub fn gen_bipartite_lowerbound(n: usize, s: usize, seed: u64) -> LowerBound {
    assert!(0 < s && s < n, "need 0 < s < n");
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let name = |a: usize| format!("a{a}");
    let spec = InstanceSpec {
        nodes: (0..n).map(|a| (name(a), Rational::from_integer(1))).collect(),
        sink: "t".into(),
        edges: (0..n).map(|a| (name(a), "t".into())).collect(),
        types: vec![
            TypeSpec { id: "early".into(), count: Rational::from_integer(s as i64), neighbors: (0..n).map(name).collect() },
            TypeSpec {
                id: "late".into(),
                count: Rational::from_integer((n - s) as i64),
                neighbors: perm[s..].iter().map(|&a| name(a)).collect(),
            },
        ],
    };
    let instance = DagInstance::from_spec(&spec).expect("lower-bound instance is valid");
    let trace = ArrivalTrace::new([vec![0; s], vec![1; n - s]].concat());
    LowerBound { instance, trace, perm, s }
}

/// Pins the next arrivals onto the path the algorithm chose for the first.
#[derive(Debug, Clone)]
pub struct WorstCaseAdversary {
    depth: usize,
    pinned: Option<Vec<usize>>,
    emitted: usize,
}

impl WorstCaseAdversary {
    /// The path observed for the first arrival.
    pub fn path(&self) -> Option<&[usize]> {
        self.pinned.as_deref()
    }
}

impl Adversary for WorstCaseAdversary {
    fn next(&mut self, inst: &DagInstance, state: &OnlineState) -> Option<usize> {
        if state.arrivals.is_empty() {
            return inst.type_index("root");
        }
        if self.pinned.is_none() {
            self.pinned = Some(state.heaviest_last_path(inst));
        }
        let path = self.pinned.as_ref().unwrap();
        if self.emitted >= self.depth.min(path.len()) {
            return None;
        }
        let v = path[self.emitted];
        self.emitted += 1;
        inst.type_index(&format!("pin_{}", inst.name(v)))
    }
}

/// Two complete binary trees of depth `d` with unit capacities. Type
/// `root` sees both tree roots; type `pin_<v>` sees only node `v`. All
/// counts start at zero; the adversary decides the arrivals.
pub fn gen_worstcase_dag(d: usize) -> (DagInstance, WorstCaseAdversary) {
    assert!(d >= 1, "depth must be at least 1");
    let name = |layer: usize, i: usize| format!("v{layer}_{i}");
    let mut spec = InstanceSpec { sink: "t".into(), ..Default::default() };
    for layer in 1..=d {
        for i in 0..(1usize << layer) {
            spec.nodes.push((name(layer, i), Rational::from_integer(1)));
            if layer == d {
                spec.edges.push((name(layer, i), "t".into()));
            } else {
                spec.edges.push((name(layer, i), name(layer + 1, 2 * i)));
                spec.edges.push((name(layer, i), name(layer + 1, 2 * i + 1)));
            }
        }
    }
    let zero = Rational::from_integer(0);
    spec.types.push(TypeSpec { id: "root".into(), count: zero, neighbors: vec![name(1, 0), name(1, 1)] });
    for (v, _) in spec.nodes.clone() {
        spec.types.push(TypeSpec { id: format!("pin_{v}"), count: zero, neighbors: vec![v] });
    }
    let inst = DagInstance::from_spec(&spec).expect("worst-case instance is valid");
    (inst, WorstCaseAdversary { depth: d, pinned: None, emitted: 0 })
}
