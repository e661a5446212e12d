//! Seeded random instance generators.

use crate::graph::{DagInstance, InstanceSpec, TypeSpec};
use crate::rational::Rational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name and version of the generator behind every seed.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3)";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    pub max_capacity: i64,
    pub max_count: i64,
    /// Allow half-integer capacities.
    pub halves: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_capacity: 6, max_count: 6, halves: true }
    }
}

fn capacity(rng: &mut impl Rng, shape: &Shape) -> Rational {
    let c = rng.gen_range(1..=shape.max_capacity);
    if shape.halves && rng.gen_bool(0.25) {
        Rational::new(2 * c - 1, 2)
    } else {
        Rational::from_integer(c)
    }
}

fn nonempty_subset(rng: &mut impl Rng, pool: &[String], p: f64) -> Vec<String> {
    let mut s: Vec<String> = pool.iter().filter(|_| rng.gen_bool(p)).cloned().collect();
    if s.is_empty() {
        s.push(pool.choose(rng).unwrap().clone());
    }
    s
}

fn types(rng: &mut impl Rng, pool: &[String], k: usize, shape: &Shape) -> Vec<TypeSpec> {
    (0..k)
        .map(|i| TypeSpec {
            id: format!("i{i}"),
            count: Rational::from_integer(rng.gen_range(0..=shape.max_count)),
            neighbors: nonempty_subset(rng, pool, 0.45),
        })
        .collect()
}

/// `n` advertisers feeding the sink, `k` impression types.
pub fn random_bipartite(rng: &mut impl Rng, n: usize, k: usize, shape: &Shape) -> DagInstance {
    let names: Vec<String> = (0..n).map(|a| format!("a{a}")).collect();
    let spec = InstanceSpec {
        nodes: names.iter().map(|a| (a.clone(), capacity(rng, shape))).collect(),
        sink: "t".into(),
        edges: names.iter().map(|a| (a.clone(), "t".into())).collect(),
        types: types(rng, &names, k, shape),
    };
    DagInstance::from_spec(&spec).expect("generated instance is valid")
}

/// `depth` offline layers of 1 to `width` nodes. Every node of layer `j+1`
/// has a predecessor in layer `j`, so the layering is exact.
pub fn random_layered(rng: &mut impl Rng, depth: usize, width: usize, k: usize, shape: &Shape) -> DagInstance {
    let layers: Vec<Vec<String>> = (1..=depth)
        .map(|j| (0..rng.gen_range(1..=width)).map(|i| format!("n{j}_{i}")).collect())
        .collect();
    let mut spec = InstanceSpec { sink: "t".into(), ..Default::default() };
    for (j, layer) in layers.iter().enumerate() {
        for v in layer {
            spec.nodes.push((v.clone(), capacity(rng, shape)));
        }
        match layers.get(j + 1) {
            None => spec.edges.extend(layer.iter().map(|v| (v.clone(), "t".to_string()))),
            Some(next) => {
                let mut covered = vec![false; next.len()];
                for v in layer {
                    for w in nonempty_subset(rng, next, 0.5) {
                        covered[next.iter().position(|x| *x == w).unwrap()] = true;
                        spec.edges.push((v.clone(), w));
                    }
                }
                for (i, w) in next.iter().enumerate() {
                    if !covered[i] {
                        spec.edges.push((layer.choose(rng).unwrap().clone(), w.clone()));
                    }
                }
            }
        }
    }
    spec.types = types(rng, &layers[0], k, shape);
    DagInstance::from_spec(&spec).expect("generated instance is valid")
}

/// A general DAG on `n` nodes: forward edges with probability `p`, extra
/// sink edges, and impression types attached anywhere. Produces skip edges
/// and nodes of uneven depth.
pub fn random_dag(rng: &mut impl Rng, n: usize, p: f64, k: usize, shape: &Shape) -> DagInstance {
    let names: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let mut spec = InstanceSpec { sink: "t".into(), ..Default::default() };
    for v in &names {
        spec.nodes.push((v.clone(), capacity(rng, shape)));
    }
    for u in 0..n {
        let mut any = false;
        for w in u + 1..n {
            if rng.gen_bool(p) {
                spec.edges.push((names[u].clone(), names[w].clone()));
                any = true;
            }
        }
        if !any || rng.gen_bool(0.25) {
            spec.edges.push((names[u].clone(), "t".into()));
        }
    }
    spec.types = types(rng, &names, k, shape);
    DagInstance::from_spec(&spec).expect("generated instance is valid")
}
