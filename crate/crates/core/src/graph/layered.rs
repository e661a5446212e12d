use super::{DagInstance, DistanceMap, Vertex};
use crate::rational::{self, Rational};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Unbounded,
}

impl Capacity {
    pub fn as_f64(&self) -> f64 {
        match self {
            Capacity::Finite(c) => rational::to_f64(c),
            Capacity::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Capacity::Unbounded)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayeredNode {
    pub origin: Vertex,
    /// Offline layer, 1-based.
    pub layer: usize,
    pub real: bool,
    pub capacity: Capacity,
}

/// Layered form of a DAG instance: every edge joins consecutive layers.
///
/// Node indices are grouped by layer. Nodes of the last layer feed the sink
/// directly; that final hop is implicit.
#[derive(Debug, Clone)]
pub struct LayeredGraph {
    nodes: Vec<LayeredNode>,
    layers: Vec<Vec<usize>>,
    out: Vec<Vec<usize>>,
    entry: Vec<Vec<usize>>,
    chains: BTreeMap<Vertex, Vec<usize>>,
    labels: Vec<String>,
    type_ids: Vec<String>,
    counts: Vec<Rational>,
}

/// Builds the layered graph: copies of `v` in every layer up to its own,
/// chain edges between consecutive copies, one cross edge per original edge,
/// and finally removal of everything impressions cannot reach.
pub fn reduce_to_layered(inst: &DagInstance, dist: &DistanceMap) -> LayeredGraph {
    let depth = dist.depth();
    // candidate copies, keyed by (origin, layer)
    let mut key_of: Vec<(Vertex, usize)> = Vec::new();
    let mut id: HashMap<(Vertex, usize), usize> = HashMap::new();
    let mut add = |key: (Vertex, usize), key_of: &mut Vec<(Vertex, usize)>| {
        *id.entry(key).or_insert_with(|| {
            key_of.push(key);
            key_of.len() - 1
        })
    };
    for v in 0..inst.node_count() {
        for j in 1..=dist.layer(v) {
            add((Vertex::Node(v), j), &mut key_of);
        }
    }
    for j in 1..=depth {
        add((Vertex::Sink, j), &mut key_of);
    }
    let m = key_of.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (k, &(origin, j)) in key_of.iter().enumerate() {
        let top = match origin {
            Vertex::Node(v) => dist.layer(v),
            Vertex::Sink => depth,
        };
        if j < top {
            succ[k].push(id[&(origin, j + 1)]);
        }
    }
    for (u, v) in inst.edges() {
        let lu = dist.layer(u);
        if lu == depth {
            // deepest nodes reach the sink directly
            continue;
        }
        let from = id[&(Vertex::Node(u), lu)];
        succ[from].push(id[&(v, lu + 1)]);
    }
    let entry_raw: Vec<Vec<usize>> = inst
        .types()
        .iter()
        .map(|t| t.neighbors.iter().map(|&v| id[&(Vertex::Node(v), 1)]).collect())
        .collect();

    // forward reachability from impressions
    let mut alive = vec![false; m];
    let mut stack: Vec<usize> = entry_raw.iter().flatten().copied().collect();
    while let Some(x) = stack.pop() {
        if !alive[x] {
            alive[x] = true;
            stack.extend(succ[x].iter().copied());
        }
    }

    // renumber grouped by layer, then by origin order (nodes first, sink last)
    let mut order: Vec<usize> = (0..m).filter(|&k| alive[k]).collect();
    order.sort_by_key(|&k| (key_of[k].1, key_of[k].0));
    let mut new_id = vec![usize::MAX; m];
    for (i, &k) in order.iter().enumerate() {
        new_id[k] = i;
    }
    let mut nodes = Vec::with_capacity(order.len());
    let mut layers = vec![Vec::new(); depth];
    let mut out = Vec::with_capacity(order.len());
    let mut chains: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    let mut labels = Vec::with_capacity(order.len());
    for (i, &k) in order.iter().enumerate() {
        let (origin, j) = key_of[k];
        let (real, capacity) = match origin {
            Vertex::Node(v) if dist.layer(v) == j => (true, Capacity::Finite(inst.capacity(v))),
            _ => (false, Capacity::Unbounded),
        };
        nodes.push(LayeredNode { origin, layer: j, real, capacity });
        layers[j - 1].push(i);
        let mut o: Vec<usize> = succ[k].iter().map(|&s| new_id[s]).collect();
        o.sort_unstable();
        o.dedup();
        out.push(o);
        chains.entry(origin).or_default().push(i);
        labels.push(format!("{}@{}", inst.vertex_name(origin), j));
    }
    let entry = entry_raw
        .into_iter()
        .map(|e| {
            let mut e: Vec<usize> = e.into_iter().map(|k| new_id[k]).collect();
            e.sort_unstable();
            e
        })
        .collect();
    LayeredGraph {
        nodes,
        layers,
        out,
        entry,
        chains,
        labels,
        type_ids: inst.types().iter().map(|t| t.id.clone()).collect(),
        counts: inst.counts(),
    }
}

impl LayeredGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, i: usize) -> &LayeredNode {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[LayeredNode] {
        &self.nodes
    }

    /// Number of offline layers.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Nodes of offline layer `j` (1-based).
    pub fn layer(&self, j: usize) -> &[usize] {
        &self.layers[j - 1]
    }

    /// Largest layer size, the `n` in the weight schedule.
    pub fn max_layer_size(&self) -> usize {
        self.layers.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Successors in the next layer; empty for the last layer, whose nodes
    /// feed the sink.
    pub fn out(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    /// Layer-1 neighbours of impression type `t`.
    pub fn entry(&self, t: usize) -> &[usize] {
        &self.entry[t]
    }

    pub fn type_count(&self) -> usize {
        self.entry.len()
    }

    /// Type counts copied from the instance at reduction time.
    pub fn counts(&self) -> &[Rational] {
        &self.counts
    }

    pub fn counts_f64(&self) -> Vec<f64> {
        self.counts.iter().map(rational::to_f64).collect()
    }

    /// Same graph with different type counts.
    pub fn with_counts(&self, counts: &[Rational]) -> LayeredGraph {
        assert_eq!(counts.len(), self.counts.len(), "count vector length");
        LayeredGraph { counts: counts.to_vec(), ..self.clone() }
    }

    pub fn type_id(&self, t: usize) -> &str {
        &self.type_ids[t]
    }

    /// Copies of an origin vertex ordered by layer. Origins pruned entirely
    /// are absent.
    pub fn chain(&self, origin: Vertex) -> Option<&[usize]> {
        self.chains.get(&origin).map(Vec::as_slice)
    }

    pub fn chains(&self) -> impl Iterator<Item = (Vertex, &[usize])> {
        self.chains.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    /// The real copy of an offline node, if it survived pruning.
    pub fn real_copy(&self, v: usize) -> Option<usize> {
        self.chains.get(&Vertex::Node(v)).and_then(|c| c.last().copied()).filter(|&i| self.nodes[i].real)
    }

    /// `origin@layer`.
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn virtual_count(&self) -> usize {
        self.nodes.iter().filter(|n| !n.real).count()
    }
}
