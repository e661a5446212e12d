use super::GraphError;
use crate::rational::{self, Rational};
use std::collections::{HashMap, VecDeque};

/// A vertex of the offline graph: an offline node (by index) or the sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Node(usize),
    Sink,
}

/// Name-based description of an instance, as read from a file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceSpec {
    pub nodes: Vec<(String, Rational)>,
    pub sink: String,
    pub edges: Vec<(String, String)>,
    pub types: Vec<TypeSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeSpec {
    pub id: String,
    pub count: Rational,
    pub neighbors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpressionType {
    pub id: String,
    /// Sorted, de-duplicated offline node indices.
    pub neighbors: Vec<usize>,
    pub count: Rational,
}

/// A validated offline DAG together with impression types and counts.
#[derive(Debug, Clone, PartialEq)]
pub struct DagInstance {
    names: Vec<String>,
    index: HashMap<String, usize>,
    capacities: Vec<Rational>,
    sink: String,
    succ: Vec<Vec<Vertex>>,
    sink_preds: Vec<usize>,
    types: Vec<ImpressionType>,
    topo: Vec<usize>,
}

/// Checks every structural invariant of `spec`.
pub fn validate(spec: &InstanceSpec) -> Result<(), GraphError> {
    DagInstance::from_spec(spec).map(|_| ())
}

impl DagInstance {
    pub fn from_spec(spec: &InstanceSpec) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (i, (name, _)) in spec.nodes.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() || *name == spec.sink {
                return Err(GraphError::DuplicateId(name.clone()));
            }
        }
        let n = spec.nodes.len();
        let lookup = |context: &str, name: &str| -> Result<Vertex, GraphError> {
            if name == spec.sink {
                return Ok(Vertex::Sink);
            }
            index.get(name).map(|&i| Vertex::Node(i)).ok_or_else(|| {
                GraphError::UnknownNodeReference { context: context.to_string(), node: name.to_string() }
            })
        };

        let mut succ = vec![Vec::new(); n];
        for (u, v) in &spec.edges {
            let ctx = format!("edge {u} -> {v}");
            let from = lookup(&ctx, u)?;
            let to = lookup(&ctx, v)?;
            match from {
                Vertex::Sink => return Err(GraphError::SinkHasOutEdge(spec.sink.clone())),
                Vertex::Node(i) => {
                    if to == from {
                        return Err(GraphError::CyclicGraph(u.clone()));
                    }
                    succ[i].push(to)
                }
            }
        }
        for s in &mut succ {
            s.sort();
            s.dedup();
        }

        let mut type_ids = HashMap::new();
        let mut types = Vec::with_capacity(spec.types.len());
        for t in &spec.types {
            if type_ids.insert(t.id.clone(), ()).is_some() {
                return Err(GraphError::DuplicateId(t.id.clone()));
            }
            let mut neighbors = Vec::with_capacity(t.neighbors.len());
            for nb in &t.neighbors {
                match lookup(&format!("type {}", t.id), nb)? {
                    Vertex::Node(i) => neighbors.push(i),
                    Vertex::Sink => {
                        return Err(GraphError::UnknownNodeReference {
                            context: format!("type {}", t.id),
                            node: nb.clone(),
                        })
                    }
                }
            }
            neighbors.sort_unstable();
            neighbors.dedup();
            types.push(ImpressionType { id: t.id.clone(), neighbors, count: t.count });
        }

        for (name, c) in &spec.nodes {
            if rational::is_negative(c) {
                return Err(GraphError::NegativeValue(format!("capacity of {name}")));
            }
        }
        for t in &types {
            if rational::is_negative(&t.count) {
                return Err(GraphError::NegativeValue(format!("count of type {}", t.id)));
            }
        }

        // Kahn's algorithm; leftovers lie on or behind a cycle
        let mut indeg = vec![0usize; n];
        for s in &succ {
            for v in s {
                if let Vertex::Node(j) = v {
                    indeg[*j] += 1;
                }
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            topo.push(u);
            for v in &succ[u] {
                if let Vertex::Node(j) = *v {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
        }
        if topo.len() < n {
            let culprit = (0..n).filter(|&i| indeg[i] > 0).min_by(|&a, &b| spec.nodes[a].0.cmp(&spec.nodes[b].0));
            return Err(GraphError::CyclicGraph(spec.nodes[culprit.unwrap()].0.clone()));
        }

        let mut reaches = vec![false; n];
        for &u in topo.iter().rev() {
            reaches[u] = succ[u].iter().any(|v| match v {
                Vertex::Sink => true,
                Vertex::Node(j) => reaches[*j],
            });
        }
        if let Some(i) = (0..n).find(|&i| !reaches[i]) {
            return Err(GraphError::UnreachableSink(spec.nodes[i].0.clone()));
        }

        let sink_preds = (0..n).filter(|&i| succ[i].contains(&Vertex::Sink)).collect();
        Ok(DagInstance {
            names: spec.nodes.iter().map(|(s, _)| s.clone()).collect(),
            index,
            capacities: spec.nodes.iter().map(|(_, c)| *c).collect(),
            sink: spec.sink.clone(),
            succ,
            sink_preds,
            types,
            topo,
        })
    }

    pub fn to_spec(&self) -> InstanceSpec {
        let vname = |v: &Vertex| match v {
            Vertex::Node(i) => self.names[*i].clone(),
            Vertex::Sink => self.sink.clone(),
        };
        InstanceSpec {
            nodes: self.names.iter().cloned().zip(self.capacities.iter().copied()).collect(),
            sink: self.sink.clone(),
            edges: (0..self.names.len())
                .flat_map(|u| self.succ[u].iter().map(move |v| (u, *v)))
                .map(|(u, v)| (self.names[u].clone(), vname(&v)))
                .collect(),
            types: self
                .types
                .iter()
                .map(|t| TypeSpec {
                    id: t.id.clone(),
                    count: t.count,
                    neighbors: t.neighbors.iter().map(|&i| self.names[i].clone()).collect(),
                })
                .collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        match v {
            Vertex::Node(i) => &self.names[i],
            Vertex::Sink => &self.sink,
        }
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn sink_name(&self) -> &str {
        &self.sink
    }

    pub fn capacity(&self, v: usize) -> Rational {
        self.capacities[v]
    }

    pub fn capacity_f64(&self, v: usize) -> f64 {
        rational::to_f64(&self.capacities[v])
    }

    pub fn capacities(&self) -> &[Rational] {
        &self.capacities
    }

    /// Out-neighbours of offline node `v`, sorted with the sink last.
    pub fn successors(&self, v: usize) -> &[Vertex] {
        &self.succ[v]
    }

    pub fn sink_predecessors(&self) -> &[usize] {
        &self.sink_preds
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, Vertex)> + '_ {
        self.succ.iter().enumerate().flat_map(|(u, s)| s.iter().map(move |v| (u, *v)))
    }

    pub fn types(&self) -> &[ImpressionType] {
        &self.types
    }

    pub fn type_index(&self, id: &str) -> Option<usize> {
        self.types.iter().position(|t| t.id == id)
    }

    pub fn counts(&self) -> Vec<Rational> {
        self.types.iter().map(|t| t.count).collect()
    }

    pub fn counts_f64(&self) -> Vec<f64> {
        self.types.iter().map(|t| rational::to_f64(&t.count)).collect()
    }

    pub fn total_supply(&self) -> Rational {
        self.types.iter().map(|t| t.count).sum()
    }

    /// Offline nodes in a topological order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Same graph and type catalogue with new counts.
    pub fn with_counts(&self, counts: &[Rational]) -> Result<Self, GraphError> {
        if counts.len() != self.types.len() {
            return Err(GraphError::CountMismatch { expected: self.types.len(), got: counts.len() });
        }
        let mut out = self.clone();
        for (t, c) in out.types.iter_mut().zip(counts) {
            if rational::is_negative(c) {
                return Err(GraphError::NegativeValue(format!("count of type {}", t.id)));
            }
            t.count = *c;
        }
        Ok(out)
    }

    /// Same graph with new capacities.
    pub fn with_capacities(&self, caps: &[Rational]) -> Result<Self, GraphError> {
        if caps.len() != self.capacities.len() {
            return Err(GraphError::CountMismatch { expected: self.capacities.len(), got: caps.len() });
        }
        if let Some(i) = caps.iter().position(rational::is_negative) {
            return Err(GraphError::NegativeValue(format!("capacity of {}", self.names[i])));
        }
        let mut out = self.clone();
        out.capacities = caps.to_vec();
        Ok(out)
    }
}

impl std::str::FromStr for InstanceSpec {
    type Err = crate::textio::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::format::parse_instance(s)
    }
}
