use super::{DagInstance, Vertex};

/// Longest distances from the implicit source `s`.
///
/// `s` sits at distance 0 and every impression at distance 1, so an offline
/// node directly fed by impressions has distance 2 and lives in offline layer
/// `d_v - 1 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMap {
    node: Vec<u32>,
    sink: u32,
}

pub fn longest_distances(inst: &DagInstance) -> DistanceMap {
    let n = inst.node_count();
    // nodes without any impression or offline predecessor still count as
    // reachable through s -> i -> v, i.e. distance 2
    let mut d = vec![2u32; n];
    for &u in inst.topological_order() {
        for v in inst.successors(u) {
            if let Vertex::Node(j) = *v {
                d[j] = d[j].max(d[u] + 1);
            }
        }
    }
    let sink = inst.sink_predecessors().iter().map(|&u| d[u] + 1).max().unwrap_or(2);
    DistanceMap { node: d, sink }
}

impl DistanceMap {
    pub fn node(&self, v: usize) -> u32 {
        self.node[v]
    }

    pub fn sink(&self) -> u32 {
        self.sink
    }

    pub fn vertex(&self, v: Vertex) -> u32 {
        match v {
            Vertex::Node(i) => self.node[i],
            Vertex::Sink => self.sink,
        }
    }

    /// `d_uv = d_v - d_u - 1`.
    pub fn edge_slack(&self, u: usize, v: Vertex) -> u32 {
        self.vertex(v) - self.node[u] - 1
    }

    /// Slack of an impression edge `i -> v` (impressions sit at distance 1).
    pub fn impression_slack(&self, v: usize) -> u32 {
        self.node[v] - 2
    }

    /// Offline layer of the real copy of `v` (1-based).
    pub fn layer(&self, v: usize) -> usize {
        self.node[v] as usize - 1
    }

    /// Number of offline layers.
    pub fn depth(&self) -> usize {
        self.node.iter().max().map_or(0, |&m| m as usize - 1)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.node
    }
}
