//! DAG instances, longest distances, the layered reduction and the exact
//! max-flow oracle.

mod distance;
mod format;
mod instance;
mod layered;
pub mod maxflow;
mod oracle;

pub use distance::{longest_distances, DistanceMap};
pub use format::write_instance;
pub use instance::{validate, DagInstance, ImpressionType, InstanceSpec, TypeSpec, Vertex};
pub use layered::{reduce_to_layered, Capacity, LayeredGraph, LayeredNode};
pub use oracle::{layered_max_flow, max_flow_oracle, OracleResult};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph contains a cycle through node {0}")]
    CyclicGraph(String),
    #[error("node {0} has no path to the sink")]
    UnreachableSink(String),
    #[error("{context} references unknown node {node}")]
    UnknownNodeReference { context: String, node: String },
    #[error("negative value for {0}")]
    NegativeValue(String),
    #[error("duplicate identifier {0}")]
    DuplicateId(String),
    #[error("the sink {0} cannot have outgoing edges")]
    SinkHasOutEdge(String),
    #[error("capacities too large for exact integer scaling")]
    CapacityOverflow,
    #[error("count vector has {got} entries, instance has {expected} types")]
    CountMismatch { expected: usize, got: usize },
}

/// Graph sections (`[nodes]`, `[sink]`, `[edges]`) of another file format.
pub(crate) fn parse_graph_sections_pub(secs: &[crate::textio::Section<'_>]) -> Result<InstanceSpec, crate::textio::ParseError> {
    format::parse_graph_sections(secs, false)
}

pub(crate) fn write_graph_sections_pub(out: &mut String, inst: &DagInstance) {
    format::write_graph_sections(out, inst)
}
