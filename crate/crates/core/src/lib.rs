//! Proportional-weight flow allocation on DAGs.
//!
//! Offline nodes carry capacities, impressions arrive online and are routed
//! towards a sink by splitting each unit of flow in proportion to per-node
//! weights. The crate computes such weights offline ([`weights`]), evaluates
//! them ([`flow_eval`]), runs them online ([`online`]), learns them from
//! samples ([`learning`]), and applies the same ideas to restricted-assignment
//! load balancing ([`load_balancing`]).
//!
//! ```
//! use propflow::graph::{DagInstance, InstanceSpec};
//! use propflow::pipeline::{compute_dag_weights, PipelineConfig};
//! use propflow::flow_eval::route_dag;
//!
//! let spec: InstanceSpec = "
//! [nodes]
//! a 1
//! b 1
//! [sink]
//! t
//! [edges]
//! a t
//! b t
//! [types]
//! both 1 a b
//! only_a 1 a
//! ".parse().unwrap();
//! let instance = DagInstance::from_spec(&spec).unwrap();
//! let run = compute_dag_weights(&instance, &PipelineConfig::new(0.1)).unwrap();
//! let report = route_dag(&instance, &run.dag_weights, &run.dist).unwrap();
//! assert!(report.value > 1.8);
//! ```

pub mod cli;
pub mod flow_eval;
pub mod gen;
pub mod graph;
pub mod learning;
pub mod load_balancing;
pub mod online;
pub mod pipeline;
pub mod rational;
pub mod textio;
pub mod weights;

pub use graph::{DagInstance, DistanceMap, LayeredGraph, Vertex};
pub use rational::Rational;
