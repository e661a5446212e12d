use super::maxflow::FlowNetwork;
use super::{Capacity, DagInstance, GraphError, LayeredGraph, Vertex};
use crate::rational::{self, Rational};
use num_integer::Integer;

/// Exact optimum of the node-capacitated flow problem.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub opt_value: Rational,
    /// Flow through each offline node, indexed like the instance.
    pub per_node_flow: Vec<Rational>,
}

impl OracleResult {
    pub fn opt_f64(&self) -> f64 {
        rational::to_f64(&self.opt_value)
    }
}

struct Scale {
    factor: i128,
}

impl Scale {
    fn new<'a>(values: impl Iterator<Item = &'a Rational>) -> Result<Self, GraphError> {
        let mut l: i128 = 1;
        for r in values {
            l = l.lcm(&(*r.denom() as i128));
            if l > i64::MAX as i128 {
                return Err(GraphError::CapacityOverflow);
            }
        }
        Ok(Scale { factor: l })
    }

    fn up(&self, r: &Rational) -> Result<i128, GraphError> {
        (*r.numer() as i128).checked_mul(self.factor / *r.denom() as i128).ok_or(GraphError::CapacityOverflow)
    }

    fn down(&self, x: i128) -> Result<Rational, GraphError> {
        let g = x.gcd(&self.factor);
        let (n, d) = (x / g.max(1), self.factor / g.max(1));
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Ok(Rational::new(n, d)),
            _ => Err(GraphError::CapacityOverflow),
        }
    }
}

/// Node-split max flow: `v_in -> v_out` carries `C_v`, each type is a source
/// arc of capacity `m_i`. Runs on integers after common-denominator scaling.
pub fn max_flow_oracle(inst: &DagInstance) -> Result<OracleResult, GraphError> {
    let counts = inst.counts();
    let scale = Scale::new(inst.capacities().iter().chain(counts.iter()))?;
    let n = inst.node_count();
    let (src, snk) = (0, 1);
    let vin = |v: usize| 2 + 2 * v;
    let vout = |v: usize| 3 + 2 * v;
    let mut net = FlowNetwork::<i128>::new(2 + 2 * n);
    let mut supply: i128 = 0;
    let mut scaled_counts = Vec::with_capacity(counts.len());
    for c in &counts {
        let s = scale.up(c)?;
        supply = supply.checked_add(s).ok_or(GraphError::CapacityOverflow)?;
        scaled_counts.push(s);
    }
    let inf = supply + 1;
    let node_arcs: Vec<usize> = (0..n)
        .map(|v| Ok(net.add_arc(vin(v), vout(v), scale.up(&inst.capacity(v))?)))
        .collect::<Result<_, GraphError>>()?;
    for (u, v) in inst.edges() {
        let to = match v {
            Vertex::Node(j) => vin(j),
            Vertex::Sink => snk,
        };
        net.add_arc(vout(u), to, inf);
    }
    for (t, ty) in inst.types().iter().enumerate() {
        if ty.neighbors.is_empty() {
            continue;
        }
        let hub = net.add_node();
        net.add_arc(src, hub, scaled_counts[t]);
        for &v in &ty.neighbors {
            net.add_arc(hub, vin(v), inf);
        }
    }
    let value = net.max_flow(src, snk, inf);
    Ok(OracleResult {
        opt_value: scale.down(value)?,
        per_node_flow: node_arcs.iter().map(|&a| scale.down(net.flow(a))).collect::<Result<_, _>>()?,
    })
}

/// Max-flow value of a layered graph treated as a plain DAG, with unbounded
/// copies modelled by the total supply.
pub fn layered_max_flow(layered: &LayeredGraph, counts: &[Rational]) -> Result<Rational, GraphError> {
    let finite: Vec<Rational> = layered
        .nodes()
        .iter()
        .filter_map(|n| match n.capacity {
            Capacity::Finite(c) => Some(c),
            Capacity::Unbounded => None,
        })
        .collect();
    let scale = Scale::new(finite.iter().chain(counts.iter()))?;
    let mut supply: i128 = 0;
    for c in counts {
        supply = supply.checked_add(scale.up(c)?).ok_or(GraphError::CapacityOverflow)?;
    }
    let inf = supply + 1;
    let n = layered.node_count();
    let mut net = FlowNetwork::<i128>::new(2 + 2 * n);
    let (src, snk) = (0, 1);
    let depth = layered.depth();
    for i in 0..n {
        let node = layered.node(i);
        let cap = match node.capacity {
            Capacity::Finite(c) => scale.up(&c)?,
            Capacity::Unbounded => inf,
        };
        net.add_arc(2 + 2 * i, 3 + 2 * i, cap);
        for &j in layered.out(i) {
            net.add_arc(3 + 2 * i, 2 + 2 * j, inf);
        }
        if node.layer == depth {
            net.add_arc(3 + 2 * i, snk, inf);
        }
    }
    for t in 0..layered.type_count() {
        if layered.entry(t).is_empty() {
            continue;
        }
        let hub = net.add_node();
        net.add_arc(src, hub, scale.up(&counts[t])?);
        for &v in layered.entry(t) {
            net.add_arc(hub, 2 + 2 * v, inf);
        }
    }
    scale.down(net.max_flow(src, snk, inf))
}
