//! Dinic's algorithm over exact integers or floats.

use std::collections::VecDeque;

pub trait FlowNum: Copy + PartialOrd + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> {
    const ZERO: Self;
    /// Residual capacities at or below this are treated as saturated.
    fn positive(self) -> bool;
}

impl FlowNum for i128 {
    const ZERO: Self = 0;
    fn positive(self) -> bool {
        self > 0
    }
}

impl FlowNum for f64 {
    const ZERO: Self = 0.0;
    fn positive(self) -> bool {
        self > 1e-12
    }
}

#[derive(Debug, Clone)]
struct Arc<N> {
    to: usize,
    cap: N,
    flow: N,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork<N> {
    arcs: Vec<Arc<N>>,
    adj: Vec<Vec<usize>>,
}

impl<N: FlowNum> FlowNetwork<N> {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { arcs: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Adds `u -> v` and returns the arc handle.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: N) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to: v, cap, flow: N::ZERO });
        self.arcs.push(Arc { to: u, cap: N::ZERO, flow: N::ZERO });
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        id
    }

    pub fn flow(&self, arc: usize) -> N {
        self.arcs[arc].flow
    }

    fn residual(&self, a: usize) -> N {
        self.arcs[a].cap - self.arcs[a].flow
    }

    fn push(&mut self, a: usize, amount: N) {
        self.arcs[a].flow = self.arcs[a].flow + amount;
        self.arcs[a ^ 1].flow = self.arcs[a ^ 1].flow - amount;
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &self.adj[u] {
                let v = self.arcs[a].to;
                if level[v] == usize::MAX && self.residual(a).positive() {
                    level[v] = level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        (level[t] != usize::MAX).then_some(level)
    }

    fn augment(&mut self, u: usize, t: usize, limit: N, level: &[usize], next: &mut [usize]) -> N {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let a = self.adj[u][next[u]];
            let v = self.arcs[a].to;
            let r = self.residual(a);
            if level[v] == level[u] + 1 && r.positive() {
                let want = if r < limit { r } else { limit };
                let got = self.augment(v, t, want, level, next);
                if got.positive() {
                    self.push(a, got);
                    return got;
                }
            }
            next[u] += 1;
        }
        N::ZERO
    }

    /// Maximum flow value from `s` to `t`; `infinity` bounds a single path.
    pub fn max_flow(&mut self, s: usize, t: usize, infinity: N) -> N {
        let mut total = N::ZERO;
        while let Some(level) = self.levels(s, t) {
            let mut next = vec![0; self.adj.len()];
            loop {
                let f = self.augment(s, t, infinity, &level, &mut next);
                if !f.positive() {
                    break;
                }
                total = total + f;
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.arcs[a].to;
                if !seen[v] && self.residual(a).positive() {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}
