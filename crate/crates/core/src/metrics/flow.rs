//! Integer max-flow for the bipartite "distance at most d" graph between two
//! atomic measures.
//!
//! Masses are scaled by [`MASS_SCALE`] and rounded to integers so feasibility
//! questions are decided exactly. Rounding moves each atom by at most
//! `0.5 / MASS_SCALE`.
//!
//! Two solvers are provided. [`interval_flow`] exploits the structure of the
//! one-dimensional problem: with both supports sorted, the neighbours of
//! `x_i` form an interval of `y` indices whose endpoints are nondecreasing in
//! `i`, and on such graphs filling the leftmost open `y` atom first is
//! optimal. [`dinic_flow`] is a general Dinic solver on the same graph and is
//! used to cross-check the greedy.

use std::collections::VecDeque;

/// Scale applied to masses before integer flow.
pub const MASS_SCALE: f64 = 1e12;

/// Masses in integer flow units.
pub fn scale_masses(masses: &[f64]) -> Vec<u64> {
    masses.iter().map(|&m| (m * MASS_SCALE).round() as u64).collect()
}

#[inline]
pub(crate) fn within(x: f64, y: f64, d: f64) -> bool {
    (x - y).abs() <= d
}

/// A flow and, optionally, its nonzero edges `(i, j, amount)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub value: u64,
    pub edges: Vec<(usize, usize, u64)>,
}

/// Maximum flow on pairs with `|x_i - y_j| <= d`; `xs` and `ys` must be
/// strictly increasing.
pub fn interval_flow(xs: &[f64], a: &[u64], ys: &[f64], b: &[u64], d: f64, record: bool) -> Flow {
    debug_assert_eq!(xs.len(), a.len());
    debug_assert_eq!(ys.len(), b.len());
    let mut remaining = b.to_vec();
    let mut edges = Vec::new();
    let mut value = 0u64;
    let mut start = 0usize;
    for (i, (&x, &supply)) in xs.iter().zip(a).enumerate() {
        // Atoms left of x's window stay out of reach for every later x.
        while start < ys.len() && (remaining[start] == 0 || (ys[start] < x && !within(x, ys[start], d))) {
            start += 1;
        }
        let mut need = supply;
        let mut j = start;
        while need > 0 && j < ys.len() && within(x, ys[j], d) {
            let take = need.min(remaining[j]);
            if take > 0 {
                need -= take;
                remaining[j] -= take;
                value += take;
                if record {
                    edges.push((i, j, take));
                }
            }
            if remaining[j] == 0 {
                j += 1;
            }
        }
    }
    Flow { value, edges }
}

/// General Dinic max-flow on the same bipartite graph. Quadratic in the
/// number of atoms; meant for cross-checks on small instances.
pub fn dinic_flow(xs: &[f64], a: &[u64], ys: &[f64], b: &[u64], d: f64) -> Flow {
    let n = xs.len();
    let m = ys.len();
    let source = n + m;
    let sink = source + 1;
    let mut net = Dinic::new(n + m + 2);
    for (i, &cap) in a.iter().enumerate() {
        net.add_edge(source, i, cap);
    }
    for (j, &cap) in b.iter().enumerate() {
        net.add_edge(n + j, sink, cap);
    }
    let mut pair_edges = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            if within(x, y, d) {
                let id = net.add_edge(i, n + j, u64::MAX / 4);
                pair_edges.push((i, j, id));
            }
        }
    }
    let value = net.max_flow(source, sink);
    let edges = pair_edges
        .into_iter()
        .filter_map(|(i, j, id)| {
            let f = net.flow_on(id);
            (f > 0).then_some((i, j, f))
        })
        .collect();
    Flow { value, edges }
}

struct Edge {
    to: usize,
    cap: u64,
    original: u64,
}

struct Dinic {
    graph: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    level: Vec<i64>,
    next: Vec<usize>,
}

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic { graph: vec![Vec::new(); nodes], edges: Vec::new(), level: vec![0; nodes], next: vec![0; nodes] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.edges.len();
        self.graph[from].push(id);
        self.edges.push(Edge { to, cap, original: cap });
        self.graph[to].push(id + 1);
        self.edges.push(Edge { to: from, cap: 0, original: 0 });
        id
    }

    fn flow_on(&self, id: usize) -> u64 {
        self.edges[id].original - self.edges[id].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.graph[u] {
                let e = &self.edges[id];
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: u64) -> u64 {
        if u == t {
            return pushed;
        }
        while self.next[u] < self.graph[u].len() {
            let id = self.graph[u][self.next[u]];
            let (to, cap) = (self.edges[id].to, self.edges[id].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.edges[id].cap -= got;
                    self.edges[id ^ 1].cap += got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|n| *n = 0);
            loop {
                let f = self.dfs(s, t, u64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sorted_atoms() -> impl Strategy<Value = (Vec<f64>, Vec<u64>)> {
        prop::collection::btree_set(0u32..40, 1..7).prop_flat_map(|set| {
            let xs: Vec<f64> = set.into_iter().map(|v| v as f64 / 8.0).collect();
            let n = xs.len();
            (Just(xs), prop::collection::vec(1u64..50, n))
        })
    }

    #[test]
    fn disjoint_supports_carry_nothing_at_zero() {
        let f = interval_flow(&[0.0], &[10], &[1.0], &[10], 0.0, true);
        assert_eq!(f.value, 0);
        assert!(f.edges.is_empty());
        let f = interval_flow(&[0.0], &[10], &[1.0], &[10], 1.0, true);
        assert_eq!(f.value, 10);
        assert_eq!(f.edges, vec![(0, 0, 10)]);
    }

    proptest! {
        #[test]
        fn greedy_matches_dinic((xs, a) in sorted_atoms(), (ys, b) in sorted_atoms(), d in 0u32..16) {
            let d = d as f64 / 8.0;
            let greedy = interval_flow(&xs, &a, &ys, &b, d, true);
            let reference = dinic_flow(&xs, &a, &ys, &b, d);
            prop_assert_eq!(greedy.value, reference.value);
            let mut rows = vec![0u64; xs.len()];
            let mut cols = vec![0u64; ys.len()];
            for &(i, j, f) in &greedy.edges {
                prop_assert!(within(xs[i], ys[j], d));
                rows[i] += f;
                cols[j] += f;
            }
            prop_assert!(rows.iter().zip(&a).all(|(r, s)| r <= s));
            prop_assert!(cols.iter().zip(&b).all(|(c, s)| c <= s));
            prop_assert_eq!(rows.iter().sum::<u64>(), greedy.value);
        }
    }
}
