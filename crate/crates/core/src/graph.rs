//! Periodic temporal graphs, duration matrices and the underlying static graph
//! a duration matrix induces.
//!
//! Vertices are `0..n`. Every edge carries exactly one label in `[1, delta]` and
//! is available at `label + k * delta` for every `k >= 0`.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Normalizes any integer into the label range `[1, delta]`.
pub fn normalize_label(x: i64, delta: u64) -> u64 {
    ((x - 1).rem_euclid(delta as i64) + 1) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub label: u64,
}

/// An undirected simple graph with one label per edge and a common period.
///
/// Edges are stored with `u < v`, sorted by `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicTemporalGraph {
    n: usize,
    delta: u64,
    edges: Vec<LabeledEdge>,
    // (neighbor, edge index), sorted by neighbor
    adj: Vec<Vec<(Vertex, usize)>>,
}

impl PeriodicTemporalGraph {
    pub fn new(n: usize, delta: u64, edges: impl IntoIterator<Item = (Vertex, Vertex, u64)>) -> Result<Self> {
        if delta == 0 {
            return Err(Error::InvalidDelta(delta));
        }
        let mut list = Vec::new();
        for (u, v, label) in edges {
            if u >= n || v >= n {
                return Err(Error::MalformedGraph(format!("edge {{{u}, {v}}} has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::MalformedGraph(format!("self-loop at vertex {u}")));
            }
            if label == 0 || label > delta {
                return Err(Error::LabelOutOfRange { label, delta });
            }
            list.push(LabeledEdge { u: u.min(v), v: u.max(v), label });
        }
        list.sort();
        for w in list.windows(2) {
            if (w[0].u, w[0].v) == (w[1].u, w[1].v) {
                return Err(Error::MalformedGraph(format!("duplicate edge {{{}, {}}}", w[0].u, w[0].v)));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (i, e) in list.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Self { n, delta, edges: list, adj })
    }

    /// Labels the edges of `g` with `labels`, given in `g`'s edge order.
    pub fn from_underlying(g: &UnderlyingGraph, delta: u64, labels: &[u64]) -> Result<Self> {
        if labels.len() != g.edges().len() {
            return Err(Error::MalformedGraph(format!(
                "{} labels supplied for {} edges",
                labels.len(),
                g.edges().len()
            )));
        }
        Self::new(g.n(), delta, g.edges().iter().zip(labels).map(|(&(u, v), &l)| (u, v, l)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    pub fn labels(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.label).collect()
    }

    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, usize)] {
        &self.adj[v]
    }

    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.adj[u].binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| self.adj[u][i].1)
    }

    pub fn label(&self, u: Vertex, v: Vertex) -> Option<u64> {
        self.edge_index(u, v).map(|i| self.edges[i].label)
    }

    pub fn underlying(&self) -> UnderlyingGraph {
        UnderlyingGraph::new(self.n, self.edges.iter().map(|e| (e.u, e.v)))
            .expect("a valid temporal graph has a simple underlying graph")
    }

    /// Adds `t` to every label, modulo the period.
    pub fn shifted(&self, t: i64) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.label = normalize_label(e.label as i64 + t, self.delta);
        }
        g
    }
}

/// An `n x n` matrix of fastest-path durations, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DurationMatrix {
    n: usize,
    d: Vec<u64>,
}

impl DurationMatrix {
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let n = rows.len();
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedMatrix(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            d.extend(row);
        }
        Ok(Self { n, d })
    }

    pub fn filled(n: usize, value: u64) -> Self {
        let mut d = vec![value; n * n];
        for i in 0..n {
            d[i * n + i] = 0;
        }
        Self { n, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: Vertex, j: Vertex) -> u64 {
        self.d[i * self.n + j]
    }

    pub fn set(&mut self, i: Vertex, j: Vertex, value: u64) {
        self.d[i * self.n + j] = value;
    }

    pub fn row(&self, i: Vertex) -> &[u64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn max_entry(&self) -> u64 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// The matrix with rows and columns reordered so that new index `k`
    /// corresponds to old vertex `order[k]`.
    pub fn permuted(&self, order: &[Vertex]) -> Self {
        let n = self.n;
        let mut d = Vec::with_capacity(n * n);
        for &a in order {
            for &b in order {
                d.push(self.get(a, b));
            }
        }
        Self { n, d }
    }

    /// Ordered pairs `(i, j, expected, actual)` where `self` and `other` differ.
    pub fn mismatches(&self, other: &DurationMatrix) -> Vec<(Vertex, Vertex, u64, u64)> {
        let mut out = Vec::new();
        for i in 0..self.n.min(other.n) {
            for j in 0..self.n.min(other.n) {
                if self.get(i, j) != other.get(i, j) {
                    out.push((i, j, self.get(i, j), other.get(i, j)));
                }
            }
        }
        out
    }
}

impl fmt::Display for DurationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// A static simple graph; edges are stored with `u < v`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnderlyingGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl UnderlyingGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut list: Vec<(Vertex, Vertex)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::MalformedGraph(format!("invalid edge {{{u}, {v}}} for n = {n}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        let before = list.len();
        list.dedup();
        if list.len() != before {
            return Err(Error::MalformedGraph("duplicate edge".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Self { n, edges: list, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.n
    }

    /// Depth-first acyclicity check plus connectivity.
    pub fn is_tree(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut parent = vec![usize::MAX; self.n];
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if y == parent[x] {
                    continue;
                }
                if seen[y] {
                    return false;
                }
                seen[y] = true;
                parent[y] = x;
                stack.push(y);
            }
        }
        seen.iter().all(|&s| s)
    }

    /// If the graph is a single cycle through all vertices, its vertices in
    /// cyclic order, starting at 0 and continuing to 0's smaller neighbor.
    pub fn cycle_order(&self) -> Option<Vec<Vertex>> {
        if self.n < 3 || self.edges.len() != self.n || self.adj.iter().any(|a| a.len() != 2) {
            return None;
        }
        let mut order = Vec::with_capacity(self.n);
        let (mut prev, mut cur) = (0, self.adj[0][0]);
        order.push(0);
        while cur != 0 {
            if order.len() == self.n {
                return None;
            }
            order.push(cur);
            let next = if self.adj[cur][0] == prev { self.adj[cur][1] } else { self.adj[cur][0] };
            prev = cur;
            cur = next;
        }
        (order.len() == self.n).then_some(order)
    }

    /// BFS parent pointers from `root`; `parent[root] == root`, unreachable
    /// vertices get `usize::MAX`.
    pub fn bfs_parents(&self, root: Vertex) -> Vec<Vertex> {
        let mut parent = vec![usize::MAX; self.n];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        parent
    }
}

/// Builds the underlying graph of `d` (edge `{i, j}` iff `d[i][j] == 1`) after
/// checking the duration-matrix invariants and connectivity.
pub fn validate_matrix(d: &DurationMatrix) -> Result<UnderlyingGraph> {
    let n = d.n();
    if n == 0 {
        return Err(Error::MalformedMatrix("empty matrix".into()));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        if d.get(i, i) != 0 {
            return Err(Error::MalformedMatrix(format!("diagonal entry d[{i}][{i}] = {} is not 0", d.get(i, i))));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let x = d.get(i, j);
            if x == 0 {
                return Err(Error::MalformedMatrix(format!("off-diagonal entry d[{i}][{j}] is 0")));
            }
            if (x == 1) != (d.get(j, i) == 1) {
                return Err(Error::MalformedMatrix(format!(
                    "d[{i}][{j}] = {x} but d[{j}][{i}] = {}; adjacency must be symmetric",
                    d.get(j, i)
                )));
            }
            if x == 1 && i < j {
                edges.push((i, j));
            }
        }
    }
    let g = UnderlyingGraph::new(n, edges)?;
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    Ok(g)
}

/// Largest duration any simple path on `n` vertices can have.
pub fn duration_upper_bound(n: usize, delta: u64) -> u64 {
    (n.saturating_sub(2) as u64) * delta + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> DurationMatrix {
        DurationMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_edge_underlying_graph() {
        let g = validate_matrix(&m(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn path_underlying_graph() {
        let g = validate_matrix(&m(&[&[0, 1, 2], &[1, 0, 1], &[3, 1, 0]])).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(g.is_tree());
    }

    #[test]
    fn asymmetric_adjacency_is_malformed() {
        let err = validate_matrix(&m(&[&[0, 2], &[1, 0]])).unwrap_err();
        assert!(matches!(err, Error::MalformedMatrix(_)), "{err}");
    }

    #[test]
    fn diagonal_and_zero_entries_are_malformed() {
        assert!(matches!(validate_matrix(&m(&[&[1, 1], &[1, 0]])), Err(Error::MalformedMatrix(_))));
        assert!(matches!(validate_matrix(&m(&[&[0, 1, 0], &[1, 0, 1], &[2, 1, 0]])), Err(Error::MalformedMatrix(_))));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(DurationMatrix::from_rows(vec![vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn disconnected_rejected() {
        let d = m(&[&[0, 1, 2, 2], &[1, 0, 2, 2], &[2, 2, 0, 1], &[2, 2, 1, 0]]);
        assert!(matches!(validate_matrix(&d), Err(Error::DisconnectedGraph)));
    }

    #[test]
    fn graph_rejects_bad_labels_and_loops() {
        assert!(matches!(
            PeriodicTemporalGraph::new(2, 3, [(0, 1, 4)]),
            Err(Error::LabelOutOfRange { label: 4, delta: 3 })
        ));
        assert!(PeriodicTemporalGraph::new(2, 3, [(0, 0, 1)]).is_err());
        assert!(PeriodicTemporalGraph::new(2, 3, [(0, 1, 1), (1, 0, 2)]).is_err());
        assert!(PeriodicTemporalGraph::new(2, 0, [(0, 1, 1)]).is_err());
    }

    #[test]
    fn cycle_order_follows_smaller_neighbor() {
        let g = UnderlyingGraph::new(5, [(0, 3), (3, 1), (1, 4), (4, 2), (2, 0)]).unwrap();
        assert_eq!(g.cycle_order(), Some(vec![0, 2, 4, 1, 3]));
        let path = UnderlyingGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.cycle_order(), None);
        // two disjoint triangles: every degree is 2 but it is not one cycle
        let two = UnderlyingGraph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(two.cycle_order(), None);
    }

    #[test]
    fn shift_wraps_into_range() {
        let g = PeriodicTemporalGraph::new(3, 4, [(0, 1, 4), (1, 2, 1)]).unwrap();
        assert_eq!(g.shifted(1).labels(), vec![1, 2]);
        assert_eq!(g.shifted(-1).labels(), vec![3, 4]);
    }
}
