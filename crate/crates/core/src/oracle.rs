//! Fastest-path duration oracles.
//!
//! [`fastest_duration_matrix`] runs one earliest-arrival search per edge leaving
//! each source. With one label per edge per period the next usable traversal
//! of an edge after time `a` is given in closed form, so a plain
//! label-setting search over absolute times is exact.
//!
//! [`naive_fastest_oracle`] shares none of that machinery: it enumerates
//! simple paths and sums travel delays. The two are used to check each other.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::delay::delay_unchecked;
use crate::error::{Error, Result};
use crate::graph::{DurationMatrix, PeriodicTemporalGraph, Vertex};

pub const DEFAULT_PATH_CAP: u64 = 1_000_000;

/// Earliest time strictly after `arrival` at which an edge labeled `label` runs.
#[inline]
pub fn next_traversal(arrival: u64, label: u64, delta: u64) -> u64 {
    let r = arrival % delta;
    arrival + (label + delta - r + delta - 1) % delta + 1
}

/// A fastest temporal path together with its timing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalPathRecord {
    pub vertices: Vec<Vertex>,
    pub start_label: u64,
    pub arrival: u64,
    pub duration: u64,
}

struct Search {
    arrival: Vec<u64>,
    parent: Vec<Vertex>,
}

/// Earliest arrival at every vertex after crossing `(source, first)` at time
/// `start`. The source itself is never re-entered.
fn earliest_arrival(g: &PeriodicTemporalGraph, source: Vertex, first: Vertex, start: u64, track: bool) -> Search {
    let n = g.n();
    let delta = g.delta();
    let mut arrival = vec![u64::MAX; n];
    let mut parent = if track { vec![usize::MAX; n] } else { Vec::new() };
    let mut done = vec![false; n];
    done[source] = true;
    arrival[first] = start;
    if track {
        parent[first] = source;
    }
    let mut heap = BinaryHeap::from([Reverse((start, first))]);
    while let Some(Reverse((t, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &(y, ei) in g.neighbors(x) {
            if done[y] {
                continue;
            }
            let ty = next_traversal(t, g.edges()[ei].label, delta);
            if ty < arrival[y] {
                arrival[y] = ty;
                if track {
                    parent[y] = x;
                }
                heap.push(Reverse((ty, y)));
            }
        }
    }
    Search { arrival, parent }
}

/// Row `source` of the fastest-duration matrix; `None` if some vertex is
/// unreachable.
pub fn fastest_row(g: &PeriodicTemporalGraph, source: Vertex) -> Option<Vec<u64>> {
    let mut row = vec![u64::MAX; g.n()];
    row[source] = 0;
    for &(first, ei) in g.neighbors(source) {
        let start = g.edges()[ei].label;
        let s = earliest_arrival(g, source, first, start, false);
        for (v, &a) in s.arrival.iter().enumerate() {
            if v != source && a != u64::MAX {
                row[v] = row[v].min(a - start + 1);
            }
        }
    }
    row.iter().all(|&x| x != u64::MAX).then_some(row)
}

/// The matrix of fastest temporal path durations of `g`.
pub fn fastest_duration_matrix(g: &PeriodicTemporalGraph) -> Result<DurationMatrix> {
    let rows = (0..g.n()).map(|s| fastest_row(g, s).ok_or(Error::DisconnectedGraph)).collect::<Result<Vec<_>>>()?;
    DurationMatrix::from_rows(rows)
}

/// Whether `g` realizes `d` exactly. Stops at the first mismatching row.
pub fn certifies(g: &PeriodicTemporalGraph, d: &DurationMatrix) -> bool {
    g.n() == d.n() && (0..g.n()).all(|s| fastest_row(g, s).is_some_and(|row| row == d.row(s)))
}

/// One fastest temporal path from `u` to `v` (`u != v`).
pub fn fastest_temporal_path(g: &PeriodicTemporalGraph, u: Vertex, v: Vertex) -> Result<TemporalPathRecord> {
    if u >= g.n() || v >= g.n() || u == v {
        return Err(Error::NotAPath(format!("no temporal path query for ({u}, {v})")));
    }
    let mut best: Option<TemporalPathRecord> = None;
    for &(first, ei) in g.neighbors(u) {
        let start = g.edges()[ei].label;
        let s = earliest_arrival(g, u, first, start, true);
        if s.arrival[v] == u64::MAX {
            continue;
        }
        let duration = s.arrival[v] - start + 1;
        if best.as_ref().is_some_and(|b| b.duration <= duration) {
            continue;
        }
        let mut vertices = vec![v];
        let mut x = v;
        while x != u {
            x = s.parent[x];
            vertices.push(x);
        }
        vertices.reverse();
        best = Some(TemporalPathRecord { vertices, start_label: start, arrival: s.arrival[v], duration });
    }
    best.ok_or(Error::DisconnectedGraph)
}

/// Minimum over all simple `u`-`v` paths of `1 + sum of travel delays`.
pub fn naive_fastest_oracle(g: &PeriodicTemporalGraph, u: Vertex, v: Vertex) -> Result<u64> {
    naive_fastest_oracle_capped(g, u, v, DEFAULT_PATH_CAP)
}

pub fn naive_fastest_oracle_capped(g: &PeriodicTemporalGraph, u: Vertex, v: Vertex, cap: u64) -> Result<u64> {
    if u >= g.n() || v >= g.n() || u == v {
        return Err(Error::NotAPath(format!("oracle query ({u}, {v}) needs two distinct vertices")));
    }
    struct Dfs<'a> {
        g: &'a PeriodicTemporalGraph,
        target: Vertex,
        on_path: Vec<bool>,
        paths: u64,
        cap: u64,
        best: u64,
    }
    impl Dfs<'_> {
        // `label` is the label of the edge just used to reach `x`; `acc` the
        // delays summed so far.
        fn go(&mut self, x: Vertex, label: u64, acc: u64) -> Result<()> {
            if x == self.target {
                self.paths += 1;
                if self.paths > self.cap {
                    return Err(Error::InstanceTooLarge(format!("more than {} simple paths", self.cap)));
                }
                self.best = self.best.min(acc + 1);
                return Ok(());
            }
            for &(y, ei) in self.g.neighbors(x) {
                if self.on_path[y] {
                    continue;
                }
                let next = self.g.edges()[ei].label;
                self.on_path[y] = true;
                self.go(y, next, acc + delay_unchecked(label, next, self.g.delta()))?;
                self.on_path[y] = false;
            }
            Ok(())
        }
    }
    let mut dfs = Dfs { g, target: v, on_path: vec![false; g.n()], paths: 0, cap, best: u64::MAX };
    dfs.on_path[u] = true;
    for &(y, ei) in g.neighbors(u) {
        dfs.on_path[y] = true;
        dfs.go(y, g.edges()[ei].label, 0)?;
        dfs.on_path[y] = false;
    }
    if dfs.best == u64::MAX {
        return Err(Error::DisconnectedGraph);
    }
    Ok(dfs.best)
}

/// Full matrix from [`naive_fastest_oracle`].
pub fn naive_duration_matrix(g: &PeriodicTemporalGraph) -> Result<DurationMatrix> {
    let n = g.n();
    let mut d = DurationMatrix::filled(n, 0);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                d.set(u, v, naive_fastest_oracle(g, u, v)?);
            }
        }
    }
    Ok(d)
}
