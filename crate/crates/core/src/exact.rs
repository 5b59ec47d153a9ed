//! Complete search over labelings for small instances of any shape.
//!
//! Edges are labeled one at a time in `(min endpoint, max endpoint)` order.
//! Adding the same constant to every label changes no duration, so the first
//! edge is pinned to label 1 and only `delta^(m-1)` assignments remain. After
//! each assignment, every pooled lower-bound path constraint whose edges are
//! now all labeled is checked; a violation cuts the branch. A complete
//! assignment is accepted only if its full duration matrix equals the input.

use std::collections::VecDeque;

use serde::Serialize;

use crate::delay::{delay_unchecked, ConstraintKind, PathConstraint};
use crate::error::Result;
use crate::graph::{validate_matrix, DurationMatrix, PeriodicTemporalGraph, UnderlyingGraph, Vertex};
use crate::oracle::certifies;
use crate::realization::{bound_violation, check_delta, InfeasibleKind, Realization, Verdict};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Cap on shortest paths pooled per ordered vertex pair.
const MAX_PATHS_PER_PAIR: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Maximum node expansions; `None` means unlimited.
    pub budget: Option<u64>,
    pub pruning: bool,
    /// Also pool every simple path of up to four edges.
    pub rich_pool: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self { budget: Some(DEFAULT_BUDGET), pruning: true, rich_pool: false }
    }
}

impl ExactOptions {
    pub fn unlimited() -> Self {
        Self { budget: None, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SearchStats {
    /// Label assignments tried.
    pub expanded: u64,
    /// Assignments cut by a path constraint.
    pub pruned: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcome {
    pub result: Realization,
    pub stats: SearchStats,
}

impl ExactOutcome {
    /// `{"expanded": .., "pruned": .., "verdict": ..}`
    pub fn report_json(&self) -> String {
        #[derive(Serialize)]
        struct Report<'a> {
            expanded: u64,
            pruned: u64,
            verdict: &'a str,
        }
        serde_json::to_string(&Report {
            expanded: self.stats.expanded,
            pruned: self.stats.pruned,
            verdict: self.result.verdict().as_str(),
        })
        .expect("plain struct serializes")
    }
}

pub fn realize_exact(d: &DurationMatrix, delta: u64, budget: Option<u64>) -> Result<Realization> {
    Ok(realize_exact_with(d, delta, ExactOptions { budget, ..ExactOptions::default() })?.result)
}

pub fn realize_exact_with(d: &DurationMatrix, delta: u64, opts: ExactOptions) -> Result<ExactOutcome> {
    check_delta(delta)?;
    let g = validate_matrix(d)?;
    let stats = SearchStats::default();
    if let Some(why) = bound_violation(d, delta) {
        return Ok(ExactOutcome { result: Realization::Infeasible(why), stats });
    }
    let m = g.edges().len();
    if m == 0 {
        let empty = PeriodicTemporalGraph::new(g.n(), delta, [])?;
        return Ok(ExactOutcome { result: Realization::certified(empty, d), stats });
    }

    // constraints[k]: those whose last edge in assignment order is edge k
    let mut constraints: Vec<Vec<CompiledConstraint>> = vec![Vec::new(); m];
    if opts.pruning {
        for c in constraint_pool(d, &g, opts.rich_pool) {
            let compiled = CompiledConstraint::new(&c, &g);
            let last = *compiled.edges.iter().max().expect("pooled paths have edges");
            constraints[last].push(compiled);
        }
    }

    let mut search = Search {
        d,
        g: &g,
        delta,
        labels: vec![0; m],
        constraints,
        stats,
        budget: opts.budget,
        found: None,
        out_of_budget: false,
    };
    search.run(0);
    let Search { stats, found, out_of_budget, .. } = search;
    let result = match found {
        Some(w) => Realization::Realized(w),
        None if out_of_budget => {
            Realization::Unknown(format!("node budget of {} expansions exhausted", opts.budget.unwrap_or(u64::MAX)))
        }
        None => Realization::infeasible(
            InfeasibleKind::Exhausted,
            format!("all {delta}^{} canonical labelings rejected", m - 1),
        ),
    };
    Ok(ExactOutcome { result, stats })
}

/// Lower-bound constraints: every shortest underlying path between each
/// ordered non-adjacent pair, optionally all simple paths of up to four edges.
pub fn constraint_pool(d: &DurationMatrix, g: &UnderlyingGraph, rich: bool) -> Vec<PathConstraint> {
    let n = g.n();
    let mut pool = Vec::new();
    for u in 0..n {
        let dist = bfs_distances(g, u);
        for v in 0..n {
            if v == u || g.has_edge(u, v) {
                continue;
            }
            let mut paths = Vec::new();
            shortest_paths(g, &dist, u, v, &mut vec![v], &mut paths);
            if rich {
                let mut more = Vec::new();
                bounded_paths(g, u, v, 4, &mut vec![u], &mut more);
                for p in more {
                    if !paths.contains(&p) {
                        paths.push(p);
                    }
                }
            }
            pool.extend(paths.into_iter().map(|p| PathConstraint::lower_bound(p, d.get(u, v))));
        }
    }
    pool
}

fn bfs_distances(g: &UnderlyingGraph, s: Vertex) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    dist
}

// Walks backwards from `x` to `source` along BFS layers; `suffix` is reversed.
fn shortest_paths(
    g: &UnderlyingGraph,
    dist: &[usize],
    source: Vertex,
    x: Vertex,
    suffix: &mut Vec<Vertex>,
    out: &mut Vec<Vec<Vertex>>,
) {
    if out.len() >= MAX_PATHS_PER_PAIR {
        return;
    }
    if x == source {
        out.push(suffix.iter().rev().copied().collect());
        return;
    }
    for &y in g.neighbors(x) {
        if dist[y] != usize::MAX && dist[y] + 1 == dist[x] {
            suffix.push(y);
            shortest_paths(g, dist, source, y, suffix, out);
            suffix.pop();
        }
    }
}

fn bounded_paths(
    g: &UnderlyingGraph,
    x: Vertex,
    target: Vertex,
    left: usize,
    path: &mut Vec<Vertex>,
    out: &mut Vec<Vec<Vertex>>,
) {
    if x == target {
        out.push(path.clone());
        return;
    }
    if left == 0 {
        return;
    }
    for &y in g.neighbors(x) {
        if !path.contains(&y) {
            path.push(y);
            bounded_paths(g, y, target, left - 1, path, out);
            path.pop();
        }
    }
}

/// A path constraint in terms of edge indices, for checking partial labelings.
#[derive(Debug, Clone)]
struct CompiledConstraint {
    edges: Vec<usize>,
    required: u64,
    kind: ConstraintKind,
}

impl CompiledConstraint {
    fn new(c: &PathConstraint, g: &UnderlyingGraph) -> Self {
        let edges = c.path.windows(2).map(|w| g.edge_index(w[0], w[1]).expect("pooled path")).collect();
        Self { edges, required: c.required, kind: c.kind }
    }

    fn holds(&self, labels: &[u64], delta: u64) -> bool {
        let dur = 1 + self.edges.windows(2).map(|w| delay_unchecked(labels[w[0]], labels[w[1]], delta)).sum::<u64>();
        match self.kind {
            ConstraintKind::Equality => dur == self.required,
            ConstraintKind::LowerBound => dur >= self.required,
        }
    }
}

struct Search<'a> {
    d: &'a DurationMatrix,
    g: &'a UnderlyingGraph,
    delta: u64,
    labels: Vec<u64>,
    constraints: Vec<Vec<CompiledConstraint>>,
    stats: SearchStats,
    budget: Option<u64>,
    found: Option<PeriodicTemporalGraph>,
    out_of_budget: bool,
}

impl Search<'_> {
    /// Returns true when the search should stop.
    fn run(&mut self, k: usize) -> bool {
        if k == self.labels.len() {
            let g =
                PeriodicTemporalGraph::from_underlying(self.g, self.delta, &self.labels).expect("labels are in range");
            if certifies(&g, self.d) {
                self.found = Some(g);
                return true;
            }
            return false;
        }
        let choices = if k == 0 { 1 } else { self.delta };
        for label in 1..=choices {
            if self.budget.is_some_and(|b| self.stats.expanded >= b) {
                self.out_of_budget = true;
                return true;
            }
            self.stats.expanded += 1;
            self.labels[k] = label;
            if !self.constraints[k].iter().all(|c| c.holds(&self.labels, self.delta)) {
                self.stats.pruned += 1;
                continue;
            }
            if self.run(k + 1) {
                return true;
            }
        }
        self.labels[k] = 0;
        false
    }
}

/// Verdicts of a specialized realizer and of the exact search on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckReport {
    /// `None` when the instance is neither a tree nor a cycle.
    pub specialized: Option<Verdict>,
    pub exact: Verdict,
}

impl CrossCheckReport {
    /// `Some(agree)` when both sides reached a verdict; `None` if the exact
    /// search was inconclusive or there is no specialized realizer.
    pub fn agreement(&self) -> Option<bool> {
        match (self.specialized, self.exact) {
            (_, Verdict::Unknown) | (None, _) => None,
            (Some(s), e) => Some(s == e),
        }
    }
}

/// Runs the tree or cycle realizer, whichever applies, next to the exact search.
pub fn cross_check(d: &DurationMatrix, delta: u64, opts: ExactOptions) -> Result<CrossCheckReport> {
    let g = validate_matrix(d)?;
    let specialized = if g.is_tree() {
        Some(crate::tree::realize_tree(d, delta)?.verdict())
    } else if g.cycle_order().is_some() {
        Some(crate::cycle::realize_cycle(d, delta)?.verdict())
    } else {
        None
    };
    let exact = realize_exact_with(d, delta, opts)?.result.verdict();
    Ok(CrossCheckReport { specialized, exact })
}
