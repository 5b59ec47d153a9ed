//! Travel-delay arithmetic.
//!
//! A travel delay is the wait at an internal vertex between arriving over one
//! edge and leaving over the next. Labels strictly increase along a temporal
//! path, so two equal consecutive labels force a wait of a full period; delays
//! therefore live in `[1, delta]`, never 0.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{normalize_label, PeriodicTemporalGraph, UnderlyingGraph, Vertex};

/// Wait between traversing an edge labeled `l1` and then one labeled `l2`.
pub fn canonical_delay(l1: u64, l2: u64, delta: u64) -> Result<u64> {
    for l in [l1, l2] {
        if l == 0 || l > delta {
            return Err(Error::LabelOutOfRange { label: l, delta });
        }
    }
    Ok(delay_unchecked(l1, l2, delta))
}

#[inline]
pub(crate) fn delay_unchecked(l1: u64, l2: u64, delta: u64) -> u64 {
    (l2 + delta - l1 + delta - 1) % delta + 1
}

/// Delay in the opposite direction through the same vertex.
#[inline]
pub fn complement_delay(tau: u64, delta: u64) -> u64 {
    if tau >= delta {
        delta
    } else {
        delta - tau
    }
}

/// Duration of the temporal path whose underlying path is `path`: one plus
/// the travel delays at the internal vertices.
pub fn path_duration(path: &[Vertex], g: &PeriodicTemporalGraph) -> Result<u64> {
    let labels = path_labels(path, g)?;
    Ok(1 + labels.windows(2).map(|w| delay_unchecked(w[0], w[1], g.delta())).sum::<u64>())
}

fn path_labels(path: &[Vertex], g: &PeriodicTemporalGraph) -> Result<Vec<u64>> {
    if path.len() < 2 {
        return Err(Error::NotAPath(format!("{path:?} has no edge")));
    }
    let mut seen = vec![false; g.n()];
    for &v in path {
        if v >= g.n() {
            return Err(Error::NotAPath(format!("vertex {v} out of range")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::NotAPath(format!("vertex {v} repeats in {path:?}")));
        }
    }
    path.windows(2)
        .map(|w| g.label(w[0], w[1]).ok_or_else(|| Error::NotAPath(format!("{{{}, {}}} is not an edge", w[0], w[1]))))
        .collect()
}

/// Travel delays along a path all of whose prefixes are fastest.
///
/// `durations[t]` is the duration from the path's first vertex to its vertex
/// `t + 1`. The delay at internal vertex `t` (for `t` in `1..k-1`) is
/// `durations[t] - durations[t - 1]`.
pub fn delays_from_prefix_fastest(durations: &[u64], delta: u64) -> Result<Vec<u64>> {
    durations
        .windows(2)
        .enumerate()
        .map(|(t, w)| {
            let diff = w[1] as i64 - w[0] as i64;
            if diff < 1 || diff > delta as i64 {
                Err(Error::DelayOutOfRange { position: t + 1, delay: diff, delta })
            } else {
                Ok(diff as u64)
            }
        })
        .collect()
}

/// Sparse map `(v, a, b) -> delay` for neighbors `a`, `b` of `v`.
///
/// Insertions keep every stored pair `(v, a, b)`, `(v, b, a)` complementary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TravelDelayTable {
    n: usize,
    delta: u64,
    entries: BTreeMap<(Vertex, Vertex, Vertex), u64>,
}

impl TravelDelayTable {
    pub fn new(n: usize, delta: u64) -> Self {
        Self { n, delta, entries: BTreeMap::new() }
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, v: Vertex, a: Vertex, b: Vertex) -> Option<u64> {
        self.entries.get(&(v, a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((Vertex, Vertex, Vertex), u64)> + '_ {
        self.entries.iter().map(|(&k, &t)| (k, t))
    }

    /// Records `tau` for the wait at `v` when arriving from `a` and leaving to
    /// `b`. Fails if it contradicts an earlier entry or the complementary one.
    pub fn record(&mut self, v: Vertex, a: Vertex, b: Vertex, tau: u64) -> Result<()> {
        if tau == 0 || tau > self.delta {
            return Err(Error::DelayOutOfRange { position: v, delay: tau as i64, delta: self.delta });
        }
        if let Some(existing) = self.get(v, a, b) {
            if existing != tau {
                return Err(Error::ConflictingDelay { vertex: v, from: a, to: b, existing, proposed: tau });
            }
            return Ok(());
        }
        if let Some(back) = self.get(v, b, a) {
            let expected = complement_delay(back, self.delta);
            if expected != tau {
                return Err(Error::ConflictingDelay { vertex: v, from: a, to: b, existing: expected, proposed: tau });
            }
        }
        self.entries.insert((v, a, b), tau);
        Ok(())
    }

    /// Fills every missing reverse entry from its complement.
    pub fn complete_reverse(&mut self) {
        let missing: Vec<_> = self
            .entries
            .iter()
            .filter(|(&(v, a, b), _)| !self.entries.contains_key(&(v, b, a)))
            .map(|(&(v, a, b), &t)| ((v, b, a), complement_delay(t, self.delta)))
            .collect();
        self.entries.extend(missing);
    }

    /// Whether every ordered pair of distinct neighbors of every vertex has an entry.
    pub fn covers(&self, g: &UnderlyingGraph) -> bool {
        (0..g.n()).all(|v| {
            let nb = g.neighbors(v);
            nb.iter().all(|&a| nb.iter().all(|&b| a == b || self.get(v, a, b).is_some()))
        })
    }

    /// Delays read off a labeled graph, for every vertex and neighbor pair.
    pub fn from_labeling(g: &PeriodicTemporalGraph) -> Self {
        let mut t = Self::new(g.n(), g.delta());
        for v in 0..g.n() {
            for &(a, ea) in g.neighbors(v) {
                for &(b, eb) in g.neighbors(v) {
                    if a != b {
                        let tau = delay_unchecked(g.edges()[ea].label, g.edges()[eb].label, g.delta());
                        t.entries.insert((v, a, b), tau);
                    }
                }
            }
        }
        t
    }
}

impl fmt::Display for TravelDelayTable {
    /// One `v: (a,b)->tau` line per entry, sorted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(v, a, b), &t) in &self.entries {
            writeln!(f, "{v}: ({a},{b})->{t}")?;
        }
        Ok(())
    }
}

/// Labels every edge of `g` starting from `seed_edge := seed_label`, stepping
/// across shared vertices with `label(f) = label(e) + tau`.
///
/// Edges are processed first-in first-out, neighbors in ascending order, so the
/// result is reproducible. A delay that is absent only matters if it was the
/// sole route to some edge.
pub fn propagate_labels(
    table: &TravelDelayTable,
    seed_edge: (Vertex, Vertex),
    seed_label: u64,
    g: &UnderlyingGraph,
) -> Result<PeriodicTemporalGraph> {
    let delta = table.delta();
    if seed_label == 0 || seed_label > delta {
        return Err(Error::LabelOutOfRange { label: seed_label, delta });
    }
    let seed = g
        .edge_index(seed_edge.0, seed_edge.1)
        .ok_or_else(|| Error::MalformedGraph(format!("seed {seed_edge:?} is not an edge")))?;
    let edges = g.edges();
    let mut labels: Vec<Option<u64>> = vec![None; edges.len()];
    labels[seed] = Some(seed_label);
    let mut queue = VecDeque::from([seed]);
    let mut first_missing: BTreeMap<usize, (Vertex, Vertex, Vertex)> = BTreeMap::new();

    while let Some(ei) = queue.pop_front() {
        let (x, y) = edges[ei];
        let here = labels[ei].expect("queued edges are labeled");
        for (v, a) in [(x, y), (y, x)] {
            for &b in g.neighbors(v) {
                if b == a {
                    continue;
                }
                let fi = g.edge_index(v, b).expect("neighbor edge exists");
                let Some(tau) = table.get(v, a, b) else {
                    first_missing.entry(fi).or_insert((v, a, b));
                    continue;
                };
                let proposed = normalize_label((here + tau) as i64, delta);
                match labels[fi] {
                    None => {
                        labels[fi] = Some(proposed);
                        queue.push_back(fi);
                    }
                    Some(existing) if existing != proposed => {
                        let (u, w) = edges[fi];
                        return Err(Error::ConflictingLabel { u, v: w, existing, proposed });
                    }
                    Some(_) => {}
                }
            }
        }
    }

    if let Some(fi) = labels.iter().position(Option::is_none) {
        return Err(match first_missing.get(&fi) {
            Some(&(vertex, from, to)) => Error::MissingDelay { vertex, from, to },
            None => Error::DisconnectedGraph,
        });
    }
    PeriodicTemporalGraph::from_underlying(g, delta, &labels.into_iter().map(Option::unwrap).collect::<Vec<_>>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Equality,
    LowerBound,
}

/// A requirement on the duration of one underlying path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathConstraint {
    pub path: Vec<Vertex>,
    pub required: u64,
    pub kind: ConstraintKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintStatus {
    Satisfied,
    Violated(u64),
}

impl PathConstraint {
    pub fn equality(path: Vec<Vertex>, required: u64) -> Self {
        Self { path, required, kind: ConstraintKind::Equality }
    }

    pub fn lower_bound(path: Vec<Vertex>, required: u64) -> Self {
        Self { path, required, kind: ConstraintKind::LowerBound }
    }

    pub fn holds_for(&self, duration: u64) -> bool {
        match self.kind {
            ConstraintKind::Equality => duration == self.required,
            ConstraintKind::LowerBound => duration >= self.required,
        }
    }
}

pub fn check_constraint(c: &PathConstraint, g: &PeriodicTemporalGraph) -> Result<ConstraintStatus> {
    let d = path_duration(&c.path, g)?;
    Ok(if c.holds_for(d) { ConstraintStatus::Satisfied } else { ConstraintStatus::Violated(d) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(labels: &[u64], delta: u64) -> PeriodicTemporalGraph {
        PeriodicTemporalGraph::new(labels.len() + 1, delta, labels.iter().enumerate().map(|(i, &l)| (i, i + 1, l)))
            .unwrap()
    }

    /// Walks the path in absolute time: start at the first label, then take
    /// each next edge at its earliest strictly later occurrence.
    fn simulate(labels: &[u64], delta: u64) -> u64 {
        let start = labels[0];
        let mut t = start;
        for &l in &labels[1..] {
            t += 1;
            while t % delta != l % delta {
                t += 1;
            }
        }
        t - start + 1
    }

    #[test]
    fn canonical_delay_examples() {
        assert_eq!(canonical_delay(1, 2, 5).unwrap(), 1);
        assert_eq!(canonical_delay(4, 1, 5).unwrap(), 2);
        assert_eq!(canonical_delay(3, 3, 5).unwrap(), 5);
        assert_eq!(simulate(&[3, 3], 5), 6);
        assert!(matches!(canonical_delay(0, 2, 5), Err(Error::LabelOutOfRange { .. })));
        assert!(matches!(canonical_delay(1, 6, 5), Err(Error::LabelOutOfRange { .. })));
    }

    #[test]
    fn path_duration_examples() {
        assert_eq!(path_duration(&[0, 1], &path_graph(&[4], 5)).unwrap(), 1);
        let g = path_graph(&[1, 3, 2], 5);
        assert_eq!(path_duration(&[0, 1, 2, 3], &g).unwrap(), 7);
        assert_eq!(simulate(&[1, 3, 2], 5), 7);
        let g = path_graph(&[3, 3], 4);
        assert_eq!(path_duration(&[0, 1, 2], &g).unwrap(), 5);
        assert_eq!(simulate(&[3, 3], 4), 5);
    }

    #[test]
    fn path_duration_rejects_non_paths() {
        let g = path_graph(&[1, 2], 3);
        assert!(matches!(path_duration(&[0, 2], &g), Err(Error::NotAPath(_))));
        assert!(matches!(path_duration(&[0], &g), Err(Error::NotAPath(_))));
        assert!(matches!(path_duration(&[0, 1, 0], &g), Err(Error::NotAPath(_))));
    }

    #[test]
    fn prefix_fastest_examples() {
        assert_eq!(delays_from_prefix_fastest(&[1, 2, 3], 3).unwrap(), vec![1, 1]);
        assert_eq!(delays_from_prefix_fastest(&[1, 2, 5], 3).unwrap(), vec![1, 3]);
        match delays_from_prefix_fastest(&[1, 5, 6], 3) {
            Err(Error::DelayOutOfRange { position, delay, .. }) => {
                assert_eq!(position, 1);
                assert_eq!(delay, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(delays_from_prefix_fastest(&[1, 3, 3], 3).is_err());
    }

    #[test]
    fn propagate_examples() {
        let g = UnderlyingGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let mut t = TravelDelayTable::new(3, 4);
        t.record(1, 0, 2, 1).unwrap();
        assert_eq!(propagate_labels(&t, (0, 1), 1, &g).unwrap().labels(), vec![1, 2]);
        assert_eq!(propagate_labels(&t, (0, 1), 4, &g).unwrap().labels(), vec![4, 1]);
    }

    #[test]
    fn propagate_star() {
        let g = UnderlyingGraph::new(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        let mut t = TravelDelayTable::new(4, 3);
        t.record(1, 0, 2, 2).unwrap();
        t.record(1, 0, 3, 3).unwrap();
        let out = propagate_labels(&t, (0, 1), 1, &g).unwrap();
        assert_eq!(out.label(1, 2), Some(3));
        assert_eq!(out.label(1, 3), Some(1));
        let back = TravelDelayTable::from_labeling(&out);
        for ((v, a, b), tau) in t.iter() {
            assert_eq!(back.get(v, a, b), Some(tau));
        }
    }

    #[test]
    fn propagate_reports_missing_and_conflicts() {
        let g = UnderlyingGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let t = TravelDelayTable::new(3, 4);
        assert!(matches!(propagate_labels(&t, (0, 1), 1, &g), Err(Error::MissingDelay { vertex: 1, from: 0, to: 2 })));

        let tri = UnderlyingGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut t = TravelDelayTable::new(3, 4);
        t.record(1, 0, 2, 1).unwrap();
        t.record(0, 1, 2, 1).unwrap();
        t.record(2, 1, 0, 1).unwrap();
        assert!(matches!(propagate_labels(&t, (0, 1), 1, &tri), Err(Error::ConflictingLabel { .. })));
    }

    #[test]
    fn table_enforces_complementarity() {
        let mut t = TravelDelayTable::new(3, 3);
        t.record(1, 0, 2, 1).unwrap();
        assert!(matches!(t.record(1, 2, 0, 1), Err(Error::ConflictingDelay { .. })));
        t.record(1, 2, 0, 2).unwrap();
        assert!(matches!(t.record(1, 0, 2, 2), Err(Error::ConflictingDelay { .. })));

        let mut t = TravelDelayTable::new(3, 3);
        t.record(1, 0, 2, 3).unwrap();
        t.record(1, 2, 0, 3).unwrap();
        assert_eq!(t.to_string(), "1: (0,2)->3\n1: (2,0)->3\n");
    }

    #[test]
    fn complete_reverse_fills_complements() {
        let mut t = TravelDelayTable::new(3, 5);
        t.record(1, 0, 2, 2).unwrap();
        t.complete_reverse();
        assert_eq!(t.get(1, 2, 0), Some(3));
    }

    #[test]
    fn constraint_examples() {
        let g = path_graph(&[1, 2], 5);
        let eq = PathConstraint::equality(vec![0, 1, 2], 2);
        assert_eq!(check_constraint(&eq, &g).unwrap(), ConstraintStatus::Satisfied);
        let lb = PathConstraint::lower_bound(vec![0, 1, 2], 3);
        assert_eq!(check_constraint(&lb, &g).unwrap(), ConstraintStatus::Violated(2));
        let g = path_graph(&[3, 3], 4);
        let eq = PathConstraint::equality(vec![0, 1, 2], 5);
        assert_eq!(check_constraint(&eq, &g).unwrap(), ConstraintStatus::Satisfied);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn complementarity(delta in 1u64..=12, a in 0u64..12, b in 0u64..12) {
                let (l1, l2) = (a % delta + 1, b % delta + 1);
                let s = canonical_delay(l1, l2, delta).unwrap() + canonical_delay(l2, l1, delta).unwrap();
                prop_assert!(s == delta || s == 2 * delta);
                prop_assert_eq!(s == 2 * delta, l1 == l2);
                prop_assert_eq!(complement_delay(canonical_delay(l1, l2, delta).unwrap(), delta),
                                canonical_delay(l2, l1, delta).unwrap());
            }

            #[test]
            fn path_duration_matches_simulation(
                delta in 1u64..=6,
                raw in proptest::collection::vec(1u64..=6, 1..=8),
            ) {
                let labels: Vec<u64> = raw.iter().map(|l| (l - 1) % delta + 1).collect();
                let g = path_graph(&labels, delta);
                let path: Vec<usize> = (0..=labels.len()).collect();
                prop_assert_eq!(path_duration(&path, &g).unwrap(), simulate(&labels, delta));
            }
        }
    }
}
