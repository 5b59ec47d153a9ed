//! Realization when the underlying graph is a single cycle.
//!
//! Work happens in cycle positions `0..n`, position `k` adjacent to `k ± 1`
//! (mod `n`). `sigma[k]` is the travel delay at position `k` in the positive
//! direction (arriving from `k - 1`, leaving to `k + 1`); the negative
//! direction uses its complement.
//!
//! Seen from a source `i`, the vertices reached fastest along the positive side
//! form a contiguous arc starting at `i + 1`, the rest are reached along the
//! negative side, and durations strictly increase along both arcs. Each row is
//! therefore unimodal, and everything strictly inside either arc yields exact
//! delays by prefix differences.
//!
//! The one vertex the row cannot place is a strict maximum ("coincide" split):
//! it may be reached along either side. For such a row only the arcs up to its
//! two neighbors are used, and the row contributes a two-way choice: either
//! the positive delay before the peak or the negative delay after it closes
//! the gap exactly, and neither may undercut it. Choices are resolved by unit
//! propagation; whatever stays open is settled by a search over the remaining
//! delays, closed by the requirement that delays around the cycle sum to a
//! multiple of `delta`. A labeling is then propagated from `lambda(v0 v1) = 1`
//! and certified against the oracle.

use crate::delay::{complement_delay, propagate_labels, TravelDelayTable};
use crate::error::{Error, Result};
use crate::graph::{normalize_label, validate_matrix, DurationMatrix, PeriodicTemporalGraph, UnderlyingGraph, Vertex};
use crate::realization::{bound_violation, check_delta, Infeasibility, InfeasibleKind, Realization};

/// Where row `source` peaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowSplit {
    pub source: Vertex,
    /// Last vertex of the strictly increasing run along the positive side.
    pub max_plus: Vertex,
    /// Last vertex of the strictly increasing run along the negative side.
    pub max_minus: Vertex,
    /// Both runs end at the same strict maximum.
    pub coincide: bool,
}

/// Checks that `d` has the banded shape of a cycle `0 - 1 - ... - (n-1) - 0`
/// and returns `n`.
pub fn check_cycle_matrix_form(d: &DurationMatrix) -> Result<usize> {
    let n = d.n();
    if n < 3 {
        return Err(Error::MalformedMatrix(format!("a cycle needs at least 3 vertices, got {n}")));
    }
    for i in 0..n {
        for j in 0..n {
            let x = d.get(i, j);
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            let ok = if i == j {
                x == 0
            } else if adjacent {
                x == 1
            } else {
                x > 1
            };
            if !ok {
                let want = if i == j {
                    "0"
                } else if adjacent {
                    "1"
                } else {
                    "> 1"
                };
                return Err(Error::MalformedMatrix(format!("d[{i}][{j}] = {x}, expected {want}")));
            }
        }
    }
    Ok(n)
}

/// Locates the maximum of every row of a matrix in cycle form.
pub fn compute_row_splits(d: &DurationMatrix) -> Result<Vec<RowSplit>> {
    let n = check_cycle_matrix_form(d)?;
    (0..n).map(|i| row_split(d, n, i)).collect()
}

fn row_split(d: &DurationMatrix, n: usize, i: usize) -> Result<RowSplit> {
    let row = d.row(i);
    let mut a = (i + 1) % n;
    loop {
        let next = (a + 1) % n;
        if next == i || row[next] <= row[a] {
            break;
        }
        a = next;
    }
    let mut b = (i + n - 1) % n;
    loop {
        let next = (b + n - 1) % n;
        if next == i || row[next] <= row[b] {
            break;
        }
        b = next;
    }
    if a == b {
        Ok(RowSplit { source: i, max_plus: a, max_minus: b, coincide: true })
    } else if (a + 1) % n == b {
        Ok(RowSplit { source: i, max_plus: a, max_minus: b, coincide: false })
    } else {
        Err(Error::NonMonotoneRow(i))
    }
}

/// A coincide row: the peak is reached exactly through one of its neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeakChoice {
    pub source: usize,
    pub peak: usize,
    /// Needed positive delay at `peak - 1` to reach the peak positively.
    pub plus_need: u64,
    /// Needed negative delay at `peak + 1` to reach the peak negatively.
    pub minus_need: u64,
}

/// Delays fixed by the matrix in cycle positions, plus open peak choices.
#[derive(Debug, Clone)]
pub struct CycleDelays {
    pub delta: u64,
    /// Positive-direction delay per position, if determined.
    pub known: Vec<Option<u64>>,
    pub choices: Vec<PeakChoice>,
}

impl CycleDelays {
    pub fn unresolved(&self) -> Vec<usize> {
        (0..self.known.len()).filter(|&k| self.known[k].is_none()).collect()
    }
}

type Extracted = std::result::Result<CycleDelays, Infeasibility>;

/// Reads every delay the rows pin down. `d` must be in cycle form.
pub fn extract_cycle_delays(d: &DurationMatrix, delta: u64) -> Result<Extracted> {
    let splits = match compute_row_splits(d) {
        Ok(s) => s,
        Err(e @ Error::NonMonotoneRow(_)) => return Infeasibility::from_delay_error(e).map(Err),
        Err(e) => return Err(e),
    };
    let n = d.n();
    let mut table = TravelDelayTable::new(n, delta);
    let mut choices = Vec::new();
    let fwd = |k: usize, s: usize| (k + s) % n;
    let back = |k: usize, s: usize| (k + n - s % n) % n;

    for sp in &splits {
        let i = sp.source;
        let row = d.row(i);
        let (plus_end, minus_end) = if sp.coincide {
            let p = sp.max_plus;
            choices.push(PeakChoice {
                source: i,
                peak: p,
                plus_need: row[p] - row[back(p, 1)],
                minus_need: row[p] - row[fwd(p, 1)],
            });
            (back(p, 1), fwd(p, 1))
        } else {
            (sp.max_plus, sp.max_minus)
        };

        // positive arc i+1 .. plus_end; delay at k = row[k+1] - row[k]
        let mut k = fwd(i, 1);
        while k != plus_end {
            let tau = row[fwd(k, 1)] - row[k];
            if let Err(why) = record(&mut table, k, back(k, 1), fwd(k, 1), tau, delta) {
                return Ok(Err(why));
            }
            k = fwd(k, 1);
        }
        let mut k = back(i, 1);
        while k != minus_end {
            let tau = row[back(k, 1)] - row[k];
            if let Err(why) = record(&mut table, k, fwd(k, 1), back(k, 1), tau, delta) {
                return Ok(Err(why));
            }
            k = back(k, 1);
        }
    }

    let known = (0..n)
        .map(|k| {
            table
                .get(k, back(k, 1), fwd(k, 1))
                .or_else(|| table.get(k, fwd(k, 1), back(k, 1)).map(|t| complement_delay(t, delta)))
        })
        .collect();
    let mut delays = CycleDelays { delta, known, choices };
    Ok(match resolve_forced_choices(&mut delays) {
        Ok(()) => Ok(delays),
        Err(why) => Err(why),
    })
}

fn record(
    table: &mut TravelDelayTable,
    v: usize,
    a: usize,
    b: usize,
    tau: u64,
    delta: u64,
) -> std::result::Result<(), Infeasibility> {
    if tau == 0 || tau > delta {
        return Err(Infeasibility::new(
            InfeasibleKind::DelayOutOfRange,
            format!("delay {tau} at cycle position {v} outside [1, {delta}]"),
        ));
    }
    table.record(v, a, b, tau).map_err(|e| Infeasibility::new(InfeasibleKind::DelayConflict, e.to_string()))
}

/// Unit propagation over the peak choices.
fn resolve_forced_choices(cd: &mut CycleDelays) -> std::result::Result<(), Infeasibility> {
    let n = cd.known.len();
    let delta = cd.delta;
    let mut open: Vec<PeakChoice> = cd.choices.clone();
    loop {
        let mut changed = false;
        let mut still_open = Vec::new();
        for c in open {
            let (left, right) = ((c.peak + n - 1) % n, (c.peak + 1) % n);
            let l = cd.known[left];
            let r = cd.known[right].map(|s| complement_delay(s, delta));
            let conflict = || {
                Infeasibility::new(
                    InfeasibleKind::DelayConflict,
                    format!("row {} cannot reach its maximum at position {}", c.source, c.peak),
                )
            };
            if l.is_some_and(|x| x < c.plus_need) || r.is_some_and(|x| x < c.minus_need) {
                return Err(conflict());
            }
            if l == Some(c.plus_need) || r == Some(c.minus_need) {
                continue;
            }
            let left_possible = l.is_none() && c.plus_need <= delta;
            let right_possible = r.is_none() && c.minus_need <= delta;
            match (left_possible, right_possible) {
                (false, false) => return Err(conflict()),
                (true, false) => {
                    cd.known[left] = Some(c.plus_need);
                    changed = true;
                }
                (false, true) => {
                    cd.known[right] = Some(complement_delay(c.minus_need, delta));
                    changed = true;
                }
                (true, true) => still_open.push(c),
            }
        }
        open = still_open;
        if !changed {
            return Ok(());
        }
    }
}

fn choices_hold(sigma: &[u64], choices: &[PeakChoice], delta: u64) -> bool {
    let n = sigma.len();
    choices.iter().all(|c| {
        let l = sigma[(c.peak + n - 1) % n];
        let r = complement_delay(sigma[(c.peak + 1) % n], delta);
        l >= c.plus_need && r >= c.minus_need && (l == c.plus_need || r == c.minus_need)
    })
}

/// Duration matrix of a cycle in position order with positive delays `sigma`.
/// Independent of the general oracle: sums delays along the two arcs.
pub fn cycle_durations(sigma: &[u64], delta: u64) -> DurationMatrix {
    let n = sigma.len();
    let mut d = DurationMatrix::filled(n, u64::MAX);
    for i in 0..n {
        let mut acc = 1;
        for s in 1..n {
            let j = (i + s) % n;
            if s > 1 {
                acc += sigma[(j + n - 1) % n];
            }
            d.set(i, j, d.get(i, j).min(acc));
        }
        let mut acc = 1;
        for s in 1..n {
            let j = (i + n - s) % n;
            if s > 1 {
                acc += complement_delay(sigma[(j + 1) % n], delta);
            }
            d.set(i, j, d.get(i, j).min(acc));
        }
    }
    d
}

/// Fills the undetermined delays, trying values in ascending order per
/// position; the last open position is fixed by the closing condition.
fn complete_delays(cd: &CycleDelays, d: &DurationMatrix) -> Option<Vec<u64>> {
    let delta = cd.delta;
    let open = cd.unresolved();
    let mut sigma: Vec<u64> = cd.known.iter().map(|x| x.unwrap_or(0)).collect();
    let n = sigma.len();
    // unary bounds from the choices
    let mut min_plus = vec![1u64; n];
    let mut min_minus = vec![1u64; n];
    for c in &cd.choices {
        let (left, right) = ((c.peak + n - 1) % n, (c.peak + 1) % n);
        min_plus[left] = min_plus[left].max(c.plus_need);
        min_minus[right] = min_minus[right].max(c.minus_need);
    }
    let admissible = |k: usize, s: u64| s >= min_plus[k] && complement_delay(s, delta) >= min_minus[k];

    let accept = |sigma: &[u64]| {
        sigma.iter().sum::<u64>() % delta == 0
            && choices_hold(sigma, &cd.choices, delta)
            && cycle_durations(sigma, delta) == *d
    };

    if open.is_empty() {
        return accept(&sigma).then_some(sigma);
    }

    fn go(
        idx: usize,
        open: &[usize],
        sigma: &mut Vec<u64>,
        delta: u64,
        admissible: &dyn Fn(usize, u64) -> bool,
        accept: &dyn Fn(&[u64]) -> bool,
    ) -> bool {
        let k = open[idx];
        if idx + 1 == open.len() {
            let partial: u64 = sigma.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &s)| s).sum();
            let s = normalize_label(-(partial as i64), delta);
            if !admissible(k, s) {
                return false;
            }
            sigma[k] = s;
            return accept(sigma);
        }
        for s in 1..=delta {
            if !admissible(k, s) {
                continue;
            }
            sigma[k] = s;
            if go(idx + 1, open, sigma, delta, admissible, accept) {
                return true;
            }
        }
        sigma[k] = 0;
        false
    }

    go(0, &open, &mut sigma, delta, &admissible, &accept).then_some(sigma)
}

/// Decides a cycle instance. Vertices may appear in any order around the cycle.
pub fn realize_cycle(d: &DurationMatrix, delta: u64) -> Result<Realization> {
    check_delta(delta)?;
    let g = validate_matrix(d)?;
    let order =
        g.cycle_order().ok_or_else(|| Error::NotACycle(format!("{} vertices, {} edges", g.n(), g.edges().len())))?;
    if let Some(why) = bound_violation(d, delta) {
        return Ok(Realization::Infeasible(why));
    }
    let dp = d.permuted(&order);
    check_cycle_matrix_form(&dp)?;

    let cd = match extract_cycle_delays(&dp, delta)? {
        Ok(cd) => cd,
        Err(why) => return Ok(Realization::Infeasible(why)),
    };
    let fully_determined = cd.unresolved().is_empty();
    let sigma = match complete_delays(&cd, &dp) {
        Some(s) => s,
        None if fully_determined => {
            // report the closing edge specifically when that is what fails
            let sigma: Vec<u64> = cd.known.iter().map(|x| x.unwrap()).collect();
            if sigma.iter().sum::<u64>() % delta != 0 {
                return Ok(Realization::infeasible(
                    InfeasibleKind::LabelConflict,
                    "labels propagated around the cycle disagree on the closing edge",
                ));
            }
            return Ok(Realization::infeasible(
                InfeasibleKind::CertifyMismatch,
                "the determined delays do not reproduce the matrix",
            ));
        }
        None => {
            return Ok(Realization::infeasible(
                InfeasibleKind::Exhausted,
                "no completion of the undetermined delays reproduces the matrix",
            ))
        }
    };

    let n = order.len();
    let positions = UnderlyingGraph::new(n, (0..n).map(|k| (k, (k + 1) % n)))?;
    let mut table = TravelDelayTable::new(n, delta);
    for (k, &s) in sigma.iter().enumerate() {
        let (prev, next) = ((k + n - 1) % n, (k + 1) % n);
        table.record(k, prev, next, s)?;
        table.record(k, next, prev, complement_delay(s, delta))?;
    }
    let in_positions = match propagate_labels(&table, (0, 1), 1, &positions) {
        Ok(x) => x,
        Err(e) => return Infeasibility::from_delay_error(e).map(Realization::Infeasible),
    };
    let labeled = PeriodicTemporalGraph::new(
        n,
        delta,
        (0..n).map(|k| (order[k], order[(k + 1) % n], in_positions.label(k, (k + 1) % n).unwrap())),
    )?;
    Ok(Realization::certified(labeled, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::fastest_duration_matrix;
    use crate::realization::Verdict;

    fn m(rows: &[&[u64]]) -> DurationMatrix {
        DurationMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn c4_1231() -> PeriodicTemporalGraph {
        PeriodicTemporalGraph::new(4, 3, [(0, 1, 1), (1, 2, 2), (2, 3, 3), (0, 3, 1)]).unwrap()
    }

    #[test]
    fn form_examples() {
        assert_eq!(check_cycle_matrix_form(&m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])).unwrap(), 3);
        let chord = m(&[&[0, 1, 1, 1], &[1, 0, 1, 2], &[1, 1, 0, 1], &[1, 2, 1, 0]]);
        assert!(matches!(check_cycle_matrix_form(&chord), Err(Error::MalformedMatrix(_))));
        let d = fastest_duration_matrix(&c4_1231()).unwrap();
        assert_eq!(check_cycle_matrix_form(&d).unwrap(), 4);
        assert!(check_cycle_matrix_form(&m(&[&[0, 1], &[1, 0]])).is_err());
    }

    #[test]
    fn c4_splits() {
        let d = fastest_duration_matrix(&c4_1231()).unwrap();
        assert_eq!(d.row(0), &[0, 1, 2, 1]);
        let s = compute_row_splits(&d).unwrap();
        assert_eq!(s[0], RowSplit { source: 0, max_plus: 2, max_minus: 2, coincide: true });

        let g = PeriodicTemporalGraph::new(4, 3, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 2)]).unwrap();
        let d = fastest_duration_matrix(&g).unwrap();
        assert_eq!(d.row(0), &[0, 1, 3, 1]);
        let s = compute_row_splits(&d).unwrap();
        assert!(s[0].coincide && s[0].max_plus == 2);

        let flat = PeriodicTemporalGraph::new(4, 3, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)]).unwrap();
        let d = fastest_duration_matrix(&flat).unwrap();
        assert_eq!(d.row(0), &[0, 1, 4, 1]);
        assert!(compute_row_splits(&d).unwrap().iter().all(|s| s.coincide));
    }

    #[test]
    fn adjacent_maxima_and_non_monotone_rows() {
        let tri = m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        let s = compute_row_splits(&tri).unwrap();
        assert_eq!(s[0], RowSplit { source: 0, max_plus: 1, max_minus: 2, coincide: false });

        // C6 rows: a plateau spanning three vertices and a dip in the middle
        // other rows: hop distances, valid for delta = 1
        let base = |row0: [u64; 6]| {
            let mut d = DurationMatrix::filled(6, 0);
            for i in 0..6 {
                for j in 0..6 {
                    let k = (j + 6 - i) % 6;
                    d.set(i, j, k.min(6 - k) as u64);
                }
            }
            for (j, &x) in row0.iter().enumerate() {
                d.set(0, j, x);
            }
            d
        };
        let plateau = base([0, 1, 2, 2, 2, 1]);
        assert!(matches!(compute_row_splits(&plateau), Err(Error::NonMonotoneRow(0))));
        let dip = base([0, 1, 3, 2, 3, 1]);
        assert!(matches!(compute_row_splits(&dip), Err(Error::NonMonotoneRow(0))));
        let adjacent = base([0, 1, 2, 3, 3, 1]);
        let s = compute_row_splits(&adjacent).unwrap();
        assert_eq!(s[0], RowSplit { source: 0, max_plus: 3, max_minus: 4, coincide: false });
    }

    #[test]
    fn triangle_realized() {
        let r = realize_cycle(&m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]), 2).unwrap();
        assert_eq!(r.verdict(), Verdict::Realized);
    }

    #[test]
    fn c4_round_trip_and_canonical_seed() {
        let d = fastest_duration_matrix(&c4_1231()).unwrap();
        let r = realize_cycle(&d, 3).unwrap();
        let g = r.witness().expect("realized");
        assert_eq!(g.label(0, 1), Some(1));
        assert_eq!(fastest_duration_matrix(g).unwrap(), d);
    }

    #[test]
    fn c4_perturbed_is_infeasible() {
        let d = fastest_duration_matrix(&c4_1231()).unwrap();
        let mut bad = d.clone();
        // raising d[0][2] instead would still be realizable
        bad.set(1, 3, d.get(1, 3) + 1);
        assert_eq!(realize_cycle(&bad, 3).unwrap().verdict(), Verdict::Infeasible);
        let ug = c4_1231().underlying();
        let mut labels = [1u64; 4];
        for code in 0..81 {
            let mut c = code;
            for l in &mut labels {
                *l = c % 3 + 1;
                c /= 3;
            }
            let g = PeriodicTemporalGraph::from_underlying(&ug, 3, &labels).unwrap();
            assert_ne!(fastest_duration_matrix(&g).unwrap(), bad);
        }
    }

    #[test]
    fn cycle_in_arbitrary_vertex_order() {
        let g = PeriodicTemporalGraph::new(5, 4, [(0, 3, 2), (3, 1, 4), (1, 4, 1), (4, 2, 1), (2, 0, 3)]).unwrap();
        let d = fastest_duration_matrix(&g).unwrap();
        let r = realize_cycle(&d, 4).unwrap();
        assert_eq!(fastest_duration_matrix(r.witness().unwrap()).unwrap(), d);
    }

    #[test]
    fn cycle_durations_match_oracle() {
        let g = PeriodicTemporalGraph::new(6, 5, [(0, 1, 2), (1, 2, 5), (2, 3, 5), (3, 4, 1), (4, 5, 3), (0, 5, 4)])
            .unwrap();
        let labels: Vec<u64> = (0..6).map(|k| g.label(k, (k + 1) % 6).unwrap()).collect();
        let sigma: Vec<u64> =
            (0..6).map(|k| crate::delay::canonical_delay(labels[(k + 5) % 6], labels[k], 5).unwrap()).collect();
        assert_eq!(cycle_durations(&sigma, 5), fastest_duration_matrix(&g).unwrap());
    }

    #[test]
    fn non_cycle_rejected() {
        let path = m(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        assert!(matches!(realize_cycle(&path, 3), Err(Error::NotACycle(_))));
    }
}
