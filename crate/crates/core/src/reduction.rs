//! Instances from not-all-equal 3-SAT.
//!
//! Each variable `x_i` becomes a triangle `x_i, x_i^T, x_i^F` whose two
//! literal vertices are joined to a super vertex `v` and to the literal
//! vertices of every other variable. Each clause becomes a vertex adjacent to
//! the literal vertices of its three literals. The duration matrix pins the
//! labels tightly enough that a realization exists exactly when the formula
//! has a not-all-equal satisfying assignment.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{DurationMatrix, PeriodicTemporalGraph, UnderlyingGraph, Vertex};
use crate::oracle::fastest_duration_matrix;

/// Largest variable count [`nae_brute_solve`] accepts.
pub const MAX_BRUTE_VARS: usize = 24;

/// A conjunction of not-all-equal clauses over variables `1..=num_vars`.
/// A literal `k > 0` is `x_k`, `-k` is its negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaeFormula {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl NaeFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        if num_vars < 3 {
            return Err(Error::MalformedFormula(format!("need at least 3 variables, got {num_vars}")));
        }
        for (j, c) in clauses.iter().enumerate() {
            for &lit in c {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::MalformedFormula(format!(
                        "clause {} has literal {lit} outside 1..={num_vars}",
                        j + 1
                    )));
                }
            }
            let [a, b, c3] = c.map(i32::unsigned_abs);
            if a == b || a == c3 || b == c3 {
                return Err(Error::MalformedFormula(format!("clause {} repeats a variable", j + 1)));
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// Index of the first clause whose literals all agree under `assignment`.
    pub fn first_violated(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|c| {
            let vals = c.map(|lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0));
            vals[0] == vals[1] && vals[1] == vals[2]
        })
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars && self.first_violated(assignment).is_none()
    }
}

/// Parses `p nae <vars> <clauses>` followed by one clause per line, each
/// three nonzero integers and a terminating `0`. Lines starting with `c` and
/// blank lines are ignored.
pub fn parse_nae_cnf(text: &str) -> Result<NaeFormula> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));
    let (hline, header) = lines.next().ok_or_else(|| Error::Parse("empty formula file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (num_vars, num_clauses) = match fields.as_slice() {
        ["p", "nae", v, c] => (parse_count(v, hline)?, parse_count(c, hline)?),
        _ => {
            return Err(Error::Parse(format!("line {hline}: expected header `p nae <vars> <clauses>`")));
        }
    };
    let mut clauses = Vec::with_capacity(num_clauses);
    for (ln, line) in lines {
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<i32>().map_err(|_| Error::Parse(format!("line {ln}: `{t}` is not an integer"))))
            .collect::<Result<Vec<i32>>>()?;
        match nums.as_slice() {
            [a, b, c, 0] if *a != 0 && *b != 0 && *c != 0 => clauses.push([*a, *b, *c]),
            _ => {
                return Err(Error::Parse(format!("line {ln}: expected three nonzero literals followed by 0")));
            }
        }
    }
    if clauses.len() != num_clauses {
        return Err(Error::Parse(format!("header declares {num_clauses} clauses but {} were given", clauses.len())));
    }
    NaeFormula::new(num_vars, clauses)
}

fn parse_count(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("line {line}: `{s}` is not a count")))
}

/// Vertex indices of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub num_vars: usize,
    pub num_clauses: usize,
}

impl Layout {
    pub fn of(phi: &NaeFormula) -> Self {
        Self { num_vars: phi.num_vars, num_clauses: phi.clauses.len() }
    }

    pub fn n(&self) -> usize {
        3 * self.num_vars + self.num_clauses + 1
    }

    /// `i` is 0-based.
    pub fn var(&self, i: usize) -> Vertex {
        3 * i
    }

    pub fn var_true(&self, i: usize) -> Vertex {
        3 * i + 1
    }

    pub fn var_false(&self, i: usize) -> Vertex {
        3 * i + 2
    }

    pub fn clause(&self, j: usize) -> Vertex {
        3 * self.num_vars + j
    }

    pub fn super_vertex(&self) -> Vertex {
        3 * self.num_vars + self.num_clauses
    }

    /// Literal vertex a clause attaches to: `x^T` for `x`, `x^F` for `!x`.
    pub fn literal(&self, lit: i32) -> Vertex {
        let i = lit.unsigned_abs() as usize - 1;
        if lit > 0 {
            self.var_true(i)
        } else {
            self.var_false(i)
        }
    }

    /// Names `x_1, x_1^T, x_1^F, ..., c_1, ..., v`, all 1-based.
    pub fn vertex_map(&self) -> BTreeMap<String, Vertex> {
        let mut map = BTreeMap::new();
        for i in 0..self.num_vars {
            map.insert(format!("x_{}", i + 1), self.var(i));
            map.insert(format!("x_{}^T", i + 1), self.var_true(i));
            map.insert(format!("x_{}^F", i + 1), self.var_false(i));
        }
        for j in 0..self.num_clauses {
            map.insert(format!("c_{}", j + 1), self.clause(j));
        }
        map.insert("v".into(), self.super_vertex());
        map
    }
}

/// The edges of the construction, each as `(u, v)` with `u < v`.
pub fn reduction_edges(phi: &NaeFormula) -> Vec<(Vertex, Vertex)> {
    let lay = Layout::of(phi);
    let sv = lay.super_vertex();
    let mut edges = Vec::new();
    for i in 0..phi.num_vars {
        let (x, t, f) = (lay.var(i), lay.var_true(i), lay.var_false(i));
        edges.extend([(x, t), (x, f), (t, f), (t, sv), (f, sv)]);
        for j in i + 1..phi.num_vars {
            let (tj, fj) = (lay.var_true(j), lay.var_false(j));
            edges.extend([(t, tj), (t, fj), (f, tj), (f, fj)]);
        }
    }
    for (j, c) in phi.clauses.iter().enumerate() {
        for &lit in c {
            edges.push((lay.literal(lit), lay.clause(j)));
        }
    }
    edges
}

pub fn reduction_graph(phi: &NaeFormula) -> UnderlyingGraph {
    UnderlyingGraph::new(Layout::of(phi).n(), reduction_edges(phi)).expect("construction edges are simple")
}

/// Builds the duration matrix and the name-to-index map.
///
/// The pairs `(x_j^T, x_i)` and `(x_j^F, x_i)` for `i != j` are not fixed by
/// the construction; they are set to `delta + 1`, the value every witness
/// labeling produces (see [`audit_unlisted_entries`]).
pub fn nae3sat_to_instance(phi: &NaeFormula, delta: u64) -> Result<(DurationMatrix, BTreeMap<String, Vertex>)> {
    if delta < 3 {
        return Err(Error::DeltaTooSmall(delta));
    }
    let lay = Layout::of(phi);
    let n = lay.n();
    let sv = lay.super_vertex();
    let mut d = DurationMatrix::filled(n, 0);
    let mut put = |a: Vertex, b: Vertex, x: u64| d.set(a, b, x);

    for (a, b) in reduction_edges(phi) {
        put(a, b, 1);
        put(b, a, 1);
    }
    for i in 0..phi.num_vars {
        put(lay.var(i), sv, 2);
        put(sv, lay.var(i), delta);
    }
    for (j, clause) in phi.clauses.iter().enumerate() {
        let c = lay.clause(j);
        put(c, sv, 2);
        put(sv, c, delta - 1);
        for i in 0..phi.num_vars {
            let x = lay.var(i);
            match clause.iter().find(|l| l.unsigned_abs() as usize == i + 1) {
                Some(&lit) => {
                    put(c, x, 2);
                    put(x, c, delta);
                    // the literal vertex not attached to c
                    let other = if lit > 0 { lay.var_false(i) } else { lay.var_true(i) };
                    put(c, other, 2);
                    put(other, c, delta);
                }
                None => {
                    put(x, c, 2 * delta);
                    put(c, x, delta + 2);
                    for y in [lay.var_true(i), lay.var_false(i)] {
                        put(c, y, 2);
                        put(y, c, delta);
                    }
                }
            }
        }
        for k in 0..phi.clauses.len() {
            if k != j {
                put(c, lay.clause(k), delta + 1);
            }
        }
    }
    for i in 0..phi.num_vars {
        for j in 0..phi.num_vars {
            if i == j {
                continue;
            }
            put(lay.var(i), lay.var(j), 2 * delta + 1);
            for y in [lay.var_true(j), lay.var_false(j)] {
                put(lay.var(i), y, delta + 1);
                put(y, lay.var(i), delta + 1);
            }
        }
    }
    Ok((d, lay.vertex_map()))
}

/// The labeling built from a satisfying assignment: clause edges get 1,
/// `x_i^F v` gets 3 when `x_i` is true, `x_i^T v` gets 3 when it is false,
/// everything else gets 2.
pub fn assignment_to_labeling(phi: &NaeFormula, assignment: &[bool], delta: u64) -> Result<PeriodicTemporalGraph> {
    if delta < 3 {
        return Err(Error::DeltaTooSmall(delta));
    }
    if assignment.len() != phi.num_vars {
        return Err(Error::MalformedFormula(format!(
            "assignment has {} values for {} variables",
            assignment.len(),
            phi.num_vars
        )));
    }
    if let Some(j) = phi.first_violated(assignment) {
        return Err(Error::NotSatisfying(j));
    }
    let lay = Layout::of(phi);
    let sv = lay.super_vertex();
    let labeled = reduction_edges(phi).into_iter().map(|(a, b)| {
        let label = if b >= lay.clause(0) && b < sv {
            1
        } else if b == sv {
            let i = a / 3;
            let waiting = if assignment[i] { lay.var_false(i) } else { lay.var_true(i) };
            if a == waiting {
                3
            } else {
                2
            }
        } else {
            2
        };
        (a, b, label)
    });
    PeriodicTemporalGraph::new(lay.n(), delta, labeled)
}

/// Lexicographically first satisfying assignment, `true` before `false`.
pub fn nae_brute_solve(phi: &NaeFormula) -> Result<Option<Vec<bool>>> {
    Ok(nae_all_solutions(phi)?.into_iter().next())
}

/// Every satisfying assignment in lexicographic order, `true` before `false`.
pub fn nae_all_solutions(phi: &NaeFormula) -> Result<Vec<Vec<bool>>> {
    let k = phi.num_vars;
    if k > MAX_BRUTE_VARS {
        return Err(Error::InstanceTooLarge(format!("{k} variables, at most {MAX_BRUTE_VARS} supported")));
    }
    let mut out = Vec::new();
    // bit (k-1-i) set means x_i is false, so counting up walks the order
    for mask in 0u32..(1u32 << k) {
        let a: Vec<bool> = (0..k).map(|i| mask >> (k - 1 - i) & 1 == 0).collect();
        if phi.is_satisfied_by(&a) {
            out.push(a);
        }
    }
    Ok(out)
}

/// A matrix entry on which a witness labeling disagrees with the instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditFinding {
    pub assignment: Vec<bool>,
    pub from: Vertex,
    pub to: Vertex,
    pub expected: u64,
    pub actual: u64,
}

/// Builds the witness for every satisfying assignment and compares its
/// duration matrix with the instance. An empty result means the entries left
/// open by the construction are consistent across all witnesses.
pub fn audit_unlisted_entries(phi: &NaeFormula, delta: u64) -> Result<Vec<AuditFinding>> {
    let (d, _) = nae3sat_to_instance(phi, delta)?;
    let mut findings = Vec::new();
    for a in nae_all_solutions(phi)? {
        let g = assignment_to_labeling(phi, &a, delta)?;
        let got = fastest_duration_matrix(&g)?;
        for (from, to, expected, actual) in d.mismatches(&got) {
            findings.push(AuditFinding { assignment: a.clone(), from, to, expected, actual });
        }
    }
    Ok(findings)
}
