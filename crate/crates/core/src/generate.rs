//! Random instances for tests and experiments. All generators draw from a
//! caller-supplied RNG so runs are reproducible from a seed.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{DurationMatrix, PeriodicTemporalGraph, UnderlyingGraph, Vertex};
use crate::reduction::NaeFormula;

/// Uniformly shuffled vertex names, so structure does not follow index order.
fn relabeled<R: Rng + ?Sized>(rng: &mut R, n: usize, edges: Vec<(Vertex, Vertex)>) -> UnderlyingGraph {
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    UnderlyingGraph::new(n, edges.into_iter().map(|(a, b)| (perm[a], perm[b]))).expect("generated graph is simple")
}

/// A random tree: vertex `k` attaches to a uniform earlier vertex.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UnderlyingGraph {
    let edges = (1..n).map(|k| (rng.gen_range(0..k), k)).collect();
    relabeled(rng, n, edges)
}

/// A cycle on `n >= 3` vertices in random order.
pub fn random_cycle<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UnderlyingGraph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    let edges = (0..n).map(|k| (k, (k + 1) % n)).collect();
    relabeled(rng, n, edges)
}

/// A random tree plus each remaining pair independently with probability `p`.
pub fn random_connected<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> UnderlyingGraph {
    let tree = random_tree(rng, n);
    let mut edges = tree.edges().to_vec();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    UnderlyingGraph::new(n, edges).expect("generated graph is simple")
}

pub fn random_labeling<R: Rng + ?Sized>(rng: &mut R, g: &UnderlyingGraph, delta: u64) -> PeriodicTemporalGraph {
    let labels: Vec<u64> = (0..g.edges().len()).map(|_| rng.gen_range(1..=delta)).collect();
    PeriodicTemporalGraph::from_underlying(g, delta, &labels).expect("labels drawn in range")
}

/// Moves `count` random entries of value at least 2 up or down by one, never
/// below 2, so the underlying graph is unchanged.
pub fn perturb<R: Rng + ?Sized>(rng: &mut R, d: &DurationMatrix, count: usize) -> DurationMatrix {
    let n = d.n();
    let cells: Vec<(Vertex, Vertex)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| d.get(i, j) >= 2).collect();
    let mut out = d.clone();
    if cells.is_empty() {
        return out;
    }
    for _ in 0..count {
        let (i, j) = *cells.choose(rng).expect("nonempty");
        let x = out.get(i, j);
        let y = if x > 2 && rng.gen_bool(0.5) { x - 1 } else { x + 1 };
        out.set(i, j, y);
    }
    out
}

/// A matrix on `g` with every non-adjacent entry uniform in `[2, max]`.
pub fn random_matrix_on<R: Rng + ?Sized>(rng: &mut R, g: &UnderlyingGraph, max: u64) -> DurationMatrix {
    let n = g.n();
    let mut d = DurationMatrix::filled(n, 0);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                d.set(i, j, if g.has_edge(i, j) { 1 } else { rng.gen_range(2..=max.max(2)) });
            }
        }
    }
    d
}

/// Clauses on three distinct variables with random signs.
pub fn random_nae_formula<R: Rng + ?Sized>(rng: &mut R, num_vars: usize, num_clauses: usize) -> NaeFormula {
    let vars: Vec<i32> = (1..=num_vars as i32).collect();
    let clauses = (0..num_clauses)
        .map(|_| {
            let pick: Vec<i32> = vars.choose_multiple(rng, 3).copied().collect();
            [0, 1, 2].map(|k| if rng.gen_bool(0.5) { pick[k] } else { -pick[k] })
        })
        .collect();
    NaeFormula::new(num_vars, clauses).expect("generated clauses are well formed")
}
