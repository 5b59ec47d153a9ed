//! Polynomial-time realization when the underlying graph is a tree.
//!
//! Between any two vertices of a tree there is exactly one path, so every
//! prefix of it is fastest and the row differences along it are the travel
//! delays. Each source is processed farthest-first: take the unvisited vertex
//! with the largest row entry, read off the delays on the path to it, mark the
//! path visited, repeat. The delays of every vertex of degree at least two get
//! covered this way, after which one seed label fixes the whole labeling.

use crate::delay::{delays_from_prefix_fastest, propagate_labels, TravelDelayTable};
use crate::error::{Error, Result};
use crate::graph::{validate_matrix, DurationMatrix, PeriodicTemporalGraph, UnderlyingGraph, Vertex};
use crate::realization::{bound_violation, check_delta, Infeasibility, Realization};

pub fn realize_tree(d: &DurationMatrix, delta: u64) -> Result<Realization> {
    realize_tree_seeded(d, delta, 1)
}

/// Like [`realize_tree`] but pins the lexicographically smallest edge to `seed_label`.
pub fn realize_tree_seeded(d: &DurationMatrix, delta: u64, seed_label: u64) -> Result<Realization> {
    check_delta(delta)?;
    let g = validate_matrix(d)?;
    if !g.is_tree() {
        return Err(Error::NotATree(format!("{} vertices, {} edges", g.n(), g.edges().len())));
    }
    if let Some(why) = bound_violation(d, delta) {
        return Ok(Realization::Infeasible(why));
    }
    let Some(&seed) = g.edges().first() else {
        return Ok(Realization::certified(PeriodicTemporalGraph::new(g.n(), delta, [])?, d));
    };
    let table = match extract_tree_delays(d, delta, &g)? {
        Ok(t) => t,
        Err(why) => return Ok(Realization::Infeasible(why)),
    };
    match propagate_labels(&table, seed, seed_label, &g) {
        Ok(labeled) => Ok(Realization::certified(labeled, d)),
        Err(e) => Infeasibility::from_delay_error(e).map(Realization::Infeasible),
    }
}

/// Travel delays of every vertex of degree at least two, or the first
/// contradiction met while collecting them.
pub fn extract_tree_delays(
    d: &DurationMatrix,
    delta: u64,
    g: &UnderlyingGraph,
) -> Result<std::result::Result<TravelDelayTable, Infeasibility>> {
    let n = g.n();
    let mut table = TravelDelayTable::new(n, delta);
    for source in 0..n {
        let parent = g.bfs_parents(source);
        let row = d.row(source);
        let mut by_distance: Vec<Vertex> = (0..n).filter(|&v| v != source).collect();
        // farthest first; ties by index
        by_distance.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
        let mut visited = vec![false; n];
        visited[source] = true;
        for target in by_distance {
            if visited[target] {
                continue;
            }
            let path = tree_path(&parent, source, target);
            for &v in &path {
                visited[v] = true;
            }
            let durations: Vec<u64> = path[1..].iter().map(|&v| row[v]).collect();
            let delays = match delays_from_prefix_fastest(&durations, delta) {
                Ok(x) => x,
                Err(e) => return Infeasibility::from_delay_error(e).map(Err),
            };
            for (t, tau) in delays.into_iter().enumerate() {
                let k = t + 1;
                if let Err(e) = table.record(path[k], path[k - 1], path[k + 1], tau) {
                    return Infeasibility::from_delay_error(e).map(Err);
                }
            }
        }
    }
    Ok(Ok(table))
}

fn tree_path(parent: &[Vertex], source: Vertex, target: Vertex) -> Vec<Vertex> {
    let mut path = vec![target];
    let mut x = target;
    while x != source {
        x = parent[x];
        path.push(x);
    }
    path.reverse();
    path
}

/// All `delta` labelings realizing a tree instance, one per label of the
/// seed edge.
pub fn enumerate_tree_labelings(d: &DurationMatrix, delta: u64) -> Result<Vec<PeriodicTemporalGraph>> {
    let mut out = Vec::with_capacity(delta as usize);
    for seed in 1..=delta {
        match realize_tree_seeded(d, delta, seed)? {
            Realization::Realized(g) => {
                // a single vertex has only the empty labeling
                if g.edges().is_empty() {
                    return Ok(vec![g]);
                }
                out.push(g);
            }
            Realization::Infeasible(why) => return Err(Error::NotRealizable(why.to_string())),
            Realization::Unknown(why) => return Err(Error::NotRealizable(why)),
        }
    }
    Ok(out)
}
