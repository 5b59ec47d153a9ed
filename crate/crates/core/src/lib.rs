//! Realization of duration matrices as periodic temporal graphs.
//!
//! A periodic temporal graph is a static graph whose every edge carries one
//! label in `[1, delta]` and can be crossed at that label plus any multiple of
//! `delta`, always at strictly increasing times. Given an `n x n` matrix of
//! required fastest-path durations, this crate decides whether such a labeling
//! exists and, when it does, returns one that has been checked against an
//! independent oracle.
//!
//! * [`tree`] and [`cycle`] solve their graph classes in polynomial time.
//! * [`exact`] is a complete search for arbitrary small graphs.
//! * [`reduction`] builds instances from not-all-equal 3-SAT formulas.

pub mod cycle;
pub mod delay;
pub mod error;
pub mod exact;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod realization;
pub mod reduction;
pub mod tree;

mod method;

pub use error::{Error, Result};
pub use graph::{validate_matrix, DurationMatrix, LabeledEdge, PeriodicTemporalGraph, UnderlyingGraph, Vertex};
pub use method::{realize, Method};
pub use oracle::{certifies, fastest_duration_matrix, naive_fastest_oracle};
pub use realization::{Infeasibility, InfeasibleKind, Realization, Verdict};
