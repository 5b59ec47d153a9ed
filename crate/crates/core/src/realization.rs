use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{duration_upper_bound, DurationMatrix, PeriodicTemporalGraph};
use crate::oracle::certifies;

/// Why an instance was declared infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfeasibleKind {
    /// Two extractions disagree on a travel delay, or a delay pair is not complementary.
    DelayConflict,
    /// A forced path implies a delay outside `[1, delta]`.
    DelayOutOfRange,
    /// Propagation reaches an edge along two routes with different labels.
    LabelConflict,
    /// The reconstructed labeling does not reproduce the matrix.
    CertifyMismatch,
    /// An entry exceeds the largest duration any simple path can have.
    DurationBound,
    /// A cycle row is not unimodal.
    NonMonotoneRow,
    /// Exhaustive search found no labeling.
    Exhausted,
}

impl InfeasibleKind {
    pub fn code(self) -> &'static str {
        match self {
            InfeasibleKind::DelayConflict => "delay-conflict",
            InfeasibleKind::DelayOutOfRange => "delay-out-of-range",
            InfeasibleKind::LabelConflict => "label-conflict",
            InfeasibleKind::CertifyMismatch => "certify-mismatch",
            InfeasibleKind::DurationBound => "duration-bound",
            InfeasibleKind::NonMonotoneRow => "non-monotone-row",
            InfeasibleKind::Exhausted => "search-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infeasibility {
    pub kind: InfeasibleKind,
    pub detail: String,
}

impl Infeasibility {
    pub fn new(kind: InfeasibleKind, detail: impl Into<String>) -> Self {
        Self { kind, detail: detail.into() }
    }

    /// Maps delay-algebra failures that certify infeasibility; anything else
    /// is passed back as a genuine error.
    pub(crate) fn from_delay_error(e: Error) -> std::result::Result<Self, Error> {
        let kind = match &e {
            Error::ConflictingDelay { .. } => InfeasibleKind::DelayConflict,
            Error::DelayOutOfRange { .. } => InfeasibleKind::DelayOutOfRange,
            Error::ConflictingLabel { .. } => InfeasibleKind::LabelConflict,
            Error::NonMonotoneRow(_) => InfeasibleKind::NonMonotoneRow,
            _ => return Err(e),
        };
        Ok(Self::new(kind, e.to_string()))
    }
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.code(), self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realization {
    /// A labeling whose duration matrix equals the input exactly.
    Realized(PeriodicTemporalGraph),
    Infeasible(Infeasibility),
    /// The search budget ran out before a verdict.
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Realized,
    Infeasible,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Realized => "realized",
            Verdict::Infeasible => "infeasible",
            Verdict::Unknown => "unknown",
        }
    }
}

impl Realization {
    pub fn verdict(&self) -> Verdict {
        match self {
            Realization::Realized(_) => Verdict::Realized,
            Realization::Infeasible(_) => Verdict::Infeasible,
            Realization::Unknown(_) => Verdict::Unknown,
        }
    }

    pub fn witness(&self) -> Option<&PeriodicTemporalGraph> {
        match self {
            Realization::Realized(g) => Some(g),
            _ => None,
        }
    }

    pub fn infeasible(kind: InfeasibleKind, detail: impl Into<String>) -> Self {
        Realization::Infeasible(Infeasibility::new(kind, detail))
    }

    /// Final gate for every realizer: only certified witnesses are returned.
    pub(crate) fn certified(g: PeriodicTemporalGraph, d: &DurationMatrix) -> Self {
        if certifies(&g, d) {
            Realization::Realized(g)
        } else {
            Realization::infeasible(
                InfeasibleKind::CertifyMismatch,
                "reconstructed labeling does not reproduce the matrix",
            )
        }
    }
}

pub(crate) fn check_delta(delta: u64) -> Result<()> {
    if delta == 0 {
        Err(Error::InvalidDelta(delta))
    } else {
        Ok(())
    }
}

/// First entry above the simple-path duration bound, if any.
pub(crate) fn bound_violation(d: &DurationMatrix, delta: u64) -> Option<Infeasibility> {
    let bound = duration_upper_bound(d.n(), delta);
    for i in 0..d.n() {
        for j in 0..d.n() {
            if d.get(i, j) > bound {
                return Some(Infeasibility::new(
                    InfeasibleKind::DurationBound,
                    format!("d[{i}][{j}] = {} exceeds {bound}", d.get(i, j)),
                ));
            }
        }
    }
    None
}
