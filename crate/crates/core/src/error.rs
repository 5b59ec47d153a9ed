use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("invalid period: delta must be at least 1, got {0}")]
    InvalidDelta(u64),

    #[error("underlying graph is disconnected")]
    DisconnectedGraph,

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("not a path: {0}")]
    NotAPath(String),

    #[error("label {label} outside [1, {delta}]")]
    LabelOutOfRange { label: u64, delta: u64 },

    /// `position` is the index, within the path, of the internal vertex whose
    /// delay fell outside `[1, delta]`.
    #[error("travel delay {delay} at path position {position} outside [1, {delta}]")]
    DelayOutOfRange { position: usize, delay: i64, delta: u64 },

    #[error("conflicting travel delay at vertex {vertex} for ({from} -> {to}): {existing} vs {proposed}")]
    ConflictingDelay { vertex: usize, from: usize, to: usize, existing: u64, proposed: u64 },

    #[error("missing travel delay at vertex {vertex} for ({from} -> {to})")]
    MissingDelay { vertex: usize, from: usize, to: usize },

    #[error("conflicting label on edge {{{u}, {v}}}: {existing} vs {proposed}")]
    ConflictingLabel { u: usize, v: usize, existing: u64, proposed: u64 },

    #[error("underlying graph is not a tree: {0}")]
    NotATree(String),

    #[error("underlying graph is not a single cycle: {0}")]
    NotACycle(String),

    #[error("row {0} is not unimodal around its maximum")]
    NonMonotoneRow(usize),

    #[error("delta {0} is too small for the reduction (need delta >= 3)")]
    DeltaTooSmall(u64),

    #[error("malformed formula: {0}")]
    MalformedFormula(String),

    #[error("assignment leaves clause {0} with all literals equal")]
    NotSatisfying(usize),

    #[error("instance is not realizable: {0}")]
    NotRealizable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable identifier, used by the command-line tool.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedMatrix(_) => "malformed-matrix",
            Error::MalformedGraph(_) => "malformed-graph",
            Error::InvalidDelta(_) => "invalid-delta",
            Error::DisconnectedGraph => "disconnected-graph",
            Error::InstanceTooLarge(_) => "instance-too-large",
            Error::NotAPath(_) => "not-a-path",
            Error::LabelOutOfRange { .. } => "label-out-of-range",
            Error::DelayOutOfRange { .. } => "delay-out-of-range",
            Error::ConflictingDelay { .. } => "delay-conflict",
            Error::MissingDelay { .. } => "missing-delay",
            Error::ConflictingLabel { .. } => "label-conflict",
            Error::NotATree(_) => "not-a-tree",
            Error::NotACycle(_) => "not-a-cycle",
            Error::NonMonotoneRow(_) => "non-monotone-row",
            Error::DeltaTooSmall(_) => "delta-too-small",
            Error::MalformedFormula(_) => "malformed-formula",
            Error::NotSatisfying(_) => "not-satisfying",
            Error::NotRealizable(_) => "not-realizable",
            Error::Parse(_) => "parse-error",
            Error::Io(_) => "io-error",
        }
    }
}
