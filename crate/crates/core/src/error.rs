use thiserror::Error;

use crate::decomposition::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex set is empty")]
    EmptySet,

    #[error("instance has {size} elements, exact solver cap is {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(#[from] Violation),

    #[error("malformed branch decomposition: {0}")]
    MalformedBranchDecomposition(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("part {part} has weak diameter {diameter}, need < {limit}")]
    DiameterExceeded { part: usize, diameter: String, limit: u32 },

    #[error("bipartite partition reached weak diameter {achieved}, budget is {budget}")]
    BudgetExceeded { achieved: u32, budget: u32 },

    #[error("no quasi-isometry constant q <= {0} works for this map")]
    NotWithin(u32),

    #[error("map is not total or targets a vertex outside the host: {0}")]
    InvalidMap(String),

    #[error("composition mismatch: first map targets {left}, second map starts at {right}")]
    CompositionMismatch { left: String, right: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("bound {name} violated: measured {measured} > bound {bound}")]
    BoundViolated { name: &'static str, measured: u64, bound: u64 },

    #[error("bag {bag}: {source}")]
    Bag {
        bag: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl Error {
    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage { stage, source: Box::new(self) }
    }

    pub(crate) fn in_bag(self, bag: usize) -> Self {
        Error::Bag { bag, source: Box::new(self) }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(stage))
    }
}
