use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge set contains a directed cycle through player {0}")]
    CycleDetected(usize),
    #[error("player index {index} out of range for {n} players")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("operation requires a nonempty player set")]
    EmptySet,
    #[error("permutation is not a linear extension of the poset")]
    NotLinearExtension,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("number of linear extensions exceeds cap {cap}")]
    ExtensionCountExceedsCap { cap: usize },
    #[error("player {0} is not a maximal element of the whole poset")]
    NotGloballyMaximal(usize),
    #[error("refinement subset is empty")]
    EmptySubset,
    #[error("subset is not contained in layer {layer}")]
    SubsetNotInLayer { layer: usize },
    #[error("poset is not an ordered partition")]
    NotOrderedPartition,
    #[error("invalid ordered partition: {0}")]
    InvalidPartition(String),
    #[error("players must be distinct (got {0} twice)")]
    SamePlayer(usize),
    #[error("player {0} is not maximal in the given set")]
    NotMaximalInSet(usize),
    #[error("player set is not feasible (not downward closed)")]
    InfeasibleSet,
    #[error("players at positions {position} and {next} are comparable", next = position + 1)]
    ComparablePair { position: usize },
    #[error("initial permutation is not a linear extension")]
    InvalidInit,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
    #[error("no value stored for subset {0}")]
    MissingSubset(String),
    #[error("bad copy map: {0}")]
    BadCopyMap(String),
    #[error("utility process failure: {0}")]
    ProcessFailure(String),
    #[error("utility protocol violation: {0}")]
    ProtocolViolation(String),
    #[error("utility process did not answer within {0:?}")]
    Timeout(std::time::Duration),
    #[error("k = {k} exceeds the {rows} available training rows")]
    KTooLarge { k: usize, rows: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no samples supplied")]
    EmptySamples,
    #[error("grouping does not cover player {0}")]
    IncompleteGrouping(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures raised while talking to or looking up a utility.
    pub fn is_utility_failure(&self) -> bool {
        matches!(
            self,
            Error::MissingSubset(_)
                | Error::ProcessFailure(_)
                | Error::ProtocolViolation(_)
                | Error::Timeout(_)
        )
    }
}
