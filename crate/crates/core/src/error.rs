use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameters out of range: r = {r}, t = {t} (need 2 <= t <= r)")]
    Range { r: usize, t: usize },

    #[error("edge {edge:?} is not a {r}-subset of the vertex set (vertex count {vertex_count})")]
    EdgeArity {
        edge: Vec<usize>,
        r: usize,
        vertex_count: usize,
    },

    #[error("edges {first:?} and {second:?} share {shared} vertices but t = {t}")]
    SteinerViolation {
        first: Vec<usize>,
        second: Vec<usize>,
        shared: usize,
        t: usize,
    },

    #[error("map is not injective: host vertex {vertex} is hit twice")]
    NonInjectiveMap { vertex: usize },

    #[error("map of length {len} does not fit a pattern of {expected} vertices into a host of {host} vertices")]
    MapShape {
        len: usize,
        expected: usize,
        host: usize,
    },

    #[error("pattern has (r, t) = {pattern:?} but host has {host:?}")]
    ParameterMismatch {
        pattern: (usize, usize),
        host: (usize, usize),
    },

    #[error("size limit exceeded: {what} needs {needed}, limit is {limit}")]
    SizeLimitExceeded {
        what: String,
        needed: usize,
        limit: usize,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("edge {edge:?} is not crossing")]
    NonCrossingEdge { edge: Vec<usize> },

    #[error("edge {edge:?} projects to {projection:?}, which is not an edge of the pattern")]
    ProjectionNotEdge {
        edge: Vec<usize>,
        projection: Vec<usize>,
    },

    #[error("copy {copy:?} is not crossing")]
    CopyNotCrossing { copy: Vec<usize> },

    #[error("copy {copy:?} is not isomorphic to the pattern via the projection")]
    CopyNotIsomorphic { copy: Vec<usize> },

    #[error("copy {copy:?} is not strongly induced")]
    CopyNotStrong { copy: Vec<usize> },

    #[error("letter {letter} is not in an alphabet of size {size}")]
    LetterNotInAlphabet { letter: usize, size: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("witness does not fit the target: {0}")]
    WitnessShapeMismatch(String),

    #[error("witness provider failed: {0}")]
    ProviderFailure(String),

    #[error("partition arrow refuted ({context}); counterexample coloring {coloring:?}")]
    ArrowRefuted {
        context: String,
        coloring: Vec<usize>,
    },

    #[error("Hales-Jewett number HJ({q}, {c}) undecided within the search bound")]
    HjUndecided { q: usize, c: usize },

    #[error("strategy infeasible: {0}")]
    StrategyInfeasible(String),

    #[error("search infeasible: {0}")]
    SearchInfeasible(String),

    #[error("pattern is complete, no uncovered t-set exists")]
    PatternComplete,

    #[error("pattern is homogeneous")]
    PatternHomogeneous,

    #[error("t = r: an uncovered t-set cannot be extended in two ways")]
    NoTwoExtensions,

    #[error("picture invalid: {0}")]
    InvalidPicture(String),

    #[error("construction invariant violated: {0}")]
    ConstructionBug(String),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn size(what: impl Into<String>, needed: usize, limit: usize) -> Self {
        Error::SizeLimitExceeded {
            what: what.into(),
            needed,
            limit,
        }
    }

    /// True for errors that signal "too big to do at desk scale" rather than bad input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::SizeLimitExceeded { .. }
                | Error::HjUndecided { .. }
                | Error::StrategyInfeasible(_)
                | Error::SearchInfeasible(_)
                | Error::ProviderFailure(_)
        )
    }
}
