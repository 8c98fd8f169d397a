use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point is not on the dendrite: {0}")]
    PointOffDendrite(String),
    #[error("invalid dendrite: {0}")]
    InvalidDendrite(String),
    #[error("arc enumeration breaks chaining at index {index}")]
    ChainingViolation { index: usize },
    #[error("empty point set")]
    EmptySet,
    #[error("empty subdendrite")]
    EmptySubdendrite,
    #[error("empty cover")]
    EmptyCover,
    #[error("identifying the points creates a cycle")]
    CycleCreated,
    #[error("homeomorphisms act on different dendrites")]
    DendriteMismatch,
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("unknown generator symbol {0:?}")]
    UnknownSymbol(String),
    #[error("word is not reduced: {0}")]
    NotReduced(String),
    #[error("no finite orbit found among the scanned branch points")]
    NoFiniteOrbitFound,
    #[error("scan budget exceeded after {scanned} branch points")]
    BudgetExceeded { scanned: usize },
    #[error("subtree has an empty frontier")]
    FrontierEmpty,
    #[error("measure is not a probability (total mass {0})")]
    NotProbability(String),
    #[error("point set is not a certified finite orbit")]
    NotCertifiedOrbit,
    #[error("test function and measure live on different dendrites")]
    DomainMismatch,
    #[error("no classification clause applies at resolution {eps}")]
    Inconclusive { eps: String },
    #[error("scheme index {n} is outside 0..={n_max}")]
    SchemeIndex { n: usize, n_max: usize },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
