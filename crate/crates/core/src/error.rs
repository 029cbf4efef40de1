use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("set {set:?} is listed more than once")]
    DuplicateSet { set: Vec<u32> },
    #[error("element {element} is outside the ground set 1..={ground}")]
    ElementOutOfRange { element: u64, ground: u32 },
    #[error("set {set:?} has cardinality {len}, exceeding max cardinality {max_card}")]
    CardinalityExceeded {
        set: Vec<u32>,
        len: usize,
        max_card: u32,
    },
    #[error("member index {index} out of range for a family of {len} sets")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operation requires a nonempty family")]
    EmptyFamily,
    #[error("coreless sunflower is not maximal: member {witness} is disjoint from its union")]
    NotMaximal { witness: usize },
    #[error("members {0} and {1} are not disjoint")]
    NotDisjoint(usize, usize),
    #[error("search budget exceeded after {examined} candidates")]
    BudgetExceeded { examined: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("C({n}, {k}) candidate subfamilies exceed the brute-force cap of {cap}")]
    CombinatorialBlowup { n: usize, k: usize, cap: u64 },
    #[error("cannot draw {requested} distinct sets: only {available} exist")]
    Unsatisfiable { requested: u64, available: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
