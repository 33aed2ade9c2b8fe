use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} exceeds cap: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("generators have different degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("element {0} is not in the ambient group")]
    ElementNotInAmbient(String),
    #[error("member list is not closed under multiplication")]
    NotASubgroup,
    #[error("objects live in different ambient groups")]
    AmbientMismatch,
    #[error("homomorphism does not connect the two fusion-system bases")]
    BaseMismatch,
    #[error("Burnside elements belong to different bases")]
    BasisMismatch,
    #[error("modules are defined over different fields (p = {0} vs {1})")]
    FieldMismatch(u64, u64),
    #[error("modules are acted on by different generator lists")]
    ActionMismatch,
    #[error("Rep sets are over different source groups")]
    QMismatch,
    #[error("no basis class matches the given pair")]
    NotFound,
    #[error("built-in p-group catalog has no group of order {0}")]
    CatalogInsufficient(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid order bound {bound}: must be a power of {p}")]
    InvalidBound { bound: usize, p: u64 },
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("duplicate group name {0:?}")]
    DuplicateName(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("catalog parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
