use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed multiplication table: {0}")]
    MalformedTable(String),

    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),

    #[error("element set {0:?} is not a subgroup")]
    NotSubgroup(Vec<usize>),

    #[error("subgroup {0:?} is not normal")]
    NotNormal(Vec<usize>),

    #[error("target list is not closed under the action: element {element} sends item {item} outside the list")]
    ActionNotClosed { element: usize, item: usize },

    #[error("homomorphism law fails for the pair ({0}, {1})")]
    HomomorphismLaw(usize, usize),

    #[error("invalid permutation for group element {0}")]
    InvalidPermutation(usize),

    #[error("group element {element} does not preserve the order relation {lower} < {upper}")]
    NotOrderPreserving { element: usize, lower: usize, upper: usize },

    #[error("invalid segment bounds: {0}")]
    InvalidSegment(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("group element {element} does not map simplex {simplex:?} to a simplex")]
    NotSimplicial { element: usize, simplex: Vec<usize> },

    #[error("action is not free: element {element} stabilizes simplex {simplex:?}")]
    NotFree { element: usize, simplex: Vec<usize> },

    #[error("invalid chain complex: {0}")]
    InvalidChainComplex(String),

    #[error("vector is not a cycle")]
    NotACycle,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("module action does not preserve the relation lattice for element {0}")]
    LatticeNotPreserved(usize),

    #[error("group {0} is not cyclic")]
    NotCyclic(String),

    #[error("asphericity not certified: {0}")]
    NotAspherical(String),

    #[error("scale exceeded: {what} needs {requested}, limit is {limit}")]
    ScaleExceeded { what: String, requested: usize, limit: usize },

    #[error("insufficient spectral sequence page: {0}")]
    InsufficientPage(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_scale_exceeded(&self) -> bool {
        matches!(self, Error::ScaleExceeded { .. })
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

/// Resource guards shared by the expensive computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest chain-group rank a bar resolution may produce.
    pub max_rank: usize,
    /// Largest number of top-dimensional simplices a product may contain.
    pub max_simplices: usize,
    /// Largest number of cohomology classes enumerated explicitly.
    pub max_classes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rank: 200_000,
            max_simplices: 200_000,
            max_classes: 100_000,
        }
    }
}

impl Limits {
    /// Same limits with every rank guard replaced by `rank`.
    pub fn with_max_rank(rank: usize) -> Self {
        Limits {
            max_rank: rank,
            max_simplices: rank,
            ..Limits::default()
        }
    }

    pub(crate) fn check(&self, what: &str, requested: usize, limit: usize) -> Result<()> {
        if requested > limit {
            Err(Error::ScaleExceeded {
                what: what.to_string(),
                requested,
                limit,
            })
        } else {
            Ok(())
        }
    }
}
