use thiserror::Error;

use crate::algebra::S5Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong when building or combining values.
///
/// World, element and index payloads are 1-based, like the values they
/// describe.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a surjection needs a non-empty domain and codomain")]
    Empty,
    #[error("value {value} at position {position} lies outside 1..={bound}")]
    OutOfRange {
        position: usize,
        value: usize,
        bound: usize,
    },
    #[error("value {0} of the codomain is never hit")]
    NotSurjective(usize),
    #[error("not a bijection")]
    NotBijective,
    #[error("sort mismatch: expected {expected}, found {found}")]
    SortMismatch { expected: usize, found: usize },
    #[error("{what} {requested} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("block ids must be numbered 1.. by first occurrence")]
    NonCanonicalBlocks,
    #[error("cluster sizes must be positive")]
    EmptyCluster,
    #[error("class of world {0} is mapped onto a proper subset of a target class")]
    NotOnto(usize),
    #[error("class of world {0} is mapped into more than one target class")]
    NotIntoOneClass(usize),
    #[error("morphisms are not parallel")]
    NotParallel,
    #[error("morphisms do not share a source")]
    SourceMismatch,
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("table has {found} entries, expected {expected}")]
    BadTable { expected: usize, found: usize },
    #[error("box operator violates the S5 axioms")]
    NotS5(Box<S5Report>),
    #[error("recovered accessibility relation is not an equivalence")]
    NotEquivalence,
    #[error("map is not an S5-algebra homomorphism: fails to preserve {0}")]
    NotHom(&'static str),
    #[error("world {0} lies in no atom preimage")]
    NoAtomCover(usize),
    #[error("world {0} lies in two atom preimages")]
    AtomClash(usize),
    #[error("permutation degree {found} does not match action degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("generators do not define an action of the symmetric group")]
    InvalidAction,
    #[error("element {0} has a non-trivial stabilizer")]
    NotFaithful(usize),
    #[error("map is not equivariant at element {0}")]
    NotEquivariant(usize),
    #[error("conflicting values forced at level {level}, element {element}")]
    WitnessConflict { level: usize, element: usize },
    #[error("element {element} at level {level} is not covered by the lifting")]
    NotCovered { level: usize, element: usize },
    #[error("truncation levels differ: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("presheaf is not functorial: {0}")]
    NotFunctorial(String),
    #[error("structure is not a model of T2")]
    NotAModel,
    #[error("faithful part at level {level} has {size} elements, not a multiple of {order}")]
    NonIntegralOrbit {
        level: usize,
        size: usize,
        order: usize,
    },
    #[error("cluster of size {size} exceeds truncation level {level}")]
    ClusterExceedsTruncation { size: usize, level: usize },
    #[error("{0}")]
    Invalid(String),
}
