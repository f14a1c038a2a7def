use thiserror::Error;

use crate::softset::SoftSet;

/// Which topology axiom a candidate open family breaks, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// The empty soft set is not open.
    MissingEmpty,
    /// The ambient space is not open.
    MissingSpace,
    /// A member is not a soft subset of the ambient space.
    NotInSpace(SoftSet),
    /// The union of two opens is not open.
    UnionNotOpen(SoftSet, SoftSet),
    /// The intersection of two opens is not open.
    IntersectionNotOpen(SoftSet, SoftSet),
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomViolation::MissingEmpty => write!(f, "axiom (i): the empty soft set is not open"),
            AxiomViolation::MissingSpace => write!(f, "axiom (ii): the ambient space is not open"),
            AxiomViolation::NotInSpace(a) => {
                write!(f, "member {a} is not a soft subset of the ambient space")
            }
            AxiomViolation::UnionNotOpen(a, b) => {
                write!(f, "axiom (iii): union of {a} and {b} is not open")
            }
            AxiomViolation::IntersectionNotOpen(a, b) => {
                write!(f, "axiom (iv): intersection of {a} and {b} is not open")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{kind} list must not be empty")]
    EmptyNames { kind: &'static str },
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("{what} exceeds the supported limit of {limit} (got {got})")]
    TooLarge { what: &'static str, limit: usize, got: usize },
    #[error("soft sets are defined over different universes or parameter sets")]
    ContextMismatch,
    #[error("not a soft subset of the ambient set (first offending parameter `{param}`)")]
    NotASubset { param: String },
    #[error("soft point {point} is not in the space")]
    PointOutsideSpace { point: String },
    #[error("invalid soft topology: {0}")]
    Axiom(AxiomViolation),
    #[error("the set is infinite")]
    InfiniteSet,
    #[error("a periodic pattern must be nonempty")]
    EmptyPattern,
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("residue {residue} is not below modulus {modulus}")]
    BadResidue { modulus: u64, residue: u64 },
    #[error("trivial ideal: the complement of the generator union is finite")]
    TrivialIdeal,
    #[error("set #{index} is not a member of the ideal")]
    NotInIdeal { index: usize },
    #[error("sets #{first} and #{second} are not disjoint")]
    NotDisjoint { first: usize, second: usize },
    #[error("length mismatch: {left} index sets but {right} points")]
    LengthMismatch { left: usize, right: usize },
    #[error("a subsequence needs an infinite index set")]
    FiniteIndexSet,
    #[error("the sequence already ideal-converges to {point}")]
    AlreadyConverges { point: String },
    #[error("sequences live in different ambient spaces")]
    AmbientMismatch,
    #[error("post-condition failed: {0}")]
    Postcondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
