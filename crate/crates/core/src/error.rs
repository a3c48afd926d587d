use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {from} does not divide {to}")]
    NotADivisor { from: u32, to: u32 },
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("projective order exceeds cap {0}")]
    OrderExceedsCap(u32),
    #[error("fixed locus is not a finite set of points")]
    NonIsolatedFixedLocus,
    #[error("working field Q(zeta_{conductor}) lacks the needed root ({detail})")]
    ConductorTooSmall { conductor: u32, detail: String },

    #[error("matrix is not a weighted cyclic permutation")]
    NotWeightedCycle,
    #[error("product of cycle weights is not 1")]
    ProductNotOne,
    #[error("maps do not commute projectively")]
    NotCommuting,
    #[error("wrong projective order: expected {expected}, found {found}")]
    WrongOrder { expected: String, found: u32 },
    #[error("fixed point sets intersect")]
    FixedSetsNotDisjoint,
    #[error("permutation of fixed points is not a single cycle")]
    NotFullCycle,
    #[error("generated group is not a Klein four-group")]
    NotKlein,
    #[error("generators do not act faithfully")]
    NotFaithful,

    #[error("unit is not an automorphism of this curve")]
    InvalidUnit,
    #[error("points do not generate the full torsion subgroup")]
    NotGenerating,
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),

    #[error("generator outside the fixed-point group")]
    NotASubgroup,
    #[error("internal consistency check failed: {0}")]
    InvariantMismatch(String),
    #[error("invalid pair specification: {0}")]
    InvalidPair(String),

    #[error("fibre action order does not divide generator order")]
    ActionOrderMismatch,
    #[error("fibre actions are not a homomorphism of the gluing group")]
    InconsistentAction,
    #[error("generator is not torsion of the model level")]
    LevelIncompatible,
    #[error("factor classes lie over different base classes")]
    Incompatible,
    #[error("no transporting element in the gluing group")]
    NoTransport,

    #[error("parse error: {0}")]
    ParseError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
