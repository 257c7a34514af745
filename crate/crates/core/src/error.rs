use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("language level {q} outside supported range 1..={max}")]
    LevelOutOfRange { q: u32, max: u32 },

    #[error("level mismatch: expected L_{expected}, found L_{found}")]
    LevelMismatch { expected: u32, found: u32 },

    #[error("atom index {index} out of range 1..={count}")]
    AtomOutOfRange { index: usize, count: usize },

    #[error("not a permutation of 1..={size}: {detail}")]
    NotAPermutation { size: usize, detail: String },

    /// `offset` is the 1-based character position of the problem.
    #[error("syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("predicate P{index} does not exist in L_{q}")]
    PredicateOutOfRange { index: u32, q: u32 },

    #[error("constant a{constant} is not in the evaluation window")]
    ConstantNotCovered { constant: u32 },

    #[error("duplicate constant a{constant} in evaluation window")]
    DuplicateConstant { constant: u32 },

    #[error("invalid simplex point: {0}")]
    InvalidSimplexPoint(String),

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("point is not predicate-exchangeable: atoms {first} and {second} share {negations} negations but differ")]
    NotPredicateExchangeable { first: usize, second: usize, negations: u32 },

    #[error("invalid alternative notation: {0}")]
    InvalidAltNotation(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("cannot restrict from L_{from} down to L_{to}")]
    InvalidRestriction { from: u32, to: u32 },

    #[error("resource cap exceeded for {what}: {requested} > {limit}")]
    ResourceCap { what: String, requested: u128, limit: u128 },

    #[error("invalid bound: {0}")]
    InvalidBound(String),

    #[error("non-integral count: {0}")]
    NonIntegral(String),

    #[error("invalid upsilon matrix: {0}")]
    InvalidUpsilon(String),

    #[error("row index {index} out of range 1..={nu}")]
    RowOutOfRange { index: usize, nu: usize },

    #[error("invalid frequency vector: {0}")]
    InvalidFrequency(String),

    #[error("matrix is singular")]
    Singular,

    #[error("no regular monomial matrix found up to exponent {ceiling}")]
    RegularityCeiling { ceiling: u32 },

    #[error("decomposition verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid rational {text:?}: {message}")]
    InvalidRational { text: String, message: String },

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
}

impl Error {
    /// Stable snake-case name of the variant, used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::LevelOutOfRange { .. } => "level_out_of_range",
            Error::LevelMismatch { .. } => "level_mismatch",
            Error::AtomOutOfRange { .. } => "atom_out_of_range",
            Error::NotAPermutation { .. } => "not_a_permutation",
            Error::Parse { .. } => "parse",
            Error::PredicateOutOfRange { .. } => "predicate_out_of_range",
            Error::ConstantNotCovered { .. } => "constant_not_covered",
            Error::DuplicateConstant { .. } => "duplicate_constant",
            Error::InvalidSimplexPoint(_) => "invalid_simplex_point",
            Error::InvalidMixture(_) => "invalid_mixture",
            Error::NotPredicateExchangeable { .. } => "not_predicate_exchangeable",
            Error::InvalidAltNotation(_) => "invalid_alt_notation",
            Error::InvalidMeasure(_) => "invalid_measure",
            Error::InvalidRestriction { .. } => "invalid_restriction",
            Error::ResourceCap { .. } => "resource_cap",
            Error::InvalidBound(_) => "invalid_bound",
            Error::NonIntegral(_) => "non_integral",
            Error::InvalidUpsilon(_) => "invalid_upsilon",
            Error::RowOutOfRange { .. } => "row_out_of_range",
            Error::InvalidFrequency(_) => "invalid_frequency",
            Error::Singular => "singular",
            Error::RegularityCeiling { .. } => "regularity_ceiling",
            Error::VerificationFailed(_) => "verification_failed",
            Error::InvalidRational { .. } => "invalid_rational",
            Error::InvalidDescriptor(_) => "invalid_descriptor",
        }
    }
}
