use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("an algebra needs at least one atom")]
    EmptyAlgebra,
    #[error("{n} atoms exceeds the configured cap of {cap} (set CONDAL_MAX_ATOMS to raise it)")]
    TooManyAtoms { n: usize, cap: usize },
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid label `{0}`: labels must be identifiers")]
    InvalidLabel(String),
    #[error("`{0}` is reserved for the constants T and F")]
    ReservedLabel(String),
    #[error("operands belong to different algebras")]
    MixedAlgebras,
    #[error("event mask {0:#b} has bits outside the algebra")]
    EventOutOfRange(u64),
    #[error("conditional with antecedent ⊥ is undefined")]
    BottomAntecedent,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("rank {rank} out of range (atom count {count})")]
    RankOutOfRange { rank: u64, count: u64 },
    #[error("level {level} out of range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("invalid prefix: {0}")]
    InvalidPrefix(String),
    #[error("{0}")]
    NotBelow(String),
    #[error("guard c∧d ≤ b not satisfied; use the semantic test")]
    GuardNotSatisfied,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("nested conditional at {pos}")]
    NestedConditional { pos: usize },
    #[error("unsatisfiable antecedent `{0}`")]
    UnsatisfiableAntecedent(String),
    #[error("bad rational `{0}`")]
    BadRational(String),
    #[error("decimal literal `{0}` rejected; write rationals as p/q")]
    DecimalLiteral(String),
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weight of `{0}` is not positive")]
    NonPositive(String),
    #[error("weight of `{0}` is negative")]
    NegativeWeight(String),
    #[error("weights sum to {0}, not 1")]
    NotNormalized(String),
    #[error("epsilon {0} outside the admissible range")]
    EpsilonOutOfRange(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("language mismatch: {0}")]
    LanguageMismatch(String),
    #[error("invalid document: {0}")]
    Document(String),
}

impl Error {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::TooManyAtoms { .. } | Error::CapExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
