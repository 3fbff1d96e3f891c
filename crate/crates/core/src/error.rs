use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("duplicate reaction {reaction}")]
    DuplicateReaction { reaction: String },

    #[error("trivial reaction {reaction}: reactant and product complexes are equal")]
    TrivialReaction { reaction: String },

    #[error("a reaction network needs at least one reaction")]
    EmptyNetwork,

    #[error("reaction index {index} out of range for a network with {len} reactions")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("reaction index {0} selected more than once")]
    RepeatedIndex(usize),

    #[error("unknown species {0}")]
    UnknownSpecies(String),

    #[error("invalid species name {0:?}")]
    InvalidSpecies(String),

    #[error("blocks do not partition the reactions of the parent network")]
    NotAPartition,

    #[error("shift produces a negative coefficient for {species}")]
    NegativeCoefficient { species: String },

    #[error("split parts do not sum to the reaction vector of {reaction}")]
    VectorSumMismatch { reaction: String },

    #[error("networks share no species")]
    DisjointSpecies,

    #[error("networks share no reactions")]
    NoCommonReactions,

    #[error("mandatory reaction set is not concordant")]
    MandatoryDiscordant,

    #[error("concordance of the mandatory reaction set is undecided within the node budget")]
    MandatoryUndecided,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-positive {what}")]
    NonPositive { what: String },

    #[error("missing rate constant k{0}")]
    MissingRate(u32),

    #[error("unknown model {0:?} (expected schmitz, fal or maclean)")]
    UnknownModel(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
