use thiserror::Error;

/// Errors raised by the library. Variant names are part of the CLI contract:
/// they are printed verbatim in error reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("substitution is not primitive: {0}")]
    NonPrimitiveSubstitution(String),
    #[error("shift of finite type is empty after pruning")]
    EmptySft,
    #[error("bad odometer ratios: {0}")]
    BadOdometerRatios(String),
    #[error("invalid space specification: {0}")]
    InvalidSpec(String),
    #[error("operation not supported for this space: {0}")]
    UnsupportedForSpace(String),
    #[error("cannot certify language completeness: {0}")]
    CertificationFailure(String),
    #[error("operands belong to different spaces")]
    SpaceMismatch,
    #[error("depth exceeded: {0}")]
    DepthExceeded(String),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("not a bijection: {0}")]
    NotABijection(String),
    #[error("invalid clopen set: {0}")]
    InvalidClopen(String),
    #[error("index is not an integer: {0}")]
    NonIntegerIndex(String),
    #[error("slice overlaps its image")]
    OverlappingSlice,
    #[error("partition refinement depth exceeded: {0}")]
    PartitionDepthExceeded(String),
    #[error("partition too coarse: {0}")]
    PartitionTooCoarse(String),
    #[error("invalid multisection: {0}")]
    InvalidMultisection(String),
    #[error("disjointness failure: {0}")]
    DisjointnessFailure(String),
    #[error("C is not a nonempty subset of U")]
    BadC,
    #[error("element budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("Bratteli trace failure: {0}")]
    TraceFailure(String),
    #[error("bad level subsequence: {0}")]
    BadSubsequence(String),
    #[error("path prefix is not composable: {0}")]
    IncomposablePrefix(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("not an antichain: {0}")]
    NotAntichain(String),
    #[error("basis is not maximal: {0}")]
    NotMaximal(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("tables are over different path languages")]
    LanguageMismatch,
    #[error("word has no prefix in the domain basis: {0}")]
    WordTooShort(String),
    #[error("range vertex mismatch: {0}")]
    RangeVertexMismatch(String),
    #[error("not a basis: {0}")]
    NotABasis(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
}

impl Error {
    /// Variant name, as printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonPrimitiveSubstitution(_) => "NonPrimitiveSubstitution",
            Error::EmptySft => "EmptySFT",
            Error::BadOdometerRatios(_) => "BadOdometerRatios",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::UnsupportedForSpace(_) => "UnsupportedForSpace",
            Error::CertificationFailure(_) => "CertificationFailure",
            Error::SpaceMismatch => "SpaceMismatch",
            Error::DepthExceeded(_) => "DepthExceeded",
            Error::NotAPartition(_) => "NotAPartition",
            Error::NotABijection(_) => "NotABijection",
            Error::InvalidClopen(_) => "InvalidClopen",
            Error::NonIntegerIndex(_) => "NonIntegerIndex",
            Error::OverlappingSlice => "OverlappingSlice",
            Error::PartitionDepthExceeded(_) => "PartitionDepthExceeded",
            Error::PartitionTooCoarse(_) => "PartitionTooCoarse",
            Error::InvalidMultisection(_) => "InvalidMultisection",
            Error::DisjointnessFailure(_) => "DisjointnessFailure",
            Error::BadC => "BadC",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::TraceFailure(_) => "TraceFailure",
            Error::BadSubsequence(_) => "BadSubsequence",
            Error::IncomposablePrefix(_) => "IncomposablePrefix",
            Error::InvalidDiagram(_) => "InvalidDiagram",
            Error::NotAntichain(_) => "NotAntichain",
            Error::NotMaximal(_) => "NotMaximal",
            Error::InvalidWord(_) => "InvalidWord",
            Error::LanguageMismatch => "LanguageMismatch",
            Error::WordTooShort(_) => "WordTooShort",
            Error::RangeVertexMismatch(_) => "RangeVertexMismatch",
            Error::NotABasis(_) => "NotABasis",
            Error::InvalidTable(_) => "InvalidTable",
        }
    }

    /// True for errors caused by a configured bound rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::DepthExceeded(_)
                | Error::BudgetExceeded(_)
                | Error::PartitionDepthExceeded(_)
                | Error::CertificationFailure(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
