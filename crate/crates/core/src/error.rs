use thiserror::Error;

/// Errors raised by the library. Semantic errors name the violated invariant.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("incompatible base sets")]
    IncompatibleBase,
    #[error("iteration count must be positive")]
    ZeroIterations,
    #[error("index {index} out of range for a set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("empty basis")]
    EmptyBasis,
    #[error("Tukey translation defined for uniformities only")]
    NotSymmetric,
    #[error("invalid Tukey family: {0}")]
    InvalidTukeyFamily(String),
    #[error("block is not a member of the covering")]
    BlockNotInCovering,
    #[error("not a covering: {0}")]
    NotACovering(String),
    #[error("not a topology: {0}")]
    NotATopology(String),
    #[error("subset is not dense")]
    NotDense,
    #[error("subset is not open")]
    NotOpen,
    #[error("space too large to materialize ({size} points, limit {limit})")]
    TooLarge { size: usize, limit: usize },
    #[error("map is not total: {0}")]
    NotTotal(String),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("incompatible generators: {0}")]
    IncompatibleGenerators(String),
    #[error("member is not a union of blocks: {0}")]
    NotBlockUnion(String),
    #[error("not a T0 space")]
    NotT0,
    #[error("non-functorial restrictions: {0}")]
    NonFunctorial(String),
    #[error("not a G-covering: {0}")]
    NotGCovering(String),
    #[error("Z must contain inf or be nonempty")]
    EmptySingularSet,
    #[error("singular set must contain every pole: {0}")]
    MissingSingularity(String),
    #[error("zero operator or zero leading coefficient")]
    ZeroOperator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
