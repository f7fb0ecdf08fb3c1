use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("{family} requires {admissible} (got rank {rank})")]
    InadmissibleRank {
        family: char,
        rank: usize,
        admissible: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("lattice vectors live on different sides (character vs cocharacter)")]
    SideMismatch,

    #[error("simple root index {index} out of range for derived rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("Weyl set index {tuple:?} is not admissible: {reason}")]
    InadmissibleIndex { tuple: Vec<usize>, reason: String },

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid coefficient group: {0}")]
    InvalidCoefficients(String),

    #[error("unsupported column ({sheaf}, p = {p})")]
    UnsupportedColumn { sheaf: String, p: i32 },

    #[error("invalid torus data: {0}")]
    InvalidTorusData(String),

    #[error("integer overflow while converting {0}")]
    Overflow(&'static str),

    #[error("malformed zmatrix input at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid field model: {0}")]
    InvalidFieldModel(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
