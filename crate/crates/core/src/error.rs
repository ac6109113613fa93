use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("extension degree {0} outside the supported range 1..=24")]
    DegreeOutOfRange(u32),
    #[error("modulus {modulus:#x} is not a degree-{n} polynomial with constant term 1")]
    BadModulus { n: u32, modulus: u32 },
    #[error("modulus {0:#x} is reducible over F_2")]
    ReducibleModulus(u32),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("derivative direction must be nonzero")]
    ZeroDirection,
    #[error("degree n={n} too large for {method} (limit {limit})")]
    DegreeTooLargeForMethod {
        n: u32,
        method: &'static str,
        limit: u32,
    },
    #[error("degree n={n} too large for {what} (limit {limit})")]
    DegreeTooLarge {
        n: u32,
        what: &'static str,
        limit: u32,
    },
    #[error("parameter constraint violated: {0}")]
    ParamConstraintViolated(String),
    #[error("no element of multiplicative order {0}")]
    NoElementOfRequiredOrder(u64),
    #[error("constructed function failed its build-time check: {0}")]
    BuildCheckFailed(String),
    #[error("malformed LUT file: {0}")]
    MalformedLutFile(String),
    #[error("modulus mismatch: expected {expected:#x}, found {found:#x}")]
    ModulusMismatch { expected: u32, found: u32 },
    #[error("point set is not a hyperplane: {0}")]
    NotAHyperplane(String),
    #[error("line {line:?} has inconsistent pair colors {colors:?}")]
    InconsistentColoring { line: [u32; 3], colors: [u32; 3] },
    #[error("line {0:?} received color 0")]
    ZeroColor([u32; 3]),
    #[error("color classes do not form a parallelism: {0}")]
    NotAParallelism(String),
    #[error("point {0:#x} is not in the distinguished hyperplane")]
    PointNotInHyperplane(u32),
    #[error("codeword is not in the linear Hamming code")]
    NotInHamming,
    #[error("no translate contains the codeword")]
    NoTranslateFound,
    #[error("codeword lies in {0} translates")]
    MultipleTranslatesFound(usize),
    #[error("need at least two words")]
    TooFewWords,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
