use num_rational::BigRational;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the algebra, action and growth routines.
///
/// The variants are grouped by [`ErrorKind`] so that front ends can map them
/// onto stable diagnostic codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field `{0}`")]
    InvalidField(String),
    #[error("invalid scalar `{text}`: {reason}")]
    InvalidScalar { text: String, reason: String },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("product leaves the window: degree {degree}, value {value}")]
    OutOfWindow { degree: u64, value: BigRational },
    #[error("letter {letter} (`{generator}`) maps `{basis}` out of the window")]
    ActionOutOfWindow {
        letter: usize,
        generator: String,
        basis: String,
    },
    #[error("window too small: need max degree >= {min_degree} and max value >= {min_value}")]
    WindowTooSmall {
        min_degree: u64,
        min_value: BigRational,
    },

    #[error("zero vector is not allowed here")]
    ZeroVector,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element has degree 0; a positive degree is required")]
    DegreeZero,
    #[error("not-independent: the supplied vectors are linearly dependent")]
    NotIndependent,
    #[error("not-primitive: vector {index} is not primitive")]
    NotPrimitive { index: usize },
    #[error("mixed-degree: vector {index} has degree {found}, expected {expected}")]
    MixedDegree {
        index: usize,
        expected: u32,
        found: u32,
    },
    #[error("value bound violated: |v_{index}| = {value} exceeds {bound}")]
    ValueBound {
        index: usize,
        value: Box<BigRational>,
        bound: Box<BigRational>,
    },
    #[error("insufficient vectors: blocks need k + 1 = {} vectors", .k + 1)]
    InsufficientVectors { k: usize },
    #[error("subset element {element} outside 1..={n}")]
    SubsetOutOfRange { element: usize, n: usize },
    #[error("subset contains {0} twice")]
    SubsetDuplicate(usize),
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
    #[error("orbit is independent up to the probe bound; no finite d available")]
    OrbitNotFinite,
    #[error("no healthy vector among the candidates up to bound {bound}")]
    NoHealthyWitness { bound: usize },
}

/// Coarse classification used for diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Window,
    Precondition,
}

impl ErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            ErrorKind::Input => "E001-input",
            ErrorKind::Window => "E002-window",
            ErrorKind::Precondition => "E003-precondition",
        }
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InvalidField(_) | InvalidScalar { .. } | DimensionMismatch { .. } | Schema(_)
            | UnknownBasis(_) | Parse { .. } | InvalidModel(_) => ErrorKind::Input,
            OutOfWindow { .. } | ActionOutOfWindow { .. } | WindowTooSmall { .. } => {
                ErrorKind::Window
            }
            _ => ErrorKind::Precondition,
        }
    }

    pub(crate) fn schema(msg: impl Into<String>) -> Self {
        Error::Schema(msg.into())
    }
}
