use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Shapes of the operands do not fit together.
    Dimension(String),
    /// Target vector is not in the span of the basis.
    NotInSpan,
    /// Basis vectors are linearly dependent.
    RankDeficient,
    /// Argument outside the domain of the operation.
    Domain(String),
    /// A vertex violates the inequality system it was paired with.
    Consistency { row: usize, vertex: usize },
    InvalidVertexSet(String),
    /// Factorization fails `U >= 0`, `V >= 0` or `UV = S`.
    InvalidFactorization(crate::factorization::Violation),
    Precondition(String),
    /// Family of sets breaks a matroid axiom; witness sets are bitmasks.
    Axiom { axiom: u8, first: u32, second: u32 },
    /// An internal certificate that should hold by construction failed.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(msg) => write!(f, "dimension error: {msg}"),
            Error::NotInSpan => f.write_str("target is not in the span of the basis"),
            Error::RankDeficient => f.write_str("basis vectors are linearly dependent"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Consistency { row, vertex } => {
                write!(f, "vertex {vertex} violates inequality {row}")
            }
            Error::InvalidVertexSet(msg) => write!(f, "invalid vertex set: {msg}"),
            Error::InvalidFactorization(msg) => write!(f, "invalid factorization: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Axiom { axiom, first, second } => write!(
                f,
                "matroid axiom {} violated by sets {:#b} and {:#b}",
                if *axiom == 1 { "I" } else { "II" },
                first,
                second
            ),
            Error::Internal(msg) => write!(f, "internal invariant breach: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
