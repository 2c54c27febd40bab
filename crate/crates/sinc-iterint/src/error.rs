use std::fmt;

use crate::iterated::Direction;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    Domain(String),
    /// The mesh plan violates a feasibility condition; each entry names one.
    MeshInfeasible(Vec<String>),
    /// An integrand or boundary factor produced a non-finite value at a node.
    NonFiniteEvaluation {
        what: &'static str,
        outer: Option<i64>,
        inner: Option<i64>,
    },
    /// A formula was invoked on a problem with the wrong monotonicity direction.
    DirectionMismatch { expected: Direction },
    /// The operation is not defined for this problem class.
    Unsupported(String),
    /// The product fast path was requested but the problem carries no
    /// product decomposition.
    MissingProduct,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::MeshInfeasible(reasons) => {
                write!(f, "mesh infeasible: {}", reasons.join("; "))
            }
            Error::NonFiniteEvaluation { what, outer, inner } => {
                write!(f, "non-finite {what} at node")?;
                if let Some(i) = outer {
                    write!(f, " i={i}")?;
                }
                if let Some(j) = inner {
                    write!(f, " j={j}")?;
                }
                Ok(())
            }
            Error::DirectionMismatch { expected } => {
                write!(
                    f,
                    "boundary direction mismatch: formula requires {expected:?}"
                )
            }
            Error::Unsupported(msg) => write!(f, "unsupported case: {msg}"),
            Error::MissingProduct => {
                write!(f, "problem has no product decomposition f(x,y) = X(x)Y(y)")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
