//! Error type shared by every module of the crate.

use std::fmt;

use crate::treecore::Violation;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building or transforming a decorated tree.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A node id that does not occur in the tree.
    #[error("unknown node `{0}`")]
    UnknownNode(String),

    /// Two nodes that are not joined by an edge.
    #[error("no edge between `{0}` and `{1}`")]
    UnknownEdge(String, String),

    /// The candidate structure violates one or more clauses of the definition.
    #[error("invalid decorated tree: {}", ViolationList(.0))]
    Invalid(Vec<Violation>),

    /// An operation was called on an input that does not meet its precondition.
    #[error("{op}: {reason}")]
    Precondition {
        /// Name of the operation.
        op: &'static str,
        /// Which part of the precondition failed.
        reason: String,
    },

    /// Contraction refused because the edge does not have determinant zero.
    #[error("cannot contract {edge}: determinant is {det}, not 0")]
    NonzeroDeterminant {
        /// The edge, rendered as `{a,b}`.
        edge: String,
        /// Its determinant.
        det: String,
    },

    /// Contraction refused because the determinant vanishes with the wrong sign pattern.
    #[error("cannot contract {edge}: determinant is 0 but (q1,q2) = (-Q2,-Q1)")]
    WrongOrientation {
        /// The edge, rendered as `{a,b}`.
        edge: String,
    },

    /// The designated vertex is not a pseudo-root.
    #[error("`{0}` is not a pseudo-root")]
    NotPseudoRoot(String),

    /// The designated vertex is a pseudo-root but not a root.
    #[error("`{0}` is a pseudo-root but not a root")]
    NotRoot(String),

    /// The designated node is not central.
    #[error("`{0}` is not a central element")]
    NotCentral(String),

    /// Malformed text input.
    #[error("line {line}: {msg}")]
    Parse {
        /// One-based line number.
        line: usize,
        /// Description of the problem.
        msg: String,
    },

    /// A value that the theory guarantees was not obtained. Indicates a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn pre(op: &'static str, reason: impl Into<String>) -> Error {
        Error::Precondition {
            op,
            reason: reason.into(),
        }
    }
}

struct ViolationList<'a>(&'a [Violation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
