//! Exact-arithmetic calculus of decorated trees.
//!
//! A decorated tree has vertices and arrows (leaves carrying an integer `f`),
//! and every edge carries an integer decoration near each of its endpoints.
//! This crate validates such trees, computes their invariants (multiplicities,
//! determinants, `F`, genus and δ), implements the simplifications, splittings,
//! subtree extraction and reversal operations, and ships a randomized harness
//! that checks the identities relating them.
//!
//! All arithmetic is done with [`num_bigint::BigInt`].

pub mod error;
pub mod genus;
pub mod harness;
pub mod invariants;
pub mod rooted;
pub mod simplify;
pub mod split;
pub mod textio;
pub mod treecore;

pub use error::{Error, Result};
pub use invariants::{summary, ArrowSubset, Summary};
pub use rooted::{RootedTree, Strength};
pub use split::{SplitOutcome, TwoPrepartition};
pub use textio::{parse, serialize, Parsed};
pub use treecore::{DecoratedTree, Edge, NodeId, NodeKind, Path, TreeBuilder};

pub use num_bigint::BigInt;
