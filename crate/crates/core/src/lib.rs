//! Steiner systems, partite constructions of Ramsey witnesses, and brute-force
//! arrow oracles.

pub mod classify;
pub mod copies;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod hales_jewett;
pub mod hypergraph;
pub mod negative;
pub mod oracle;
pub mod partite;
pub mod pictures;
pub mod pipelines;
pub mod prelim;
pub mod system;
pub mod witness;

pub use classify::{f_ramsey_status, ClassTag, Clause, RamseyStatus};
pub use copies::{are_isomorphic, enumerate_copies, CopyEmbedding, CopyKind, CopySearch};
pub use error::{Error, Result};
pub use hypergraph::{Edge, Hypergraph};
pub use system::{
    is_complete, is_homogeneous, is_induced, is_strongly_induced, validate_steiner,
    OrderedSteinerSystem, SteinerSystem,
};
