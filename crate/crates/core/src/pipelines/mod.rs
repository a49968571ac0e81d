//! End-to-end constructions: base hosts, clean partite witnesses, and ordered
//! Steiner hosts with the strong partition arrow.

pub mod base;
pub mod clean;
pub mod theorem;

pub use base::{base_ramsey_witness, BaseConfig, BaseStrategy};
pub use clean::{build_clean_witness, verify_intersection_property, CleanConfig, CleanProvider, CleanWitness};
pub use theorem::{build_theorem_witness, order_final, TheoremConfig, TheoremWitness};
