//! Entanglement of bipartite qutrit pure states: the base-3 entropy measure,
//! support-pattern census, stationary points of the measure, and SLOCC
//! equivalence by explicit local-operator witnesses.

pub mod error;
pub mod extremal;
pub mod ledger;
mod linalg;
pub mod measure;
pub mod patterns;
pub mod slocc;
pub mod state;

pub use error::{Error, Result};
