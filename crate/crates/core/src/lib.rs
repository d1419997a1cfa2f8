//! Exact workbench for the linear algebra behind linear data structures
//! and matrix rigidity over small prime fields.
//!
//! Everything here is certificate-producing and exhaustively verified: the
//! search oracles visit every candidate inside a declared budget, report
//! how many candidates they scanned, and pick deterministic
//! (lexicographically least) witnesses so results are identical across
//! runs and thread counts.

pub mod amplify;
pub mod budget;
pub mod codes;
pub mod dims;
pub mod ds;
pub mod error;
pub mod extract;
pub mod gfmat;
pub mod pipeline;
pub mod report;
pub mod rigidity;
pub(crate) mod stepper;

pub use budget::Budget;
pub use error::{Error, Result};
pub use gfmat::{FieldMatrix, Prime, SubspaceBasis};
