//! Classification of the 3-torsion Galois group and computation of local
//! root numbers for elliptic curves over dyadic local fields (residue
//! characteristic 2), in both mixed and equal characteristic.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! curve (Weierstrass invariants, 3-torsion quartic)
//!   → classifier (decision tree over certified field membership tests)
//!   → rootnum (twist bookkeeping + epsilon factors, GL₂(F₃) case)
//! ```
//!
//! with `local_field` supplying bounded-precision exact arithmetic in towers
//! over the 2-adics or over F_{2^f}((t)), `finite_field` the residue-level
//! arithmetic and Gauss sums, and `gl2f3` a brute-force atlas of GL₂(F₃)
//! subgroups used to cross-check every classification.
//!
//! All membership answers carry certificates; precision failures are typed
//! errors, never silent guesses.

pub mod cyclotomic;
pub mod error;
pub mod finite_field;

pub use error::{Error, Result};

pub mod local_field;
pub mod curve;
pub mod gl2f3;
pub mod classifier;
pub mod rootnum;
pub mod corpus;
pub mod verify;
pub mod smallfield;
