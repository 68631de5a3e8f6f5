//! Computable dynamics of shift-like polynomial automorphisms of C^k and
//! skew products of Hénon maps: filtrations with constructive thresholds,
//! escape-time Green functions in log space, telescoping Böttcher
//! coordinates, and exact symbolic commutation certificates.

pub mod algebra;
pub mod boettcher;
pub mod error;
pub mod filtration;
pub mod green;
pub mod maps;
pub mod rigidity;
pub mod sample;
pub mod slice;

pub use error::{CoreError, Result};
