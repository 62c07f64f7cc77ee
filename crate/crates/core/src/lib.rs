//! Exact arithmetic for truncated Witt vectors over finite F_p-algebras,
//! decision procedures for Frobenius splitting and quasi-F-splitting,
//! Cartier-module tensor products, and height computations for elliptic
//! curves and their products.

pub mod algebra;
pub mod cartier;
pub mod error;
pub mod field;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod product;
pub mod qfsplit;
pub mod scan;
pub mod varieties;
pub mod witt;

pub use error::{Error, Result};
