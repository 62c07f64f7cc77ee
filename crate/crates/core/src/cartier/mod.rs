//! Cartier modules, the M[V] construction and the box product.

pub mod boxprod;
pub mod module;
pub mod pgroup;

pub use boxprod::{box_product, compare_box_with_witt, BoxComparison, BoxProduct};
pub use module::{mv_extend, witt_as_cartier, CartierCheck, CartierModule, MVExtension, WittCartier};
pub use pgroup::{GElem, PGroup};
