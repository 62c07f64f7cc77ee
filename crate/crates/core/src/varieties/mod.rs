//! Elliptic curves, abelian products, Calabi–Yau hypersurfaces and the
//! classification table.

pub mod classification;
pub mod curve;
pub mod gf;
pub mod heights;

pub use classification::{classification_lookup, ClassificationRow, QfsStatus, Tristate};
pub use curve::{hasse_invariant, p_rank_elliptic, PRankRecord, PlaneCurve};
pub use gf::Gf;
pub use heights::{abelian_height, am_height_cy, product_height_report, AmHeight, ProductConsistency};
