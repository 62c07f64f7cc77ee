//! p-typical truncated Witt vectors.

pub mod cache;
pub mod identities;
pub mod polys;
pub mod ring;
pub mod sequences;
pub mod wbar;

pub use identities::{run_identity_suite, IdentityCheck, IdentityReport};
pub use cache::{cache_stats, structure_polys, CacheStats};
pub use polys::WittStructurePolys;
pub use ring::{BasedRing, CoeffRing, Digits, WittRing, WittVector};
pub use wbar::WbarSpace;
pub use sequences::{check_exact_sequences, ExactSequenceReport};
