//! Structure generation and refinement.
//!
//! [`init_structure`] builds the initial network by recursive region
//! decomposition: every region (a subset of the variables) gets k sum
//! nodes, each region is split by a configurable number of random binary
//! partitions, and every combination of child sum nodes under a partition
//! becomes a product node feeding all of the region's sums. Regions are
//! memoized by scope, so the result is a DAG.
//!
//! [`hard_em_refine`] then concentrates the randomly initialized weights on
//! the patterns of a training subset (typically the most-liked fraction of
//! the dataset): each iteration runs max-product inference per example,
//! re-estimates every visited sum's weights from its edge traversal counts,
//! and finally removes children whose weight reached exactly zero.

pub mod error;
pub mod hard_em;
pub mod init;
pub mod select;

pub use error::StructureError;
pub use hard_em::{hard_em_refine, EmReport, HardEmConfig};
pub use init::{init_structure, StructureConfig};
pub use select::select_top_fraction;
