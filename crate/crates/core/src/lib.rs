//! Combinatorial and symbolic tools for compactifications of the
//! configuration space of three points: nested-set structures, enrichments,
//! incidence, symmetric-group actions, classification, stratification index
//! sets, exact polynomial algebra and the local incidence charts.

pub mod charts;
pub mod classify;
pub mod cli;
pub mod enrichment;
pub mod incidence;
pub mod poly;
pub mod strata;
pub mod structure;
pub mod symmetry;

pub use enrichment::{Enrichment, EnrichmentError, ModelName};
pub use structure::{Signature, Structure, StructureError};
pub use symmetry::{Act, GroupDescriptor, Permutation};
