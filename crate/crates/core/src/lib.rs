pub mod bitset;
pub mod context;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod indices;
pub mod lattice;
pub mod measures;

pub use bitset::BitSet;
pub use context::{AttributeSet, FormalContext, ObjectSet};
pub use error::{Error, Result};
pub use indices::{compute_index_table, IndexSpec, IndexTable};
pub use lattice::{enumerate_concepts, Concept, ConceptLattice, LatticeOptions};
