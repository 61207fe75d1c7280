//! Exact computations on cellular graph embeddings in closed surfaces and
//! on ordinary voltage graphs: face tracing, Z2 homology, the intersection
//! pairing, derived embeddings and branched-covering counts, plus a
//! workbench for Generalized Petersen graphs.

pub mod chain;
pub mod checks;
pub mod embedding;
pub mod error;
pub mod format;
pub mod gf2;
pub mod graph;
pub mod group;
pub mod homology;
pub mod intersection;
pub mod iso;
pub mod petersen;
pub mod random;
pub mod surface;
pub mod voltage;

pub use chain::{Chain1, Chain2};
pub use embedding::{Embedding, Face, Sign};
pub use error::{Error, Result};
pub use graph::{build_graph, Dart, Graph};
pub use group::{cyclic_group, table_group, FiniteGroup, GroupElement, Subgroup};
pub use surface::SurfaceClass;
pub use voltage::{attach_voltages, VoltageEmbedding, VoltageGraph};
