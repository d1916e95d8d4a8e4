//! Code parameters, design matrices and parity-check construction.

mod construct;
pub mod io;
mod matrices;
mod params;
mod sparse;

pub use construct::{build_md_matrix, build_sc_matrix, build_sc_protograph, sc_block_to_base, QcEdge, QcProtograph};
pub use matrices::{
    edge_distribution, md_density, BaseGrid, DesignTriple, LiftingMatrix, MdDensity, PartitionMatrix, RelocationMatrix,
};
pub use params::{design_rate, CodeParams, Rational};
pub use sparse::{SparseBinaryMatrix, DENSE_COLUMN_CAP};
