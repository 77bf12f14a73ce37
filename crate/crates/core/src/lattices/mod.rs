//! Invariant lattices of a quaternion ring and the invariants `(m, n)`.

mod bt;
mod family;
mod hnf;

pub use bt::{bt_graph, neighborhood_size, path_decompose, tree_neighbors, BTGraph, PathDecomposition};
pub use family::{global_invariants, invariant_lattices, verify_lattice_family, SpectrumInvariants};
pub use hnf::LatticeHNF;
pub(crate) use hnf::complete_column;
