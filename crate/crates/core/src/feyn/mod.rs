//! Graph complexes: the Feynman transform of `gr_{≤2} BV` and the
//! amputated Feynman transform of its Q-construction, and the comparison
//! map between them.

pub mod bvside;
pub mod cache;
pub mod complex;
pub mod dgraph;
pub mod dims;
pub mod graph;
mod perms;
pub mod phi;
pub mod phie;
pub mod qside;

pub use bvside::{build_feyn_bv, feyn_bv_basis};
pub use complex::{Combination, GraphComplex};
pub use dgraph::{canonicalize, DEdge, DGraph, DLeg, EdgeDeco, End, VKind};
pub use dims::{DimsTable, TableSide};
pub use graph::{enumerate_graphs, graphs_to_text, parse_graphs, Graph};
pub use phi::{
    compare_cohomology, compare_cohomology_between, phi_matrix, verify_phi, verify_phi_auto,
    Comparison, LegNorm, PhiReport,
};
pub use phie::{verify_phie_truncated, PhiEReport};
pub use qside::{build_afeyn_qbv, build_afeyn_qbv_with, top_weight, Truncation};
