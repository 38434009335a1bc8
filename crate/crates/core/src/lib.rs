//! Exact tree combinatorics (maximum matchings, minimum vertex covers) and
//! the spectrum of the normalized graph Laplacian on trees, together with a
//! verification engine for the relationships between the two: the
//! multiplicity of the eigenvalue 1, vanishing of 1-eigenvectors on
//! minimum covers, upper bounds on the spectral separation, and sign-graph
//! transversality for the largest eigenvalue below 1.
//!
//! Combinatorial results are exact (integer DP, arbitrary-precision
//! rationals); spectral results are floating point with explicit, pinned
//! tolerances ([`spectral::Tolerances`]).

pub mod charpoly;
pub mod verify;
pub mod cover;
pub mod spectral;
pub mod tree;

pub use cover::{cover_report, CoverReport};
pub use spectral::{build_laplacian, eigensolve, Spectrum, Tolerances};
pub use tree::{parse_edge_list, Tree, VertexSet};
