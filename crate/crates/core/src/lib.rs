//! Centred tree-decompositions and quasi-isometries to graphs of bounded
//! treewidth.
//!
//! The crate verifies (k,d)-centred tree- and path-decompositions, turns
//! one into a decomposition of width at most 2k-1 of a quasi-isometric
//! graph, pulls decompositions back along quasi-isometries, and converts
//! sim-width branch decompositions into domination-bounded
//! tree-decompositions.
//!
//! Vertices are `usize` indices `0..n` throughout the API. The text formats
//! in [`io`] use 1-based ids.

pub mod corpus;
pub mod decomposition;
pub mod error;
pub mod exact;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod quasiiso;
pub mod report;
pub mod simwidth;

pub use decomposition::{
    bag_metrics, centred_check, centred_check_decomposition, BagMetrics, Centred, CentredMode, Shape,
    TreeDecomposition, Violation,
};
pub use error::{Error, Result};
pub use exact::Caps;
pub use graph::{is_bipartite, power_graph, weak_diameter, Bipartition, Distance, DistanceMatrix, Graph, Vertex};
pub use pipeline::{run_pipeline, Partition, PipelineOptions, PipelineReport};
pub use quasiiso::{compose, pullback_decomposition, qi_constant, QuasiIsometryMap};
pub use report::Report;
pub use simwidth::{simval, simwidth_pipeline, BranchDecomposition};
