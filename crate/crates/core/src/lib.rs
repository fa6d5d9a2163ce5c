//! Exact verification of the second neighborhood inequality on small
//! labeled oriented graphs, and split-twin extensions that grow graphs
//! satisfying it into arbitrarily large certified families.

pub mod cli;
pub mod enumerate;
pub mod graph;
pub mod split_twin;
pub mod text;

pub use enumerate::{
    verify_all, verify_range, EnumerationRange, ExtremalRecord, RangeResult, ScanOptions,
    VerificationReport,
};
pub use graph::{GraphCode, GraphError, GraphReport, OrientedGraph, VertexReport, VertexSet};
pub use split_twin::{
    check_preservation, generate_family, split_twin_extend, Family, FamilyCertificate, SplitPolicy,
    SplitTwinSpec,
};
