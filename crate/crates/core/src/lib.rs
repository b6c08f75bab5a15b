//! Tanglegrams and their crossing numbers.
//!
//! A tanglegram is a pair of rooted binary trees on the same number of leaves
//! with a perfect matching between the two leaf sets. Drawing both trees
//! planarly, facing each other, with matching edges as straight segments, the
//! tangle crossing number is the least number of edge crossings over all
//! drawings. This crate provides:
//!
//! * [`tree`], [`tanglegram`], [`format`]: the data model and the `.tgl` text format;
//! * [`layout`]: switch vectors, crossing counts, and a brute-force reference;
//! * [`solver`]: an exact branch-and-bound solver and the one-sided optimum;
//! * [`bound`]: the clade-partition lower bound;
//! * [`families`]: the caterpillar tanglegrams and the grid family;
//! * [`sampler`], [`experiment`]: seeded random tanglegrams and the bound simulation.

pub mod bound;
pub mod error;
pub mod experiment;
pub mod families;
pub mod format;
pub mod layout;
pub mod sampler;
pub mod solver;
pub mod tanglegram;
pub mod tree;

pub use bound::{
    clade_matrix, clade_partition, crossing_lower_bound, lower_bound_report, Cap, CladeMatrix,
    CladePartition,
};
pub use error::{Error, Result};
pub use families::{caterpillar_tanglegram, extend_family, grid_family, uniform_grid};
pub use format::{parse, parse_many, parse_tree, serialize};
pub use layout::{
    brute_force_crt, crossing_count, leaf_order, mirror_right, LeafOrder, SwitchVector,
    TanglegramLayout,
};
pub use sampler::{random_tanglegram, random_tree, Distribution, SampleConfig};
pub use solver::{
    exact_crt, exact_crt_with, is_planar, one_sided_optimum, CrossingReport, SolverOptions,
};
pub use tanglegram::{MatchingEdge, Side, Tanglegram};
pub use tree::{balanced, build_tree, caterpillar, BinaryTree, NodeId, TreeBuilder};
