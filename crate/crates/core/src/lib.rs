//! Minimum domination of rooted forests and Steiner domination of trees in
//! linear time, exact reference oracles, instance generators, and the audit
//! and benchmark harness behind the `stdom` command.

pub mod audit;
pub mod bench;
pub mod error;
pub mod exact_oracles;
pub mod forest_domination;
pub mod steiner_domination;
pub mod tree_corpus;
pub mod tree_model;

pub use error::{Error, Result};
pub use forest_domination::{forest_domination, forest_domination_traced, LabelState};
pub use steiner_domination::{
    build_h_subgraph, formula_gamma_st, steiner_domination, HSubgraph, SteinerDominationResult,
};
pub use tree_model::{AdjacencyTree, EdgeList, ParentArray, VertexSet};
