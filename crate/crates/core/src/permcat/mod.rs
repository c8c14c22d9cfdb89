//! Permutations, the catalog of known isospectral pairs, and involution graphs.

mod catalog;
mod graph;
mod perm;

pub use catalog::{
    catalog, catalog_from_env, catalog_to_text, find_pair, load_catalog, parse_catalog,
    CatalogError, PairSpec, SourceFlag, BUNDLED_CATALOG, CATALOG_ENV,
};
pub use graph::{
    graph_isospectral, AdjacencySet, ColoredEdge, ColoredGraph, GraphError, TraceTable, COLORS,
};
pub use perm::{involution_from_cycles, one_based_to_zero_based, PermError, Permutation};

/// Builds the adjacency set of three generators.
pub fn adjacency_set(gens: &[Permutation; COLORS]) -> Result<AdjacencySet, GraphError> {
    AdjacencySet::new(gens)
}

/// Involution graph of an adjacency set.
pub fn involution_graph(adj: &AdjacencySet) -> ColoredGraph {
    ColoredGraph::from_adjacency(adj)
}
