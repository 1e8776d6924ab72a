//! Graph fixtures shared by the criterion benches.

use curvkit_core::graph::generators::erdos_renyi;
use curvkit_core::{largest_connected_component, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest component of a sparse G(n, p) with mean degree about `mean_degree`.
pub fn sparse_graph(n: usize, mean_degree: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = erdos_renyi(n, mean_degree / (n as f64 - 1.0), &mut rng);
    largest_connected_component(&g).0
}

/// Two dense clusters joined by a single bridge edge.
pub fn barbell(clique: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left = erdos_renyi(clique, p, &mut rng);
    let right = erdos_renyi(clique, p, &mut rng);
    let edges = left
        .edges()
        .chain(right.edges().map(|(u, v)| (u + clique, v + clique)))
        .chain(std::iter::once((0, clique)));
    Graph::from_edges(2 * clique, edges).unwrap()
}
