//! Simple undirected graphs over compact node ids `0..n`.

use crate::error::{Error, Result};

/// Simple undirected graph stored as sorted adjacency lists.
///
/// Invariants: no self-loops, symmetric adjacency, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `node_count` isolated nodes.
    pub fn empty(node_count: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from arbitrary pairs; self-loops and duplicates are dropped
    /// and every pair is symmetrized.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        for (u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut twice = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: twice / 2,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Degree of node `i`, panics when out of range. See [`Graph::try_degree`].
    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Sorted neighbor list of `i`, panics when out of range.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn try_degree(&self, i: usize) -> Result<usize> {
        self.check_node(i)?;
        Ok(self.degree(i))
    }

    pub fn try_neighbors(&self, i: usize) -> Result<&[usize]> {
        self.check_node(i)?;
        Ok(self.neighbors(i))
    }

    /// Nodes at distance exactly two from `i`.
    pub fn two_hop(&self, i: usize) -> Result<Vec<usize>> {
        self.check_node(i)?;
        let mut out: Vec<usize> = self.adjacency[i]
            .iter()
            .flat_map(|&k| self.adjacency[k].iter().copied())
            .filter(|&w| w != i && !self.has_edge(i, w))
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adjacency.len() && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub(crate) fn require_edge(&self, u: usize, v: usize) -> Result<()> {
        if self.has_edge(u, v) {
            Ok(())
        } else {
            Err(Error::MissingEdge(u, v))
        }
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if i < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: i,
                node_count: self.node_count(),
            })
        }
    }

    /// Undirected edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Number of common neighbors of `u` and `v`.
    pub fn common_neighbor_count(&self, u: usize, v: usize) -> usize {
        sorted_intersection_count(&self.adjacency[u], &self.adjacency[v])
    }

    /// Induced subgraph on `nodes` (compacted in the given order).
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut position = vec![usize::MAX; self.node_count()];
        for (new_id, &old) in nodes.iter().enumerate() {
            position[old] = new_id;
        }
        let mut adjacency = Vec::with_capacity(nodes.len());
        let mut twice = 0;
        for &old in nodes {
            let mut list: Vec<usize> = self.adjacency[old]
                .iter()
                .map(|&w| position[w])
                .filter(|&w| w != usize::MAX)
                .collect();
            list.sort_unstable();
            twice += list.len();
            adjacency.push(list);
        }
        Graph {
            adjacency,
            edge_count: twice / 2,
        }
    }

    /// Adds `{u, v}`; returns false when already present or a self-loop.
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adjacency[u].insert(pos, v);
                let pos_v = self.adjacency[v].binary_search(&u).unwrap_err();
                self.adjacency[v].insert(pos_v, u);
                self.edge_count += 1;
                true
            }
        }
    }

    /// Removes `{u, v}`; returns false when absent.
    pub(crate) fn delete_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adjacency[u].binary_search(&v) {
            Err(_) => false,
            Ok(pos) => {
                self.adjacency[u].remove(pos);
                let pos_v = self.adjacency[v].binary_search(&u).unwrap();
                self.adjacency[v].remove(pos_v);
                self.edge_count -= 1;
                true
            }
        }
    }
}

pub(crate) fn sorted_intersection_count(a: &[usize], b: &[usize]) -> usize {
    let (mut x, mut y, mut count) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                x += 1;
                y += 1;
            }
        }
    }
    count
}

/// Graph with a class label per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    graph: Graph,
    labels: Vec<u32>,
}

impl LabeledGraph {
    pub fn new(graph: Graph, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != graph.node_count() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} nodes",
                labels.len(),
                graph.node_count()
            )));
        }
        Ok(LabeledGraph { graph, labels })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }
}

/// Small named graphs used throughout tests, benches and the CLI generator.
pub mod generators {
    use rand::Rng;

    use super::Graph;

    /// G(n, p): each of the `n (n - 1) / 2` pairs is an edge with probability `p`.
    pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    /// Star with `leaves` leaves around center 0.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    pub fn hypercube(dim: u32) -> Graph {
        let n = 1usize << dim;
        let edges = (0..n).flat_map(|u| (0..dim).map(move |b| (u, u ^ (1 << b))));
        Graph::from_edges(n, edges).unwrap()
    }

    /// Two adjacent centers 0 and 1, each carrying `degree - 1` private leaves,
    /// so both centers have degree `degree`.
    pub fn double_star(degree: usize) -> Graph {
        assert!(degree >= 1);
        let leaves = degree - 1;
        let mut edges = vec![(0, 1)];
        edges.extend((0..leaves).map(|t| (0, 2 + t)));
        edges.extend((0..leaves).map(|t| (1, 2 + leaves + t)));
        Graph::from_edges(2 + 2 * leaves, edges).unwrap()
    }
}
