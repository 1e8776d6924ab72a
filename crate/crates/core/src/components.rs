//! Connected components of undirected graphs.

use std::collections::VecDeque;

use crate::graph::Graph;

/// Component index for each node; components are numbered in order of their
/// smallest node id.
pub fn component_labels(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if label[w] == usize::MAX {
                    label[w] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

pub fn is_connected(g: &Graph) -> bool {
    component_labels(g).1 <= 1
}

/// Induced subgraph on the largest connected component.
///
/// Returns the subgraph and, for each of its nodes, the id it had in `g`.
/// Ties between equally large components go to the one holding the smallest
/// node id; since compaction preserves order this is also the smallest
/// original id.
pub fn largest_connected_component(g: &Graph) -> (Graph, Vec<usize>) {
    let (label, count) = component_labels(g);
    if count == 0 {
        return (Graph::empty(0), Vec::new());
    }
    let mut sizes = vec![0usize; count];
    for &c in &label {
        sizes[c] += 1;
    }
    // max_by_key keeps the last maximum; iterate in reverse to prefer the first.
    let best = (0..count).rev().max_by_key(|&c| sizes[c]).unwrap();
    let kept: Vec<usize> = (0..g.node_count()).filter(|&v| label[v] == best).collect();
    (g.induced_subgraph(&kept), kept)
}
