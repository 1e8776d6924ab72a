//! Edge-list, label and id-map file formats.
//!
//! Edge lists are UTF-8 text with one `u v` pair per line (space or tab
//! separated); lines starting with `#` are comments. Original ids are
//! non-negative integers and are compacted to `0..n` in ascending order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, LabeledGraph};

/// Map from compact node id to the id used in the input file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdMap {
    original: Vec<u64>,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        IdMap {
            original: (0..n as u64).collect(),
        }
    }

    pub fn from_original(original: Vec<u64>) -> Self {
        IdMap { original }
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn original(&self, compact: usize) -> u64 {
        self.original[compact]
    }

    pub fn compact(&self, original: u64) -> Option<usize> {
        self.original.binary_search(&original).ok()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.original
    }

    /// Restricts the map to a subgraph whose node `t` was node `kept[t]` here.
    pub fn restrict(&self, kept: &[usize]) -> IdMap {
        IdMap {
            original: kept.iter().map(|&c| self.original[c]).collect(),
        }
    }

    /// CSV with header `compact_id,original_id`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("compact_id,original_id\n");
        for (c, o) in self.original.iter().enumerate() {
            let _ = writeln!(out, "{c},{o}");
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<IdMap> {
        let mut original = Vec::new();
        for (idx, line) in text.lines().enumerate().skip(1) {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let (c, o) = line.split_once(',').ok_or_else(|| Error::Parse {
                line: line_no,
                message: "expected `compact_id,original_id`".into(),
            })?;
            let c: usize = parse_field(c, line_no)?;
            if c != original.len() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("compact ids must be consecutive, got {c}"),
                });
            }
            original.push(parse_field(o, line_no)?);
        }
        Ok(IdMap { original })
    }
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize) -> Result<T> {
    field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{}` is not a non-negative integer", field.trim()),
    })
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

/// A graph loaded from disk with the map back to original ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub ids: IdMap,
}

/// Parses edge-list text.
///
/// The output is always undirected: with `directed_input` each arc `(u, v)` is
/// symmetrized, otherwise `u v` and `v u` are treated as the same edge. Both
/// paths produce the same graph; the flag only documents intent.
pub fn parse_edge_list(text: &str, directed_input: bool) -> Result<LoadedGraph> {
    let _ = directed_input;
    let mut arcs: Vec<(u64, u64)> = Vec::new();
    for (line_no, line) in data_lines(text) {
        let mut fields = line.split_whitespace();
        let (Some(u), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two node ids, got `{line}`"),
            });
        };
        arcs.push((parse_field(u, line_no)?, parse_field(v, line_no)?));
    }
    if arcs.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut original: Vec<u64> = arcs.iter().flat_map(|&(u, v)| [u, v]).collect();
    original.sort_unstable();
    original.dedup();
    let ids = IdMap { original };
    let edges = arcs
        .iter()
        .map(|&(u, v)| (ids.compact(u).unwrap(), ids.compact(v).unwrap()));
    let graph = Graph::from_edges(ids.len(), edges)?;
    Ok(LoadedGraph { graph, ids })
}

pub fn load_edge_list(path: impl AsRef<Path>, directed_input: bool) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, directed_input)
}

/// Serializes `g` as an edge list over compact ids, one `u v` line per edge
/// with `u < v`, in lexicographic order.
pub fn edge_list_to_string(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Like [`edge_list_to_string`], but writes each node under its original id.
pub fn edge_list_to_string_with_ids(g: &Graph, ids: &IdMap) -> String {
    let mut out = String::new();
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", ids.original(u), ids.original(v));
    }
    out
}

pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, edge_list_to_string(g)).map_err(|e| Error::io(path, e))
}

/// Parses a `node_id label` file keyed by original ids and attaches the labels
/// to `loaded`. Every node of the graph must receive a label; labels for ids
/// that are not in the graph are ignored (they were cut by LCC extraction).
pub fn parse_labels(text: &str, loaded: &LoadedGraph) -> Result<LabeledGraph> {
    let n = loaded.graph.node_count();
    let mut labels: Vec<Option<u32>> = vec![None; n];
    for (line_no, line) in data_lines(text) {
        let mut fields = line.split_whitespace();
        let (Some(id), Some(label), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `node_id label`, got `{line}`"),
            });
        };
        let id: u64 = parse_field(id, line_no)?;
        let label: u32 = parse_field(label, line_no)?;
        if let Some(c) = loaded.ids.compact(id) {
            labels[c] = Some(label);
        }
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(c, l)| l.ok_or_else(|| Error::InvalidParameter(format!("node {} has no label", loaded.ids.original(c)))))
        .collect::<Result<Vec<_>>>()?;
    LabeledGraph::new(loaded.graph.clone(), labels)
}

pub fn load_labels(path: impl AsRef<Path>, loaded: &LoadedGraph) -> Result<LabeledGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text, loaded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators;

    #[test]
    fn path_of_three() {
        let loaded = parse_edge_list("0 1\n1 2", false).unwrap();
        assert_eq!(loaded.graph, generators::path(3));
    }

    #[test]
    fn duplicates_and_self_loops() {
        let loaded = parse_edge_list("0 1\n1 0\n0 0", true).unwrap();
        assert_eq!(loaded.graph.node_count(), 2);
        assert_eq!(loaded.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn compaction_builds_path() {
        let loaded = parse_edge_list("0 1\n2 3\n1 2", false).unwrap();
        assert_eq!(loaded.graph, generators::path(4));
    }

    #[test]
    fn sparse_ids_are_compacted_in_order() {
        let loaded = parse_edge_list("# header\n10\t40\n\n40 7\n", true).unwrap();
        assert_eq!(loaded.ids.as_slice(), &[7, 10, 40]);
        assert_eq!(loaded.graph.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
        assert_eq!(loaded.ids.to_csv(), "compact_id,original_id\n0,7\n1,10\n2,40\n");
        assert_eq!(IdMap::parse_csv(&loaded.ids.to_csv()).unwrap(), loaded.ids);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_edge_list("0 1\n# c\n1 x\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_edge_list("0 1 2\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_edge_list("-1 2\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_input() {
        assert!(matches!(parse_edge_list("", false), Err(Error::EmptyGraph)));
        assert!(matches!(parse_edge_list("# only\n\n", false), Err(Error::EmptyGraph)));
    }

    #[test]
    fn labels_follow_original_ids() {
        let loaded = parse_edge_list("5 9\n9 11\n", false).unwrap();
        let lg = parse_labels("11 2\n5 0\n9 0\n99 4\n", &loaded).unwrap();
        assert_eq!(lg.labels(), &[0, 0, 2]);
        assert!(parse_labels("5 0\n", &loaded).is_err());
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_edge_list("/nonexistent/curvkit.txt", false),
            Err(Error::Io { .. })
        ));
    }
}
