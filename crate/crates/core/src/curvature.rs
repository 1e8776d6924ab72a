//! Discrete edge curvatures.
//!
//! Every measure is a function of a handful of local counts at an edge
//! `i ~ j`: the two degrees, the number of triangles on the edge, the
//! diagonal-free four-cycles based at the edge and the count of all
//! four-cycles through it. [`EdgeLocalStats`] collects them.
//!
//! A diagonal-free four-cycle at `i ~ j` is `i - j - w - k - i` with
//! `k` a neighbor of `i` that is not adjacent to `j`, and `w` a neighbor of
//! `j` that is not adjacent to `i` (all four nodes distinct). Viewing the
//! candidate `k`s and `w`s as the two sides of a bipartite graph whose edges
//! are the graph edges `k ~ w`, `sq_i` and `sq_j` count the non-isolated
//! nodes on each side and `gamma_max` is the largest bipartite degree, i.e.
//! the largest number of such cycles passing through a single node.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{sorted_intersection_count, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureKind {
    /// No curvature; rewiring with it is the identity.
    None,
    /// Balanced Forman curvature.
    Bfc,
    /// Balanced Forman curvature without the four-cycle term.
    Bfc3,
    /// Balanced Forman curvature as computed by the widely used reference
    /// listing, including its four-cycle counting error.
    BfcMod,
    /// Jost-Liu curvature.
    Jlc,
    /// Augmented Forman curvature with triangles.
    Afc3,
    /// Augmented Forman curvature with triangles and all four-cycles.
    Afc4,
}

impl CurvatureKind {
    pub const ALL: [CurvatureKind; 7] = [
        CurvatureKind::None,
        CurvatureKind::Bfc,
        CurvatureKind::Bfc3,
        CurvatureKind::BfcMod,
        CurvatureKind::Jlc,
        CurvatureKind::Afc3,
        CurvatureKind::Afc4,
    ];

    /// Every kind that has curvature values.
    pub const MEASURES: [CurvatureKind; 6] = [
        CurvatureKind::Bfc,
        CurvatureKind::Bfc3,
        CurvatureKind::BfcMod,
        CurvatureKind::Jlc,
        CurvatureKind::Afc3,
        CurvatureKind::Afc4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurvatureKind::None => "none",
            CurvatureKind::Bfc => "bfc",
            CurvatureKind::Bfc3 => "bfc3",
            CurvatureKind::BfcMod => "bfcmod",
            CurvatureKind::Jlc => "jlc",
            CurvatureKind::Afc3 => "afc3",
            CurvatureKind::Afc4 => "afc4",
        }
    }
}

impl fmt::Display for CurvatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurvatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurvatureKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown curvature kind `{s}`")))
    }
}

/// Local counts at an edge `i ~ j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLocalStats {
    pub d_i: usize,
    pub d_j: usize,
    /// Common neighbors of `i` and `j`.
    pub triangles: usize,
    /// Neighbors of `i` on some diagonal-free four-cycle at the edge.
    pub sq_i: usize,
    /// Neighbors of `j` on some diagonal-free four-cycle at the edge.
    pub sq_j: usize,
    /// Largest number of diagonal-free four-cycles through one node.
    pub gamma_max: usize,
    /// Distinct node sets `{i, j, k, l}` carrying a four-cycle that uses the
    /// edge `i ~ j`, diagonals allowed.
    pub all_four_cycles: usize,
}

impl EdgeLocalStats {
    pub fn d_max(&self) -> usize {
        self.d_i.max(self.d_j)
    }

    pub fn d_min(&self) -> usize {
        self.d_i.min(self.d_j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct DiagonalFree {
    sq_i: usize,
    sq_j: usize,
    gamma_max: usize,
}

/// `a \ (b ∪ {skip})` for sorted `a`, `b`.
fn sorted_difference(a: &[usize], b: &[usize], skip: usize) -> Vec<usize> {
    a.iter()
        .copied()
        .filter(|&x| x != skip && b.binary_search(&x).is_err())
        .collect()
}

fn diagonal_free(g: &Graph, i: usize, j: usize) -> DiagonalFree {
    let ni = g.neighbors(i);
    let nj = g.neighbors(j);
    let side_i = sorted_difference(ni, nj, j);
    let side_j = sorted_difference(nj, ni, i);
    let mut through_w = vec![0usize; side_j.len()];
    let (mut sq_i, mut gamma_max) = (0, 0);
    for &k in &side_i {
        let mut through_k = 0;
        for &w in g.neighbors(k) {
            if let Ok(pos) = side_j.binary_search(&w) {
                through_k += 1;
                through_w[pos] += 1;
            }
        }
        if through_k > 0 {
            sq_i += 1;
            gamma_max = gamma_max.max(through_k);
        }
    }
    let sq_j = through_w.iter().filter(|&&c| c > 0).count();
    gamma_max = through_w.iter().copied().fold(gamma_max, usize::max);
    DiagonalFree { sq_i, sq_j, gamma_max }
}

/// Nodes on diagonal-free four-cycles at `i ~ j`: the neighbors of `i` and
/// the neighbors of `j` that take part in at least one such cycle.
pub fn diagonal_free_cycle_nodes(g: &Graph, i: usize, j: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    g.require_edge(i, j)?;
    let ni = g.neighbors(i);
    let nj = g.neighbors(j);
    let side_i = sorted_difference(ni, nj, j);
    let side_j = sorted_difference(nj, ni, i);
    let mut hit_j = vec![false; side_j.len()];
    let mut on_i = Vec::new();
    for &k in &side_i {
        let mut any = false;
        for &w in g.neighbors(k) {
            if let Ok(pos) = side_j.binary_search(&w) {
                hit_j[pos] = true;
                any = true;
            }
        }
        if any {
            on_i.push(k);
        }
    }
    let on_j = side_j
        .into_iter()
        .zip(hit_j)
        .filter_map(|(w, hit)| hit.then_some(w))
        .collect();
    Ok((on_i, on_j))
}

fn all_four_cycles(g: &Graph, i: usize, j: usize) -> usize {
    let ni = g.neighbors(i);
    // Paths i - j - k - l - i; the node set {k, l} identifies the cycle.
    let mut sets: Vec<(usize, usize)> = Vec::new();
    for &k in g.neighbors(j) {
        if k == i {
            continue;
        }
        for &l in g.neighbors(k) {
            if l != j && ni.binary_search(&l).is_ok() {
                sets.push((k.min(l), k.max(l)));
            }
        }
    }
    sets.sort_unstable();
    sets.dedup();
    sets.len()
}

pub fn edge_local_stats(g: &Graph, i: usize, j: usize) -> Result<EdgeLocalStats> {
    g.require_edge(i, j)?;
    let df = diagonal_free(g, i, j);
    Ok(EdgeLocalStats {
        d_i: g.degree(i),
        d_j: g.degree(j),
        triangles: g.common_neighbor_count(i, j),
        sq_i: df.sq_i,
        sq_j: df.sq_j,
        gamma_max: df.gamma_max,
        all_four_cycles: all_four_cycles(g, i, j),
    })
}

fn forman_triangle_part(d_i: usize, d_j: usize, triangles: usize) -> f64 {
    let (di, dj, t) = (d_i as f64, d_j as f64, triangles as f64);
    let (dmax, dmin) = (di.max(dj), di.min(dj));
    2.0 / di + 2.0 / dj - 2.0 + 2.0 * t / dmax + t / dmin
}

/// Balanced Forman curvature from precomputed counts.
pub fn bfc_from_stats(s: &EdgeLocalStats) -> f64 {
    if s.d_min() <= 1 {
        return 0.0;
    }
    let mut value = forman_triangle_part(s.d_i, s.d_j, s.triangles);
    if s.gamma_max > 0 {
        value += (s.sq_i + s.sq_j) as f64 / (s.gamma_max as f64 * s.d_max() as f64);
    }
    value
}

pub fn bfc3_from_stats(s: &EdgeLocalStats) -> f64 {
    if s.d_min() <= 1 {
        return 0.0;
    }
    forman_triangle_part(s.d_i, s.d_j, s.triangles)
}

pub fn jlc_from_stats(s: &EdgeLocalStats) -> f64 {
    let (di, dj, t) = (s.d_i as f64, s.d_j as f64, s.triangles as f64);
    let (dmax, dmin) = (di.max(dj), di.min(dj));
    let positive = |x: f64| x.max(0.0);
    -positive(1.0 - 1.0 / di - 1.0 / dj - t / dmin) - positive(1.0 - 1.0 / di - 1.0 / dj - t / dmax) + t / dmax
}

pub fn afc3_from_stats(s: &EdgeLocalStats) -> f64 {
    4.0 - s.d_i as f64 - s.d_j as f64 + 3.0 * s.triangles as f64
}

pub fn afc4_from_stats(s: &EdgeLocalStats) -> f64 {
    afc3_from_stats(s) + 2.0 * s.all_four_cycles as f64
}

fn degree_triangle_stats(g: &Graph, i: usize, j: usize) -> EdgeLocalStats {
    EdgeLocalStats {
        d_i: g.degree(i),
        d_j: g.degree(j),
        triangles: g.common_neighbor_count(i, j),
        sq_i: 0,
        sq_j: 0,
        gamma_max: 0,
        all_four_cycles: 0,
    }
}

pub fn bfc(g: &Graph, i: usize, j: usize) -> Result<f64> {
    g.require_edge(i, j)?;
    if g.degree(i).min(g.degree(j)) <= 1 {
        return Ok(0.0);
    }
    let df = diagonal_free(g, i, j);
    let s = EdgeLocalStats {
        sq_i: df.sq_i,
        sq_j: df.sq_j,
        gamma_max: df.gamma_max,
        ..degree_triangle_stats(g, i, j)
    };
    Ok(bfc_from_stats(&s))
}

pub fn bfc3(g: &Graph, i: usize, j: usize) -> Result<f64> {
    g.require_edge(i, j)?;
    Ok(bfc3_from_stats(&degree_triangle_stats(g, i, j)))
}

/// Balanced Forman curvature exactly as the reference listing evaluates it.
///
/// The listing scans every node `k` and tests
/// `A[k,j] (A²[i,k] - A[i,k]) A[i,j] > 0` and
/// `A[i,k] (A²[k,j] - A[k,j]) A[i,j] > 0`, counting hits into `sharp` and
/// keeping the largest tested value as `lambda`. The scan also hits `k = i`
/// (first test, value `d_i`) and `k = j` (second test, value `d_j`), and it
/// does not exclude diagonals, so `sharp` and `lambda` generally differ from
/// the diagonal-free counts. The degree-one guard of the exact measure is kept.
pub fn bfc_mod(g: &Graph, i: usize, j: usize) -> Result<f64> {
    g.require_edge(i, j)?;
    let (di, dj) = (g.degree(i), g.degree(j));
    if di.min(dj) <= 1 {
        return Ok(0.0);
    }
    let (sharp, lambda) = listing_four_cycle_terms(g, i, j);
    let d_max = di.max(dj) as f64;
    let d_min = di.min(dj) as f64;
    let a2_ij = g.common_neighbor_count(i, j) as f64;
    // Same operation order as the listing (A[i,j] = 1 is dropped).
    let mut c = (2.0 / d_max) + (2.0 / d_min) - 2.0 + (2.0 / d_max + 1.0 / d_min) * a2_ij;
    if lambda > 0 {
        c += sharp as f64 / (d_max * lambda as f64);
    }
    Ok(c)
}

/// `(sharp, lambda)` of the reference listing for edge `i ~ j`.
///
/// Only `k` adjacent to `j` (first test) or to `i` (second test) can give a
/// positive value, so the dense scan reduces to neighbor lists.
pub(crate) fn listing_four_cycle_terms(g: &Graph, i: usize, j: usize) -> (usize, usize) {
    let (mut sharp, mut lambda) = (0usize, 0i64);
    let mut record = |tmp: i64| {
        if tmp > 0 {
            sharp += 1;
            lambda = lambda.max(tmp);
        }
    };
    for &k in g.neighbors(j) {
        let paths = sorted_intersection_count(g.neighbors(i), g.neighbors(k)) as i64;
        record(paths - i64::from(g.has_edge(i, k)));
    }
    for &k in g.neighbors(i) {
        let paths = sorted_intersection_count(g.neighbors(k), g.neighbors(j)) as i64;
        record(paths - i64::from(g.has_edge(k, j)));
    }
    (sharp, lambda as usize)
}

pub fn jlc(g: &Graph, i: usize, j: usize) -> Result<f64> {
    g.require_edge(i, j)?;
    Ok(jlc_from_stats(&degree_triangle_stats(g, i, j)))
}

pub fn afc3(g: &Graph, i: usize, j: usize) -> Result<f64> {
    g.require_edge(i, j)?;
    Ok(afc3_from_stats(&degree_triangle_stats(g, i, j)))
}

pub fn afc4(g: &Graph, i: usize, j: usize) -> Result<f64> {
    g.require_edge(i, j)?;
    let s = EdgeLocalStats {
        all_four_cycles: all_four_cycles(g, i, j),
        ..degree_triangle_stats(g, i, j)
    };
    Ok(afc4_from_stats(&s))
}

pub fn curvature(g: &Graph, i: usize, j: usize, kind: CurvatureKind) -> Result<f64> {
    match kind {
        CurvatureKind::None => Err(Error::NoCurvature),
        CurvatureKind::Bfc => bfc(g, i, j),
        CurvatureKind::Bfc3 => bfc3(g, i, j),
        CurvatureKind::BfcMod => bfc_mod(g, i, j),
        CurvatureKind::Jlc => jlc(g, i, j),
        CurvatureKind::Afc3 => afc3(g, i, j),
        CurvatureKind::Afc4 => afc4(g, i, j),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeCurvature {
    pub u: usize,
    pub v: usize,
    pub value: f64,
}

/// Curvature of every edge, in lexicographic edge order.
pub fn curvature_distribution(g: &Graph, kind: CurvatureKind) -> Result<Vec<EdgeCurvature>> {
    if kind == CurvatureKind::None {
        return Err(Error::NoCurvature);
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    edges
        .par_iter()
        .map(|&(u, v)| curvature(g, u, v, kind).map(|value| EdgeCurvature { u, v, value }))
        .collect()
}

/// CSV with header `u,v,curvature` and six decimals.
pub fn distribution_to_csv(records: &[EdgeCurvature]) -> String {
    let mut out = String::from("u,v,curvature\n");
    for r in records {
        let _ = writeln!(out, "{},{},{:.6}", r.u, r.v, r.value);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    const TOL: f64 = 1e-9;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < TOL
    }

    #[test]
    fn c4_stats() {
        let s = edge_local_stats(&cycle(4), 0, 1).unwrap();
        assert_eq!(
            s,
            EdgeLocalStats {
                d_i: 2,
                d_j: 2,
                triangles: 0,
                sq_i: 1,
                sq_j: 1,
                gamma_max: 1,
                all_four_cycles: 1
            }
        );
    }

    #[test]
    fn k3_stats() {
        let s = edge_local_stats(&complete(3), 0, 1).unwrap();
        assert_eq!(
            (s.triangles, s.sq_i, s.sq_j, s.gamma_max, s.all_four_cycles),
            (1, 0, 0, 0, 0)
        );
    }

    #[test]
    fn k4_stats() {
        let s = edge_local_stats(&complete(4), 0, 1).unwrap();
        assert_eq!(
            (s.triangles, s.sq_i, s.sq_j, s.gamma_max, s.all_four_cycles),
            (2, 0, 0, 0, 1)
        );
    }

    #[test]
    fn missing_edge_errors() {
        let g = path(3);
        assert!(matches!(edge_local_stats(&g, 0, 2), Err(Error::MissingEdge(0, 2))));
        for kind in CurvatureKind::MEASURES {
            assert!(curvature(&g, 0, 2, kind).is_err());
        }
    }

    #[test]
    fn leaf_edges_are_zero() {
        let g = star(5);
        assert_eq!(bfc(&g, 0, 3).unwrap(), 0.0);
        assert_eq!(bfc3(&g, 0, 3).unwrap(), 0.0);
        assert_eq!(bfc_mod(&g, 0, 3).unwrap(), 0.0);
    }

    #[test]
    fn closed_forms() {
        let c4 = cycle(4);
        assert!(close(bfc(&c4, 0, 1).unwrap(), 1.0));
        assert!(close(bfc3(&c4, 0, 1).unwrap(), 0.0));
        assert!(close(jlc(&c4, 0, 1).unwrap(), 0.0));
        assert!(close(afc3(&c4, 0, 1).unwrap(), 0.0));
        assert!(close(afc4(&c4, 0, 1).unwrap(), 2.0));
        assert!(close(bfc(&cycle(5), 0, 1).unwrap(), 0.0));
        let k3 = complete(3);
        assert!(close(bfc3(&k3, 0, 1).unwrap(), 1.5));
        assert!(close(jlc(&k3, 0, 1).unwrap(), 0.5));
        assert!(close(afc3(&k3, 0, 1).unwrap(), 3.0));
        assert!(close(afc4(&k3, 0, 1).unwrap(), 3.0));
        assert!(close(jlc(&path(2), 0, 1).unwrap(), 0.0));
        assert!(close(afc3(&path(3), 0, 1).unwrap(), 1.0));
    }

    #[test]
    fn bfc_mod_on_k3_counts_spurious_loop_terms() {
        // k = i and k = j each contribute a test value of 2; sharp = 2, lambda = 2.
        assert_eq!(listing_four_cycle_terms(&complete(3), 0, 1), (2, 2));
        assert!(close(bfc_mod(&complete(3), 0, 1).unwrap(), 2.0));
    }

    #[test]
    fn none_kind_is_rejected() {
        assert!(matches!(
            curvature(&cycle(4), 0, 1, CurvatureKind::None),
            Err(Error::NoCurvature)
        ));
        assert!(curvature_distribution(&cycle(4), CurvatureKind::None).is_err());
    }

    #[test]
    fn distributions() {
        let d = curvature_distribution(&cycle(4), CurvatureKind::Bfc).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.iter().all(|r| close(r.value, 1.0)));
        let edges: Vec<_> = d.iter().map(|r| (r.u, r.v)).collect();
        assert_eq!(edges, vec![(0, 1), (0, 3), (1, 2), (2, 3)]);

        let d = curvature_distribution(&path(3), CurvatureKind::Afc3).unwrap();
        assert_eq!(d.iter().map(|r| r.value).collect::<Vec<_>>(), vec![1.0, 1.0]);

        assert!(curvature_distribution(&Graph::empty(3), CurvatureKind::Bfc)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn csv_format() {
        let d = curvature_distribution(&path(3), CurvatureKind::Afc3).unwrap();
        assert_eq!(distribution_to_csv(&d), "u,v,curvature\n0,1,1.000000\n1,2,1.000000\n");
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in CurvatureKind::ALL {
            assert_eq!(kind.name().parse::<CurvatureKind>().unwrap(), kind);
        }
        assert!("ollivier".parse::<CurvatureKind>().is_err());
    }

    #[test]
    fn edge_transitive_graphs_have_one_value() {
        for g in [cycle(6), complete(5), hypercube(3)] {
            for kind in CurvatureKind::MEASURES {
                let d = curvature_distribution(&g, kind).unwrap();
                assert!(d.iter().all(|r| close(r.value, d[0].value)), "{kind}");
            }
        }
    }
}
