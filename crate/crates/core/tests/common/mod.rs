//! Independent oracles shared by the integration and acceptance tests.
//!
//! Nothing here calls into the library's counting or curvature code; the
//! oracles work from a dense boolean adjacency matrix.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use curvkit_core::Graph;

pub fn dense(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleStats {
    pub d_i: usize,
    pub d_j: usize,
    pub triangles: usize,
    pub sq_i: usize,
    pub sq_j: usize,
    pub gamma_max: usize,
    pub all_four_cycles: usize,
}

#[derive(Default)]
struct Acc {
    triangles: usize,
    all_four: usize,
    k_nodes: BTreeSet<usize>,
    w_nodes: BTreeSet<usize>,
    through: HashMap<usize, usize>,
}

/// Per-edge counts, keyed by `(i, j)` with `i < j`, by enumerating every
/// 3-node and 4-node subset.
pub fn brute_force_stats(adj: &[Vec<bool>]) -> BTreeMap<(usize, usize), OracleStats> {
    let n = adj.len();
    let mut acc: BTreeMap<(usize, usize), Acc> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if adj[i][j] {
                acc.insert((i, j), Acc::default());
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if adj[a][b] && adj[b][c] && adj[a][c] {
                    for e in [(a, b), (a, c), (b, c)] {
                        acc.get_mut(&e).unwrap().triangles += 1;
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let set = [a, b, c, d];
                    for x in 0..4 {
                        for y in x + 1..4 {
                            let (i, j) = (set[x], set[y]);
                            if !adj[i][j] {
                                continue;
                            }
                            let rest: Vec<usize> = set.iter().copied().filter(|&v| v != i && v != j).collect();
                            let entry = acc.get_mut(&(i, j)).unwrap();
                            let mut any = false;
                            for (w, k) in [(rest[0], rest[1]), (rest[1], rest[0])] {
                                // cycle i - j - w - k - i
                                if adj[j][w] && adj[w][k] && adj[k][i] {
                                    any = true;
                                    if !adj[i][w] && !adj[j][k] {
                                        entry.k_nodes.insert(k);
                                        entry.w_nodes.insert(w);
                                        *entry.through.entry(k).or_default() += 1;
                                        *entry.through.entry(w).or_default() += 1;
                                    }
                                }
                            }
                            if any {
                                entry.all_four += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    let degree = |v: usize| adj[v].iter().filter(|&&x| x).count();
    acc.into_iter()
        .map(|((i, j), a)| {
            (
                (i, j),
                OracleStats {
                    d_i: degree(i),
                    d_j: degree(j),
                    triangles: a.triangles,
                    sq_i: a.k_nodes.len(),
                    sq_j: a.w_nodes.len(),
                    gamma_max: a.through.values().copied().max().unwrap_or(0),
                    all_four_cycles: a.all_four,
                },
            )
        })
        .collect()
}

/// The six measures written out from their formulas, in the order
/// bfc, bfc3, jlc, afc3, afc4 (bfc_mod has its own oracle below).
pub struct HandCurvatures {
    pub bfc: f64,
    pub bfc3: f64,
    pub jlc: f64,
    pub afc3: f64,
    pub afc4: f64,
}

pub fn hand_curvatures(s: &OracleStats) -> HandCurvatures {
    let di = s.d_i as f64;
    let dj = s.d_j as f64;
    let t = s.triangles as f64;
    let hi = if di > dj { di } else { dj };
    let lo = if di > dj { dj } else { di };
    let base = 2.0 / di + 2.0 / dj - 2.0 + 2.0 * t / hi + t / lo;
    let leaf = s.d_i == 1 || s.d_j == 1;
    let four = if s.gamma_max == 0 {
        0.0
    } else {
        (s.sq_i + s.sq_j) as f64 / (s.gamma_max as f64 * hi)
    };
    let clamp = |x: f64| if x > 0.0 { x } else { 0.0 };
    let afc3 = 4.0 - di - dj + 3.0 * t;
    HandCurvatures {
        bfc: if leaf { 0.0 } else { base + four },
        bfc3: if leaf { 0.0 } else { base },
        jlc: -clamp(1.0 - 1.0 / di - 1.0 / dj - t / lo) - clamp(1.0 - 1.0 / di - 1.0 / dj - t / hi) + t / hi,
        afc3,
        afc4: afc3 + 2.0 * s.all_four_cycles as f64,
    }
}

/// Line-by-line transcription of the reference four-cycle listing over the
/// dense adjacency matrix and its square, with the degree-one guard.
pub fn listing_bfc_mod(adj: &[Vec<bool>], i: usize, j: usize) -> f64 {
    let n = adj.len();
    let a: Vec<Vec<i64>> = adj.iter().map(|r| r.iter().map(|&x| i64::from(x)).collect()).collect();
    let mut a2 = vec![vec![0i64; n]; n];
    for r in 0..n {
        for c in 0..n {
            a2[r][c] = (0..n).map(|m| a[r][m] * a[m][c]).sum();
        }
    }
    let d_i = a[i].iter().sum::<i64>();
    let d_j = a[j].iter().sum::<i64>();
    if d_i.min(d_j) == 1 {
        return 0.0;
    }
    let d_max = d_i.max(d_j) as f64;
    let d_min = d_i.min(d_j) as f64;
    let mut sharp_ij = 0i64;
    let mut lambda_ij = 0i64;
    for k in 0..n {
        let tmp = a[k][j] * (a2[i][k] - a[i][k]) * a[i][j];
        if tmp > 0 {
            sharp_ij += 1;
            if tmp > lambda_ij {
                lambda_ij = tmp;
            }
        }
        let tmp = a[i][k] * (a2[k][j] - a[k][j]) * a[i][j];
        if tmp > 0 {
            sharp_ij += 1;
            if tmp > lambda_ij {
                lambda_ij = tmp;
            }
        }
    }
    let mut c = (2.0 / d_max) + (2.0 / d_min) - 2.0 + (2.0 / d_max + 1.0 / d_min) * a2[i][j] as f64 * a[i][j] as f64;
    if lambda_ij > 0 {
        c += sharp_ij as f64 / (d_max * lambda_ij as f64);
    }
    c
}

/// Optimal transport cost between uniform empirical measures on `a` and `b`
/// with cost `|x - y|`, solved as a min-cost flow (successive shortest paths
/// with Bellman-Ford). Each `a` point supplies `|b|` units and each `b` point
/// absorbs `|a|` units; the cost is divided by `|a| |b|`.
pub fn transport_lp(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len(), b.len());
    let source = na + nb;
    let sink = source + 1;
    let nodes = sink + 1;
    struct Arc {
        to: usize,
        cap: i64,
        cost: f64,
        rev: usize,
    }
    let mut graph: Vec<Vec<Arc>> = (0..nodes).map(|_| Vec::new()).collect();
    let add = |graph: &mut Vec<Vec<Arc>>, u: usize, v: usize, cap: i64, cost: f64| {
        let ru = graph[v].len();
        let rv = graph[u].len();
        graph[u].push(Arc {
            to: v,
            cap,
            cost,
            rev: ru,
        });
        graph[v].push(Arc {
            to: u,
            cap: 0,
            cost: -cost,
            rev: rv,
        });
    };
    for x in 0..na {
        add(&mut graph, source, x, nb as i64, 0.0);
        for y in 0..nb {
            add(&mut graph, x, na + y, i64::MAX / 4, (a[x] - b[y]).abs());
        }
    }
    for y in 0..nb {
        add(&mut graph, na + y, sink, na as i64, 0.0);
    }
    let mut remaining = (na * nb) as i64;
    let mut total = 0.0;
    while remaining > 0 {
        let mut dist = vec![f64::INFINITY; nodes];
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; nodes];
        dist[source] = 0.0;
        for _ in 0..nodes {
            let mut changed = false;
            for u in 0..nodes {
                if dist[u] == f64::INFINITY {
                    continue;
                }
                for (idx, arc) in graph[u].iter().enumerate() {
                    if arc.cap > 0 && dist[u] + arc.cost < dist[arc.to] - 1e-12 {
                        dist[arc.to] = dist[u] + arc.cost;
                        prev[arc.to] = Some((u, idx));
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        assert!(dist[sink].is_finite(), "transport infeasible");
        let mut push = remaining;
        let mut v = sink;
        while let Some((u, idx)) = prev[v] {
            push = push.min(graph[u][idx].cap);
            v = u;
        }
        let mut v = sink;
        while let Some((u, idx)) = prev[v] {
            graph[u][idx].cap -= push;
            let rev = graph[u][idx].rev;
            graph[v][rev].cap += push;
            v = u;
        }
        total += push as f64 * dist[sink];
        remaining -= push;
    }
    total / (na * nb) as f64
}
