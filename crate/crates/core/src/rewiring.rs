//! Stochastic discrete Ricci flow (SDRF) rewiring.
//!
//! Each iteration picks the most negatively curved edge `i ~ j`, scores every
//! absent pair `(k, l)` with `k ∈ N(i) ∪ {i}` and `l ∈ N(j) ∪ {j}` by how much
//! adding it raises the curvature of `i ~ j`, samples one pair from a softmax
//! over those improvements at temperature `tau`, and adds it. When a removal
//! threshold is set, the most positively curved edge is then removed if its
//! curvature exceeds the threshold.
//!
//! All randomness comes from a `ChaCha8Rng` seeded with [`SdrfParams::seed`]
//! through `SeedableRng::seed_from_u64`, so runs are reproducible across
//! platforms.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature, CurvatureKind};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdrfParams {
    pub kind: CurvatureKind,
    pub max_iterations: usize,
    /// Softmax temperature; larger values concentrate on the best candidate.
    pub tau: f64,
    /// Removal threshold; `None` disables removals.
    pub c_plus: Option<f64>,
    pub seed: u64,
    /// Recompute every edge curvature after each mutation instead of only
    /// the edges near the mutated pair.
    pub full_recompute: bool,
}

impl SdrfParams {
    pub fn new(kind: CurvatureKind, max_iterations: usize, tau: f64, seed: u64) -> Self {
        SdrfParams {
            kind,
            max_iterations,
            tau,
            c_plus: None,
            seed,
            full_recompute: false,
        }
    }

    pub fn with_c_plus(mut self, c_plus: f64) -> Self {
        self.c_plus = Some(c_plus);
        self
    }

    pub fn with_full_recompute(mut self, full: bool) -> Self {
        self.full_recompute = full;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive and finite, got {}",
                self.tau
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
        }
        if let Some(c) = self.c_plus {
            if c.is_nan() {
                return Err(Error::InvalidParameter("c_plus is NaN".into()));
            }
        }
        Ok(())
    }
}

/// One SDRF iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub target: [usize; 2],
    pub target_curv: f64,
    /// `None` when no candidate pair was available.
    pub added: Option<[usize; 2]>,
    pub improvement: Option<f64>,
    pub removed: Option<[usize; 2]>,
    pub removed_curv: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RewiringTrace {
    pub records: Vec<IterationRecord>,
}

impl RewiringTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn additions(&self) -> usize {
        self.records.iter().filter(|r| r.added.is_some()).count()
    }

    pub fn removals(&self) -> usize {
        self.records.iter().filter(|r| r.removed.is_some()).count()
    }

    /// JSON Lines, one record per iteration.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let records = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(RewiringTrace { records })
    }

    /// Applies the recorded additions and removals to `g`.
    pub fn replay(&self, g: &Graph) -> Result<Graph> {
        let mut out = g.clone();
        for r in &self.records {
            if let Some([k, l]) = r.added {
                if !out.insert_edge(k, l) {
                    return Err(Error::InvalidParameter(format!(
                        "iteration {}: added edge ({k}, {l}) already present",
                        r.iter
                    )));
                }
            }
            if let Some([u, v]) = r.removed {
                if !out.delete_edge(u, v) {
                    return Err(Error::MissingEdge(u, v));
                }
            }
        }
        Ok(out)
    }
}

/// Softmax probabilities `exp(tau v_i - m) / Σ exp(tau v_j - m)` with
/// `m = max_j tau v_j`.
pub fn softmax_probabilities(values: &[f64], tau: f64) -> Result<Vec<f64>> {
    let weights = softmax_weights(values, tau)?;
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

fn softmax_weights(values: &[f64], tau: f64) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::Empty("softmax over no values"));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("softmax values must be finite".into()));
    }
    let m = values.iter().map(|v| tau * v).fold(f64::NEG_INFINITY, f64::max);
    Ok(values.iter().map(|v| (tau * v - m).exp()).collect())
}

/// Draws an index with softmax probabilities at temperature `tau`.
pub fn softmax_sample<R: Rng + ?Sized>(values: &[f64], tau: f64, rng: &mut R) -> Result<usize> {
    let weights = softmax_weights(values, tau)?;
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::InvalidParameter(format!("softmax weights: {e}")))?;
    Ok(dist.sample(rng))
}

/// Absent pairs whose addition closes a triangle or four-cycle on `i ~ j`,
/// as `(min, max)` in scan order, without duplicates.
pub fn candidate_additions(g: &Graph, i: usize, j: usize) -> Vec<Edge> {
    let side_i: Vec<usize> = std::iter::once(i).chain(g.neighbors(i).iter().copied()).collect();
    let side_j: Vec<usize> = std::iter::once(j).chain(g.neighbors(j).iter().copied()).collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &k in &side_i {
        for &l in &side_j {
            if k == l || g.has_edge(k, l) {
                continue;
            }
            let pair = (k.min(l), k.max(l));
            if seen.insert(pair) {
                out.push(pair);
            }
        }
    }
    out
}

/// Cached curvature of every edge of a graph being rewired.
struct CurvatureCache {
    kind: CurvatureKind,
    values: BTreeMap<Edge, f64>,
}

impl CurvatureCache {
    fn build(g: &Graph, kind: CurvatureKind) -> Result<Self> {
        let values = crate::curvature::curvature_distribution(g, kind)?
            .into_iter()
            .map(|r| ((r.u, r.v), r.value))
            .collect();
        Ok(CurvatureCache { kind, values })
    }

    /// Minimum, ties to the lexicographically smallest edge.
    fn min_edge(&self) -> Option<(Edge, f64)> {
        let mut best: Option<(Edge, f64)> = None;
        for (&e, &c) in &self.values {
            if best.is_none_or(|(_, b)| c < b) {
                best = Some((e, c));
            }
        }
        best
    }

    /// Maximum, ties to the lexicographically smallest edge.
    fn max_edge(&self) -> Option<(Edge, f64)> {
        let mut best: Option<(Edge, f64)> = None;
        for (&e, &c) in &self.values {
            if best.is_none_or(|(_, b)| c > b) {
                best = Some((e, c));
            }
        }
        best
    }

    /// Refreshes every edge touching `N[k] ∪ N[l]`, which contains every edge
    /// whose curvature can depend on the pair `{k, l}`. `around` must be the
    /// closed neighborhoods taken in the graph that contains `{k, l}`.
    fn refresh(&mut self, g: &Graph, around: &[usize]) -> Result<()> {
        for &a in around {
            for &b in g.neighbors(a) {
                let e = (a.min(b), a.max(b));
                let c = curvature(g, e.0, e.1, self.kind)?;
                self.values.insert(e, c);
            }
        }
        Ok(())
    }

    fn rebuild(&mut self, g: &Graph) -> Result<()> {
        *self = CurvatureCache::build(g, self.kind)?;
        Ok(())
    }
}

fn closed_neighborhood(g: &Graph, k: usize, l: usize) -> Vec<usize> {
    let mut nodes: Vec<usize> = [k, l]
        .into_iter()
        .chain(g.neighbors(k).iter().copied())
        .chain(g.neighbors(l).iter().copied())
        .collect();
    nodes.sort_unstable();
    nodes.dedup();
    nodes
}

/// Runs SDRF and returns the rewired graph and its trace.
pub fn sdrf(g: &Graph, p: &SdrfParams) -> Result<(Graph, RewiringTrace)> {
    sdrf_with_observer(g, p, |_, _, _| {})
}

/// As [`sdrf`], calling `observer(iteration, graph, target)` with the graph as
/// it is when the target edge is selected, before that iteration mutates it.
pub fn sdrf_with_observer<F>(g: &Graph, p: &SdrfParams, mut observer: F) -> Result<(Graph, RewiringTrace)>
where
    F: FnMut(usize, &Graph, Edge),
{
    p.validate()?;
    if g.is_empty() {
        return Err(Error::Empty("rewiring needs a non-empty graph"));
    }
    let mut trace = RewiringTrace::default();
    if p.kind == CurvatureKind::None {
        return Ok((g.clone(), trace));
    }
    if g.edge_count() == 0 {
        return Err(Error::Empty("rewiring needs at least one edge"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut work = g.clone();
    let mut cache = CurvatureCache::build(&work, p.kind)?;

    for iter in 0..p.max_iterations {
        let Some(((i, j), target_curv)) = cache.min_edge() else {
            break;
        };
        observer(iter, &work, (i, j));

        let mut record = IterationRecord {
            iter,
            target: [i, j],
            target_curv,
            added: None,
            improvement: None,
            removed: None,
            removed_curv: None,
        };

        let candidates = candidate_additions(&work, i, j);
        if !candidates.is_empty() {
            let mut improvements = Vec::with_capacity(candidates.len());
            for &(k, l) in &candidates {
                work.insert_edge(k, l);
                let after = curvature(&work, i, j, p.kind);
                work.delete_edge(k, l);
                improvements.push(after? - target_curv);
            }
            let pick = softmax_sample(&improvements, p.tau, &mut rng)?;
            let (k, l) = candidates[pick];
            work.insert_edge(k, l);
            if p.full_recompute {
                cache.rebuild(&work)?;
            } else {
                cache.refresh(&work, &closed_neighborhood(&work, k, l))?;
            }
            record.added = Some([k, l]);
            record.improvement = Some(improvements[pick]);
        }

        if let Some(threshold) = p.c_plus {
            if let Some(((u, v), c)) = cache.max_edge() {
                if c > threshold {
                    let around = closed_neighborhood(&work, u, v);
                    work.delete_edge(u, v);
                    cache.values.remove(&(u, v));
                    if p.full_recompute {
                        cache.rebuild(&work)?;
                    } else {
                        cache.refresh(&work, &around)?;
                    }
                    record.removed = Some([u, v]);
                    record.removed_curv = Some(c);
                }
            }
        }
        trace.records.push(record);
    }
    Ok((work, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    #[test]
    fn p3_closes_triangle() {
        let p = SdrfParams::new(CurvatureKind::Bfc3, 1, 500.0, 0);
        let (out, trace) = sdrf(&path(3), &p).unwrap();
        assert_eq!(out, complete(3));
        let r = &trace.records[0];
        assert_eq!(r.target, [0, 1]);
        assert_eq!(r.target_curv, 0.0);
        assert_eq!(r.added, Some([0, 2]));
        assert_eq!(candidate_additions(&path(3), 0, 1), vec![(0, 2)]);
    }

    #[test]
    fn none_kind_is_identity() {
        let g = cycle(7);
        let (out, trace) = sdrf(&g, &SdrfParams::new(CurvatureKind::None, 10, 1.0, 3)).unwrap();
        assert_eq!(out, g);
        assert!(trace.is_empty());
    }

    #[test]
    fn infinite_threshold_never_removes() {
        let p = SdrfParams::new(CurvatureKind::Bfc, 15, 2.0, 11).with_c_plus(f64::INFINITY);
        let (_, trace) = sdrf(&cycle(12), &p).unwrap();
        assert_eq!(trace.len(), 15);
        assert_eq!(trace.removals(), 0);
    }

    #[test]
    fn low_threshold_removes_once_per_iteration() {
        let p = SdrfParams::new(CurvatureKind::Afc3, 5, 1.0, 2).with_c_plus(-100.0);
        let (out, trace) = sdrf(&complete(6), &p).unwrap();
        assert!(trace.records.iter().all(|r| r.removed.is_some()));
        assert_eq!(trace.replay(&complete(6)).unwrap(), out);
    }

    #[test]
    fn no_candidates_is_a_noop_iteration() {
        let p = SdrfParams::new(CurvatureKind::Bfc, 3, 1.0, 0);
        let (out, trace) = sdrf(&complete(4), &p).unwrap();
        assert_eq!(out, complete(4));
        assert_eq!(trace.len(), 3);
        assert!(trace
            .records
            .iter()
            .all(|r| r.added.is_none() && r.improvement.is_none()));
    }

    #[test]
    fn invalid_params() {
        let g = path(3);
        assert!(sdrf(&g, &SdrfParams::new(CurvatureKind::Bfc, 1, 0.0, 0)).is_err());
        assert!(sdrf(&g, &SdrfParams::new(CurvatureKind::Bfc, 0, 1.0, 0)).is_err());
        assert!(sdrf(&g, &SdrfParams::new(CurvatureKind::Bfc, 1, f64::NAN, 0)).is_err());
        assert!(sdrf(&Graph::empty(0), &SdrfParams::new(CurvatureKind::Bfc, 1, 1.0, 0)).is_err());
        assert!(sdrf(&Graph::empty(3), &SdrfParams::new(CurvatureKind::Bfc, 1, 1.0, 0)).is_err());
    }

    #[test]
    fn softmax_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(softmax_sample(&[], 1.0, &mut rng).is_err());
        assert!(softmax_sample(&[1.0], -1.0, &mut rng).is_err());
        for _ in 0..100 {
            assert_eq!(softmax_sample(&[0.3], 7.0, &mut rng).unwrap(), 0);
        }
        let probs = softmax_probabilities(&[5.0, 0.0, 0.0], 50.0).unwrap();
        assert!(probs[0] >= 1.0 - 1e-10);
        // Large tau * value would overflow without the max shift.
        let probs = softmax_probabilities(&[1000.0, 999.0], 500.0).unwrap();
        assert!(probs.iter().all(|p| p.is_finite()));
    }

    #[test]
    fn trace_jsonl_round_trip() {
        let p = SdrfParams::new(CurvatureKind::Bfc, 4, 5.0, 9).with_c_plus(0.5);
        let (_, trace) = sdrf(&cycle(9), &p).unwrap();
        let text = trace.to_jsonl().unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().next().unwrap().starts_with("{\"iter\":0,\"target\":["));
        assert_eq!(RewiringTrace::from_jsonl(&text).unwrap(), trace);
    }
}
