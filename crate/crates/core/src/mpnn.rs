//! A scalar message-passing network used to check the curvature bound on
//! Jacobian sensitivities numerically.
//!
//! Layer update: `h_i' = φ(h_i, Σ_j Â_ij ψ(h_i, h_j))` with `Â` the
//! symmetrically normalized adjacency augmented by self-loops.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::audit::audit_edge;
use crate::curvature::diagonal_free_cycle_nodes;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Central finite-difference step.
pub const FD_STEP: f64 = 1e-5;

/// `D̃^{-1/2} (A + I) D̃^{-1/2}` as a dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedAdjacency(pub DMatrix<f64>);

fn augmented_weight(g: &Graph, i: usize, j: usize) -> f64 {
    1.0 / (((g.degree(i) + 1) * (g.degree(j) + 1)) as f64).sqrt()
}

pub fn normalized_adjacency(g: &Graph) -> NormalizedAdjacency {
    let n = g.node_count();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = augmented_weight(g, i, i);
        for &j in g.neighbors(i) {
            m[(i, j)] = augmented_weight(g, i, j);
        }
    }
    NormalizedAdjacency(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Identity,
    Tanh,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::Tanh => x.tanh(),
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "identity" | "linear" => Ok(Activation::Identity),
            "tanh" => Ok(Activation::Tanh),
            other => Err(Error::InvalidParameter(format!("unknown activation `{other}`"))),
        }
    }
}

/// Update and message functions of one layer.
pub trait Layer {
    /// `φ(own, aggregated)`.
    fn update(&self, own: f64, aggregated: f64) -> f64;
    /// `ψ(own, neighbor)`.
    fn message(&self, own: f64, neighbor: f64) -> f64;
}

/// `φ(a, b) = α σ(b)`, `ψ(a, b) = β σ(b)`; with `|σ'| ≤ 1` the gradients are
/// bounded by `α` and `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedLayer {
    pub alpha: f64,
    pub beta: f64,
    pub activation: Activation,
}

impl Layer for BoundedLayer {
    fn update(&self, _own: f64, aggregated: f64) -> f64 {
        self.alpha * self.activation.apply(aggregated)
    }

    fn message(&self, _own: f64, neighbor: f64) -> f64 {
        self.beta * self.activation.apply(neighbor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpnnConfig {
    pub depth: usize,
    pub alpha: f64,
    pub beta: f64,
    pub l0: usize,
    pub activation: Activation,
}

impl Default for MpnnConfig {
    fn default() -> Self {
        MpnnConfig {
            depth: 2,
            alpha: 1.0,
            beta: 1.0,
            l0: 0,
            activation: Activation::Identity,
        }
    }
}

impl MpnnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.depth < 2 {
            return Err(Error::InvalidParameter(format!(
                "depth must be >= 2, got {}",
                self.depth
            )));
        }
        if self.l0 + 2 > self.depth {
            return Err(Error::InvalidParameter(format!(
                "l0 = {} exceeds depth - 2 = {}",
                self.l0,
                self.depth - 2
            )));
        }
        if !(self.alpha > 0.0 && self.beta > 0.0) {
            return Err(Error::InvalidParameter("alpha and beta must be positive".into()));
        }
        Ok(())
    }

    pub fn layer(&self) -> BoundedLayer {
        BoundedLayer {
            alpha: self.alpha,
            beta: self.beta,
            activation: self.activation,
        }
    }
}

fn step<L: Layer>(g: &Graph, layer: &L, h: &[f64]) -> Vec<f64> {
    (0..g.node_count())
        .map(|i| {
            let mut agg = augmented_weight(g, i, i) * layer.message(h[i], h[i]);
            for &j in g.neighbors(i) {
                agg += augmented_weight(g, i, j) * layer.message(h[i], h[j]);
            }
            layer.update(h[i], agg)
        })
        .collect()
}

fn propagate<L: Layer>(g: &Graph, layer: &L, mut h: Vec<f64>, layers: usize) -> Vec<f64> {
    for _ in 0..layers {
        h = step(g, layer, &h);
    }
    h
}

/// States of every layer, `states[0]` being the input features.
pub fn mpnn_forward(g: &Graph, features: &[f64], cfg: &MpnnConfig) -> Result<Vec<Vec<f64>>> {
    mpnn_forward_with(g, features, cfg.depth, &cfg.layer())
}

pub fn mpnn_forward_with<L: Layer>(g: &Graph, features: &[f64], depth: usize, layer: &L) -> Result<Vec<Vec<f64>>> {
    if features.len() != g.node_count() {
        return Err(Error::InvalidParameter(format!(
            "{} features for {} nodes",
            features.len(),
            g.node_count()
        )));
    }
    let mut states = vec![features.to_vec()];
    for _ in 0..depth {
        let next = step(g, layer, states.last().unwrap());
        states.push(next);
    }
    Ok(states)
}

/// Layer-`l0` state reached from all-ones input features.
fn base_state<L: Layer>(g: &Graph, layer: &L, l0: usize) -> Vec<f64> {
    propagate(g, layer, vec![1.0; g.node_count()], l0)
}

fn central_difference<L: Layer>(
    g: &Graph,
    layer: &L,
    base: &[f64],
    source: usize,
    target: usize,
    layers: usize,
) -> f64 {
    let mut plus = base.to_vec();
    plus[source] += FD_STEP;
    let mut minus = base.to_vec();
    minus[source] -= FD_STEP;
    let hp = propagate(g, layer, plus, layers);
    let hm = propagate(g, layer, minus, layers);
    (hp[target] - hm[target]) / (2.0 * FD_STEP)
}

/// `∂h_target^(l0+2) / ∂h_source^(l0)` by central differences.
pub fn jacobian_entry(g: &Graph, cfg: &MpnnConfig, source: usize, target: usize) -> Result<f64> {
    jacobian_entry_with(g, cfg.l0, &cfg.layer(), source, target)
}

pub fn jacobian_entry_with<L: Layer>(g: &Graph, l0: usize, layer: &L, source: usize, target: usize) -> Result<f64> {
    for node in [source, target] {
        g.try_degree(node)?;
    }
    let base = base_state(g, layer, l0);
    Ok(central_difference(g, layer, &base, source, target, 2))
}

/// Full finite-difference Jacobian `J[k][i] = ∂h_k^(l0+layers) / ∂h_i^(l0)`.
pub fn finite_difference_jacobian<L: Layer>(g: &Graph, l0: usize, layer: &L, layers: usize) -> DMatrix<f64> {
    let n = g.node_count();
    let base = base_state(g, layer, l0);
    let mut jac = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut plus = base.clone();
        plus[i] += FD_STEP;
        let mut minus = base.clone();
        minus[i] -= FD_STEP;
        let hp = propagate(g, layer, plus, layers);
        let hm = propagate(g, layer, minus, layers);
        for k in 0..n {
            jac[(k, i)] = (hp[k] - hm[k]) / (2.0 * FD_STEP);
        }
    }
    jac
}

/// Neighbors of `j` at distance two from `i` that lie on no triangle and no
/// diagonal-free four-cycle at `i ~ j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeLikeSet {
    pub nodes: Vec<usize>,
}

pub fn tree_like_set(g: &Graph, i: usize, j: usize) -> Result<TreeLikeSet> {
    let (_, cycle_nodes_j) = diagonal_free_cycle_nodes(g, i, j)?;
    let ni = g.neighbors(i);
    let nodes = g
        .neighbors(j)
        .iter()
        .copied()
        .filter(|&k| k != i && ni.binary_search(&k).is_err() && cycle_nodes_j.binary_search(&k).is_err())
        .collect();
    Ok(TreeLikeSet { nodes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Oriented so that `d_i ≤ d_j`.
    pub edge: [usize; 2],
    pub delta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub q_size: usize,
    pub one_over_delta: f64,
    pub pass: bool,
}

/// Checks `mean_{k ∈ Q_j} |∂h_k^(l0+2)/∂h_i^(l0)| < (αβ)² δ^{1/4}` and
/// `|Q_j| > 1/δ` at `δ = BFc(i, j) + 2`.
///
/// Fails with [`Error::ConditionNotMet`] unless condition 2 holds at the edge.
pub fn verify_sensitivity_bound(g: &Graph, i: usize, j: usize, cfg: &MpnnConfig) -> Result<BoundReport> {
    verify_sensitivity_bound_with(g, i, j, cfg, &cfg.layer())
}

/// As [`verify_sensitivity_bound`] with a custom layer whose gradients are assumed to
/// respect `cfg.alpha` and `cfg.beta`.
pub fn verify_sensitivity_bound_with<L: Layer>(
    g: &Graph,
    i: usize,
    j: usize,
    cfg: &MpnnConfig,
    layer: &L,
) -> Result<BoundReport> {
    cfg.validate()?;
    g.require_edge(i, j)?;
    let (i, j) = if g.degree(i) <= g.degree(j) { (i, j) } else { (j, i) };
    let record = audit_edge(g, i, j)?;
    if !record.cond2 {
        return Err(Error::ConditionNotMet {
            i,
            j,
            reason: format!(
                "delta = {:.6} must lie in (0, min(1/sqrt(d_max) = {:.6}, 1/gamma_max = {}))",
                record.delta_max, record.inv_sqrt_deg, record.inv_gamma_max
            ),
        });
    }
    let delta = record.delta_max;
    let q = tree_like_set(g, i, j)?;
    let base = base_state(g, layer, cfg.l0);
    let lhs = if q.nodes.is_empty() {
        0.0
    } else {
        q.nodes
            .iter()
            .map(|&k| central_difference(g, layer, &base, i, k, 2).abs())
            .sum::<f64>()
            / q.nodes.len() as f64
    };
    let rhs = (cfg.alpha * cfg.beta).powi(2) * delta.powf(0.25);
    let one_over_delta = 1.0 / delta;
    Ok(BoundReport {
        edge: [i, j],
        delta,
        lhs,
        rhs,
        q_size: q.nodes.len(),
        one_over_delta,
        pass: lhs < rhs && q.nodes.len() as f64 > one_over_delta,
    })
}
