//! Bottleneck-condition audit of the edges SDRF selects.
//!
//! For a selected edge with `δ = BFc(i, j) + 2` the audit checks
//!
//! * condition 2:  `δ < 1/√(d_i ∨ d_j)` and `δ < 1/γ_max`
//! * condition 2b: `δ ≤ 1/♯△` and `δ < 1/γ_max`
//!
//! An absent structure (`♯△ = 0` or `γ_max = 0`) gives an infinite bound, so
//! that half of a condition holds trivially. Non-positive `δ` fails both.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::curvature::{bfc_from_stats, edge_local_stats, CurvatureKind};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rewiring::{sdrf_with_observer, RewiringTrace, SdrfParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub edge: [usize; 2],
    pub iteration: usize,
    /// Iteration index over `max_iterations`, in `[0, 1)`.
    pub step_fraction: f64,
    pub d_i: usize,
    pub d_j: usize,
    pub triangles: usize,
    pub gamma_max: usize,
    pub delta_max: f64,
    pub inv_sqrt_deg: f64,
    pub inv_triangles: f64,
    pub inv_gamma_max: f64,
    /// `false` when `δ ≤ 0`; such records fail both conditions.
    pub valid_delta: bool,
    pub cond2: bool,
    pub cond2b: bool,
}

fn inverse_count(count: usize) -> f64 {
    if count == 0 {
        f64::INFINITY
    } else {
        1.0 / count as f64
    }
}

/// `(cond2, cond2b)` for a given `δ` and bounds.
pub fn conditions(delta: f64, inv_sqrt_deg: f64, inv_triangles: f64, inv_gamma_max: f64) -> (bool, bool) {
    if delta <= 0.0 {
        return (false, false);
    }
    let gamma_ok = delta < inv_gamma_max;
    (delta < inv_sqrt_deg && gamma_ok, delta <= inv_triangles && gamma_ok)
}

/// Audits edge `i ~ j` of `g`.
pub fn audit_edge(g: &Graph, i: usize, j: usize) -> Result<AuditRecord> {
    let s = edge_local_stats(g, i, j)?;
    let delta_max = bfc_from_stats(&s) + 2.0;
    let inv_sqrt_deg = 1.0 / (s.d_max() as f64).sqrt();
    let inv_triangles = inverse_count(s.triangles);
    let inv_gamma_max = inverse_count(s.gamma_max);
    let (cond2, cond2b) = conditions(delta_max, inv_sqrt_deg, inv_triangles, inv_gamma_max);
    Ok(AuditRecord {
        edge: [i, j],
        iteration: 0,
        step_fraction: 0.0,
        d_i: s.d_i,
        d_j: s.d_j,
        triangles: s.triangles,
        gamma_max: s.gamma_max,
        delta_max,
        inv_sqrt_deg,
        inv_triangles,
        inv_gamma_max,
        valid_delta: delta_max > 0.0,
        cond2,
        cond2b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionCount {
    pub count: usize,
    pub percent: f64,
}

impl ConditionCount {
    fn new(count: usize, total: usize) -> Self {
        let percent = if total == 0 {
            0.0
        } else {
            100.0 * count as f64 / total as f64
        };
        ConditionCount { count, percent }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub dataset: String,
    pub kind: CurvatureKind,
    pub edges_rewired: usize,
    pub cond2: ConditionCount,
    pub cond2b: ConditionCount,
}

impl AuditSummary {
    pub fn from_records(dataset: &str, kind: CurvatureKind, records: &[AuditRecord]) -> Self {
        let total = records.len();
        AuditSummary {
            dataset: dataset.to_string(),
            kind,
            edges_rewired: total,
            cond2: ConditionCount::new(records.iter().filter(|r| r.cond2).count(), total),
            cond2b: ConditionCount::new(records.iter().filter(|r| r.cond2b).count(), total),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub summary: AuditSummary,
    pub records: Vec<AuditRecord>,
    pub rewired: Graph,
    pub trace: RewiringTrace,
}

/// Runs SDRF on `g` and audits every selected edge against the graph as it
/// was at selection time. `δ` always comes from the exact balanced Forman
/// curvature, whatever `p.kind` drives the rewiring.
pub fn audit_rewiring(g: &Graph, p: &SdrfParams, dataset: &str) -> Result<AuditReport> {
    let mut records = Vec::new();
    let mut failure = None;
    let (rewired, trace) = sdrf_with_observer(g, p, |iter, snapshot, (i, j)| {
        if failure.is_some() {
            return;
        }
        match audit_edge(snapshot, i, j) {
            Ok(mut r) => {
                r.iteration = iter;
                r.step_fraction = iter as f64 / p.max_iterations as f64;
                records.push(r);
            }
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(AuditReport {
        summary: AuditSummary::from_records(dataset, p.kind, &records),
        records,
        rewired,
        trace,
    })
}

pub const SCATTER_HEADER: &str = "delta_max,inv_triangles,inv_gamma_max,step_fraction,cond2b";

fn fmt_bound(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{x:.6}")
    }
}

/// Scatter data: one row per record, six decimals, `inf` for absent bounds.
pub fn export_condition_scatter(records: &[AuditRecord]) -> String {
    let mut out = String::from(SCATTER_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_bound(r.delta_max),
            fmt_bound(r.inv_triangles),
            fmt_bound(r.inv_gamma_max),
            fmt_bound(r.step_fraction),
            r.cond2b
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterRow {
    pub delta_max: f64,
    pub inv_triangles: f64,
    pub inv_gamma_max: f64,
    pub step_fraction: f64,
    pub cond2b: bool,
}

pub fn parse_condition_scatter(text: &str) -> Result<Vec<ScatterRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == SCATTER_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "missing scatter header".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(idx, line)| {
            let bad = |message: String| Error::Parse { line: idx + 1, message };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(bad(format!("expected 5 fields, got {}", fields.len())));
            }
            let num = |s: &str| -> Result<f64> { s.parse::<f64>().map_err(|_| bad(format!("bad number `{s}`"))) };
            Ok(ScatterRow {
                delta_max: num(fields[0])?,
                inv_triangles: num(fields[1])?,
                inv_gamma_max: num(fields[2])?,
                step_fraction: num(fields[3])?,
                cond2b: fields[4]
                    .parse()
                    .map_err(|_| bad(format!("bad flag `{}`", fields[4])))?,
            })
        })
        .collect()
}
