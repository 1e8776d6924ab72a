//! Evaluation statistics: homophily, spectral gap, empirical 1-D
//! Wasserstein distances, saturation curves and top-fraction summaries.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, LabeledGraph};

/// Eigenvalues below this are treated as zero.
pub const ZERO_EIGENVALUE: f64 = 1e-9;
/// Largest graph handed to the dense eigensolver.
pub const MAX_DENSE_NODES: usize = 5000;

/// Guards `⌈f n⌉` against `f n` landing a hair above an integer.
const CEIL_SLACK: f64 = 1e-9;

/// Average fraction of same-label neighbors over nodes with at least one
/// neighbor.
pub fn homophily(lg: &LabeledGraph) -> Result<f64> {
    let g = lg.graph();
    let (mut total, mut counted) = (0.0, 0usize);
    for v in 0..g.node_count() {
        let d = g.degree(v);
        if d == 0 {
            continue;
        }
        let same = g.neighbors(v).iter().filter(|&&w| lg.label(w) == lg.label(v)).count();
        total += same as f64 / d as f64;
        counted += 1;
    }
    if counted == 0 {
        return Err(Error::AllIsolated);
    }
    Ok(total / counted as f64)
}

/// Spectrum of `I - D^{-1/2} A D^{-1/2}` in ascending order. Isolated nodes
/// contribute a zero row.
pub fn normalized_laplacian_spectrum(g: &Graph) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Empty("spectrum of an empty graph"));
    }
    if n > MAX_DENSE_NODES {
        return Err(Error::InvalidParameter(format!(
            "dense eigendecomposition is limited to {MAX_DENSE_NODES} nodes, got {n}"
        )));
    }
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|i| match g.degree(i) {
            0 => 0.0,
            d => 1.0 / (d as f64).sqrt(),
        })
        .collect();
    let mut lap = DMatrix::zeros(n, n);
    for i in 0..n {
        if g.degree(i) > 0 {
            lap[(i, i)] = 1.0;
        }
        for &j in g.neighbors(i) {
            lap[(i, j)] = -inv_sqrt[i] * inv_sqrt[j];
        }
    }
    let mut values: Vec<f64> = SymmetricEigen::new(lap).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Smallest non-zero eigenvalue of the normalized Laplacian of a connected graph.
pub fn spectral_gap(g: &Graph) -> Result<f64> {
    let spectrum = normalized_laplacian_spectrum(g)?;
    let zero_eigenvalues = spectrum.iter().filter(|&&x| x < ZERO_EIGENVALUE).count();
    if zero_eigenvalues > 1 {
        return Err(Error::Disconnected { zero_eigenvalues });
    }
    spectrum
        .into_iter()
        .find(|&x| x >= ZERO_EIGENVALUE)
        .ok_or(Error::NoSpectralGap)
}

/// Accuracy-style samples in the order they were produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    values: Vec<f64>,
    pub tag: String,
}

impl SampleSet {
    pub fn new(values: Vec<f64>, tag: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("sample set"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("samples must be finite".into()));
        }
        Ok(SampleSet {
            values,
            tag: tag.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Reads a `config_id,accuracy` CSV, keeping row order.
    pub fn parse_csv(text: &str, tag: impl Into<String>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers().map_err(csv_error)?.clone();
        let column = headers
            .iter()
            .position(|h| h == "accuracy")
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: "missing `accuracy` column".into(),
            })?;
        let mut values = Vec::new();
        for (idx, row) in reader.records().enumerate() {
            let row = row.map_err(csv_error)?;
            let field = row.get(column).unwrap_or("");
            values.push(field.parse::<f64>().map_err(|_| Error::Parse {
                line: idx + 2,
                message: format!("`{field}` is not a number"),
            })?);
        }
        SampleSet::new(values, tag)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let tag = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        SampleSet::parse_csv(&text, tag)
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

/// Divisor used for standard deviations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdConvention {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n - 1` (zero for a single sample).
    Sample,
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn std_dev(values: &[f64], convention: StdConvention) -> f64 {
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m).powi(2)).sum();
    let denom = match convention {
        StdConvention::Population => values.len() as f64,
        StdConvention::Sample if values.len() > 1 => (values.len() - 1) as f64,
        StdConvention::Sample => return 0.0,
    };
    (ss / denom).sqrt()
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// 1-Wasserstein distance between two empirical distributions, i.e. the
/// area between their CDFs.
pub fn wasserstein_1d(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("wasserstein_1d needs two non-empty sample sets"));
    }
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut total = 0.0;
    let mut x = a[0].min(b[0]);
    while ia < a.len() || ib < b.len() {
        // Step every sample sitting at the current point, then integrate to the next one.
        while ia < a.len() && a[ia] <= x {
            ia += 1;
        }
        while ib < b.len() && b[ib] <= x {
            ib += 1;
        }
        let next = match (a.get(ia), b.get(ib)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => break,
        };
        total += (ia as f64 / na - ib as f64 / nb).abs() * (next - x);
        x = next;
    }
    Ok(total)
}

fn prefix_len(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64 - CEIL_SLACK).ceil().max(0.0) as usize).min(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturationRow {
    pub fraction: f64,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    /// Distance to the previous checkpoint's prefix; absent on the first row.
    pub wasserstein: Option<f64>,
}

/// Mean, standard deviation and consecutive Wasserstein distances of the
/// first `⌈f n⌉` samples (in original order) for each checkpoint `f`.
pub fn saturation_analysis(values: &[f64], checkpoints: &[f64]) -> Result<Vec<SaturationRow>> {
    saturation_analysis_with(values, checkpoints, StdConvention::Population)
}

pub fn saturation_analysis_with(
    values: &[f64],
    checkpoints: &[f64],
    convention: StdConvention,
) -> Result<Vec<SaturationRow>> {
    if values.is_empty() {
        return Err(Error::Empty("saturation analysis needs samples"));
    }
    if checkpoints.is_empty() {
        return Err(Error::Empty("saturation analysis needs checkpoints"));
    }
    let mut rows: Vec<SaturationRow> = Vec::with_capacity(checkpoints.len());
    let mut previous: Option<(f64, usize)> = None;
    for &f in checkpoints {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::InvalidParameter(format!("checkpoint {f} outside (0, 1]")));
        }
        if let Some((prev_f, _)) = previous {
            if f <= prev_f {
                return Err(Error::InvalidParameter("checkpoints must be increasing".into()));
            }
        }
        let count = prefix_len(f, values.len());
        if count == 0 {
            return Err(Error::InvalidParameter(format!("checkpoint {f} selects no samples")));
        }
        let prefix = &values[..count];
        let wasserstein = match previous {
            Some((_, prev_count)) => Some(wasserstein_1d(&values[..prev_count], prefix)?),
            None => None,
        };
        rows.push(SaturationRow {
            fraction: f,
            count,
            mean: mean(prefix),
            std: std_dev(prefix, convention),
            wasserstein,
        });
        previous = Some((f, count));
    }
    Ok(rows)
}

pub fn saturation_to_csv(rows: &[SaturationRow]) -> String {
    let mut out = String::from("fraction,count,mean,std_population,wasserstein\n");
    for r in rows {
        let w = r.wasserstein.map(|w| format!("{w:.6}")).unwrap_or_default();
        let _ = writeln!(out, "{:.6},{},{:.6},{:.6},{}", r.fraction, r.count, r.mean, r.std, w);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopFractionSummary {
    pub fraction: f64,
    pub selected: usize,
    pub mean: f64,
    pub std: f64,
    pub std_convention: StdConvention,
}

/// Mean and population standard deviation of the `⌈fraction n⌉` largest samples.
pub fn top_fraction_summary(values: &[f64], fraction: f64) -> Result<(f64, f64)> {
    let s = top_fraction_summary_with(values, fraction, StdConvention::Population)?;
    Ok((s.mean, s.std))
}

pub fn top_fraction_summary_with(
    values: &[f64],
    fraction: f64,
    convention: StdConvention,
) -> Result<TopFractionSummary> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!("fraction {fraction} outside (0, 1]")));
    }
    let count = prefix_len(fraction, values.len());
    if count == 0 {
        return Err(Error::Empty("top-fraction selection"));
    }
    let mut desc = sorted(values);
    desc.reverse();
    let top = &desc[..count];
    Ok(TopFractionSummary {
        fraction,
        selected: count,
        mean: mean(top),
        std: std_dev(top, convention),
        std_convention: convention,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    #[test]
    fn homophily_examples() {
        let lg = LabeledGraph::new(cycle(5), vec![3; 5]).unwrap();
        assert_eq!(homophily(&lg).unwrap(), 1.0);
        let lg = LabeledGraph::new(cycle(4), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(homophily(&lg).unwrap(), 0.0);
        let lg = LabeledGraph::new(path(3), vec![0, 0, 1]).unwrap();
        assert!((homophily(&lg).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn homophily_skips_isolated_nodes() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let lg = LabeledGraph::new(g, vec![0, 0, 1]).unwrap();
        assert_eq!(homophily(&lg).unwrap(), 1.0);
        let lg = LabeledGraph::new(Graph::empty(2), vec![0, 1]).unwrap();
        assert!(matches!(homophily(&lg), Err(Error::AllIsolated)));
    }

    #[test]
    fn spectral_gap_small() {
        assert!((spectral_gap(&path(2)).unwrap() - 2.0).abs() < 1e-9);
        assert!((spectral_gap(&complete(4)).unwrap() - 4.0 / 3.0).abs() < 1e-9);
        let c6 = 1.0 - (2.0 * std::f64::consts::PI / 6.0).cos();
        assert!((spectral_gap(&cycle(6)).unwrap() - c6).abs() < 1e-9);
    }

    #[test]
    fn spectral_gap_errors() {
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            spectral_gap(&two),
            Err(Error::Disconnected { zero_eigenvalues: 2 })
        ));
        assert!(matches!(spectral_gap(&Graph::empty(1)), Err(Error::NoSpectralGap)));
        assert!(spectral_gap(&Graph::empty(0)).is_err());
    }

    #[test]
    fn wasserstein_examples() {
        assert_eq!(wasserstein_1d(&[0.3, 0.1, 0.2], &[0.2, 0.3, 0.1]).unwrap(), 0.0);
        assert_eq!(wasserstein_1d(&[0.0], &[1.0]).unwrap(), 1.0);
        assert!((wasserstein_1d(&[0.0, 1.0], &[0.0, 2.0]).unwrap() - 0.5).abs() < 1e-12);
        assert!((wasserstein_1d(&[0.0, 0.0, 3.0], &[1.0]).unwrap() - (2.0 / 3.0 + 2.0 / 3.0)).abs() < 1e-12);
        assert!(wasserstein_1d(&[], &[1.0]).is_err());
    }

    #[test]
    fn saturation_examples() {
        let rows = saturation_analysis(&[4.0; 9], &[0.33, 0.66, 1.0]).unwrap();
        assert!(rows.iter().all(|r| r.mean == 4.0 && r.std == 0.0));
        assert_eq!(rows[0].wasserstein, None);
        assert!(rows[1..].iter().all(|r| r.wasserstein == Some(0.0)));

        let rows = saturation_analysis(&[1.0, 2.0], &[1.0]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].wasserstein, None);

        let ramp: Vec<f64> = (1..=100).map(f64::from).collect();
        let rows = saturation_analysis(&ramp, &[0.5, 1.0]).unwrap();
        assert_eq!((rows[0].count, rows[1].count), (50, 100));
        assert!((rows[0].mean - 25.5).abs() < 1e-12);
        assert!((rows[1].mean - 50.5).abs() < 1e-12);
    }

    #[test]
    fn saturation_errors() {
        assert!(saturation_analysis(&[1.0; 10], &[1e-12]).is_err());
        assert!(saturation_analysis(&[1.0; 10], &[0.5, 0.4]).is_err());
        assert!(saturation_analysis(&[1.0; 10], &[1.5]).is_err());
        assert!(saturation_analysis(&[], &[1.0]).is_err());
    }

    #[test]
    fn top_fraction_examples() {
        let ten: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(top_fraction_summary(&ten, 0.1).unwrap(), (10.0, 0.0));
        assert_eq!(top_fraction_summary(&[2.5; 7], 0.3).unwrap(), (2.5, 0.0));
        let hundred: Vec<f64> = (1..=100).map(f64::from).collect();
        assert!((top_fraction_summary(&hundred, 0.1).unwrap().0 - 95.5).abs() < 1e-12);
        // 0.1 * 70 evaluates slightly above 7 in binary floating point.
        let seventy: Vec<f64> = (1..=70).map(f64::from).collect();
        assert_eq!(
            top_fraction_summary_with(&seventy, 0.1, StdConvention::Population)
                .unwrap()
                .selected,
            7
        );
        assert!(top_fraction_summary(&ten, 0.0).is_err());
        assert!(top_fraction_summary(&[], 0.5).is_err());
    }

    #[test]
    fn std_conventions() {
        let v = [1.0, 3.0];
        assert_eq!(std_dev(&v, StdConvention::Population), 1.0);
        assert!((std_dev(&v, StdConvention::Sample) - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(std_dev(&[5.0], StdConvention::Sample), 0.0);
    }

    #[test]
    fn sample_csv() {
        let s = SampleSet::parse_csv("config_id,accuracy\n0,0.5\n1, 0.75\n", "t").unwrap();
        assert_eq!(s.values(), &[0.5, 0.75]);
        assert!(SampleSet::parse_csv("config_id,accuracy\n", "t").is_err());
        assert!(SampleSet::parse_csv("config_id,acc\n0,1\n", "t").is_err());
        assert!(matches!(
            SampleSet::parse_csv("config_id,accuracy\n0,0.5\n1,abc\n", "t"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
