//! Scalar aggregation functions and objective scaling.
//!
//! Every function maps an objective vector `f`, a weight row `lambda` and the
//! current ideal/nadir estimates to a single utility value; lower is better.

use std::fmt::Debug;
use std::sync::Arc;

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default `epsilon` of the adjusted Tchebycheff weight inversion.
pub const DEFAULT_AWT_EPSILON: f64 = 1e-4;

/// Objective ranges below this are treated as flat by the simple scaling.
pub const DEGENERATE_RANGE: f64 = 1e-16;

pub trait Scalarization: Send + Sync + Debug {
    fn name(&self) -> &str;

    /// Utility of `f` for the subproblem with weights `lambda`.
    fn value(&self, f: &[f64], lambda: &[f64], ideal: &[f64], nadir: &[f64]) -> f64;
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `lambda . (f - z)`
pub fn ws_value(f: &[f64], lambda: &[f64], z: &[f64]) -> f64 {
    f.iter()
        .zip(z)
        .zip(lambda)
        .map(|((fi, zi), l)| l * (fi - zi))
        .sum()
}

/// `max_j lambda_j (f_j - z_j)`
pub fn wt_value(f: &[f64], lambda: &[f64], z: &[f64]) -> f64 {
    f.iter()
        .zip(z)
        .zip(lambda)
        .map(|((fi, zi), l)| l * (fi - zi))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Normalized inverse weights `rho_j = (lambda_j + eps)^-1 / sum_k (lambda_k + eps)^-1`.
pub fn awt_rho(lambda: &[f64], eps: f64) -> Vec<f64> {
    let inv: Vec<f64> = lambda.iter().map(|l| 1.0 / (l + eps)).collect();
    let total: f64 = inv.iter().sum();
    inv.into_iter().map(|x| x / total).collect()
}

pub fn awt_value(f: &[f64], lambda: &[f64], z: &[f64], eps: f64) -> f64 {
    wt_value(f, &awt_rho(lambda, eps), z)
}

/// Returns `(d1, d2)` for the direction `lambda` from `origin` to `f`.
fn boundary_distances(diff: &[f64], lambda: &[f64]) -> (f64, f64) {
    let ln = norm(lambda);
    let d1 = dot(diff, lambda).abs() / ln;
    let d2 = diff
        .iter()
        .zip(lambda)
        .map(|(d, l)| {
            let r = d - d1 * l / ln;
            r * r
        })
        .sum::<f64>()
        .sqrt();
    (d1, d2)
}

/// `d1 + theta * d2` measured from the ideal point.
pub fn pbi_value(f: &[f64], lambda: &[f64], z: &[f64], theta: f64) -> f64 {
    let diff: Vec<f64> = f.iter().zip(z).map(|(a, b)| a - b).collect();
    let (d1, d2) = boundary_distances(&diff, lambda);
    d1 + theta * d2
}

/// `theta * d2 - d1` measured from the nadir point towards `f`.
pub fn ipbi_value(f: &[f64], lambda: &[f64], nadir: &[f64], theta: f64) -> f64 {
    let diff: Vec<f64> = nadir.iter().zip(f).map(|(a, b)| a - b).collect();
    let (d1, d2) = boundary_distances(&diff, lambda);
    theta * d2 - d1
}

#[derive(Debug, Clone, Copy, Default)]
pub struct WeightedSum;

#[derive(Debug, Clone, Copy, Default)]
pub struct WeightedTchebycheff;

#[derive(Debug, Clone, Copy)]
pub struct AdjustedTchebycheff {
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Pbi {
    pub theta: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct InvertedPbi {
    pub theta: f64,
}

impl Default for AdjustedTchebycheff {
    fn default() -> Self {
        AdjustedTchebycheff {
            epsilon: DEFAULT_AWT_EPSILON,
        }
    }
}

impl Scalarization for WeightedSum {
    fn name(&self) -> &str {
        "ws"
    }
    fn value(&self, f: &[f64], lambda: &[f64], ideal: &[f64], _nadir: &[f64]) -> f64 {
        ws_value(f, lambda, ideal)
    }
}

impl Scalarization for WeightedTchebycheff {
    fn name(&self) -> &str {
        "wt"
    }
    fn value(&self, f: &[f64], lambda: &[f64], ideal: &[f64], _nadir: &[f64]) -> f64 {
        wt_value(f, lambda, ideal)
    }
}

impl Scalarization for AdjustedTchebycheff {
    fn name(&self) -> &str {
        "awt"
    }
    fn value(&self, f: &[f64], lambda: &[f64], ideal: &[f64], _nadir: &[f64]) -> f64 {
        awt_value(f, lambda, ideal, self.epsilon)
    }
}

impl Scalarization for Pbi {
    fn name(&self) -> &str {
        "pbi"
    }
    fn value(&self, f: &[f64], lambda: &[f64], ideal: &[f64], _nadir: &[f64]) -> f64 {
        pbi_value(f, lambda, ideal, self.theta)
    }
}

impl Scalarization for InvertedPbi {
    fn name(&self) -> &str {
        "ipbi"
    }
    fn value(&self, f: &[f64], lambda: &[f64], _ideal: &[f64], nadir: &[f64]) -> f64 {
        ipbi_value(f, lambda, nadir, self.theta)
    }
}

fn check_shapes(y: &ArrayView2<f64>, weights: &ArrayView2<f64>, reference: &[f64]) -> Result<()> {
    if y.dim() != weights.dim() || reference.len() != y.ncols() {
        return Err(Error::Shape(format!(
            "objectives {:?}, weights {:?} and reference point of length {} do not conform",
            y.dim(),
            weights.dim(),
            reference.len()
        )));
    }
    Ok(())
}

fn check_nonzero_rows(weights: &ArrayView2<f64>) -> Result<()> {
    if let Some(i) = weights
        .rows()
        .into_iter()
        .position(|r| r.iter().all(|&x| x == 0.0))
    {
        return Err(Error::Invalid(format!("weight row {i} has zero norm")));
    }
    Ok(())
}

fn rowwise(
    y: ArrayView2<f64>,
    weights: ArrayView2<f64>,
    reference: &[f64],
    value: impl Fn(&[f64], &[f64]) -> f64,
) -> Result<Vec<f64>> {
    check_shapes(&y, &weights, reference)?;
    Ok(y.rows()
        .into_iter()
        .zip(weights.rows())
        .map(|(f, l)| value(&f.to_vec(), &l.to_vec()))
        .collect())
}

/// Row `i` of `y` aggregated with row `i` of `weights`.
pub fn scalarize_ws(y: ArrayView2<f64>, weights: ArrayView2<f64>, z: &[f64]) -> Result<Vec<f64>> {
    rowwise(y, weights, z, |f, l| ws_value(f, l, z))
}

pub fn scalarize_wt(y: ArrayView2<f64>, weights: ArrayView2<f64>, z: &[f64]) -> Result<Vec<f64>> {
    rowwise(y, weights, z, |f, l| wt_value(f, l, z))
}

pub fn scalarize_awt(
    y: ArrayView2<f64>,
    weights: ArrayView2<f64>,
    z: &[f64],
    eps: f64,
) -> Result<Vec<f64>> {
    rowwise(y, weights, z, |f, l| awt_value(f, l, z, eps))
}

pub fn scalarize_pbi(
    y: ArrayView2<f64>,
    weights: ArrayView2<f64>,
    z: &[f64],
    theta: f64,
) -> Result<Vec<f64>> {
    check_nonzero_rows(&weights)?;
    rowwise(y, weights, z, |f, l| pbi_value(f, l, z, theta))
}

pub fn scalarize_ipbi(
    y: ArrayView2<f64>,
    weights: ArrayView2<f64>,
    nadir: &[f64],
    theta: f64,
) -> Result<Vec<f64>> {
    check_nonzero_rows(&weights)?;
    rowwise(y, weights, nadir, |f, l| ipbi_value(f, l, nadir, theta))
}

/// Objective-space normalization applied before aggregation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    #[default]
    None,
    Simple,
}

/// `(y - ideal) / (nadir - ideal)` per column; flat columns map to 0.
pub fn scale_objectives(y: ArrayView2<f64>, ideal: &[f64], nadir: &[f64]) -> Array2<f64> {
    let mut out = y.to_owned();
    for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
        let range = nadir[j] - ideal[j];
        if range < DEGENERATE_RANGE {
            col.fill(0.0);
        } else {
            col.mapv_inplace(|v| (v - ideal[j]) / range);
        }
    }
    out
}

/// Online estimates of the ideal and nadir points.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoints {
    pub ideal: Vec<f64>,
    pub nadir: Vec<f64>,
}

fn column_extremes(y: &ArrayView2<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    if y.nrows() == 0 {
        return Err(Error::Shape(
            "reference points need at least one objective vector".into(),
        ));
    }
    if let Some(pos) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::Invalid(format!(
            "non-finite objective value in row {}",
            pos / y.ncols().max(1)
        )));
    }
    let lo = y
        .fold_axis(Axis(0), f64::INFINITY, |&a, &b| a.min(b))
        .to_vec();
    let hi = y
        .fold_axis(Axis(0), f64::NEG_INFINITY, |&a, &b| a.max(b))
        .to_vec();
    Ok((lo, hi))
}

impl ReferencePoints {
    pub fn from_objectives(y: ArrayView2<f64>) -> Result<Self> {
        let (ideal, nadir) = column_extremes(&y)?;
        Ok(ReferencePoints { ideal, nadir })
    }

    /// Folds `current` (incumbents plus candidates of this iteration) in: the
    /// ideal keeps the running minimum over everything seen, the nadir is the
    /// maximum over `current` only.
    pub fn update(&mut self, current: ArrayView2<f64>) -> Result<()> {
        let (lo, hi) = column_extremes(&current)?;
        for (z, l) in self.ideal.iter_mut().zip(lo) {
            *z = z.min(l);
        }
        self.nadir = hi;
        Ok(())
    }
}

/// Everything needed to compute the utility of a point for any subproblem.
#[derive(Debug, Clone)]
pub struct ScalarizationContext {
    pub weights: Array2<f64>,
    pub reference: ReferencePoints,
    pub scaling: Scaling,
    pub method: Arc<dyn Scalarization>,
}

impl ScalarizationContext {
    pub fn n_subproblems(&self) -> usize {
        self.weights.nrows()
    }

    /// Utility of objective vector `f` for subproblem `sub`.
    pub fn utility(&self, f: ArrayView1<f64>, sub: usize) -> f64 {
        let lambda = self.weights.row(sub);
        let lambda = lambda.as_slice().expect("weights are contiguous");
        match self.scaling {
            Scaling::None => {
                let f = f.to_vec();
                self.method
                    .value(&f, lambda, &self.reference.ideal, &self.reference.nadir)
            }
            Scaling::Simple => {
                let ideal = &self.reference.ideal;
                let nadir = &self.reference.nadir;
                let scaled: Vec<f64> = f
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let range = nadir[j] - ideal[j];
                        if range < DEGENERATE_RANGE {
                            0.0
                        } else {
                            (v - ideal[j]) / range
                        }
                    })
                    .collect();
                let zeros = vec![0.0; scaled.len()];
                let ones = vec![1.0; scaled.len()];
                self.method.value(&scaled, lambda, &zeros, &ones)
            }
        }
    }

    /// Utility of every row of `y` for subproblem `sub`.
    pub fn utilities(&self, y: ArrayView2<f64>, sub: usize) -> Vec<f64> {
        y.rows().into_iter().map(|f| self.utility(f, sub)).collect()
    }

    /// Utility of row `i` of `y` for subproblem `i`.
    pub fn diagonal(&self, y: ArrayView2<f64>) -> Vec<f64> {
        y.rows()
            .into_iter()
            .enumerate()
            .map(|(i, f)| self.utility(f, i))
            .collect()
    }
}
