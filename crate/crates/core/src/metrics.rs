//! Nondominance filtering, quality indicators and run summaries.

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MONTE_CARLO_SAMPLES: usize = 1_000_000;

/// True when `a` is no worse than `b` everywhere and better somewhere.
pub fn dominates(a: ArrayView1<f64>, b: ArrayView1<f64>) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Indices of the nondominated rows of `y`, in input order. Repeated rows
/// are kept once (first occurrence).
pub fn nondominated_indices(y: ArrayView2<f64>) -> Vec<usize> {
    let n = y.nrows();
    (0..n)
        .filter(|&i| {
            let yi = y.row(i);
            !(0..n).any(|j| j != i && (dominates(y.row(j), yi) || (j < i && y.row(j) == yi)))
        })
        .collect()
}

pub fn nondominated_filter(y: ArrayView2<f64>) -> Array2<f64> {
    y.select(Axis(0), &nondominated_indices(y))
}

/// Mean distance from each reference point to its nearest front point.
pub fn igd(front: ArrayView2<f64>, reference: ArrayView2<f64>) -> Result<f64> {
    if front.nrows() == 0 || reference.nrows() == 0 {
        return Err(Error::Invalid(
            "IGD needs a nonempty front and reference set".into(),
        ));
    }
    if front.ncols() != reference.ncols() {
        return Err(Error::Shape(format!(
            "front has {} objectives, reference has {}",
            front.ncols(),
            reference.ncols()
        )));
    }
    let total: f64 = reference
        .rows()
        .into_iter()
        .map(|r| {
            front
                .rows()
                .into_iter()
                .map(|f| {
                    f.iter()
                        .zip(&r)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference.nrows() as f64)
}

/// Componentwise maximum of the rows.
pub fn default_reference_point(front: ArrayView2<f64>) -> Vec<f64> {
    front
        .fold_axis(Axis(0), f64::NEG_INFINITY, |&a, &b| a.max(b))
        .to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypervolume {
    pub value: f64,
    /// Standard error of the Monte Carlo estimate; `None` when exact.
    pub std_error: Option<f64>,
    pub ref_point: Vec<f64>,
}

/// Exact 2-D hypervolume by a sweep over the first objective.
pub fn hv2d(points: &[[f64; 2]], r: [f64; 2]) -> f64 {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut hv = 0.0;
    let mut level = r[1];
    for p in pts {
        if p[1] < level {
            hv += (r[0] - p[0]) * (level - p[1]);
            level = p[1];
        }
    }
    hv
}

/// Exact hypervolume by slicing along the last objective.
fn hv_exact(points: &[Vec<f64>], r: &[f64]) -> f64 {
    let d = r.len();
    if points.is_empty() {
        return 0.0;
    }
    if d == 1 {
        let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        return (r[0] - lo).max(0.0);
    }
    if d == 2 {
        let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
        return hv2d(&pts, [r[0], r[1]]);
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a[d - 1].total_cmp(&b[d - 1]));
    let mut hv = 0.0;
    let mut slice: Vec<Vec<f64>> = Vec::with_capacity(sorted.len());
    for k in 0..sorted.len() {
        slice.push(sorted[k][..d - 1].to_vec());
        let top = if k + 1 < sorted.len() {
            sorted[k + 1][d - 1]
        } else {
            r[d - 1]
        };
        let depth = top - sorted[k][d - 1];
        if depth > 0.0 {
            hv += depth * hv_exact(&slice, &r[..d - 1]);
        }
    }
    hv
}

fn hv_monte_carlo(points: &[Vec<f64>], r: &[f64], samples: usize, seed: u64) -> (f64, f64) {
    let d = r.len();
    let lo: Vec<f64> = (0..d)
        .map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let volume: f64 = lo.iter().zip(r).map(|(a, b)| b - a).product();
    if volume <= 0.0 {
        return (0.0, 0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = vec![0.0; d];
    let mut hits = 0usize;
    for _ in 0..samples {
        for j in 0..d {
            s[j] = lo[j] + rng.random::<f64>() * (r[j] - lo[j]);
        }
        if points.iter().any(|p| p.iter().zip(&s).all(|(a, b)| a <= b)) {
            hits += 1;
        }
    }
    let frac = hits as f64 / samples as f64;
    (
        volume * frac,
        volume * (frac * (1.0 - frac) / samples as f64).sqrt(),
    )
}

/// Hypervolume of `front` with respect to `ref_point` (defaults to the
/// componentwise maximum of the front). Exact up to four objectives, Monte
/// Carlo beyond that.
pub fn hypervolume(
    front: ArrayView2<f64>,
    ref_point: Option<&[f64]>,
    seed: u64,
) -> Result<Hypervolume> {
    hypervolume_with_samples(front, ref_point, seed, MONTE_CARLO_SAMPLES)
}

pub fn hypervolume_with_samples(
    front: ArrayView2<f64>,
    ref_point: Option<&[f64]>,
    seed: u64,
    samples: usize,
) -> Result<Hypervolume> {
    let d = front.ncols();
    let r = match ref_point {
        Some(r) => r.to_vec(),
        None => {
            if front.nrows() == 0 {
                return Err(Error::Invalid(
                    "cannot default a reference point for an empty front".into(),
                ));
            }
            default_reference_point(front)
        }
    };
    if r.len() != d {
        return Err(Error::Shape(format!(
            "reference point has {} entries, front has {d} objectives",
            r.len()
        )));
    }
    for row in front.rows() {
        if row.iter().zip(&r).any(|(a, b)| a > b) {
            return Err(Error::Invalid(format!(
                "front point {:?} exceeds the reference point {:?}",
                row.to_vec(),
                r
            )));
        }
    }
    let pts: Vec<Vec<f64>> = nondominated_filter(front)
        .rows()
        .into_iter()
        .map(|p| p.to_vec())
        .collect();
    let (value, std_error) = if d <= 4 {
        (hv_exact(&pts, &r), None)
    } else {
        let (v, se) = hv_monte_carlo(&pts, &r, samples, seed);
        (v, Some(se))
    };
    Ok(Hypervolume {
        value,
        std_error,
        ref_point: r,
    })
}

/// Monte Carlo estimate for any dimension; used to cross-check the exact paths.
pub fn hypervolume_monte_carlo(
    front: ArrayView2<f64>,
    ref_point: &[f64],
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let pts: Vec<Vec<f64>> = front.rows().into_iter().map(|p| p.to_vec()).collect();
    hv_monte_carlo(&pts, ref_point, samples, seed)
}

/// Overview of a finished run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub evaluations: usize,
    pub iterations: usize,
    pub population: usize,
    pub feasible: usize,
    pub feasible_percent: f64,
    pub nondominated: usize,
    pub nondominated_percent: f64,
    /// Componentwise minimum of the feasible nondominated points.
    pub ideal: Vec<f64>,
    /// Componentwise maximum of the feasible nondominated points.
    pub nadir: Vec<f64>,
    pub hypervolume: f64,
    pub hypervolume_std_error: Option<f64>,
    pub ref_point: Vec<f64>,
}

/// Feasible nondominated rows of `y`.
pub fn final_front(y: ArrayView2<f64>, v: &[f64]) -> Array2<f64> {
    let feasible: Vec<usize> = (0..y.nrows()).filter(|&i| v[i] == 0.0).collect();
    nondominated_filter(y.select(Axis(0), &feasible).view())
}

pub fn summarize(
    y: ArrayView2<f64>,
    v: &[f64],
    evaluations: usize,
    iterations: usize,
    ref_point: Option<&[f64]>,
    seed: u64,
) -> Result<Summary> {
    let n = y.nrows();
    let feasible = v.iter().filter(|&&x| x == 0.0).count();
    let front = final_front(y, v);
    let pct = |k: usize| {
        if n == 0 {
            0.0
        } else {
            100.0 * k as f64 / n as f64
        }
    };
    let (ideal, nadir, hv) = if front.nrows() == 0 {
        let hv = Hypervolume {
            value: 0.0,
            std_error: None,
            ref_point: ref_point.map(<[f64]>::to_vec).unwrap_or_default(),
        };
        (Vec::new(), Vec::new(), hv)
    } else {
        let ideal = front
            .fold_axis(Axis(0), f64::INFINITY, |&a, &b| a.min(b))
            .to_vec();
        let nadir = default_reference_point(front.view());
        (ideal, nadir, hypervolume(front.view(), ref_point, seed)?)
    };
    Ok(Summary {
        evaluations,
        iterations,
        population: n,
        feasible,
        feasible_percent: pct(feasible),
        nondominated: front.nrows(),
        nondominated_percent: pct(front.nrows()),
        ideal,
        nadir,
        hypervolume: hv.value,
        hypervolume_std_error: hv.std_error,
        ref_point: hv.ref_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn filter_examples() {
        let y = array![[1.0, 2.0], [2.0, 1.0], [2.0, 2.0]];
        assert_eq!(nondominated_indices(y.view()), vec![0, 1]);
        let one = array![[3.0, 4.0]];
        assert_eq!(nondominated_indices(one.view()), vec![0]);
        let dup = array![[1.0, 2.0], [1.0, 2.0], [2.0, 1.0]];
        assert_eq!(nondominated_indices(dup.view()), vec![0, 2]);
    }

    #[test]
    fn igd_examples() {
        let f = array![[0.0, 0.0]];
        let r = array![[0.0, 1.0], [1.0, 0.0]];
        assert!((igd(f.view(), r.view()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(igd(r.view(), r.view()).unwrap(), 0.0);
        let empty = Array2::<f64>::zeros((0, 2));
        assert!(igd(empty.view(), r.view()).is_err());
    }

    #[test]
    fn hv_examples() {
        let f = array![[1.0, 2.0], [2.0, 1.0]];
        let hv = hypervolume(f.view(), Some(&[3.0, 3.0]), 0).unwrap();
        assert!((hv.value - 3.0).abs() < 1e-15);
        assert!(hv.std_error.is_none());

        let at_ref = array![[3.0, 3.0]];
        assert_eq!(
            hypervolume(at_ref.view(), Some(&[3.0, 3.0]), 0)
                .unwrap()
                .value,
            0.0
        );

        let f = array![[1.0, 4.0], [2.0, 3.0]];
        assert_eq!(
            hypervolume(f.view(), None, 0).unwrap().ref_point,
            vec![2.0, 4.0]
        );

        let f = array![[1.0, 5.0]];
        assert!(hypervolume(f.view(), Some(&[3.0, 3.0]), 0).is_err());
    }

    #[test]
    fn hv_3d_unit_cubes() {
        let f = array![[0.0, 0.0, 1.0], [0.0, 1.0, 0.0]];
        let hv = hypervolume(f.view(), Some(&[1.0, 2.0, 2.0]), 0)
            .unwrap()
            .value;
        // box1 = 1*2*1 = 2, box2 = 1*1*2 = 2, intersection = 1*1*1 = 1
        assert!((hv - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hv_5d_uses_monte_carlo() {
        let f = array![[0.0, 0.0, 0.0, 0.0, 0.0]];
        let hv = hypervolume_with_samples(f.view(), Some(&[1.0; 5]), 3, 10_000).unwrap();
        assert!((hv.value - 1.0).abs() < 1e-12);
        assert!(hv.std_error.is_some());
    }

    #[test]
    fn summary_counts() {
        let y = array![[1.0, 2.0], [2.0, 1.0], [2.0, 2.0], [0.0, 0.0]];
        let v = [0.0, 0.0, 0.0, 1.0];
        let s = summarize(y.view(), &v, 40, 3, None, 0).unwrap();
        assert_eq!((s.population, s.feasible, s.nondominated), (4, 3, 2));
        assert_eq!(s.feasible_percent, 75.0);
        assert_eq!(s.ideal, vec![1.0, 1.0]);
        assert_eq!(s.nadir, vec![2.0, 2.0]);
        assert_eq!(s.ref_point, vec![2.0, 2.0]);
        assert!((s.hypervolume - 0.0).abs() < 1e-15);
    }
}
