//! Neighborhood assignment and the sampling distribution used by the
//! variation operators.

use ndarray::{Array2, ArrayView2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Space in which subproblem distances are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeighborhoodKind {
    /// Distances between weight vectors; computed once per run.
    #[serde(rename = "lambda")]
    ByWeights,
    /// Distances between incumbent solutions; recomputed every iteration.
    #[serde(rename = "x")]
    ByIncumbents,
}

impl NeighborhoodKind {
    pub fn name(self) -> &'static str {
        match self {
            NeighborhoodKind::ByWeights => "lambda",
            NeighborhoodKind::ByIncumbents => "x",
        }
    }
}

/// Indices of the `t` nearest rows of `points` for every row. Row `i` always
/// lists `i` first; the rest follow by ascending distance, ties by index.
pub fn nearest_neighbors(points: ArrayView2<f64>, t: usize) -> Result<Vec<Vec<usize>>> {
    let n = points.nrows();
    if t == 0 || t > n {
        return Err(Error::param(
            "neighborhood.t",
            format!("neighborhood size {t} must lie in [1, {n}]"),
        ));
    }
    let mut table = Vec::with_capacity(n);
    let mut dist = vec![0.0; n];
    for i in 0..n {
        let pi = points.row(i);
        for (j, d) in dist.iter_mut().enumerate() {
            *d = pi
                .iter()
                .zip(points.row(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
        }
        let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
        let mut row = Vec::with_capacity(t);
        row.push(i);
        row.extend_from_slice(&order[..t - 1]);
        table.push(row);
    }
    Ok(table)
}

pub fn assign_neighborhood_by_lambda(
    weights: ArrayView2<f64>,
    t: usize,
) -> Result<Vec<Vec<usize>>> {
    nearest_neighbors(weights, t)
}

pub fn assign_neighborhood_by_x(x: ArrayView2<f64>, t: usize) -> Result<Vec<Vec<usize>>> {
    nearest_neighbors(x, t)
}

fn check_delta(delta_p: f64, n: usize, t: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&delta_p) {
        return Err(Error::param(
            "neighborhood.delta_p",
            format!("{delta_p} is outside [0, 1]"),
        ));
    }
    if delta_p < 1.0 && t >= n {
        return Err(Error::param(
            "neighborhood.delta_p",
            format!("delta_p = {delta_p} < 1 leaves probability mass outside a neighborhood that already spans all {n} subproblems"),
        ));
    }
    Ok(())
}

/// Dense `N x N` sampling matrix: `delta_p / T` inside `b_i`, `(1 - delta_p) / (N - T)` outside.
pub fn sampling_probabilities(
    b: &[Vec<usize>],
    delta_p: f64,
    n: usize,
    t: usize,
) -> Result<Array2<f64>> {
    check_delta(delta_p, n, t)?;
    let inside = delta_p / t as f64;
    let outside = if n > t {
        (1.0 - delta_p) / (n - t) as f64
    } else {
        0.0
    };
    let mut p = Array2::from_elem((n, n), outside);
    for (i, row) in b.iter().enumerate() {
        for &j in row {
            p[[i, j]] = inside;
        }
    }
    Ok(p)
}

/// Neighborhood matrix `B` together with the in-neighborhood sampling mass.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodTable {
    pub kind: NeighborhoodKind,
    pub neighbors: Vec<Vec<usize>>,
    pub size: usize,
    pub delta_p: f64,
    membership: Vec<Vec<bool>>,
}

impl NeighborhoodTable {
    pub fn new(kind: NeighborhoodKind, neighbors: Vec<Vec<usize>>, delta_p: f64) -> Result<Self> {
        let n = neighbors.len();
        let size = neighbors.first().map_or(0, Vec::len);
        if neighbors.iter().any(|r| r.len() != size) {
            return Err(Error::Shape("neighborhood rows differ in length".into()));
        }
        check_delta(delta_p, n, size)?;
        let membership = neighbors
            .iter()
            .map(|row| {
                let mut m = vec![false; n];
                for &j in row {
                    m[j] = true;
                }
                m
            })
            .collect();
        Ok(NeighborhoodTable {
            kind,
            neighbors,
            size,
            delta_p,
            membership,
        })
    }

    pub fn build(
        kind: NeighborhoodKind,
        points: ArrayView2<f64>,
        t: usize,
        delta_p: f64,
    ) -> Result<Self> {
        Self::new(kind, nearest_neighbors(points, t)?, delta_p)
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.membership[i][j]
    }

    pub fn probabilities(&self) -> Array2<f64> {
        sampling_probabilities(&self.neighbors, self.delta_p, self.len(), self.size)
            .expect("validated on construction")
    }

    /// Number of indices with nonzero sampling probability for any row.
    pub fn support(&self) -> usize {
        let n = self.len();
        let mut s = 0;
        if self.delta_p > 0.0 {
            s += self.size;
        }
        if self.delta_p < 1.0 {
            s += n - self.size;
        }
        s
    }

    /// Draws `k` distinct indices from row `i` of the sampling matrix, without
    /// replacement: each draw renormalizes over the indices still available.
    pub fn sample_distinct<R: Rng + ?Sized>(
        &self,
        i: usize,
        k: usize,
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        let n = self.len();
        if k > self.support() {
            return Err(Error::Invalid(format!(
                "cannot draw {k} distinct parents: only {} subproblems have nonzero sampling probability \
                 (neighborhood size {}, delta_p {})",
                self.support(),
                self.size,
                self.delta_p
            )));
        }
        let t = self.size;
        let mass_in = if t > 0 { self.delta_p / t as f64 } else { 0.0 };
        let mass_out = if n > t {
            (1.0 - self.delta_p) / (n - t) as f64
        } else {
            0.0
        };

        let mut chosen = Vec::with_capacity(k);
        let mut taken_in = 0;
        let mut taken_out = 0;
        for _ in 0..k {
            let w_in = mass_in * (t - taken_in) as f64;
            let w_out = mass_out * (n - t - taken_out) as f64;
            let pick_inside = rng.random::<f64>() * (w_in + w_out) < w_in;
            if pick_inside {
                let mut r = rng.random_range(0..t - taken_in);
                let j = *self.neighbors[i]
                    .iter()
                    .find(|j| {
                        if chosen.contains(*j) {
                            return false;
                        }
                        if r == 0 {
                            return true;
                        }
                        r -= 1;
                        false
                    })
                    .expect("an unchosen neighbor remains");
                chosen.push(j);
                taken_in += 1;
            } else {
                let j = loop {
                    let j = rng.random_range(0..n);
                    if !self.membership[i][j] && !chosen.contains(&j) {
                        break j;
                    }
                };
                chosen.push(j);
                taken_out += 1;
            }
        }
        Ok(chosen)
    }
}
