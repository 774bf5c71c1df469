//! Local search operators and their per-iteration gating.

use std::sync::Arc;

use ndarray::Array2;
use rand::seq::index::sample;
use rand::{Rng, RngCore};
use rand_distr::{Distribution, Normal};

use super::{Evaluate, LocalSearch, VariationContext};
use crate::error::Result;

pub const DEFAULT_TPQA_EPSILON: f64 = 1e-6;

/// When local search replaces the ordinary operators for a subproblem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalSearchGate {
    /// Every subproblem, at iterations `t > 0` with `t % period == 0`.
    Period(usize),
    /// Each subproblem independently with this probability, every iteration.
    Probability(f64),
}

impl LocalSearchGate {
    /// Rows gated at iteration `t`. The probability form draws one uniform
    /// per subproblem; the period form draws nothing.
    pub fn select(&self, n: usize, t: usize, rng: &mut dyn RngCore) -> Vec<usize> {
        match *self {
            LocalSearchGate::Period(p) => {
                if p > 0 && t > 0 && t % p == 0 {
                    (0..n).collect()
                } else {
                    Vec::new()
                }
            }
            LocalSearchGate::Probability(g) => (0..n).filter(|_| rng.random::<f64>() < g).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LocalSearchStage {
    pub method: Arc<dyn LocalSearch>,
    pub gate: LocalSearchGate,
}

/// Vertex of the parabola through `(x[k], f[k])`, or the best point's
/// coordinate when the three points are (nearly) collinear.
pub fn tpqa_coordinate(x: [f64; 3], f: [f64; 3], epsilon: f64) -> f64 {
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| f[a].total_cmp(&f[b]));
    let (x1, x2, x3) = (x[idx[0]], x[idx[1]], x[idx[2]]);
    let (f1, f2, f3) = (f[idx[0]], f[idx[1]], f[idx[2]]);
    let q = (x2 - x3) * f1 + (x3 - x1) * f2 + (x1 - x2) * f3;
    if q.abs() < epsilon {
        return x1;
    }
    ((x2 * x2 - x3 * x3) * f1 + (x3 * x3 - x1 * x1) * f2 + (x1 * x1 - x2 * x2) * f3) / (2.0 * q)
}

/// Applies [`tpqa_coordinate`] to every coordinate of three points.
pub fn tpqa_point(points: [&[f64]; 3], f: [f64; 3], epsilon: f64) -> Vec<f64> {
    (0..points[0].len())
        .map(|j| tpqa_coordinate([points[0][j], points[1][j], points[2][j]], f, epsilon))
        .collect()
}

/// Three-point quadratic approximation over the best incumbents in the
/// neighborhood. Uses cached objective values, so it costs no evaluations.
#[derive(Debug, Clone)]
pub struct Tpqa {
    pub epsilon: f64,
}

impl Default for Tpqa {
    fn default() -> Self {
        Tpqa {
            epsilon: DEFAULT_TPQA_EPSILON,
        }
    }
}

impl LocalSearch for Tpqa {
    fn name(&self) -> &str {
        "tpqa"
    }

    fn search(
        &self,
        rows: &[usize],
        xp: &mut Array2<f64>,
        ctx: &VariationContext,
        _eval: &mut dyn Evaluate,
        _rng: &mut dyn RngCore,
    ) -> Result<()> {
        let x = ctx.incumbents;
        for &i in rows {
            let mut ranked: Vec<(f64, usize)> = ctx.neighborhood.neighbors[i]
                .iter()
                .map(|&j| (ctx.scalarization.utility(ctx.objectives.row(j), i), j))
                .collect();
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut picked: Vec<(f64, usize)> = Vec::with_capacity(3);
            for &(f, j) in &ranked {
                if picked.iter().all(|&(_, k)| x.row(k) != x.row(j)) {
                    picked.push((f, j));
                    if picked.len() == 3 {
                        break;
                    }
                }
            }
            let best = ranked[0].1;
            let new_row = if picked.len() < 3 {
                x.row(best).to_vec()
            } else {
                let p: Vec<Vec<f64>> = picked.iter().map(|&(_, j)| x.row(j).to_vec()).collect();
                tpqa_point(
                    [&p[0], &p[1], &p[2]],
                    [picked[0].0, picked[1].0, picked[2].0],
                    self.epsilon,
                )
            };
            for (out, v) in xp.row_mut(i).iter_mut().zip(new_row) {
                *out = v.clamp(0.0, 1.0);
            }
        }
        Ok(())
    }
}

/// First index of the smallest value.
pub fn first_argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = k;
        }
    }
    best
}

/// Differential-vector local search: tries `x_i +/- phi (x_a - x_b)` with
/// `phi ~ N(0.5, 0.1)` and keeps the best of the incumbent and both probes.
/// Costs two evaluations per searched subproblem.
#[derive(Debug, Clone)]
pub struct Dvls {
    pub mean: f64,
    pub sd: f64,
}

impl Default for Dvls {
    fn default() -> Self {
        Dvls { mean: 0.5, sd: 0.1 }
    }
}

impl LocalSearch for Dvls {
    fn name(&self) -> &str {
        "dvls"
    }

    fn search(
        &self,
        rows: &[usize],
        xp: &mut Array2<f64>,
        ctx: &VariationContext,
        eval: &mut dyn Evaluate,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        let normal = Normal::new(self.mean, self.sd)
            .map_err(|e| crate::error::Error::param("variation.localsearch.sd", e.to_string()))?;
        let n_v = xp.ncols();
        let source = xp.clone();
        let mut searched = Vec::new();
        let mut probes = Vec::new();
        for &i in rows {
            let others: Vec<usize> = ctx.neighborhood.neighbors[i]
                .iter()
                .copied()
                .filter(|&j| j != i)
                .collect();
            if others.len() < 2 {
                continue;
            }
            let pick = sample(rng, others.len(), 2);
            let (a, b) = (others[pick.index(0)], others[pick.index(1)]);
            let phi: f64 = normal.sample(rng);
            let base = ctx.incumbents.row(i);
            for sign in [1.0, -1.0] {
                for j in 0..n_v {
                    let v = base[j] + sign * phi * (source[[a, j]] - source[[b, j]]);
                    probes.push(v.clamp(0.0, 1.0));
                }
            }
            searched.push(i);
        }
        if searched.is_empty() {
            return Ok(());
        }
        let probes = Array2::from_shape_vec((2 * searched.len(), n_v), probes)
            .expect("probe buffer has two rows per searched subproblem");
        let fy = eval.evaluate(probes.view())?;
        for (k, &i) in searched.iter().enumerate() {
            let scores = [
                ctx.scalarization.utility(ctx.objectives.row(i), i),
                ctx.scalarization.utility(fy.row(2 * k), i),
                ctx.scalarization.utility(fy.row(2 * k + 1), i),
            ];
            let winner = match first_argmin(&scores) {
                0 => ctx.incumbents.row(i),
                w => probes.row(2 * k + w - 1),
            };
            xp.row_mut(i).assign(&winner);
        }
        Ok(())
    }
}
