//! Differential mutation with random, mean or weighted-intermediate basis vectors.

use ndarray::{Array1, Array2, ArrayView2};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{open_unit, VariationContext, VariationOperator};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Rand,
    Mean,
    Wgi,
}

impl Basis {
    pub fn parse(s: &str) -> Option<Basis> {
        match s {
            "rand" => Some(Basis::Rand),
            "mean" => Some(Basis::Mean),
            "wgi" => Some(Basis::Wgi),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiSpec {
    Constant(f64),
    /// Fresh `phi ~ U(0, 1]` for every generated row.
    Random,
}

/// Normalized log-rank weights `w'_k = ln(T + 0.5) - ln(k)`, `k = 1..T`.
pub fn wgi_weights(t: usize) -> Vec<f64> {
    let raw: Vec<f64> = (1..=t)
        .map(|k| (t as f64 + 0.5).ln() - (k as f64).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// `basis + phi * (xa - xb)`
pub fn differential_child(basis: &[f64], xa: &[f64], xb: &[f64], phi: f64) -> Vec<f64> {
    basis
        .iter()
        .zip(xa)
        .zip(xb)
        .map(|((b, a), c)| b + phi * (a - c))
        .collect()
}

/// Neighborhood of `i` ordered by increasing aggregation value of the
/// incumbents (stable, so ties keep neighborhood order).
pub fn neighbors_by_utility(ctx: &VariationContext, i: usize) -> Vec<usize> {
    let mut order: Vec<(f64, usize)> = ctx.neighborhood.neighbors[i]
        .iter()
        .map(|&j| (ctx.scalarization.utility(ctx.objectives.row(j), i), j))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    order.into_iter().map(|(_, j)| j).collect()
}

fn weighted_point(x: ArrayView2<f64>, rows: &[usize], weights: &[f64]) -> Array1<f64> {
    let mut out = Array1::zeros(x.ncols());
    for (&r, &w) in rows.iter().zip(weights) {
        out.scaled_add(w, &x.row(r));
    }
    out
}

#[derive(Debug, Clone)]
pub struct DifferentialMutation {
    pub basis: Basis,
    pub phi: PhiSpec,
}

impl DifferentialMutation {
    pub fn new(basis: Basis, phi: PhiSpec) -> Self {
        DifferentialMutation { basis, phi }
    }
}

impl VariationOperator for DifferentialMutation {
    fn name(&self) -> &str {
        "diffmut"
    }

    fn apply(
        &self,
        xp: &mut Array2<f64>,
        ctx: &VariationContext,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        let source = xp.clone();
        let t = ctx.neighborhood.size;
        let wgi = match self.basis {
            Basis::Wgi => wgi_weights(t),
            _ => Vec::new(),
        };
        let mean = vec![1.0 / t as f64; t];
        for i in 0..xp.nrows() {
            let (basis, a, b) = match self.basis {
                Basis::Rand => {
                    let s = ctx.neighborhood.sample_distinct(i, 3, rng)?;
                    (source.row(s[0]).to_owned(), s[1], s[2])
                }
                Basis::Mean | Basis::Wgi => {
                    let s = ctx.neighborhood.sample_distinct(i, 2, rng)?;
                    let order = neighbors_by_utility(ctx, i);
                    let w = if self.basis == Basis::Wgi {
                        &wgi
                    } else {
                        &mean
                    };
                    (weighted_point(source.view(), &order, w), s[0], s[1])
                }
            };
            let phi = match self.phi {
                PhiSpec::Constant(v) => v,
                PhiSpec::Random => open_unit(rng),
            };
            let xa = source.row(a);
            let xb = source.row(b);
            for (j, out) in xp.row_mut(i).iter_mut().enumerate() {
                *out = basis[j] + phi * (xa[j] - xb[j]);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_phi_returns_basis() {
        let c = differential_child(&[0.1, 0.2], &[0.9, 0.3], &[0.4, 0.8], 0.0);
        assert_eq!(c, vec![0.1, 0.2]);
    }

    #[test]
    fn equal_difference_vectors_return_basis() {
        for phi in [0.3, 1.0, -2.0] {
            let c = differential_child(&[0.1, 0.2], &[0.5, 0.5], &[0.5, 0.5], phi);
            assert_eq!(c, vec![0.1, 0.2]);
        }
    }

    #[test]
    fn wgi_weights_for_four() {
        let w = wgi_weights(4);
        let raw: Vec<f64> = (1..=4).map(|k| 4.5f64.ln() - (k as f64).ln()).collect();
        let s: f64 = raw.iter().sum();
        for (a, b) in w.iter().zip(&raw) {
            assert!((a - b / s).abs() < 1e-12);
        }
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.windows(2).all(|p| p[0] > p[1]));
    }

    #[test]
    fn constant_zero_phi_rand_basis_copies_sampled_rows() {
        let fx = Fixture::new(9, 3, 4, 1.0, 5);
        let mut xp = fx.x.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        DifferentialMutation::new(Basis::Rand, PhiSpec::Constant(0.0))
            .apply(&mut xp, &fx.ctx(), &mut rng)
            .unwrap();
        for i in 0..xp.nrows() {
            let hit = fx.table.neighbors[i]
                .iter()
                .any(|&j| fx.x.row(j) == xp.row(i));
            assert!(hit, "row {i} is not a neighbor's copy");
        }
    }

    #[test]
    fn zero_phi_mean_basis_is_neighborhood_mean() {
        let fx = Fixture::new(9, 3, 4, 1.0, 5);
        let mut xp = fx.x.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        DifferentialMutation::new(Basis::Mean, PhiSpec::Constant(0.0))
            .apply(&mut xp, &fx.ctx(), &mut rng)
            .unwrap();
        for i in 0..xp.nrows() {
            for c in 0..3 {
                let m: f64 = fx.table.neighbors[i]
                    .iter()
                    .map(|&j| fx.x[[j, c]])
                    .sum::<f64>()
                    / 4.0;
                assert!((xp[[i, c]] - m).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_phi_wgi_weights_best_neighbor_most() {
        let fx = Fixture::new(9, 3, 4, 1.0, 5);
        let mut xp = fx.x.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        DifferentialMutation::new(Basis::Wgi, PhiSpec::Constant(0.0))
            .apply(&mut xp, &fx.ctx(), &mut rng)
            .unwrap();
        let w = wgi_weights(4);
        for i in 0..xp.nrows() {
            let mut ranked: Vec<(f64, usize)> = fx.table.neighbors[i]
                .iter()
                .map(|&j| (fx.scal.utility(fx.y.row(j), i), j))
                .collect();
            ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for c in 0..3 {
                let expected: f64 = ranked
                    .iter()
                    .zip(&w)
                    .map(|((_, j), wk)| wk * fx.x[[*j, c]])
                    .sum();
                assert!((xp[[i, c]] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rand_basis_needs_three_subproblems() {
        let fx = Fixture::new(1, 2, 2, 1.0, 0);
        let mut xp = fx.x.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = DifferentialMutation::new(Basis::Rand, PhiSpec::Random)
            .apply(&mut xp, &fx.ctx(), &mut rng)
            .unwrap_err();
        assert!(err.to_string().contains("distinct"));
    }
}
