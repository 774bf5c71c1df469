//! Simulated binary crossover.

use ndarray::Array2;
use rand::{Rng, RngCore};

use super::{VariationContext, VariationOperator};
use crate::error::Result;

/// Spread factor for one coordinate: contracting (`beta <= 1`) for
/// `u <= 0.5`, expanding (`beta > 1`) above.
pub fn sbx_beta(u: f64, eta: f64) -> f64 {
    let e = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(e)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(e)
    }
}

/// `((1 + beta) * xa + (1 - beta) * xb) / 2`, coordinatewise.
pub fn sbx_child(xa: &[f64], xb: &[f64], u: &[f64], eta: f64) -> Vec<f64> {
    xa.iter()
        .zip(xb)
        .zip(u)
        .map(|((a, b), &u)| {
            let beta = sbx_beta(u, eta);
            ((1.0 + beta) * a + (1.0 - beta) * b) / 2.0
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Sbx {
    pub eta: f64,
    pub prob: f64,
}

impl Sbx {
    pub fn new(eta: f64, prob: f64) -> Self {
        Sbx { eta, prob }
    }
}

impl VariationOperator for Sbx {
    fn name(&self) -> &str {
        "sbx"
    }

    /// Each coordinate of the child is spread around one of the two parents,
    /// chosen with equal probability, so children mix coordinates from both.
    fn apply(
        &self,
        xp: &mut Array2<f64>,
        ctx: &VariationContext,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        let source = xp.clone();
        let n_v = xp.ncols();
        let mut u = vec![0.0; n_v];
        let mut flip = vec![false; n_v];
        for i in 0..xp.nrows() {
            if rng.random::<f64>() >= self.prob {
                continue;
            }
            let parents = ctx.neighborhood.sample_distinct(i, 2, rng)?;
            for v in u.iter_mut() {
                *v = rng.random::<f64>();
            }
            for f in flip.iter_mut() {
                *f = rng.random::<f64>() < 0.5;
            }
            let xa = source.row(parents[0]);
            let xb = source.row(parents[1]);
            for (j, out) in xp.row_mut(i).iter_mut().enumerate() {
                let (a, b) = if flip[j] {
                    (xb[j], xa[j])
                } else {
                    (xa[j], xb[j])
                };
                let beta = sbx_beta(u[j], self.eta);
                *out = ((1.0 + beta) * a + (1.0 - beta) * b) / 2.0;
            }
        }
        Ok(())
    }
}
