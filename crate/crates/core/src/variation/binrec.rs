//! Binomial recombination between varied candidates and the incumbents.

use ndarray::Array2;
use rand::{Rng, RngCore};

use super::{VariationContext, VariationOperator};
use crate::error::Result;

/// Coordinate `j` comes from `donor` when `u[j] <= rho`, otherwise from the
/// incumbent. If nothing was taken from the donor, coordinate `k` is.
pub fn binomial_child(donor: &[f64], incumbent: &[f64], u: &[f64], rho: f64, k: usize) -> Vec<f64> {
    let mut out: Vec<f64> = donor
        .iter()
        .zip(incumbent)
        .zip(u)
        .map(|((&d, &x), &u)| if u <= rho { d } else { x })
        .collect();
    if out.as_slice() == incumbent {
        out[k] = donor[k];
    }
    out
}

#[derive(Debug, Clone)]
pub struct BinomialRecombination {
    pub rho: f64,
}

impl BinomialRecombination {
    pub fn new(rho: f64) -> Self {
        BinomialRecombination { rho }
    }
}

impl VariationOperator for BinomialRecombination {
    fn name(&self) -> &str {
        "binrec"
    }

    fn apply(
        &self,
        xp: &mut Array2<f64>,
        ctx: &VariationContext,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        let n_v = xp.ncols();
        let mut u = vec![0.0; n_v];
        for i in 0..xp.nrows() {
            for v in u.iter_mut() {
                *v = rng.random::<f64>();
            }
            let k = rng.random_range(0..n_v);
            let donor = xp.row(i).to_vec();
            let incumbent = ctx.incumbents.row(i).to_vec();
            let child = binomial_child(&donor, &incumbent, &u, self.rho, k);
            for (out, c) in xp.row_mut(i).iter_mut().zip(child) {
                *out = c;
            }
        }
        Ok(())
    }
}
