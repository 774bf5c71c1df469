//! Polynomial mutation.

use ndarray::Array2;
use rand::{Rng, RngCore};

use super::{VariationContext, VariationOperator};
use crate::error::Result;

/// Perturbation for coordinate value `x` given uniform `u`, with `eta' = eta + 1`.
///
/// The formula is defined on `[0, 1]`; values outside (left by an earlier
/// operator) are clamped before computing the step.
pub fn polymut_beta(x: f64, u: f64, eta: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let e = eta + 1.0;
    if u <= 0.5 {
        (2.0 * u + (1.0 - 2.0 * u) * (1.0 - x).powf(e)).powf(1.0 / e) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - u) + (2.0 * u - 1.0) * x.powf(e)).powf(1.0 / e)
    }
}

#[derive(Debug, Clone)]
pub struct PolynomialMutation {
    pub eta: f64,
    pub prob: f64,
}

impl PolynomialMutation {
    pub fn new(eta: f64, prob: f64) -> Self {
        PolynomialMutation { eta, prob }
    }
}

impl VariationOperator for PolynomialMutation {
    fn name(&self) -> &str {
        "polymut"
    }

    fn apply(
        &self,
        xp: &mut Array2<f64>,
        _ctx: &VariationContext,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        for x in xp.iter_mut() {
            if rng.random::<f64>() >= self.prob {
                continue;
            }
            let u = rng.random::<f64>();
            *x += polymut_beta(*x, u, self.eta);
        }
        Ok(())
    }
}
