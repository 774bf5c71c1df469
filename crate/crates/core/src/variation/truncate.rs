//! Truncation repair: clamp every coordinate back into `[0, 1]`.

use ndarray::Array2;
use rand::RngCore;

use super::{VariationContext, VariationOperator};
use crate::error::Result;

pub fn truncate(x: &mut Array2<f64>) {
    x.mapv_inplace(|v| v.clamp(0.0, 1.0));
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Truncate;

impl VariationOperator for Truncate {
    fn name(&self) -> &str {
        "truncate"
    }

    fn apply(
        &self,
        xp: &mut Array2<f64>,
        _ctx: &VariationContext,
        _rng: &mut dyn RngCore,
    ) -> Result<()> {
        truncate(xp);
        Ok(())
    }
}
