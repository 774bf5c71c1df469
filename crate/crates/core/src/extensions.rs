//! Example user-defined component: Gaussian mutation.
//!
//! Not part of the built-in set. Call [`register`] to make it available as
//! the `gaussmut` variation operator.

use std::sync::Arc;

use ndarray::Array2;
use rand::{Rng, RngCore};
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::registry::{Factory, Registry};
use crate::variation::{VariationContext, VariationOperator};

/// Adds `N(mean, sd)` noise to each coordinate with probability `p`.
#[derive(Debug, Clone)]
pub struct GaussianMutation {
    pub mean: f64,
    pub sd: f64,
    pub p: f64,
}

impl Default for GaussianMutation {
    fn default() -> Self {
        GaussianMutation {
            mean: 0.0,
            sd: 0.1,
            p: 0.1,
        }
    }
}

impl VariationOperator for GaussianMutation {
    fn name(&self) -> &str {
        "gaussmut"
    }

    fn apply(
        &self,
        xp: &mut Array2<f64>,
        _ctx: &VariationContext,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        let noise = Normal::new(self.mean, self.sd)
            .map_err(|e| Error::param("variation.gaussmut.sd", e.to_string()))?;
        for x in xp.iter_mut() {
            let r: f64 = noise.sample(rng);
            if rng.random::<f64>() < self.p {
                *x += r;
            }
        }
        Ok(())
    }
}

pub fn register(registry: &mut Registry) -> Result<()> {
    registry.register(
        "variation",
        "gaussmut",
        Factory::Variation(Arc::new(|spec, _| {
            let p = spec.params("variation");
            p.allow_only(&["mean", "sd", "p"])?;
            let d = GaussianMutation::default();
            let sd = p.f64_or("sd", d.sd)?;
            if sd < 0.0 {
                return Err(Error::param(p.key("sd"), "must be >= 0"));
            }
            Ok(Arc::new(GaussianMutation {
                mean: p.f64_or("mean", d.mean)?,
                sd,
                p: p.in_range("p", p.f64_or("p", d.p)?, 0.0, 1.0)?,
            }))
        })),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variation::testutil::Fixture;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn run(op: GaussianMutation) -> (Array2<f64>, Array2<f64>) {
        let fx = Fixture::new(9, 4, 3, 1.0, 2);
        let mut xp = fx.x.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        op.apply(&mut xp, &fx.ctx(), &mut rng).unwrap();
        (fx.x, xp)
    }

    #[test]
    fn zero_probability_is_identity() {
        let (x, xp) = run(GaussianMutation {
            mean: 0.0,
            sd: 0.5,
            p: 0.0,
        });
        assert_eq!(x, xp);
    }

    #[test]
    fn zero_noise_is_identity() {
        let (x, xp) = run(GaussianMutation {
            mean: 0.0,
            sd: 0.0,
            p: 1.0,
        });
        assert_eq!(x, xp);
    }

    #[test]
    fn deterministic_shift() {
        let (x, xp) = run(GaussianMutation {
            mean: 0.1,
            sd: 0.0,
            p: 1.0,
        });
        for (a, b) in x.iter().zip(xp.iter()) {
            assert!((b - a - 0.1).abs() < 1e-15);
        }
    }

    #[test]
    fn registers_once() {
        let mut r = Registry::builtin();
        assert!(!r
            .list("variation")
            .unwrap()
            .contains(&"gaussmut".to_string()));
        register(&mut r).unwrap();
        assert!(r
            .list("variation")
            .unwrap()
            .contains(&"gaussmut".to_string()));
        assert!(register(&mut r).is_err());
    }
}
