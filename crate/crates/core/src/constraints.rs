//! Constraint violation and the policies that turn (utility, violation)
//! pairs into comparable scores.

use std::fmt::Debug;

use ndarray::ArrayView2;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `sum max(g, 0) + sum max(|h| - eps, 0)`
pub fn violation(g: &[f64], h: &[f64], eps: f64) -> f64 {
    g.iter().map(|v| v.max(0.0)).sum::<f64>()
        + h.iter().map(|v| (v.abs() - eps).max(0.0)).sum::<f64>()
}

/// Row-wise violation magnitudes. `g` and `h` may have zero columns.
pub fn compute_violations(g: ArrayView2<f64>, h: ArrayView2<f64>, eps: f64) -> Result<Vec<f64>> {
    let n = g.nrows().max(h.nrows());
    if (g.ncols() > 0 && g.nrows() != n) || (h.ncols() > 0 && h.nrows() != n) {
        return Err(Error::Shape(format!(
            "constraint matrices have {} and {} rows",
            g.nrows(),
            h.nrows()
        )));
    }
    (0..n)
        .map(|i| {
            let gi: Vec<f64> = if g.ncols() > 0 {
                g.row(i).to_vec()
            } else {
                Vec::new()
            };
            let hi: Vec<f64> = if h.ncols() > 0 {
                h.row(i).to_vec()
            } else {
                Vec::new()
            };
            if gi.iter().chain(&hi).any(|v| !v.is_finite()) {
                return Err(Error::Invalid(format!(
                    "non-finite constraint value in row {i}"
                )));
            }
            Ok(violation(&gi, &hi, eps))
        })
        .collect()
}

/// `f_agg + beta * v`
pub fn penalized(utilities: &[f64], violations: &[f64], beta: f64) -> Vec<f64> {
    utilities
        .iter()
        .zip(violations)
        .map(|(f, v)| f + beta * v)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VbrVariant {
    /// Infeasible points always rank by violation.
    Ts,
    /// Infeasible points rank by utility with probability `pf`.
    Sr { pf: f64 },
    /// Infeasible points within the adaptive threshold rank by utility.
    Vt,
}

/// `[fs] / |C|^2 * sum v` over a candidate set.
pub fn violation_threshold(violations: &[f64]) -> f64 {
    let n = violations.len() as f64;
    let feasible = violations.iter().filter(|&&v| v == 0.0).count() as f64;
    feasible / (n * n) * violations.iter().sum::<f64>()
}

/// Ranks (1-based) of every member of a candidate set. Points ranked by
/// utility come first, the rest follow by violation; ties keep input order.
pub fn vbr_rank(
    utilities: &[f64],
    violations: &[f64],
    variant: VbrVariant,
    rng: &mut dyn RngCore,
) -> Vec<usize> {
    let eps_v = match variant {
        VbrVariant::Vt => violation_threshold(violations),
        _ => 0.0,
    };
    let mut by_utility = Vec::new();
    let mut by_violation = Vec::new();
    for (k, &v) in violations.iter().enumerate() {
        let use_utility = v == 0.0
            || match variant {
                VbrVariant::Ts => false,
                VbrVariant::Sr { pf } => rng.random::<f64>() < pf,
                VbrVariant::Vt => v <= eps_v,
            };
        if use_utility {
            by_utility.push(k);
        } else {
            by_violation.push(k);
        }
    }
    by_utility.sort_by(|&a, &b| utilities[a].total_cmp(&utilities[b]));
    by_violation.sort_by(|&a, &b| violations[a].total_cmp(&violations[b]));
    let mut rank = vec![0; utilities.len()];
    for (r, k) in by_utility.into_iter().chain(by_violation).enumerate() {
        rank[k] = r + 1;
    }
    rank
}

/// Scores the members of one subproblem's candidate set (incumbent first).
/// Lower is better.
pub trait ConstraintHandler: Send + Sync + Debug {
    fn name(&self) -> &str;

    fn score(&self, utilities: &[f64], violations: &[f64], rng: &mut dyn RngCore) -> Vec<f64>;

    /// Whether runs should keep an elitist archive of feasible points.
    fn keeps_archive(&self) -> bool {
        false
    }
}

/// Plain utilities; violations are ignored.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoConstraintHandling;

impl ConstraintHandler for NoConstraintHandling {
    fn name(&self) -> &str {
        "none"
    }

    fn score(&self, utilities: &[f64], _violations: &[f64], _rng: &mut dyn RngCore) -> Vec<f64> {
        utilities.to_vec()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Penalty {
    pub beta: f64,
}

impl ConstraintHandler for Penalty {
    fn name(&self) -> &str {
        "penalty"
    }

    fn score(&self, utilities: &[f64], violations: &[f64], _rng: &mut dyn RngCore) -> Vec<f64> {
        penalized(utilities, violations, self.beta)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ViolationBasedRanking {
    pub variant: VbrVariant,
}

impl ConstraintHandler for ViolationBasedRanking {
    fn name(&self) -> &str {
        "vbr"
    }

    fn score(&self, utilities: &[f64], violations: &[f64], rng: &mut dyn RngCore) -> Vec<f64> {
        vbr_rank(utilities, violations, self.variant, rng)
            .into_iter()
            .map(|r| r as f64)
            .collect()
    }

    fn keeps_archive(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn violation_examples() {
        assert_eq!(violation(&[-1.0, -2.0], &[], 0.0), 0.0);
        assert!((violation(&[0.5], &[0.3], 0.1) - 0.7).abs() < 1e-15);
        let none = Array2::<f64>::zeros((3, 0));
        assert_eq!(
            compute_violations(none.view(), none.view(), 0.0).unwrap(),
            vec![0.0; 3]
        );
    }

    #[test]
    fn penalty_examples() {
        assert_eq!(penalized(&[3.0], &[0.0], 100.0), vec![3.0]);
        assert!((penalized(&[3.0], &[0.7], 100.0)[0] - 73.0).abs() < 1e-12);
        for beta in [0.1, 1.0, 1e6] {
            let p = penalized(&[1.0, 2.0], &[0.0, 0.0], beta);
            assert!(p[0] < p[1]);
        }
    }

    #[test]
    fn all_feasible_ranks_by_utility() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for variant in [VbrVariant::Ts, VbrVariant::Sr { pf: 0.5 }, VbrVariant::Vt] {
            let r = vbr_rank(&[0.3, 0.1, 0.2], &[0.0; 3], variant, &mut rng);
            assert_eq!(r, vec![3, 1, 2]);
        }
    }

    #[test]
    fn ts_puts_infeasible_last() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = vbr_rank(
            &[-100.0, 0.5, 0.9],
            &[0.2, 0.0, 0.0],
            VbrVariant::Ts,
            &mut rng,
        );
        assert_eq!(r, vec![3, 1, 2]);
    }

    #[test]
    fn vt_with_no_feasible_points_matches_ts() {
        let u = [0.4, 0.1, 0.3];
        let v = [0.5, 0.2, 0.9];
        assert_eq!(violation_threshold(&v), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            vbr_rank(&u, &v, VbrVariant::Vt, &mut rng),
            vbr_rank(&u, &v, VbrVariant::Ts, &mut rng)
        );
    }

    #[test]
    fn sr_extremes() {
        let u = [0.4, 0.1, 0.3, 0.2];
        let v = [0.0, 0.2, 0.9, 0.0];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(
            vbr_rank(&u, &v, VbrVariant::Sr { pf: 0.0 }, &mut rng),
            vbr_rank(&u, &v, VbrVariant::Ts, &mut rng)
        );
        assert_eq!(
            vbr_rank(&u, &v, VbrVariant::Sr { pf: 1.0 }, &mut rng),
            vec![4, 1, 3, 2]
        );
    }
}
