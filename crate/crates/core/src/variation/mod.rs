//! Variation operators and the stack that applies them to the candidate matrix.
//!
//! All operators work in the unit hypercube. Each one reads a snapshot of the
//! candidate matrix, produces a new row per subproblem and then overwrites
//! the matrix, so later rows never see partially varied earlier rows.

use std::fmt::Debug;
use std::sync::Arc;

use ndarray::{Array2, ArrayView2};
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::neighborhood::NeighborhoodTable;
use crate::scalarization::ScalarizationContext;

pub mod binrec;
pub mod diffmut;
pub mod localsearch;
pub mod polymut;
pub mod sbx;
pub mod truncate;

pub use binrec::BinomialRecombination;
pub use diffmut::{Basis, DifferentialMutation, PhiSpec};
pub use localsearch::{Dvls, LocalSearchGate, LocalSearchStage, Tpqa};
pub use polymut::PolynomialMutation;
pub use sbx::Sbx;
pub use truncate::Truncate;

/// Read-only state the operators may consult.
#[derive(Clone, Copy)]
pub struct VariationContext<'a> {
    /// Incumbent solutions `X` before any variation this iteration.
    pub incumbents: ArrayView2<'a, f64>,
    /// Objective values of the incumbents.
    pub objectives: ArrayView2<'a, f64>,
    pub neighborhood: &'a NeighborhoodTable,
    pub scalarization: &'a ScalarizationContext,
    pub iteration: usize,
}

/// Objective evaluation available to local search. Implementations count
/// every row they evaluate.
pub trait Evaluate {
    fn evaluate(&mut self, x_unit: ArrayView2<f64>) -> Result<Array2<f64>>;
}

pub trait VariationOperator: Send + Sync + Debug {
    fn name(&self) -> &str;

    /// Transforms the candidate matrix in place.
    fn apply(
        &self,
        xp: &mut Array2<f64>,
        ctx: &VariationContext,
        rng: &mut dyn RngCore,
    ) -> Result<()>;
}

pub trait LocalSearch: Send + Sync + Debug {
    fn name(&self) -> &str;

    /// Replaces the rows listed in `rows` with local-search results.
    fn search(
        &self,
        rows: &[usize],
        xp: &mut Array2<f64>,
        ctx: &VariationContext,
        eval: &mut dyn Evaluate,
        rng: &mut dyn RngCore,
    ) -> Result<()>;
}

#[derive(Debug, Clone)]
pub enum StackEntry {
    Operator(Arc<dyn VariationOperator>),
    LocalSearch(LocalSearchStage),
}

impl StackEntry {
    pub fn name(&self) -> &str {
        match self {
            StackEntry::Operator(op) => op.name(),
            StackEntry::LocalSearch(ls) => ls.method.name(),
        }
    }
}

/// Ordered list of operators applied to `X'` each iteration.
#[derive(Debug, Clone, Default)]
pub struct VariationStack {
    pub entries: Vec<StackEntry>,
}

impl VariationStack {
    pub fn new(entries: Vec<StackEntry>) -> Self {
        VariationStack { entries }
    }

    /// Applies every entry in order. Rows selected by a local-search gate
    /// keep their incumbent through the ordinary operators and are only
    /// changed by the local search itself.
    pub fn apply(
        &self,
        xp: &mut Array2<f64>,
        ctx: &VariationContext,
        eval: &mut dyn Evaluate,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        let shape = xp.dim();
        let n = shape.0;

        let mut stage_rows: Vec<Vec<usize>> = Vec::new();
        let mut gated = vec![false; n];
        for entry in &self.entries {
            if let StackEntry::LocalSearch(stage) = entry {
                let rows = stage.gate.select(n, ctx.iteration, rng);
                for &r in &rows {
                    gated[r] = true;
                }
                stage_rows.push(rows);
            }
        }
        let gated_rows: Vec<usize> = (0..n).filter(|&r| gated[r]).collect();
        let mut held = if gated_rows.is_empty() {
            None
        } else {
            Some(xp.clone())
        };

        let mut stage = 0;
        for entry in &self.entries {
            match entry {
                StackEntry::Operator(op) => {
                    op.apply(xp, ctx, rng)?;
                    if xp.dim() != shape {
                        return Err(Error::Shape(format!(
                            "variation operator `{}` returned {:?}, expected {:?}",
                            op.name(),
                            xp.dim(),
                            shape
                        )));
                    }
                    if let Some(h) = &held {
                        for &r in &gated_rows {
                            xp.row_mut(r).assign(&h.row(r));
                        }
                    }
                }
                StackEntry::LocalSearch(ls) => {
                    let rows = &stage_rows[stage];
                    stage += 1;
                    if rows.is_empty() {
                        continue;
                    }
                    ls.method.search(rows, xp, ctx, eval, rng)?;
                    if let Some(h) = held.as_mut() {
                        for &r in rows {
                            h.row_mut(r).assign(&xp.row(r));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Uniform draw in `(0, 1]`.
pub(crate) fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::decomposition::decompose_sld;
    use crate::neighborhood::NeighborhoodKind;
    use crate::scalarization::{ReferencePoints, Scaling, WeightedTchebycheff};

    pub struct Fixture {
        pub x: Array2<f64>,
        pub y: Array2<f64>,
        pub table: NeighborhoodTable,
        pub scal: ScalarizationContext,
    }

    impl Fixture {
        pub fn new(n_minus_one: usize, n_v: usize, t: usize, delta_p: f64, seed: u64) -> Self {
            use rand::SeedableRng;
            let w = decompose_sld(n_minus_one, 2).unwrap().weights;
            let n = w.nrows();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = Array2::from_shape_fn((n, n_v), |_| rng.random::<f64>());
            let y = objective(&x);
            let table = NeighborhoodTable::build(NeighborhoodKind::ByWeights, w.view(), t, delta_p)
                .unwrap();
            let scal = ScalarizationContext {
                weights: w,
                reference: ReferencePoints::from_objectives(y.view()).unwrap(),
                scaling: Scaling::None,
                method: Arc::new(WeightedTchebycheff),
            };
            Fixture { x, y, table, scal }
        }

        pub fn ctx(&self) -> VariationContext<'_> {
            VariationContext {
                incumbents: self.x.view(),
                objectives: self.y.view(),
                neighborhood: &self.table,
                scalarization: &self.scal,
                iteration: 1,
            }
        }
    }

    /// Two objectives: squared distance to the origin and to the ones vector.
    pub fn objective(x: &Array2<f64>) -> Array2<f64> {
        Array2::from_shape_fn((x.nrows(), 2), |(i, j)| {
            let target = j as f64;
            x.row(i).iter().map(|v| (v - target).powi(2)).sum()
        })
    }

    #[derive(Default)]
    pub struct CountingEval {
        pub count: usize,
    }

    impl Evaluate for CountingEval {
        fn evaluate(&mut self, x_unit: ArrayView2<f64>) -> Result<Array2<f64>> {
            self.count += x_unit.nrows();
            Ok(objective(&x_unit.to_owned()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_stack_is_identity() {
        let fx = Fixture::new(9, 4, 3, 1.0, 1);
        let mut xp = fx.x.clone();
        let mut eval = CountingEval::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        VariationStack::default()
            .apply(&mut xp, &fx.ctx(), &mut eval, &mut rng)
            .unwrap();
        assert_eq!(xp, fx.x);
    }

    #[test]
    fn truncate_only_stack_leaves_in_bounds_rows() {
        let fx = Fixture::new(9, 4, 3, 1.0, 1);
        let mut xp = fx.x.clone();
        let stack = VariationStack::new(vec![StackEntry::Operator(Arc::new(Truncate))]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        stack
            .apply(&mut xp, &fx.ctx(), &mut CountingEval::default(), &mut rng)
            .unwrap();
        assert_eq!(xp, fx.x);
    }

    #[test]
    fn stack_is_deterministic_under_seed() {
        let fx = Fixture::new(19, 5, 5, 0.9, 3);
        let stack = VariationStack::new(vec![
            StackEntry::Operator(Arc::new(Sbx::new(20.0, 1.0))),
            StackEntry::Operator(Arc::new(PolynomialMutation::new(20.0, 0.2))),
            StackEntry::Operator(Arc::new(Truncate)),
        ]);
        let run = || {
            let mut xp = fx.x.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            stack
                .apply(&mut xp, &fx.ctx(), &mut CountingEval::default(), &mut rng)
                .unwrap();
            xp
        };
        let a = run();
        assert_eq!(a, run());
        assert!(a.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn full_local_search_gate_bypasses_other_operators() {
        let fx = Fixture::new(9, 3, 4, 1.0, 2);
        let tpqa = LocalSearchStage {
            method: Arc::new(Tpqa::default()),
            gate: LocalSearchGate::Probability(1.0),
        };
        let stack = VariationStack::new(vec![
            StackEntry::Operator(Arc::new(DifferentialMutation::new(
                Basis::Rand,
                PhiSpec::Random,
            ))),
            StackEntry::Operator(Arc::new(BinomialRecombination::new(0.9))),
            StackEntry::LocalSearch(tpqa.clone()),
        ]);
        let mut xp = fx.x.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        stack
            .apply(&mut xp, &fx.ctx(), &mut CountingEval::default(), &mut rng)
            .unwrap();

        let mut expected = fx.x.clone();
        let rows: Vec<usize> = (0..fx.x.nrows()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        tpqa.method
            .search(
                &rows,
                &mut expected,
                &fx.ctx(),
                &mut CountingEval::default(),
                &mut rng,
            )
            .unwrap();
        assert_eq!(xp, expected);
    }

    #[derive(Debug)]
    struct Shrink;

    impl VariationOperator for Shrink {
        fn name(&self) -> &str {
            "shrink"
        }
        fn apply(
            &self,
            xp: &mut Array2<f64>,
            _: &VariationContext,
            _: &mut dyn RngCore,
        ) -> Result<()> {
            *xp = Array2::zeros((1, 1));
            Ok(())
        }
    }

    #[test]
    fn shape_changes_are_rejected() {
        let fx = Fixture::new(4, 2, 2, 1.0, 0);
        let mut xp = fx.x.clone();
        let stack = VariationStack::new(vec![StackEntry::Operator(Arc::new(Shrink))]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = stack
            .apply(&mut xp, &fx.ctx(), &mut CountingEval::default(), &mut rng)
            .unwrap_err();
        assert!(err.to_string().contains("shrink"));
    }
}
