//! The main loop: build components, initialize, iterate until a stop
//! criterion fires.

use ndarray::{concatenate, Array1, Array2, ArrayView2, Axis};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::AlgorithmConfig;
use crate::error::{Error, Result};
use crate::metrics::{summarize, Summary};
use crate::neighborhood::{NeighborhoodKind, NeighborhoodTable};
use crate::problems::{evaluate_batch, ProblemDefinition};
use crate::registry::{BuildContext, Registry};
use crate::scalarization::{ReferencePoints, ScalarizationContext};
use crate::termination::{check_stop, ProcessClock, StopCriterion, StopState};
use crate::update::{update_population, Archive, UpdateInputs};
use crate::variation::{Evaluate, VariationContext};

/// One line of the per-iteration trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub evaluations: usize,
    pub ideal: Vec<f64>,
    /// Mean normalized dominated volume of the incumbents, a cheap progress
    /// signal that is not a hypervolume of the front.
    pub hv_proxy: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    /// Final incumbents in the problem's variable bounds.
    pub x: Array2<f64>,
    /// Final incumbents in the unit hypercube.
    pub x_unit: Array2<f64>,
    pub y: Array2<f64>,
    pub v: Vec<f64>,
    pub weights: Array2<f64>,
    pub reference: ReferencePoints,
    pub trace: Vec<TraceRow>,
    pub summary: Summary,
    /// Best feasible point per subproblem, when the constraint handler keeps one.
    pub archive: Option<Archive>,
    pub stop_reason: Option<StopCriterion>,
}

impl RunResult {
    pub fn evaluations(&self) -> usize {
        self.summary.evaluations
    }

    pub fn iterations(&self) -> usize {
        self.summary.iterations
    }
}

/// `n` points drawn uniformly from the `n_v`-dimensional unit hypercube,
/// row by row.
pub fn initialize_population(n_v: usize, n: usize, rng: &mut dyn RngCore) -> Array2<f64> {
    Array2::from_shape_simple_fn((n, n_v), || rng.random::<f64>())
}

/// Runs the algorithm with the built-in components.
pub fn run_moead(problem: &ProblemDefinition, config: &AlgorithmConfig) -> Result<RunResult> {
    run_moead_with(problem, config, &Registry::builtin())
}

struct CountingEvaluator<'a> {
    problem: &'a ProblemDefinition,
    iteration: usize,
    count: usize,
}

impl Evaluate for CountingEvaluator<'_> {
    fn evaluate(&mut self, x_unit: ArrayView2<f64>) -> Result<Array2<f64>> {
        let e = evaluate_batch(self.problem, x_unit, self.iteration)?;
        self.count += x_unit.nrows();
        Ok(e.y)
    }
}

pub fn hv_proxy(y: ArrayView2<f64>, reference: &ReferencePoints) -> f64 {
    if y.nrows() == 0 {
        return 0.0;
    }
    let total: f64 = y
        .rows()
        .into_iter()
        .map(|f| {
            f.iter()
                .enumerate()
                .map(|(j, &v)| {
                    let range = reference.nadir[j] - reference.ideal[j];
                    if range <= 0.0 {
                        0.0
                    } else {
                        ((reference.nadir[j] - v) / range).clamp(0.0, 1.0)
                    }
                })
                .product::<f64>()
        })
        .sum();
    total / y.nrows() as f64
}

/// Runs the algorithm, resolving component names in `registry`.
pub fn run_moead_with(
    problem: &ProblemDefinition,
    config: &AlgorithmConfig,
    registry: &Registry,
) -> Result<RunResult> {
    problem.validate()?;
    let ctx = BuildContext {
        n_v: problem.n_v,
        n_f: problem.n_f,
    };

    let weights = registry
        .build_decomposition(&config.decomposition, &ctx)?
        .weights;
    let n = weights.nrows();
    if weights.ncols() != problem.n_f {
        return Err(Error::Shape(format!(
            "decomposition produced {} columns for a {}-objective problem",
            weights.ncols(),
            problem.n_f
        )));
    }
    let method = registry.build_scalarization(&config.scalarization, &ctx)?;
    let (kind, t_size, delta_p) = registry.build_neighborhood(&config.neighborhood)?;
    if t_size > n {
        return Err(Error::param(
            format!("neighborhood.{}.t", config.neighborhood.name),
            format!("neighborhood size {t_size} exceeds population size {n}"),
        ));
    }
    let stack = registry.build_stack(&config.variation, &ctx)?;
    let mut strategy = registry.build_update(&config.update, &ctx)?;
    strategy.prepare(weights.view())?;
    let handler = registry.build_constraint(&config.constraint, &ctx)?;
    let stop = registry.build_stop(&config.stop, &ctx)?;

    let clock = ProcessClock::start();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut x = initialize_population(problem.n_v, n, &mut rng);
    let init = evaluate_batch(problem, x.view(), 0)?;
    let mut y = init.y;
    let mut v = init.v;
    let mut evaluations = n;

    let mut scal = ScalarizationContext {
        reference: ReferencePoints::from_objectives(y.view())?,
        weights,
        scaling: config.scaling,
        method,
    };

    let mut archive = handler.keeps_archive().then(|| Archive::new(n));
    if let Some(a) = archive.as_mut() {
        for j in 0..n {
            let u = scal.utility(y.row(j), j);
            a.offer(
                j,
                x.row(j).as_slice().unwrap(),
                y.row(j).as_slice().unwrap(),
                v[j],
                u,
            );
        }
    }

    let by_weights = match kind {
        NeighborhoodKind::ByWeights => Some(NeighborhoodTable::build(
            kind,
            scal.weights.view(),
            t_size,
            delta_p,
        )?),
        NeighborhoodKind::ByIncumbents => None,
    };

    let mut trace = vec![TraceRow {
        iteration: 0,
        evaluations,
        ideal: scal.reference.ideal.clone(),
        hv_proxy: hv_proxy(y.view(), &scal.reference),
    }];

    let mut iterations = 0usize;
    let stop_reason = loop {
        let state = StopState {
            iterations,
            evaluations,
            elapsed_seconds: clock.elapsed(),
        };
        if let Some(c) = check_stop(&stop, &state) {
            break Some(c);
        }
        let iteration = iterations + 1;

        let by_x;
        let table = match &by_weights {
            Some(t) => t,
            None => {
                by_x = NeighborhoodTable::build(kind, x.view(), t_size, delta_p)?;
                &by_x
            }
        };

        let mut xp = x.clone();
        let vctx = VariationContext {
            incumbents: x.view(),
            objectives: y.view(),
            neighborhood: table,
            scalarization: &scal,
            iteration,
        };
        let mut evaluator = CountingEvaluator {
            problem,
            iteration,
            count: 0,
        };
        stack.apply(&mut xp, &vctx, &mut evaluator, &mut rng)?;
        evaluations += evaluator.count;

        let cand = evaluate_batch(problem, xp.view(), iteration)?;
        evaluations += n;

        scal.reference.update(
            concatenate(Axis(0), &[y.view(), cand.y.view()])
                .map_err(|e| Error::Shape(e.to_string()))?
                .view(),
        )?;
        if let Some(a) = archive.as_mut() {
            a.rescore(&scal);
        }

        let outcome = update_population(
            strategy.as_ref(),
            handler.as_ref(),
            &UpdateInputs {
                incumbent_objectives: y.view(),
                incumbent_violations: &v,
                candidate_objectives: cand.y.view(),
                candidate_violations: &cand.v,
                neighbors: &table.neighbors,
                scalarization: &scal,
            },
            &mut rng,
        )?;

        if let Some(a) = archive.as_mut() {
            for (j, members) in outcome.members.iter().enumerate() {
                for &k in members {
                    let u = scal.utility(cand.y.row(k), j);
                    a.offer(
                        j,
                        xp.row(k).as_slice().unwrap(),
                        cand.y.row(k).as_slice().unwrap(),
                        cand.v[k],
                        u,
                    );
                }
            }
        }

        let (mut nx, mut ny, mut nv) = (x.clone(), y.clone(), v.clone());
        for (j, sel) in outcome.selection.iter().enumerate() {
            if let Some(k) = *sel {
                nx.row_mut(j).assign(&xp.row(k));
                ny.row_mut(j).assign(&cand.y.row(k));
                nv[j] = cand.v[k];
            }
        }
        x = nx;
        y = ny;
        v = nv;

        iterations = iteration;
        trace.push(TraceRow {
            iteration,
            evaluations,
            ideal: scal.reference.ideal.clone(),
            hv_proxy: hv_proxy(y.view(), &scal.reference),
        });
    };

    let summary = summarize(y.view(), &v, evaluations, iterations, None, config.seed)?;
    if let Some(a) = archive.as_mut() {
        for e in a.entries.iter_mut().flatten() {
            let decoded = problem.decode(Array1::from(e.x.clone()).insert_axis(Axis(0)).view());
            e.x = decoded.row(0).to_vec();
        }
    }
    Ok(RunResult {
        x: problem.decode(x.view()),
        x_unit: x,
        y,
        v,
        weights: scal.weights,
        reference: scal.reference,
        trace,
        summary,
        archive,
        stop_reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset;
    use crate::params::ComponentSpec;
    use crate::problems::make_problem;

    fn small(name: &str, iters: usize, seed: u64) -> AlgorithmConfig {
        let mut c = preset(name).unwrap();
        c.decomposition = ComponentSpec::new("sld").with("h", 29);
        c.stop = vec![ComponentSpec::new("maxiter").with("max", iters)];
        c.seed = seed;
        c
    }

    #[test]
    fn initial_population_is_uniform_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        let p = initialize_population(30, 100, &mut a);
        assert_eq!(p, initialize_population(30, 100, &mut b));
        assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
        let big = initialize_population(3, 10_000, &mut a);
        for m in big.mean_axis(Axis(0)).unwrap() {
            assert!((m - 0.5).abs() < 0.02, "{m}");
        }
    }

    #[test]
    fn zero_iterations_returns_initial_population() {
        let p = make_problem("zdt1", 5, None).unwrap();
        let r = run_moead(&p.definition, &small("original", 0, 1)).unwrap();
        assert_eq!(r.evaluations(), 30);
        assert_eq!(r.iterations(), 0);
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.stop_reason, Some(StopCriterion::MaxIter(0)));
    }

    #[test]
    fn evaluation_accounting() {
        let p = make_problem("zdt1", 5, None).unwrap();
        let r = run_moead(&p.definition, &small("original", 7, 1)).unwrap();
        assert_eq!(r.evaluations(), 30 * 8);
        for row in &r.trace {
            assert_eq!(row.evaluations, 30 * (row.iteration + 1));
        }
    }

    #[test]
    fn same_seed_same_result() {
        let p = make_problem("zdt1", 5, None).unwrap();
        for name in ["original", "moead-de"] {
            let a = run_moead(&p.definition, &small(name, 10, 3)).unwrap();
            let b = run_moead(&p.definition, &small(name, 10, 3)).unwrap();
            assert_eq!(a.y, b.y);
            let c = run_moead(&p.definition, &small(name, 10, 4)).unwrap();
            assert_ne!(a.y, c.y);
        }
    }

    #[test]
    fn decode_encode_round_trip() {
        let p = make_problem("sphere-rastrigin", 4, None).unwrap();
        let r = run_moead(&p.definition, &small("original", 3, 2)).unwrap();
        let back = p.definition.encode(r.x.view());
        for (a, b) in back.iter().zip(r.x_unit.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn frozen_operators_only_recombine_initial_points() {
        let p = make_problem("zdt1", 5, None).unwrap();
        let mut c = small("original", 5, 9);
        c.variation = vec![
            ComponentSpec::new("sbx").with("prob", 0.0),
            ComponentSpec::new("polymut").with("prob", 0.0),
            ComponentSpec::new("truncate"),
        ];
        let r0 = run_moead(&p.definition, &small("original", 0, 9)).unwrap();
        for update in [
            ComponentSpec::new("standard"),
            ComponentSpec::new("restricted").with("nr", 2),
            ComponentSpec::new("best").with("nr", 2).with("tr", 4),
        ] {
            c.update = update;
            let r = run_moead(&p.definition, &c).unwrap();
            for row in r.x_unit.rows() {
                assert!(r0.x_unit.rows().into_iter().any(|o| o == row));
            }
        }
    }

    #[test]
    fn by_x_neighborhood_and_local_search_run() {
        let p = make_problem("zdt1", 5, None).unwrap();
        let mut c = small("tuned", 0, 5);
        c.decomposition = ComponentSpec::new("sld").with("h", 29);
        c.stop = vec![ComponentSpec::new("maxiter").with("max", 4)];
        c.variation.push(
            ComponentSpec::new("localsearch")
                .with("type", "dvls")
                .with("tau", 2),
        );
        let r = run_moead(&p.definition, &c).unwrap();
        assert_eq!(r.iterations(), 4);
        assert!(r.evaluations() > 30 * 5);
    }

    #[test]
    fn oversized_neighborhood_is_a_config_error() {
        let p = make_problem("zdt1", 5, None).unwrap();
        let mut c = small("original", 1, 0);
        c.neighborhood = ComponentSpec::new("lambda").with("t", 50);
        let err = run_moead(&p.definition, &c).unwrap_err();
        assert!(err.is_config_error(), "{err}");
    }

    #[test]
    fn hv_proxy_bounds() {
        let r = ReferencePoints {
            ideal: vec![0.0, 0.0],
            nadir: vec![1.0, 1.0],
        };
        let y = ndarray::array![[0.0, 0.0], [1.0, 1.0]];
        assert_eq!(hv_proxy(y.view(), &r), 0.5);
    }
}
