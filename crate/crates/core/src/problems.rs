//! Problem definitions, batch evaluation and the built-in benchmarks.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use ndarray::{Array2, ArrayView2, Axis};

use crate::constraints::compute_violations;
use crate::decomposition::{binomial, decompose_sld};
use crate::error::{Error, Result};

pub type ObjectiveFn = Arc<dyn Fn(ArrayView2<f64>) -> Array2<f64> + Send + Sync>;
pub type ConstraintFn = Arc<dyn Fn(ArrayView2<f64>) -> ConstraintValues + Send + Sync>;
pub type FrontSampler = Arc<dyn Fn(usize) -> Array2<f64> + Send + Sync>;

/// Inequality (`g <= 0`) and equality (`h = 0`) constraint values, one row per point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintValues {
    pub g: Array2<f64>,
    pub h: Array2<f64>,
}

/// A minimization problem over the box `[xmin, xmax]`. Both callbacks
/// receive points in the original variable space, one per row.
#[derive(Clone)]
pub struct ProblemDefinition {
    pub name: String,
    pub n_v: usize,
    pub n_f: usize,
    pub xmin: Vec<f64>,
    pub xmax: Vec<f64>,
    pub objective: ObjectiveFn,
    pub constraints: Option<ConstraintFn>,
    pub eq_tolerance: f64,
}

impl fmt::Debug for ProblemDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDefinition")
            .field("name", &self.name)
            .field("n_v", &self.n_v)
            .field("n_f", &self.n_f)
            .field("xmin", &self.xmin)
            .field("xmax", &self.xmax)
            .field("constrained", &self.constraints.is_some())
            .field("eq_tolerance", &self.eq_tolerance)
            .finish()
    }
}

impl ProblemDefinition {
    pub fn new(
        name: impl Into<String>,
        n_f: usize,
        xmin: Vec<f64>,
        xmax: Vec<f64>,
        objective: impl Fn(ArrayView2<f64>) -> Array2<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        let p = ProblemDefinition {
            name: name.into(),
            n_v: xmin.len(),
            n_f,
            xmin,
            xmax,
            objective: Arc::new(objective),
            constraints: None,
            eq_tolerance: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_constraints(
        mut self,
        constraints: impl Fn(ArrayView2<f64>) -> ConstraintValues + Send + Sync + 'static,
        eq_tolerance: f64,
    ) -> Self {
        self.constraints = Some(Arc::new(constraints));
        self.eq_tolerance = eq_tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_v == 0 {
            return Err(Error::param(
                "problem.n_v",
                "needs at least one decision variable",
            ));
        }
        if self.n_f < 2 {
            return Err(Error::param(
                "problem.n_f",
                format!("needs at least 2 objectives, got {}", self.n_f),
            ));
        }
        if self.xmax.len() != self.n_v || self.xmin.len() != self.n_v {
            return Err(Error::param(
                "problem.bounds",
                format!(
                    "xmin/xmax lengths {}/{} differ from n_v = {}",
                    self.xmin.len(),
                    self.xmax.len(),
                    self.n_v
                ),
            ));
        }
        for (j, (lo, hi)) in self.xmin.iter().zip(&self.xmax).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::param(
                    "problem.bounds",
                    format!("variable {j}: need xmin < xmax, got [{lo}, {hi}]"),
                ));
            }
        }
        if !(self.eq_tolerance >= 0.0) {
            return Err(Error::param("problem.eq_tolerance", "must be nonnegative"));
        }
        Ok(())
    }

    /// `xmin + x (xmax - xmin)`, row by row.
    pub fn decode(&self, x_unit: ArrayView2<f64>) -> Array2<f64> {
        let mut out = x_unit.to_owned();
        for mut row in out.rows_mut() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.xmin[j] + *v * (self.xmax[j] - self.xmin[j]);
            }
        }
        out
    }

    /// `(x - xmin) / (xmax - xmin)`, row by row.
    pub fn encode(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let mut out = x.to_owned();
        for mut row in out.rows_mut() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (*v - self.xmin[j]) / (self.xmax[j] - self.xmin[j]);
            }
        }
        out
    }
}

/// Objective values and violations of a batch of points.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub y: Array2<f64>,
    pub v: Vec<f64>,
}

/// Decodes `x_unit` and evaluates every row in one call. `iteration` only
/// labels errors.
pub fn evaluate_batch(
    problem: &ProblemDefinition,
    x_unit: ArrayView2<f64>,
    iteration: usize,
) -> Result<Evaluation> {
    let n = x_unit.nrows();
    if x_unit.ncols() != problem.n_v {
        return Err(Error::Shape(format!(
            "population has {} columns, problem `{}` has {} variables",
            x_unit.ncols(),
            problem.name,
            problem.n_v
        )));
    }
    if n == 0 {
        return Ok(Evaluation {
            y: Array2::zeros((0, problem.n_f)),
            v: Vec::new(),
        });
    }
    if let Some(pos) = x_unit.iter().position(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::Invalid(format!(
            "row {} of the population lies outside the unit hypercube",
            pos / problem.n_v
        )));
    }
    let x = problem.decode(x_unit);
    let y = (problem.objective)(x.view());
    if y.dim() != (n, problem.n_f) {
        return Err(Error::Shape(format!(
            "objective of `{}` returned {:?}, expected ({n}, {})",
            problem.name,
            y.dim(),
            problem.n_f
        )));
    }
    if let Some(pos) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "objective value",
            subproblem: pos / problem.n_f,
            iteration,
        });
    }
    let v = match &problem.constraints {
        None => vec![0.0; n],
        Some(c) => {
            let cv = c(x.view());
            compute_violations(cv.g.view(), cv.h.view(), problem.eq_tolerance)?
        }
    };
    if v.len() != n {
        return Err(Error::Shape(format!(
            "constraints returned {} rows for {n} points",
            v.len()
        )));
    }
    Ok(Evaluation { y, v })
}

/// A problem plus an optional sampler of its true Pareto front.
#[derive(Clone)]
pub struct BenchmarkProblem {
    pub definition: ProblemDefinition,
    pub known_front: Option<FrontSampler>,
}

impl fmt::Debug for BenchmarkProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BenchmarkProblem")
            .field("definition", &self.definition)
            .field("known_front", &self.known_front.is_some())
            .finish()
    }
}

impl BenchmarkProblem {
    /// Samples about `size` points of the true front, when known.
    pub fn front(&self, size: usize) -> Option<Array2<f64>> {
        self.known_front.as_ref().map(|f| f(size))
    }
}

pub const BUILTIN_PROBLEMS: [&str; 3] = ["sphere-rastrigin", "zdt1", "dtlz2"];

/// Built-in benchmark by name. `n_f` is ignored by fixed two-objective problems
/// except for validation.
pub fn make_problem(name: &str, n_v: usize, n_f: Option<usize>) -> Result<BenchmarkProblem> {
    match name {
        "sphere-rastrigin" => {
            expect_two(name, n_f)?;
            sphere_rastrigin(n_v)
        }
        "zdt1" => {
            expect_two(name, n_f)?;
            zdt1(n_v)
        }
        "dtlz2" => dtlz2(n_v, n_f.unwrap_or(3)),
        _ => Err(Error::UnknownComponent {
            role: "problem".into(),
            name: name.into(),
            available: BUILTIN_PROBLEMS.join(", "),
        }),
    }
}

fn expect_two(name: &str, n_f: Option<usize>) -> Result<()> {
    match n_f {
        Some(m) if m != 2 => Err(Error::param(
            "problem.n_f",
            format!("`{name}` has exactly 2 objectives, got {m}"),
        )),
        _ => Ok(()),
    }
}

/// `sum (x_i + 0.1 i)^2`, 1-based `i`.
pub fn sphere(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (v + 0.1 * (i + 1) as f64).powi(2))
        .sum()
}

/// `sum [(x_i - 0.1 i)^2 - 10 cos(2 pi (x_i - 0.1 i)) + 10]`, 1-based `i`.
pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| {
            let s = v - 0.1 * (i + 1) as f64;
            s * s - 10.0 * (2.0 * PI * s).cos() + 10.0
        })
        .sum()
}

fn rowwise(x: ArrayView2<f64>, n_f: usize, f: impl Fn(&[f64], &mut [f64])) -> Array2<f64> {
    let mut out = Array2::zeros((x.nrows(), n_f));
    for (row, mut o) in x.axis_iter(Axis(0)).zip(out.axis_iter_mut(Axis(0))) {
        let r = row.to_vec();
        f(&r, o.as_slice_mut().expect("fresh array is contiguous"));
    }
    out
}

pub fn sphere_rastrigin(n_v: usize) -> Result<BenchmarkProblem> {
    let definition = ProblemDefinition::new(
        "sphere-rastrigin",
        2,
        vec![-1.0; n_v],
        vec![1.0; n_v],
        |x| {
            rowwise(x, 2, |r, o| {
                o[0] = sphere(r);
                o[1] = rastrigin(r);
            })
        },
    )?;
    Ok(BenchmarkProblem {
        definition,
        known_front: None,
    })
}

pub fn zdt1_values(x: &[f64]) -> [f64; 2] {
    let f1 = x[0];
    let g = if x.len() > 1 {
        1.0 + 9.0 * x[1..].iter().sum::<f64>() / (x.len() - 1) as f64
    } else {
        1.0
    };
    [f1, g * (1.0 - (f1 / g).sqrt())]
}

/// ZDT1 front `f2 = 1 - sqrt(f1)` on an even grid of `size` points.
pub fn zdt1_front(size: usize) -> Array2<f64> {
    let size = size.max(2);
    Array2::from_shape_fn((size, 2), |(i, j)| {
        let f1 = i as f64 / (size - 1) as f64;
        if j == 0 {
            f1
        } else {
            1.0 - f1.sqrt()
        }
    })
}

pub fn zdt1(n_v: usize) -> Result<BenchmarkProblem> {
    let definition = ProblemDefinition::new("zdt1", 2, vec![0.0; n_v], vec![1.0; n_v], |x| {
        rowwise(x, 2, |r, o| o.copy_from_slice(&zdt1_values(r)))
    })?;
    Ok(BenchmarkProblem {
        definition,
        known_front: Some(Arc::new(zdt1_front)),
    })
}

pub fn dtlz2_values(x: &[f64], n_f: usize, out: &mut [f64]) {
    let g: f64 = x[n_f - 1..].iter().map(|v| (v - 0.5).powi(2)).sum();
    for (m, o) in out.iter_mut().enumerate() {
        let mut v = 1.0 + g;
        for xi in &x[..n_f - 1 - m] {
            v *= (xi * PI / 2.0).cos();
        }
        if m > 0 {
            v *= (x[n_f - 1 - m] * PI / 2.0).sin();
        }
        *o = v;
    }
}

/// Points of the unit sphere's positive orthant along simplex-lattice
/// directions, using the smallest lattice with at least `size` points.
pub fn dtlz2_front(n_f: usize, size: usize) -> Array2<f64> {
    let mut h = 1;
    while binomial(h + n_f - 1, n_f - 1).is_some_and(|c| c < size) {
        h += 1;
    }
    let mut w = decompose_sld(h, n_f)
        .expect("lattice size is bounded by the request")
        .weights;
    for mut row in w.rows_mut() {
        let norm = row.dot(&row).sqrt();
        row /= norm;
    }
    w
}

pub fn dtlz2(n_v: usize, n_f: usize) -> Result<BenchmarkProblem> {
    if n_f < 2 || n_f > n_v {
        return Err(Error::param(
            "problem.n_f",
            format!("dtlz2 needs 2 <= n_f <= n_v, got n_f = {n_f}, n_v = {n_v}"),
        ));
    }
    let definition =
        ProblemDefinition::new("dtlz2", n_f, vec![0.0; n_v], vec![1.0; n_v], move |x| {
            rowwise(x, n_f, |r, o| dtlz2_values(r, n_f, o))
        })?;
    Ok(BenchmarkProblem {
        definition,
        known_front: Some(Arc::new(move |size| dtlz2_front(n_f, size))),
    })
}
