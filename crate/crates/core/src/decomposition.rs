//! Weight-vector generation. Each row of a [`WeightMatrix`] defines one scalar
//! subproblem; rows are nonnegative and sum to one.
//!
//! Three strategies are provided:
//!
//! * simplex-lattice design ([`decompose_sld`]): every composition of `h` into
//!   `n_f` parts, divided by `h`;
//! * multiple-layer simplex lattice ([`decompose_msld`]): several lattices, each
//!   contracted towards the simplex centroid by its own factor `tau`;
//! * uniform design ([`decompose_uniform`]): the good-lattice-point matrix with
//!   the lowest centered L2 discrepancy, mapped onto the simplex.

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};

/// Upper bound on the number of rows a lattice may produce.
pub const DEFAULT_MAX_SUBPROBLEMS: usize = 200_000;

/// Upper bound on the number of generator vectors scored by the uniform design.
pub const DEFAULT_MAX_UD_CANDIDATES: usize = 2_000_000;

/// Relative tolerance under which two discrepancy values count as tied.
pub const CD2_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    pub weights: Array2<f64>,
    /// Human-readable description of the generator and its parameters.
    pub provenance: String,
}

impl WeightMatrix {
    pub fn len(&self) -> usize {
        self.weights.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.nrows() == 0
    }

    pub fn n_obj(&self) -> usize {
        self.weights.ncols()
    }
}

/// Binomial coefficient with overflow detection.
pub fn binomial(n: usize, k: usize) -> Option<usize> {
    let k = k.min(n.checked_sub(k)?);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

/// Simplex-lattice design with the default size cap.
pub fn decompose_sld(h: usize, n_obj: usize) -> Result<WeightMatrix> {
    decompose_sld_capped(h, n_obj, DEFAULT_MAX_SUBPROBLEMS)
}

/// Simplex-lattice design: all compositions of `h` into `n_obj` nonnegative
/// parts, scaled by `1/h`, in ascending lexicographic order.
pub fn decompose_sld_capped(h: usize, n_obj: usize, max_rows: usize) -> Result<WeightMatrix> {
    if h == 0 {
        return Err(Error::param("decomposition.sld.h", "must be >= 1"));
    }
    if n_obj < 2 {
        return Err(Error::param(
            "decomposition.n_obj",
            "at least two objectives are required",
        ));
    }
    let count = binomial(h + n_obj - 1, n_obj - 1).filter(|&n| n <= max_rows);
    let Some(count) = count else {
        return Err(Error::TooLarge(format!(
            "simplex lattice with h={h} and {n_obj} objectives exceeds {max_rows} subproblems; \
             lower h or use the multiple-layer lattice (msld)"
        )));
    };

    let mut weights = Array2::<f64>::zeros((count, n_obj));
    let mut parts = vec![0usize; n_obj];
    let mut row = 0;
    compositions(h, 0, &mut parts, &mut |p| {
        for (j, &c) in p.iter().enumerate() {
            weights[[row, j]] = c as f64 / h as f64;
        }
        row += 1;
    });
    debug_assert_eq!(row, count);

    Ok(WeightMatrix {
        weights,
        provenance: format!("sld(h={h})"),
    })
}

fn compositions(
    remaining: usize,
    pos: usize,
    parts: &mut [usize],
    emit: &mut impl FnMut(&[usize]),
) {
    if pos == parts.len() - 1 {
        parts[pos] = remaining;
        emit(parts);
        return;
    }
    for c in 0..=remaining {
        parts[pos] = c;
        compositions(remaining - c, pos + 1, parts, emit);
    }
}

/// Multiple-layer simplex lattice. Layer `k` is `SLD(h[k])` transformed by
/// `w' = tau[k] * w + (1 - tau[k]) / n_obj`.
pub fn decompose_msld(h: &[usize], tau: &[f64], n_obj: usize) -> Result<WeightMatrix> {
    if h.is_empty() || h.len() != tau.len() {
        return Err(Error::param(
            "decomposition.msld",
            format!(
                "h and tau must be nonempty and of equal length (got {} and {})",
                h.len(),
                tau.len()
            ),
        ));
    }
    for (k, &t) in tau.iter().enumerate() {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::param(
                "decomposition.msld.tau",
                format!("tau[{k}] = {t} is outside (0, 1]"),
            ));
        }
        if tau[..k].contains(&t) {
            return Err(Error::param(
                "decomposition.msld.tau",
                format!("duplicate tau value {t}"),
            ));
        }
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (&hk, &tk) in h.iter().zip(tau) {
        let layer = msld_layer(hk, tk, n_obj)?;
        for w in layer.rows() {
            let row = w.to_vec();
            if rows.iter().any(|r| r == &row) {
                return Err(Error::Invalid(format!(
                    "msld layers (h={hk}, tau={tk}) produce a duplicate weight vector {row:?}"
                )));
            }
            rows.push(row);
        }
    }
    if rows.len() > DEFAULT_MAX_SUBPROBLEMS {
        return Err(Error::TooLarge(format!(
            "multiple-layer lattice exceeds {DEFAULT_MAX_SUBPROBLEMS} subproblems"
        )));
    }

    let n = rows.len();
    let weights = Array2::from_shape_vec((n, n_obj), rows.into_iter().flatten().collect())
        .expect("rows have n_obj entries");
    Ok(WeightMatrix {
        weights,
        provenance: format!("msld(h={h:?}, tau={tau:?})"),
    })
}

/// One layer: `SLD(h)` shrunk towards the centroid, `tau * lambda + (1 - tau) / n_obj`.
pub fn msld_layer(h: usize, tau: f64, n_obj: usize) -> Result<Array2<f64>> {
    let layer = decompose_sld(h, n_obj)?;
    Ok(layer.weights.mapv(|x| tau * x + (1.0 - tau) / n_obj as f64))
}

/// Default layer contraction factors `tau_k = k / K`.
pub fn default_msld_tau(layers: usize) -> Vec<f64> {
    (1..=layers).map(|k| k as f64 / layers as f64).collect()
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `{h in 1..n : gcd(h, n) = 1}` in ascending order.
pub fn coprime_generators(n: usize) -> Vec<usize> {
    (1..n).filter(|&h| gcd(h, n) == 1).collect()
}

/// Good-lattice-point matrix `u_ij = (i * h_j) mod n` for `i = 1..=n`, with
/// residue 0 represented as `n` so entries lie in `1..=n`.
pub fn lattice_matrix(n: usize, generator: &[usize]) -> Array2<usize> {
    Array2::from_shape_fn((n, generator.len()), |(i, j)| {
        let r = ((i + 1) * generator[j]) % n;
        if r == 0 {
            n
        } else {
            r
        }
    })
}

/// Lattice matrix mapped into the open unit cube: `(U - 0.5) / n`.
pub fn scaled_lattice(n: usize, generator: &[usize]) -> Array2<f64> {
    lattice_matrix(n, generator).mapv(|u| (u as f64 - 0.5) / n as f64)
}

/// Centered L2 discrepancy of a point set in the unit cube (rows are points).
pub fn cd2_discrepancy(u: ArrayView2<f64>) -> Result<f64> {
    let (n, d) = u.dim();
    if n == 0 || d == 0 {
        return Err(Error::Shape("CD2 of an empty matrix".into()));
    }
    let centered = u.mapv(|x| (x - 0.5).abs());

    let first = (13.0f64 / 12.0).powi(d as i32);

    let second: f64 = centered
        .rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .map(|&a| 1.0 + (a - a * a) / 2.0)
                .product::<f64>()
        })
        .sum();

    let mut third = 0.0;
    for i in 0..n {
        for k in 0..n {
            let mut prod = 1.0;
            for j in 0..d {
                prod *= 1.0 + (centered[[i, j]] + centered[[k, j]]) / 2.0
                    - (u[[i, j]] - u[[k, j]]).abs() / 2.0;
            }
            third += prod;
        }
    }

    let nf = n as f64;
    Ok(first - 2.0 / nf * second + third / (nf * nf))
}

/// Ordered `(n_obj - 1)`-tuples of distinct elements of `pool`, in
/// lexicographic order of positions.
fn ordered_tuples(pool: &[usize], len: usize) -> Vec<Vec<usize>> {
    fn go(
        pool: &[usize],
        len: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for (p, &h) in pool.iter().enumerate() {
            if used[p] {
                continue;
            }
            used[p] = true;
            cur.push(h);
            go(pool, len, used, cur, out);
            cur.pop();
            used[p] = false;
        }
    }
    let mut out = Vec::new();
    go(
        pool,
        len,
        &mut vec![false; pool.len()],
        &mut Vec::with_capacity(len),
        &mut out,
    );
    out
}

/// Outcome of the uniform-design search.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformDesign {
    pub generator: Vec<usize>,
    pub cd2: f64,
    pub weights: WeightMatrix,
}

/// Uniform design with `n` subproblems; see [`uniform_design`] for details.
pub fn decompose_uniform(n: usize, n_obj: usize) -> Result<WeightMatrix> {
    Ok(uniform_design(n, n_obj, DEFAULT_MAX_UD_CANDIDATES)?.weights)
}

/// Scores every ordered tuple of distinct coprime generators by CD2, keeps
/// the first one within [`CD2_TIE_TOLERANCE`] of the minimum, and maps its
/// scaled lattice onto the simplex with the power-product transform.
pub fn uniform_design(n: usize, n_obj: usize, max_candidates: usize) -> Result<UniformDesign> {
    if n_obj < 2 {
        return Err(Error::param(
            "decomposition.n_obj",
            "at least two objectives are required",
        ));
    }
    if n < 2 {
        return Err(Error::param("decomposition.uniform.n", "must be >= 2"));
    }
    let pool = coprime_generators(n);
    let dims = n_obj - 1;
    if pool.len() < dims {
        return Err(Error::param(
            "decomposition.uniform.n",
            format!(
                "n = {n} has only {} coprime generators but {dims} are needed for {n_obj} objectives",
                pool.len()
            ),
        ));
    }
    let count = (0..dims).try_fold(1usize, |acc, i| acc.checked_mul(pool.len() - i));
    if count.is_none_or(|c| c > max_candidates) {
        return Err(Error::TooLarge(format!(
            "uniform design with n={n} and {n_obj} objectives needs more than {max_candidates} \
             candidate generators; lower n or use the simplex lattice (sld)"
        )));
    }

    let candidates = ordered_tuples(&pool, dims);
    let scores = candidates
        .iter()
        .map(|h| cd2_discrepancy(scaled_lattice(n, h).view()))
        .collect::<Result<Vec<f64>>>()?;
    let best = first_within_tolerance_of_min(&scores);

    let generator = candidates[best].clone();
    let weights = simplex_from_unit(scaled_lattice(n, &generator).view());
    Ok(UniformDesign {
        cd2: scores[best],
        weights: WeightMatrix {
            weights,
            provenance: format!("uniform(n={n}, h={generator:?})"),
        },
        generator,
    })
}

/// Index of the first score within [`CD2_TIE_TOLERANCE`] (relative) of the minimum.
pub fn first_within_tolerance_of_min(scores: &[f64]) -> usize {
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = CD2_TIE_TOLERANCE * min.abs().max(1.0);
    scores
        .iter()
        .position(|&s| s <= min + tol)
        .expect("nonempty score list")
}

/// Maps points of the open unit cube `(0,1)^(m-1)` onto the `m`-simplex:
/// `w_j = (1 - u_j^(1/(m-j))) * prod_{k<j} u_k^(1/(m-k))` and
/// `w_m = prod_k u_k^(1/(m-k))` (1-based `j`).
pub fn simplex_from_unit(u: ArrayView2<f64>) -> Array2<f64> {
    let (n, d) = u.dim();
    let m = d + 1;
    let mut w = Array2::<f64>::zeros((n, m));
    for i in 0..n {
        let mut prefix = 1.0;
        for j in 0..d {
            let p = u[[i, j]].powf(1.0 / (m - 1 - j) as f64);
            w[[i, j]] = (1.0 - p) * prefix;
            prefix *= p;
        }
        w[[i, d]] = prefix;
    }
    w
}
