//! Update strategies: choosing next-iteration incumbents from the
//! incumbents and the freshly evaluated candidates.
//!
//! Each candidate `x'_k` may replace the incumbents of the subproblems in its
//! replacement set `R_k` (the neighborhood `b_k`, or the replacement
//! neighborhood of its best subproblem). Subproblem `j` then chooses among
//! `C_j = {x_j} + {x'_k : j in R_k}`.

use std::fmt::Debug;

use ndarray::ArrayView2;
use rand::RngCore;

use crate::constraints::ConstraintHandler;
use crate::error::{Error, Result};
use crate::neighborhood::nearest_neighbors;
use crate::scalarization::ScalarizationContext;

/// Scores of one subproblem's candidate set. Candidates are listed by
/// ascending candidate index.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScores {
    pub subproblem: usize,
    pub incumbent: f64,
    pub candidates: Vec<(usize, f64)>,
}

/// Per subproblem: `None` keeps the incumbent, `Some(k)` takes candidate `k`.
pub type Selection = Vec<Option<usize>>;

/// Best member of every set; ties go to the incumbent, then the lowest index.
pub fn select_standard(sets: &[CandidateScores]) -> Selection {
    sets.iter()
        .map(|s| {
            let mut best = s.incumbent;
            let mut pick = None;
            for &(k, score) in &s.candidates {
                if score < best {
                    best = score;
                    pick = Some(k);
                }
            }
            pick
        })
        .collect()
}

/// Like [`select_standard`], but each candidate fills at most `n_r` slots.
/// Slots go to the largest utility improvements first; ties by subproblem
/// index, then by score, then by candidate index.
pub fn select_restricted(sets: &[CandidateScores], n_r: usize) -> Selection {
    let mut pairs: Vec<(f64, usize, f64, usize)> = Vec::new();
    let mut n_candidates = 0;
    for (pos, s) in sets.iter().enumerate() {
        for &(k, score) in &s.candidates {
            n_candidates = n_candidates.max(k + 1);
            if score < s.incumbent {
                pairs.push((s.incumbent - score, pos, score, k));
            }
        }
    }
    pairs.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });
    let mut out = vec![None; sets.len()];
    let mut used = vec![0usize; n_candidates];
    for (_, pos, _, k) in pairs {
        if out[pos].is_none() && used[k] < n_r {
            out[pos] = Some(k);
            used[k] += 1;
        }
    }
    out
}

pub trait UpdateStrategy: Send + Sync + Debug {
    fn name(&self) -> &str;

    /// Called once per run with the weight matrix.
    fn prepare(&mut self, _weights: ArrayView2<f64>) -> Result<()> {
        Ok(())
    }

    /// Replacement set `R_k` of every candidate `k`.
    fn replacement_sets(
        &self,
        neighbors: &[Vec<usize>],
        candidate_objectives: ArrayView2<f64>,
        scal: &ScalarizationContext,
    ) -> Vec<Vec<usize>>;

    /// Maximum number of incumbents a single candidate may replace.
    fn copy_cap(&self) -> Option<usize>;
}

#[derive(Debug, Clone, Default)]
pub struct StandardUpdate;

impl UpdateStrategy for StandardUpdate {
    fn name(&self) -> &str {
        "standard"
    }

    fn replacement_sets(
        &self,
        neighbors: &[Vec<usize>],
        _: ArrayView2<f64>,
        _: &ScalarizationContext,
    ) -> Vec<Vec<usize>> {
        neighbors.to_vec()
    }

    fn copy_cap(&self) -> Option<usize> {
        None
    }
}

#[derive(Debug, Clone)]
pub struct RestrictedUpdate {
    pub nr: usize,
}

impl UpdateStrategy for RestrictedUpdate {
    fn name(&self) -> &str {
        "restricted"
    }

    fn replacement_sets(
        &self,
        neighbors: &[Vec<usize>],
        _: ArrayView2<f64>,
        _: &ScalarizationContext,
    ) -> Vec<Vec<usize>> {
        neighbors.to_vec()
    }

    fn copy_cap(&self) -> Option<usize> {
        Some(self.nr)
    }
}

/// Sends every candidate to the `tr` subproblems nearest (by weight vector)
/// to the subproblem it scores best on, then applies the restricted rule.
#[derive(Debug, Clone)]
pub struct BestSubproblemUpdate {
    pub nr: usize,
    pub tr: usize,
    replacement: Vec<Vec<usize>>,
}

impl BestSubproblemUpdate {
    pub fn new(nr: usize, tr: usize) -> Self {
        BestSubproblemUpdate {
            nr,
            tr,
            replacement: Vec::new(),
        }
    }
}

/// Subproblem on which `f` has the lowest utility; ties to the lowest index.
pub fn best_subproblem(f: ndarray::ArrayView1<f64>, scal: &ScalarizationContext) -> usize {
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for k in 0..scal.n_subproblems() {
        let v = scal.utility(f, k);
        if v < best_val {
            best_val = v;
            best = k;
        }
    }
    best
}

impl UpdateStrategy for BestSubproblemUpdate {
    fn name(&self) -> &str {
        "best"
    }

    fn prepare(&mut self, weights: ArrayView2<f64>) -> Result<()> {
        if self.tr == 0 || self.tr > weights.nrows() {
            return Err(Error::param(
                "update.best.tr",
                format!("{} must lie in [1, {}]", self.tr, weights.nrows()),
            ));
        }
        self.replacement = nearest_neighbors(weights, self.tr)?;
        Ok(())
    }

    fn replacement_sets(
        &self,
        _: &[Vec<usize>],
        y: ArrayView2<f64>,
        scal: &ScalarizationContext,
    ) -> Vec<Vec<usize>> {
        assert!(
            !self.replacement.is_empty(),
            "prepare() must run before the first update"
        );
        y.rows()
            .into_iter()
            .map(|f| self.replacement[best_subproblem(f, scal)].clone())
            .collect()
    }

    fn copy_cap(&self) -> Option<usize> {
        Some(self.nr)
    }
}

/// Objective values and violations of the incumbents and the candidates.
#[derive(Clone, Copy)]
pub struct UpdateInputs<'a> {
    pub incumbent_objectives: ArrayView2<'a, f64>,
    pub incumbent_violations: &'a [f64],
    pub candidate_objectives: ArrayView2<'a, f64>,
    pub candidate_violations: &'a [f64],
    pub neighbors: &'a [Vec<usize>],
    pub scalarization: &'a ScalarizationContext,
}

#[derive(Debug, Clone)]
pub struct UpdateOutcome {
    pub selection: Selection,
    /// Candidate indices in `C_j` (excluding the incumbent) per subproblem.
    pub members: Vec<Vec<usize>>,
}

/// Builds the candidate sets, scores them with `handler` and selects.
pub fn update_population(
    strategy: &dyn UpdateStrategy,
    handler: &dyn ConstraintHandler,
    inputs: &UpdateInputs,
    rng: &mut dyn RngCore,
) -> Result<UpdateOutcome> {
    let n = inputs.incumbent_objectives.nrows();
    let sets = strategy.replacement_sets(
        inputs.neighbors,
        inputs.candidate_objectives,
        inputs.scalarization,
    );
    if sets.len() != inputs.candidate_objectives.nrows() {
        return Err(Error::Shape(format!(
            "update strategy `{}` returned {} replacement sets for {} candidates",
            strategy.name(),
            sets.len(),
            inputs.candidate_objectives.nrows()
        )));
    }
    let mut members = vec![Vec::new(); n];
    for (k, set) in sets.iter().enumerate() {
        for &j in set {
            members[j].push(k);
        }
    }
    let scal = inputs.scalarization;
    let mut scored = Vec::with_capacity(n);
    for (j, m) in members.iter().enumerate() {
        let mut util = Vec::with_capacity(m.len() + 1);
        let mut viol = Vec::with_capacity(m.len() + 1);
        util.push(scal.utility(inputs.incumbent_objectives.row(j), j));
        viol.push(inputs.incumbent_violations[j]);
        for &k in m {
            util.push(scal.utility(inputs.candidate_objectives.row(k), j));
            viol.push(inputs.candidate_violations[k]);
        }
        let scores = handler.score(&util, &viol, rng);
        scored.push(CandidateScores {
            subproblem: j,
            incumbent: scores[0],
            candidates: m.iter().copied().zip(scores[1..].iter().copied()).collect(),
        });
    }
    let selection = match strategy.copy_cap() {
        None => select_standard(&scored),
        Some(nr) => select_restricted(&scored, nr),
    };
    Ok(UpdateOutcome { selection, members })
}

/// Best feasible point found so far for one subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub utility: f64,
}

/// Elitist archive of feasible points, one slot per subproblem.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Archive {
    pub entries: Vec<Option<ArchiveEntry>>,
}

impl Archive {
    pub fn new(n: usize) -> Self {
        Archive {
            entries: vec![None; n],
        }
    }

    /// Recomputes stored utilities against the current reference points.
    pub fn rescore(&mut self, scal: &ScalarizationContext) {
        for (j, e) in self.entries.iter_mut().enumerate() {
            if let Some(e) = e {
                e.utility = scal.utility(ndarray::ArrayView1::from(&e.y), j);
            }
        }
    }

    /// Stores the point if it is feasible and beats the current entry.
    pub fn offer(&mut self, j: usize, x: &[f64], y: &[f64], violation: f64, utility: f64) {
        if violation > 0.0 {
            return;
        }
        let better = match &self.entries[j] {
            None => true,
            Some(e) => utility < e.utility,
        };
        if better {
            self.entries[j] = Some(ArchiveEntry {
                x: x.to_vec(),
                y: y.to_vec(),
                utility,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::NoConstraintHandling;
    use crate::scalarization::{ReferencePoints, Scaling, WeightedSum};
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn set(j: usize, inc: f64, c: &[(usize, f64)]) -> CandidateScores {
        CandidateScores {
            subproblem: j,
            incumbent: inc,
            candidates: c.to_vec(),
        }
    }

    #[test]
    fn standard_prefers_incumbent_on_ties() {
        let s = [
            set(0, 1.0, &[(0, 1.0), (1, 2.0)]),
            set(1, 1.0, &[(0, 0.5), (1, 0.5)]),
        ];
        assert_eq!(select_standard(&s), vec![None, Some(0)]);
    }

    #[test]
    fn elitism_when_all_worse() {
        let s = [set(0, 1.0, &[(0, 3.0)]), set(1, 0.0, &[(0, 3.0), (1, 0.1)])];
        assert_eq!(select_standard(&s), vec![None, None]);
        assert_eq!(select_restricted(&s, 1), vec![None, None]);
    }

    #[test]
    fn cap_binds() {
        let s = [
            set(0, 1.0, &[(0, 0.5)]),
            set(1, 1.0, &[(0, 0.1)]),
            set(2, 1.0, &[(0, 0.7)]),
        ];
        assert_eq!(select_standard(&s), vec![Some(0); 3]);
        assert_eq!(select_restricted(&s, 1), vec![None, Some(0), None]);
        assert_eq!(select_restricted(&s, 2), vec![Some(0), Some(0), None]);
    }

    fn context(weights: ndarray::Array2<f64>, y: ndarray::ArrayView2<f64>) -> ScalarizationContext {
        ScalarizationContext {
            weights,
            reference: ReferencePoints::from_objectives(y).unwrap(),
            scaling: Scaling::None,
            method: Arc::new(WeightedSum),
        }
    }

    #[test]
    fn one_candidate_can_fill_its_whole_neighborhood() {
        let w = array![[1.0, 0.0], [0.5, 0.5], [0.0, 1.0]];
        let y = array![[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]];
        let yp = array![[0.0, 0.0], [2.0, 2.0], [2.0, 2.0]];
        let scal = context(w, y.view());
        let neighbors = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 1, 0]];
        let v = [0.0; 3];
        let inputs = UpdateInputs {
            incumbent_objectives: y.view(),
            incumbent_violations: &v,
            candidate_objectives: yp.view(),
            candidate_violations: &v,
            neighbors: &neighbors,
            scalarization: &scal,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out =
            update_population(&StandardUpdate, &NoConstraintHandling, &inputs, &mut rng).unwrap();
        assert_eq!(out.selection, vec![Some(0); 3]);
        let out = update_population(
            &RestrictedUpdate { nr: 2 },
            &NoConstraintHandling,
            &inputs,
            &mut rng,
        )
        .unwrap();
        assert_eq!(out.selection.iter().filter(|s| s.is_some()).count(), 2);
    }

    #[test]
    fn best_update_reaches_outside_the_neighborhood() {
        // Candidate 0 is excellent for subproblem 1 only, but b_0 = {0}.
        let w = array![[1.0, 0.0], [0.0, 1.0]];
        let y = array![[0.5, 5.0], [5.0, 5.0]];
        let yp = array![[9.0, 0.1], [9.0, 9.0]];
        let scal = context(w.clone(), y.view());
        let neighbors = vec![vec![0], vec![1]];
        let v = [0.0; 2];
        let inputs = UpdateInputs {
            incumbent_objectives: y.view(),
            incumbent_violations: &v,
            candidate_objectives: yp.view(),
            candidate_violations: &v,
            neighbors: &neighbors,
            scalarization: &scal,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let standard =
            update_population(&StandardUpdate, &NoConstraintHandling, &inputs, &mut rng).unwrap();
        assert_eq!(standard.selection, vec![None, None]);
        let mut best = BestSubproblemUpdate::new(1, 1);
        best.prepare(w.view()).unwrap();
        let out = update_population(&best, &NoConstraintHandling, &inputs, &mut rng).unwrap();
        assert_eq!(out.selection, vec![None, Some(0)]);
    }

    #[test]
    fn single_subproblem_best_update() {
        let w = array![[0.5, 0.5]];
        let y = array![[1.0, 1.0]];
        let yp = array![[0.5, 0.5]];
        let scal = context(w.clone(), y.view());
        let v = [0.0];
        let inputs = UpdateInputs {
            incumbent_objectives: y.view(),
            incumbent_violations: &v,
            candidate_objectives: yp.view(),
            candidate_violations: &v,
            neighbors: &[vec![0]],
            scalarization: &scal,
        };
        let mut best = BestSubproblemUpdate::new(1, 1);
        best.prepare(w.view()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = update_population(&best, &NoConstraintHandling, &inputs, &mut rng).unwrap();
        assert_eq!(out.selection, vec![Some(0)]);
    }

    #[test]
    fn archive_keeps_best_feasible() {
        let mut a = Archive::new(2);
        a.offer(0, &[0.1], &[1.0, 1.0], 0.3, 0.0);
        assert!(a.entries[0].is_none());
        a.offer(0, &[0.2], &[1.0, 1.0], 0.0, 2.0);
        a.offer(0, &[0.3], &[1.0, 1.0], 0.0, 1.0);
        a.offer(0, &[0.4], &[1.0, 1.0], 0.5, 0.5);
        assert_eq!(a.entries[0].as_ref().unwrap().x, vec![0.3]);
        assert!(a.entries[1].is_none());
    }
}
