//! Named component factories, grouped by role.
//!
//! Every configurable part of the algorithm is looked up here by
//! `(role, name)`. Factories receive the component's parameter bag and the
//! problem dimensions, and validate their own parameters.

use std::fmt;
use std::sync::Arc;

use crate::constraints::{
    ConstraintHandler, NoConstraintHandling, Penalty, VbrVariant, ViolationBasedRanking,
};
use crate::decomposition::{
    decompose_msld, decompose_sld, decompose_uniform, default_msld_tau, WeightMatrix,
};
use crate::error::{Error, Result};
use crate::neighborhood::NeighborhoodKind;
use crate::params::ComponentSpec;
use crate::problems::{make_problem, BenchmarkProblem};
use crate::scalarization::{
    AdjustedTchebycheff, InvertedPbi, Pbi, Scalarization, WeightedSum, WeightedTchebycheff,
    DEFAULT_AWT_EPSILON,
};
use crate::termination::StopCriterion;
use crate::update::{BestSubproblemUpdate, RestrictedUpdate, StandardUpdate, UpdateStrategy};
use crate::variation::localsearch::DEFAULT_TPQA_EPSILON;
use crate::variation::{
    Basis, BinomialRecombination, DifferentialMutation, Dvls, LocalSearch, LocalSearchGate,
    LocalSearchStage, PhiSpec, PolynomialMutation, Sbx, StackEntry, Tpqa, Truncate,
    VariationOperator, VariationStack,
};

/// Problem dimensions available to factories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildContext {
    pub n_v: usize,
    pub n_f: usize,
}

/// Name used inside a variation list to insert a local-search stage.
pub const LOCAL_SEARCH_ENTRY: &str = "localsearch";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Decomposition,
    Scalarization,
    Neighborhood,
    Variation,
    LocalSearch,
    Update,
    Constraint,
    Stop,
    Problem,
}

impl Role {
    pub const ALL: [Role; 9] = [
        Role::Decomposition,
        Role::Scalarization,
        Role::Neighborhood,
        Role::Variation,
        Role::LocalSearch,
        Role::Update,
        Role::Constraint,
        Role::Stop,
        Role::Problem,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Decomposition => "decomposition",
            Role::Scalarization => "scalarization",
            Role::Neighborhood => "neighborhood",
            Role::Variation => "variation",
            Role::LocalSearch => "localsearch",
            Role::Update => "update",
            Role::Constraint => "constraint",
            Role::Stop => "stop",
            Role::Problem => "problem",
        }
    }

    pub fn parse(s: &str) -> Result<Role> {
        Role::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::UnknownRole(s.to_string()))
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub type DecompositionFactory =
    Arc<dyn Fn(&ComponentSpec, &BuildContext) -> Result<WeightMatrix> + Send + Sync>;
pub type ScalarizationFactory =
    Arc<dyn Fn(&ComponentSpec, &BuildContext) -> Result<Arc<dyn Scalarization>> + Send + Sync>;
pub type VariationFactory =
    Arc<dyn Fn(&ComponentSpec, &BuildContext) -> Result<Arc<dyn VariationOperator>> + Send + Sync>;
pub type LocalSearchFactory =
    Arc<dyn Fn(&ComponentSpec, &BuildContext) -> Result<Arc<dyn LocalSearch>> + Send + Sync>;
pub type UpdateFactory =
    Arc<dyn Fn(&ComponentSpec, &BuildContext) -> Result<Box<dyn UpdateStrategy>> + Send + Sync>;
pub type ConstraintFactory =
    Arc<dyn Fn(&ComponentSpec, &BuildContext) -> Result<Arc<dyn ConstraintHandler>> + Send + Sync>;
pub type StopFactory =
    Arc<dyn Fn(&ComponentSpec, &BuildContext) -> Result<StopCriterion> + Send + Sync>;
pub type ProblemFactory =
    Arc<dyn Fn(usize, Option<usize>) -> Result<BenchmarkProblem> + Send + Sync>;

#[derive(Clone)]
pub enum Factory {
    Decomposition(DecompositionFactory),
    Scalarization(ScalarizationFactory),
    Neighborhood(NeighborhoodKind),
    Variation(VariationFactory),
    LocalSearch(LocalSearchFactory),
    Update(UpdateFactory),
    Constraint(ConstraintFactory),
    Stop(StopFactory),
    Problem(ProblemFactory),
}

impl Factory {
    pub fn role(&self) -> Role {
        match self {
            Factory::Decomposition(_) => Role::Decomposition,
            Factory::Scalarization(_) => Role::Scalarization,
            Factory::Neighborhood(_) => Role::Neighborhood,
            Factory::Variation(_) => Role::Variation,
            Factory::LocalSearch(_) => Role::LocalSearch,
            Factory::Update(_) => Role::Update,
            Factory::Constraint(_) => Role::Constraint,
            Factory::Stop(_) => Role::Stop,
            Factory::Problem(_) => Role::Problem,
        }
    }
}

impl fmt::Debug for Factory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Factory({})", self.role())
    }
}

/// Component registry. Names are listed per role in registration order.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: Vec<(Role, String, Factory)>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// Registry holding every built-in component.
    pub fn builtin() -> Self {
        let mut r = Registry::empty();
        register_builtins(&mut r).expect("built-in names are unique");
        r
    }

    pub fn register(&mut self, role: &str, name: &str, factory: Factory) -> Result<()> {
        let role = Role::parse(role)?;
        if factory.role() != role {
            return Err(Error::Invalid(format!(
                "a {} factory cannot be registered under role `{role}`",
                factory.role()
            )));
        }
        if self.entries.iter().any(|(r, n, _)| *r == role && n == name) {
            return Err(Error::DuplicateComponent {
                role: role.to_string(),
                name: name.to_string(),
            });
        }
        self.entries.push((role, name.to_string(), factory));
        Ok(())
    }

    pub fn names(&self, role: Role) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(r, _, _)| *r == role)
            .map(|(_, n, _)| n.clone())
            .collect()
    }

    /// Registered names for a role given by name.
    pub fn list(&self, role: &str) -> Result<Vec<String>> {
        Ok(self.names(Role::parse(role)?))
    }

    pub fn contains(&self, role: Role, name: &str) -> bool {
        self.entries.iter().any(|(r, n, _)| *r == role && n == name)
    }

    fn get(&self, role: Role, name: &str) -> Result<&Factory> {
        self.entries
            .iter()
            .find(|(r, n, _)| *r == role && n == name)
            .map(|(_, _, f)| f)
            .ok_or_else(|| Error::UnknownComponent {
                role: role.to_string(),
                name: name.to_string(),
                available: self.names(role).join(", "),
            })
    }

    pub fn build_decomposition(
        &self,
        spec: &ComponentSpec,
        ctx: &BuildContext,
    ) -> Result<WeightMatrix> {
        match self.get(Role::Decomposition, &spec.name)? {
            Factory::Decomposition(f) => f(spec, ctx),
            _ => unreachable!("role checked on registration"),
        }
    }

    pub fn build_scalarization(
        &self,
        spec: &ComponentSpec,
        ctx: &BuildContext,
    ) -> Result<Arc<dyn Scalarization>> {
        match self.get(Role::Scalarization, &spec.name)? {
            Factory::Scalarization(f) => f(spec, ctx),
            _ => unreachable!("role checked on registration"),
        }
    }

    /// Neighborhood type, size `T` and in-neighborhood mass `delta_p`.
    pub fn build_neighborhood(
        &self,
        spec: &ComponentSpec,
    ) -> Result<(NeighborhoodKind, usize, f64)> {
        let kind = match self.get(Role::Neighborhood, &spec.name)? {
            Factory::Neighborhood(k) => *k,
            _ => unreachable!("role checked on registration"),
        };
        let p = spec.params("neighborhood");
        p.allow_only(&["t", "delta_p"])?;
        let t = p.req_usize("t")?;
        let delta_p = p.f64_or("delta_p", 1.0)?;
        p.in_range("delta_p", delta_p, 0.0, 1.0)?;
        Ok((kind, t, delta_p))
    }

    pub fn build_variation(
        &self,
        spec: &ComponentSpec,
        ctx: &BuildContext,
    ) -> Result<Arc<dyn VariationOperator>> {
        match self.get(Role::Variation, &spec.name)? {
            Factory::Variation(f) => f(spec, ctx),
            _ => unreachable!("role checked on registration"),
        }
    }

    /// Builds a local-search stage from `{"name": "localsearch", "type": ...,
    /// "tau": k | "gamma": p, ...method parameters}`.
    pub fn build_local_search(
        &self,
        spec: &ComponentSpec,
        ctx: &BuildContext,
    ) -> Result<LocalSearchStage> {
        let p = spec.params("variation");
        let method = p
            .opt_str("type")?
            .ok_or_else(|| Error::param(p.key("type"), "required parameter is missing"))?;
        let gate = match (p.opt_usize("tau")?, p.opt_f64("gamma")?) {
            (Some(_), Some(_)) => {
                return Err(Error::param(
                    p.key("tau"),
                    "give either tau or gamma, not both",
                ))
            }
            (Some(0), None) => return Err(Error::param(p.key("tau"), "period must be >= 1")),
            (Some(tau), None) => LocalSearchGate::Period(tau),
            (None, Some(g)) => LocalSearchGate::Probability(p.in_range("gamma", g, 0.0, 1.0)?),
            (None, None) => {
                return Err(Error::param(
                    p.key("tau"),
                    "local search needs tau or gamma",
                ))
            }
        };
        let mut inner = ComponentSpec::new(method);
        for (k, v) in &spec.params {
            if !matches!(k.as_str(), "type" | "tau" | "gamma") {
                inner.params.insert(k.clone(), v.clone());
            }
        }
        let method = match self.get(Role::LocalSearch, method)? {
            Factory::LocalSearch(f) => f(&inner, ctx)?,
            _ => unreachable!("role checked on registration"),
        };
        Ok(LocalSearchStage { method, gate })
    }

    pub fn build_stack(
        &self,
        specs: &[ComponentSpec],
        ctx: &BuildContext,
    ) -> Result<VariationStack> {
        let entries = specs
            .iter()
            .map(|s| {
                if s.name == LOCAL_SEARCH_ENTRY {
                    self.build_local_search(s, ctx).map(StackEntry::LocalSearch)
                } else {
                    self.build_variation(s, ctx).map(StackEntry::Operator)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VariationStack::new(entries))
    }

    pub fn build_update(
        &self,
        spec: &ComponentSpec,
        ctx: &BuildContext,
    ) -> Result<Box<dyn UpdateStrategy>> {
        match self.get(Role::Update, &spec.name)? {
            Factory::Update(f) => f(spec, ctx),
            _ => unreachable!("role checked on registration"),
        }
    }

    pub fn build_constraint(
        &self,
        spec: &ComponentSpec,
        ctx: &BuildContext,
    ) -> Result<Arc<dyn ConstraintHandler>> {
        match self.get(Role::Constraint, &spec.name)? {
            Factory::Constraint(f) => f(spec, ctx),
            _ => unreachable!("role checked on registration"),
        }
    }

    pub fn build_stop(
        &self,
        specs: &[ComponentSpec],
        ctx: &BuildContext,
    ) -> Result<Vec<StopCriterion>> {
        if specs.is_empty() {
            return Err(Error::param(
                "stop",
                "at least one stop criterion is required",
            ));
        }
        specs
            .iter()
            .map(|s| match self.get(Role::Stop, &s.name)? {
                Factory::Stop(f) => f(s, ctx),
                _ => unreachable!("role checked on registration"),
            })
            .collect()
    }

    pub fn build_problem(
        &self,
        name: &str,
        n_v: usize,
        n_f: Option<usize>,
    ) -> Result<BenchmarkProblem> {
        match self.get(Role::Problem, name)? {
            Factory::Problem(f) => f(n_v, n_f),
            _ => unreachable!("role checked on registration"),
        }
    }
}

fn decomposition(
    f: impl Fn(&ComponentSpec, &BuildContext) -> Result<WeightMatrix> + Send + Sync + 'static,
) -> Factory {
    Factory::Decomposition(Arc::new(f))
}

fn scalarization(
    f: impl Fn(&ComponentSpec, &BuildContext) -> Result<Arc<dyn Scalarization>> + Send + Sync + 'static,
) -> Factory {
    Factory::Scalarization(Arc::new(f))
}

fn variation(
    f: impl Fn(&ComponentSpec, &BuildContext) -> Result<Arc<dyn VariationOperator>>
        + Send
        + Sync
        + 'static,
) -> Factory {
    Factory::Variation(Arc::new(f))
}

fn local_search(
    f: impl Fn(&ComponentSpec, &BuildContext) -> Result<Arc<dyn LocalSearch>> + Send + Sync + 'static,
) -> Factory {
    Factory::LocalSearch(Arc::new(f))
}

fn update(
    f: impl Fn(&ComponentSpec, &BuildContext) -> Result<Box<dyn UpdateStrategy>> + Send + Sync + 'static,
) -> Factory {
    Factory::Update(Arc::new(f))
}

fn constraint(
    f: impl Fn(&ComponentSpec, &BuildContext) -> Result<Arc<dyn ConstraintHandler>>
        + Send
        + Sync
        + 'static,
) -> Factory {
    Factory::Constraint(Arc::new(f))
}

fn stop(
    f: impl Fn(&ComponentSpec, &BuildContext) -> Result<StopCriterion> + Send + Sync + 'static,
) -> Factory {
    Factory::Stop(Arc::new(f))
}

fn no_params(spec: &ComponentSpec, role: &str) -> Result<()> {
    spec.params(role).allow_only(&[])
}

fn positive_count(spec: &ComponentSpec, role: &str, key: &str) -> Result<usize> {
    let p = spec.params(role);
    let v = p.req_usize(key)?;
    if v == 0 {
        return Err(Error::param(p.key(key), "must be >= 1"));
    }
    Ok(v)
}

fn register_builtins(r: &mut Registry) -> Result<()> {
    const D: &str = "decomposition";
    r.register(
        D,
        "sld",
        decomposition(|s, ctx| {
            s.params(D).allow_only(&["h"])?;
            decompose_sld(positive_count(s, D, "h")?, ctx.n_f)
        }),
    )?;
    r.register(
        D,
        "msld",
        decomposition(|s, ctx| {
            let p = s.params(D);
            p.allow_only(&["h", "tau"])?;
            let h = p
                .opt_usize_vec("h")?
                .ok_or_else(|| Error::param(p.key("h"), "required parameter is missing"))?;
            if h.contains(&0) {
                return Err(Error::param(p.key("h"), "layer sizes must be >= 1"));
            }
            let tau = p
                .opt_f64_vec("tau")?
                .unwrap_or_else(|| default_msld_tau(h.len()));
            decompose_msld(&h, &tau, ctx.n_f)
        }),
    )?;
    r.register(
        D,
        "uniform",
        decomposition(|s, ctx| {
            s.params(D).allow_only(&["n"])?;
            decompose_uniform(positive_count(s, D, "n")?, ctx.n_f)
        }),
    )?;

    const S: &str = "scalarization";
    r.register(
        S,
        "ws",
        scalarization(|s, _| {
            no_params(s, S)?;
            Ok(Arc::new(WeightedSum))
        }),
    )?;
    r.register(
        S,
        "wt",
        scalarization(|s, _| {
            no_params(s, S)?;
            Ok(Arc::new(WeightedTchebycheff))
        }),
    )?;
    r.register(
        S,
        "awt",
        scalarization(|s, _| {
            let p = s.params(S);
            p.allow_only(&["epsilon"])?;
            let epsilon = p.positive("epsilon", p.f64_or("epsilon", DEFAULT_AWT_EPSILON)?)?;
            Ok(Arc::new(AdjustedTchebycheff { epsilon }))
        }),
    )?;
    r.register(
        S,
        "pbi",
        scalarization(|s, _| {
            let p = s.params(S);
            p.allow_only(&["theta"])?;
            let theta = p.positive("theta", p.f64_or("theta", 5.0)?)?;
            Ok(Arc::new(Pbi { theta }))
        }),
    )?;
    r.register(
        S,
        "ipbi",
        scalarization(|s, _| {
            let p = s.params(S);
            p.allow_only(&["theta"])?;
            let theta = p.positive("theta", p.f64_or("theta", 5.0)?)?;
            Ok(Arc::new(InvertedPbi { theta }))
        }),
    )?;

    r.register(
        "neighborhood",
        "lambda",
        Factory::Neighborhood(NeighborhoodKind::ByWeights),
    )?;
    r.register(
        "neighborhood",
        "x",
        Factory::Neighborhood(NeighborhoodKind::ByIncumbents),
    )?;

    const V: &str = "variation";
    r.register(
        V,
        "sbx",
        variation(|s, _| {
            let p = s.params(V);
            p.allow_only(&["eta", "prob"])?;
            let eta = p.positive("eta", p.f64_or("eta", 20.0)?)?;
            let prob = p.in_range("prob", p.f64_or("prob", 1.0)?, 0.0, 1.0)?;
            Ok(Arc::new(Sbx::new(eta, prob)))
        }),
    )?;
    r.register(
        V,
        "polymut",
        variation(|s, ctx| {
            let p = s.params(V);
            p.allow_only(&["eta", "prob"])?;
            let eta = p.positive("eta", p.f64_or("eta", 20.0)?)?;
            let prob = p.in_range("prob", p.f64_or("prob", 1.0 / ctx.n_v as f64)?, 0.0, 1.0)?;
            Ok(Arc::new(PolynomialMutation::new(eta, prob)))
        }),
    )?;
    r.register(
        V,
        "diffmut",
        variation(|s, _| {
            let p = s.params(V);
            p.allow_only(&["basis", "phi"])?;
            let basis = match p.opt_str("basis")? {
                None => Basis::Rand,
                Some(b) => Basis::parse(b).ok_or_else(|| {
                    Error::param(
                        p.key("basis"),
                        format!("`{b}` is not one of rand, mean, wgi"),
                    )
                })?,
            };
            let phi = match s.params.get("phi") {
                None | Some(serde_json::Value::Null) => PhiSpec::Random,
                Some(serde_json::Value::String(t)) if t == "random" => PhiSpec::Random,
                Some(_) => {
                    let v = p.req_f64("phi")?;
                    if v == 0.0 {
                        return Err(Error::param(p.key("phi"), "must be nonzero"));
                    }
                    PhiSpec::Constant(v)
                }
            };
            Ok(Arc::new(DifferentialMutation::new(basis, phi)))
        }),
    )?;
    r.register(
        V,
        "binrec",
        variation(|s, _| {
            let p = s.params(V);
            p.allow_only(&["rho"])?;
            let rho = p.in_range("rho", p.req_f64("rho")?, 0.0, 1.0)?;
            Ok(Arc::new(BinomialRecombination::new(rho)))
        }),
    )?;
    r.register(
        V,
        "truncate",
        variation(|s, _| {
            no_params(s, V)?;
            Ok(Arc::new(Truncate))
        }),
    )?;

    const L: &str = "localsearch";
    r.register(
        L,
        "tpqa",
        local_search(|s, _| {
            let p = s.params(L);
            p.allow_only(&["epsilon"])?;
            let epsilon = p.positive("epsilon", p.f64_or("epsilon", DEFAULT_TPQA_EPSILON)?)?;
            Ok(Arc::new(Tpqa { epsilon }))
        }),
    )?;
    r.register(
        L,
        "dvls",
        local_search(|s, _| {
            no_params(s, L)?;
            Ok(Arc::new(Dvls::default()))
        }),
    )?;

    const U: &str = "update";
    r.register(
        U,
        "standard",
        update(|s, _| {
            no_params(s, U)?;
            Ok(Box::new(StandardUpdate))
        }),
    )?;
    r.register(
        U,
        "restricted",
        update(|s, _| {
            s.params(U).allow_only(&["nr"])?;
            Ok(Box::new(RestrictedUpdate {
                nr: positive_count(s, U, "nr")?,
            }))
        }),
    )?;
    r.register(
        U,
        "best",
        update(|s, _| {
            s.params(U).allow_only(&["nr", "tr"])?;
            Ok(Box::new(BestSubproblemUpdate::new(
                positive_count(s, U, "nr")?,
                positive_count(s, U, "tr")?,
            )))
        }),
    )?;

    const C: &str = "constraint";
    r.register(
        C,
        "none",
        constraint(|s, _| {
            no_params(s, C)?;
            Ok(Arc::new(NoConstraintHandling))
        }),
    )?;
    r.register(
        C,
        "penalty",
        constraint(|s, _| {
            let p = s.params(C);
            p.allow_only(&["beta"])?;
            let beta = p.positive("beta", p.req_f64("beta")?)?;
            Ok(Arc::new(Penalty { beta }))
        }),
    )?;
    r.register(
        C,
        "vbr",
        constraint(|s, _| {
            let p = s.params(C);
            p.allow_only(&["type", "pf"])?;
            let variant = match p.opt_str("type")?.unwrap_or("ts") {
                "ts" => VbrVariant::Ts,
                "sr" => VbrVariant::Sr {
                    pf: p.in_range("pf", p.f64_or("pf", 0.45)?, 0.0, 1.0)?,
                },
                "vt" => VbrVariant::Vt,
                other => {
                    return Err(Error::param(
                        p.key("type"),
                        format!("`{other}` is not one of ts, sr, vt"),
                    ));
                }
            };
            Ok(Arc::new(ViolationBasedRanking { variant }))
        }),
    )?;

    const T: &str = "stop";
    r.register(
        T,
        "maxiter",
        stop(|s, _| {
            s.params(T).allow_only(&["max"])?;
            Ok(StopCriterion::MaxIter(s.params(T).req_usize("max")?))
        }),
    )?;
    r.register(
        T,
        "maxeval",
        stop(|s, _| {
            s.params(T).allow_only(&["max"])?;
            Ok(StopCriterion::MaxEval(s.params(T).req_usize("max")?))
        }),
    )?;
    r.register(
        T,
        "maxtime",
        stop(|s, _| {
            let p = s.params(T);
            p.allow_only(&["max"])?;
            let secs = p.req_f64("max")?;
            if secs < 0.0 {
                return Err(Error::param(p.key("max"), "must be >= 0"));
            }
            Ok(StopCriterion::MaxTime(secs))
        }),
    )?;

    for name in crate::problems::BUILTIN_PROBLEMS {
        r.register(
            "problem",
            name,
            Factory::Problem(Arc::new(move |n_v, n_f| make_problem(name, n_v, n_f))),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_listings() {
        let r = Registry::builtin();
        assert_eq!(r.list("decomposition").unwrap(), ["sld", "msld", "uniform"]);
        assert_eq!(
            r.list("scalarization").unwrap(),
            ["ws", "wt", "awt", "pbi", "ipbi"]
        );
        assert_eq!(
            r.list("update").unwrap(),
            ["standard", "restricted", "best"]
        );
        assert_eq!(r.list("localsearch").unwrap(), ["tpqa", "dvls"]);
        assert!(matches!(r.list("bogus"), Err(Error::UnknownRole(_))));
    }

    #[test]
    fn duplicates_and_mismatched_roles_are_rejected() {
        let mut r = Registry::builtin();
        let f = update(|_, _| Ok(Box::new(StandardUpdate)));
        assert!(matches!(
            r.register("update", "standard", f.clone()),
            Err(Error::DuplicateComponent { .. })
        ));
        assert!(r.register("variation", "odd", f.clone()).is_err());
        assert!(matches!(
            r.register("nope", "x", f),
            Err(Error::UnknownRole(_))
        ));
    }

    #[test]
    fn unknown_component_lists_alternatives() {
        let r = Registry::builtin();
        let ctx = BuildContext { n_v: 3, n_f: 2 };
        let err = r
            .build_update(&ComponentSpec::new("greedy"), &ctx)
            .unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("greedy") && msg.contains("restricted"),
            "{msg}"
        );
    }

    #[test]
    fn factories_validate_parameters() {
        let r = Registry::builtin();
        let ctx = BuildContext { n_v: 3, n_f: 2 };
        let bad = ComponentSpec::new("sbx").with("prob", 2.0);
        assert!(r
            .build_variation(&bad, &ctx)
            .unwrap_err()
            .to_string()
            .contains("variation.sbx.prob"));
        let typo = ComponentSpec::new("restricted").with("n_r", 2);
        assert!(r.build_update(&typo, &ctx).is_err());
        let ls = ComponentSpec::new("localsearch")
            .with("type", "tpqa")
            .with("gamma", 0.5);
        assert!(r.build_stack(&[ls], &ctx).is_ok());
        let ls = ComponentSpec::new("localsearch").with("type", "dvls");
        assert!(r.build_stack(&[ls], &ctx).is_err());
        assert_eq!(
            r.build_stop(&[ComponentSpec::new("maxiter").with("max", 5)], &ctx)
                .unwrap(),
            vec![StopCriterion::MaxIter(5)]
        );
        assert!(r.build_stop(&[], &ctx).is_err());
    }
}
