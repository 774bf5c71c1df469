//! Algorithm configurations and named presets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ComponentSpec;
use crate::scalarization::Scaling;

/// A fully specified algorithm: one spec per role, plus the ordered
/// variation stack and the stop criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub decomposition: ComponentSpec,
    pub scalarization: ComponentSpec,
    #[serde(default)]
    pub scaling: Scaling,
    pub neighborhood: ComponentSpec,
    pub variation: Vec<ComponentSpec>,
    pub update: ComponentSpec,
    #[serde(default = "no_constraint")]
    pub constraint: ComponentSpec,
    pub stop: Vec<ComponentSpec>,
    #[serde(default)]
    pub seed: u64,
}

fn no_constraint() -> ComponentSpec {
    ComponentSpec::new("none")
}

pub const PRESETS: [&str; 3] = ["original", "moead-de", "tuned"];

fn sld(h: usize) -> ComponentSpec {
    ComponentSpec::new("sld").with("h", h)
}

fn max_iter(n: usize) -> Vec<ComponentSpec> {
    vec![ComponentSpec::new("maxiter").with("max", n)]
}

/// Named starting configurations.
///
/// * `original`: SLD weights (h = 99, so N = 100 for two objectives),
///   weighted Tchebycheff, T = 20, SBX + polynomial mutation, standard update,
///   200 iterations.
/// * `moead-de`: as `original` but with DE/rand mutation, binomial
///   recombination, delta_p = 0.9 and restricted update with n_r = 2.
/// * `tuned`: uniform-design weights (N = 100), adjusted Tchebycheff with
///   simple scaling, neighborhoods by incumbent position (T = 13), DE/rand,
///   binomial recombination, restricted update with n_r = 3, 50000 evaluations.
pub fn preset(name: &str) -> Result<AlgorithmConfig> {
    let polymut = ComponentSpec::new("polymut").with("eta", 20.0);
    let truncate = ComponentSpec::new("truncate");
    match name {
        "original" => Ok(AlgorithmConfig {
            decomposition: sld(99),
            scalarization: ComponentSpec::new("wt"),
            scaling: Scaling::None,
            neighborhood: ComponentSpec::new("lambda")
                .with("t", 20)
                .with("delta_p", 1.0),
            variation: vec![
                ComponentSpec::new("sbx")
                    .with("eta", 20.0)
                    .with("prob", 1.0),
                polymut,
                truncate,
            ],
            update: ComponentSpec::new("standard"),
            constraint: no_constraint(),
            stop: max_iter(200),
            seed: 0,
        }),
        "moead-de" => Ok(AlgorithmConfig {
            decomposition: sld(99),
            scalarization: ComponentSpec::new("wt"),
            scaling: Scaling::None,
            neighborhood: ComponentSpec::new("lambda")
                .with("t", 20)
                .with("delta_p", 0.9),
            variation: vec![
                ComponentSpec::new("diffmut")
                    .with("basis", "rand")
                    .with("phi", "random"),
                ComponentSpec::new("binrec").with("rho", 0.9),
                polymut,
                truncate,
            ],
            update: ComponentSpec::new("restricted").with("nr", 2),
            constraint: no_constraint(),
            stop: max_iter(200),
            seed: 0,
        }),
        "tuned" => Ok(AlgorithmConfig {
            decomposition: ComponentSpec::new("uniform").with("n", 100),
            scalarization: ComponentSpec::new("awt"),
            scaling: Scaling::Simple,
            neighborhood: ComponentSpec::new("x").with("t", 13).with("delta_p", 0.887),
            variation: vec![
                ComponentSpec::new("diffmut")
                    .with("basis", "rand")
                    .with("phi", "random"),
                ComponentSpec::new("binrec").with("rho", 0.906),
                ComponentSpec::new("polymut").with("eta", 10.429),
                truncate,
            ],
            update: ComponentSpec::new("restricted").with("nr", 3),
            constraint: no_constraint(),
            stop: vec![ComponentSpec::new("maxeval").with("max", 50_000)],
            seed: 0,
        }),
        other => Err(Error::UnknownPreset {
            name: other.to_string(),
            available: PRESETS.join(", "),
        }),
    }
}

/// Either a preset with per-role overrides, or a complete configuration
/// written out by hand. Each override replaces the preset's whole component.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<ComponentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalarization: Option<ComponentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<Scaling>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighborhood: Option<ComponentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variation: Option<Vec<ComponentSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub update: Option<ComponentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ComponentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<Vec<ComponentSpec>>,
}

impl AlgorithmSpec {
    pub fn resolve(&self) -> Result<AlgorithmConfig> {
        let base = match &self.preset {
            Some(name) => Some(preset(name)?),
            None => None,
        };
        fn pick<T: Clone>(over: &Option<T>, base: Option<&T>, key: &str) -> Result<T> {
            over.clone().or_else(|| base.cloned()).ok_or_else(|| {
                Error::param(format!("algorithm.{key}"), "missing and no preset given")
            })
        }
        let b = base.as_ref();
        Ok(AlgorithmConfig {
            decomposition: pick(
                &self.decomposition,
                b.map(|c| &c.decomposition),
                "decomposition",
            )?,
            scalarization: pick(
                &self.scalarization,
                b.map(|c| &c.scalarization),
                "scalarization",
            )?,
            scaling: self.scaling.or(b.map(|c| c.scaling)).unwrap_or_default(),
            neighborhood: pick(
                &self.neighborhood,
                b.map(|c| &c.neighborhood),
                "neighborhood",
            )?,
            variation: pick(&self.variation, b.map(|c| &c.variation), "variation")?,
            update: pick(&self.update, b.map(|c| &c.update), "update")?,
            constraint: self
                .constraint
                .clone()
                .or_else(|| b.map(|c| c.constraint.clone()))
                .unwrap_or_else(no_constraint),
            stop: pick(&self.stop, b.map(|c| &c.stop), "stop")?,
            seed: 0,
        })
    }
}
