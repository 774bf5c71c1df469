//! Run configuration files.
//!
//! ```json
//! {
//!   "problem": {"name": "dtlz2", "n_v": 20, "n_f": 5},
//!   "algorithm": {"preset": "original", "decomposition": {"name": "sld", "h": 8}},
//!   "output": {"dir": "runs/dtlz2", "formats": ["csv", "json"]},
//!   "seed": 42
//! }
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use moead_core::problems::BenchmarkProblem;
use moead_core::{AlgorithmConfig, AlgorithmSpec, Registry};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemBlock,
    #[serde(default)]
    pub algorithm: AlgorithmSpec,
    #[serde(default)]
    pub output: OutputBlock,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    pub name: String,
    pub n_v: usize,
    #[serde(default)]
    pub n_f: Option<usize>,
    #[serde(default)]
    pub bounds: Option<Bounds>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub xmin: Vec<f64>,
    pub xmax: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default = "all_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock {
            dir: None,
            formats: all_formats(),
        }
    }
}

fn all_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            anyhow::anyhow!("invalid config at `{path}`: {}", e.into_inner())
        })
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text)
    }

    /// The algorithm configuration with the effective seed filled in.
    pub fn algorithm_config(
        &self,
        seed_override: Option<u64>,
    ) -> moead_core::Result<AlgorithmConfig> {
        let mut config = self.algorithm.resolve()?;
        config.seed = seed_override.or(self.seed).unwrap_or(0);
        Ok(config)
    }

    pub fn build_problem(&self, registry: &Registry) -> anyhow::Result<BenchmarkProblem> {
        let p = &self.problem;
        if p.name.is_empty() {
            bail!("invalid config at `problem.name`: must not be empty");
        }
        let mut problem = registry.build_problem(&p.name, p.n_v, p.n_f)?;
        if let Some(b) = &p.bounds {
            if b.xmin.len() != p.n_v || b.xmax.len() != p.n_v {
                bail!(
                    "invalid config at `problem.bounds`: xmin and xmax need {} entries each",
                    p.n_v
                );
            }
            problem.definition.xmin = b.xmin.clone();
            problem.definition.xmax = b.xmax.clone();
            problem.definition.validate()?;
        }
        Ok(problem)
    }

    pub fn wants(&self, format: Format) -> bool {
        self.output.formats.contains(&format)
    }
}
