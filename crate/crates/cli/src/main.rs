//! `moead`: run configurations, list components, compute front metrics.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 runtime failure.

mod io;
mod run_config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use moead_core::metrics::{final_front, hypervolume, igd, nondominated_filter};
use moead_core::registry::Role;
use moead_core::{config::PRESETS, extensions, run_moead_with, Registry, RunResult};
use serde_json::json;

use crate::io::{header, read_matrix, write_matrix};
use crate::run_config::{Format, RunConfig};

const DEFAULT_OUT_DIR: &str = "moead-out";

#[derive(Parser)]
#[command(name = "moead", version, about = "Component-based MOEA/D runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the algorithm described by a JSON config file
    Run {
        config: PathBuf,
        /// Overrides the seed in the config
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; overrides the config and MOEAD_OUT_DIR
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List registered components (all roles, or one) and presets
    List { role: Option<String> },
    /// Nondominated count, hypervolume and optionally IGD of a front CSV
    Metrics {
        front: PathBuf,
        /// Reference front for IGD
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Comma-separated reference point; defaults to the front's componentwise max
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        ref_point: Option<Vec<f64>>,
        /// Seed for the Monte Carlo estimate (5+ objectives)
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<moead_core::Error> for Failure {
    fn from(e: moead_core::Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.into())
        } else {
            Failure::Runtime(e.into())
        }
    }
}

fn config_err(e: anyhow::Error) -> Failure {
    Failure::Config(e)
}

fn runtime_err(e: anyhow::Error) -> Failure {
    Failure::Runtime(e)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, seed, out } => cmd_run(&config, seed, out),
        Command::List { role } => cmd_list(role.as_deref()),
        Command::Metrics {
            front,
            reference,
            ref_point,
            seed,
        } => cmd_metrics(&front, reference.as_deref(), ref_point, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("run failed: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Built-in components plus the Gaussian mutation example operator.
fn registry() -> Registry {
    let mut r = Registry::builtin();
    extensions::register(&mut r).expect("gaussmut is not built in");
    r
}

fn output_dir(flag: Option<PathBuf>, config: &RunConfig) -> PathBuf {
    flag.or_else(|| config.output.dir.clone())
        .or_else(|| std::env::var_os("MOEAD_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn cmd_run(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<(), Failure> {
    let config = RunConfig::load(path).map_err(config_err)?;
    let registry = registry();
    let problem = config.build_problem(&registry).map_err(config_err)?;
    let algorithm = config.algorithm_config(seed)?;
    let result = run_moead_with(&problem.definition, &algorithm, &registry)?;

    let dir = output_dir(out, &config);
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))
        .map_err(runtime_err)?;
    write_outputs(&dir, &config, &algorithm, &result).map_err(runtime_err)?;
    let s = &result.summary;
    println!(
        "{}: {} evaluations, {} iterations, {} of {} nondominated, HV {}",
        config.problem.name,
        s.evaluations,
        s.iterations,
        s.nondominated,
        s.population,
        io::fmt_f64(s.hypervolume)
    );
    println!("results written to {}", dir.display());
    Ok(())
}

fn write_outputs(
    dir: &Path,
    config: &RunConfig,
    algorithm: &moead_core::AlgorithmConfig,
    r: &RunResult,
) -> anyhow::Result<()> {
    let n_f = r.y.ncols();
    if config.wants(Format::Csv) {
        write_matrix(
            &dir.join("final_population.csv"),
            &header("x", r.x.ncols()),
            r.x.view(),
            None,
        )?;
        write_matrix(
            &dir.join("final_objectives.csv"),
            &header("f", n_f),
            r.y.view(),
            Some(("violation", &r.v)),
        )?;
        let front = final_front(r.y.view(), &r.v);
        write_matrix(
            &dir.join("front.csv"),
            &header("f", n_f),
            front.view(),
            None,
        )?;
        write_matrix(
            &dir.join("weights.csv"),
            &header("w", n_f),
            r.weights.view(),
            None,
        )?;
        write_trace(&dir.join("trace.csv"), r, n_f)?;
        if let Some(archive) = &r.archive {
            let mut w = csv::Writer::from_path(dir.join("archive.csv"))?;
            let mut head = vec!["subproblem".to_string()];
            head.extend(header("x", r.x.ncols()));
            head.extend(header("f", n_f));
            head.push("utility".into());
            w.write_record(&head)?;
            for (j, e) in archive.entries.iter().enumerate() {
                if let Some(e) = e {
                    let mut rec = vec![j.to_string()];
                    rec.extend(e.x.iter().chain(&e.y).map(|&v| io::fmt_f64(v)));
                    rec.push(io::fmt_f64(e.utility));
                    w.write_record(&rec)?;
                }
            }
            w.flush()?;
        }
    }
    if config.wants(Format::Json) {
        let mut summary = serde_json::to_value(&r.summary)?;
        let obj = summary
            .as_object_mut()
            .expect("summary serializes to an object");
        obj.insert("problem".into(), json!(config.problem.name));
        obj.insert("n_v".into(), json!(r.x.ncols()));
        obj.insert("n_f".into(), json!(n_f));
        obj.insert("seed".into(), json!(algorithm.seed));
        obj.insert("stop_reason".into(), json!(r.stop_reason.map(|c| c.name())));
        obj.insert("estimated_ideal".into(), json!(r.reference.ideal));
        obj.insert("algorithm".into(), serde_json::to_value(algorithm)?);
        let text = serde_json::to_string_pretty(&summary)?;
        std::fs::write(dir.join("summary.json"), text + "\n")?;
    }
    Ok(())
}

fn write_trace(path: &Path, r: &RunResult, n_f: usize) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut head = vec![
        "iteration".to_string(),
        "evaluations".to_string(),
        "hv_proxy".to_string(),
    ];
    head.extend(header("ideal", n_f));
    w.write_record(&head)?;
    for t in &r.trace {
        let mut rec = vec![
            t.iteration.to_string(),
            t.evaluations.to_string(),
            io::fmt_f64(t.hv_proxy),
        ];
        rec.extend(t.ideal.iter().map(|&v| io::fmt_f64(v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_list(role: Option<&str>) -> Result<(), Failure> {
    let registry = registry();
    match role {
        Some("preset") | Some("presets") => {
            for p in PRESETS {
                println!("{p}");
            }
        }
        Some(role) => {
            for name in registry.list(role)? {
                println!("{name}");
            }
        }
        None => {
            for role in Role::ALL {
                println!("{}: {}", role, registry.names(role).join(", "));
            }
            println!("preset: {}", PRESETS.join(", "));
        }
    }
    Ok(())
}

fn cmd_metrics(
    front_path: &Path,
    reference: Option<&Path>,
    ref_point: Option<Vec<f64>>,
    seed: u64,
) -> Result<(), Failure> {
    let front = read_matrix(front_path).map_err(config_err)?;
    let filtered = nondominated_filter(front.view());
    if let Some(r) = &ref_point {
        if r.len() != front.ncols() {
            return Err(config_err(anyhow::anyhow!(
                "--ref-point has {} values, the front has {} objectives",
                r.len(),
                front.ncols()
            )));
        }
    }
    let hv = hypervolume(filtered.view(), ref_point.as_deref(), seed)?;
    let mut out = json!({
        "points": front.nrows(),
        "nondominated": filtered.nrows(),
        "hypervolume": hv.value,
        "hypervolume_std_error": hv.std_error,
        "ref_point": hv.ref_point,
    });
    if let Some(path) = reference {
        let reference = read_matrix(path).map_err(config_err)?;
        if reference.ncols() != front.ncols() {
            return Err(config_err(anyhow::anyhow!(
                "reference front has {} columns, the front has {}",
                reference.ncols(),
                front.ncols()
            )));
        }
        out["igd"] = json!(igd(front.view(), reference.view())?);
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("metrics serialize")
    );
    Ok(())
}
