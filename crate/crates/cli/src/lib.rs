//! Command-line front end: flag and config-file resolution, rendering, and
//! run manifests.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use args::{Cli, Command};
use config::{
    load_file_config, pick, ClassicalConfig, DiscreteConfig, FileConfig, Format, OptimalityRunConfig, SdeRunConfig,
    SpeedupConfig,
};
pub use error::CliError;

/// A fully resolved command.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolved {
    Discrete(DiscreteConfig),
    Sde(SdeRunConfig),
    Classical(ClassicalConfig),
    Speedup(SpeedupConfig),
    VerifyOptimality(OptimalityRunConfig),
}

impl Resolved {
    pub fn name(&self) -> &'static str {
        match self {
            Resolved::Discrete(_) => "discrete",
            Resolved::Sde(_) => "sde",
            Resolved::Classical(_) => "classical",
            Resolved::Speedup(_) => "speedup",
            Resolved::VerifyOptimality(_) => "verify-optimality",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Resolved::Discrete(c) => Some(c.seed),
            Resolved::Sde(c) => Some(c.seed),
            _ => None,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Resolved::VerifyOptimality(_) => Format::Json,
            _ => Format::Csv,
        }
    }

    fn config_value(&self) -> Value {
        fn to<T: Serialize>(c: &T) -> Value {
            serde_json::to_value(c).expect("configs serialize")
        }
        match self {
            Resolved::Discrete(c) => to(c),
            Resolved::Sde(c) => to(c),
            Resolved::Classical(c) => to(c),
            Resolved::Speedup(c) => to(c),
            Resolved::VerifyOptimality(c) => to(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub resolved: Resolved,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Invocation {
    /// Resolved settings as recorded in the manifest, including the format.
    pub fn config_value(&self) -> Value {
        let mut v = self.resolved.config_value();
        if let Value::Object(map) = &mut v {
            map.insert("format".into(), serde_json::to_value(self.format).expect("format serializes"));
        }
        v
    }
}

pub fn resolve(cli: &Cli) -> Result<Invocation, CliError> {
    let file = match &cli.io.config {
        Some(path) => load_file_config(path, cli.command.name())?,
        None => FileConfig::default(),
    };
    let f = file.clone();
    let mut plot = None;
    let resolved = match &cli.command {
        Command::Discrete(a) => {
            let d = DiscreteConfig::default();
            Resolved::Discrete(DiscreteConfig {
                p0: pick(a.p0, f.p0, d.p0),
                b: pick(a.b, f.b, d.b),
                steps: pick(a.steps, f.steps, d.steps),
                strategy: pick(a.strategy.clone(), f.strategy, d.strategy),
                seed: pick(a.seed, f.seed, d.seed),
            })
        }
        Command::Sde(a) => {
            let d = SdeRunConfig::default();
            Resolved::Sde(SdeRunConfig {
                gamma: pick(a.gamma, f.gamma, d.gamma),
                dt: pick(a.dt, f.dt, d.dt),
                time: pick(a.time, f.time, d.time),
                trajectories: pick(a.trajectories, f.trajectories, d.trajectories),
                seed: pick(a.seed, f.seed, d.seed),
                strategy: pick(a.strategy.clone(), f.strategy, d.strategy),
                p0: pick(a.p0, f.p0, d.p0),
                record_every: pick(a.record_every, f.record_every, d.record_every),
                noise: pick(a.noise, f.noise, d.noise),
                scheme: pick(a.scheme, f.scheme, d.scheme),
                rel_tol: pick(a.rel_tol, f.rel_tol, d.rel_tol),
            })
        }
        Command::Classical(a) => {
            let d = ClassicalConfig::default();
            Resolved::Classical(ClassicalConfig {
                gamma: pick(a.gamma, f.gamma, d.gamma),
                time: pick(a.time, f.time, d.time),
                points: pick(a.points, f.points, d.points),
                rel_tol: pick(a.rel_tol, f.rel_tol, d.rel_tol),
            })
        }
        Command::Speedup(a) => {
            let d = SpeedupConfig::default();
            plot = a.plot.clone();
            Resolved::Speedup(SpeedupConfig {
                gamma: pick(a.gamma, f.gamma, d.gamma),
                targets: pick(a.targets.clone(), f.targets, d.targets),
                rel_tol: pick(a.rel_tol, f.rel_tol, d.rel_tol),
            })
        }
        Command::VerifyOptimality(a) => {
            let d = OptimalityRunConfig::default();
            Resolved::VerifyOptimality(OptimalityRunConfig {
                steps: pick(a.steps, f.steps, d.steps),
                b: pick(a.b, f.b, d.b),
                grid: pick(a.grid, f.grid, d.grid),
                p0: pick(a.p0, f.p0, d.p0),
                theta0: pick(a.theta0, f.theta0, d.theta0),
                budget: pick(a.budget, f.budget, d.budget),
            })
        }
    };
    let format = cli.io.format.or(file.format).unwrap_or(resolved.default_format());
    if cli.io.workers == Some(0) {
        return Err(CliError::Config("workers must be at least 1".into()));
    }
    Ok(Invocation {
        resolved,
        format,
        out: cli.io.out.clone(),
        manifest: cli.io.manifest.clone(),
        plot,
        workers: cli.io.workers,
    })
}

/// Rendered output bytes of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub data: String,
    pub plot: Option<String>,
}

fn compute(inv: &Invocation) -> Result<Rendered, CliError> {
    let mut svg = None;
    let out = match &inv.resolved {
        Resolved::Discrete(c) => commands::discrete(c)?,
        Resolved::Sde(c) => commands::sde(c)?,
        Resolved::Classical(c) => commands::classical(c)?,
        Resolved::Speedup(c) => {
            let (out, points) = commands::speedup(c)?;
            if inv.plot.is_some() {
                svg = Some(plot::speedup_plot(&points).to_svg());
            }
            out
        }
        Resolved::VerifyOptimality(c) => commands::verify(c)?,
    };
    let data = match inv.format {
        Format::Csv => out.table.to_csv(),
        Format::Json => output::json_report(inv.resolved.name(), &inv.config_value(), &out.table, out.summary),
    };
    Ok(Rendered { data, plot: svg })
}

/// Computes the output, on a dedicated pool when a worker count is given.
pub fn render(inv: &Invocation) -> Result<Rendered, CliError> {
    match inv.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| compute(inv)),
        None => compute(inv),
    }
}

pub fn manifest(inv: &Invocation, rendered: &Rendered) -> Value {
    let mut outputs = vec![json!({
        "kind": "data",
        "path": inv.out.as_ref().map_or("-".to_string(), |p| p.display().to_string()),
        "sha256": output::sha256_hex(rendered.data.as_bytes()),
    })];
    if let (Some(path), Some(svg)) = (&inv.plot, &rendered.plot) {
        outputs.push(json!({
            "kind": "plot",
            "path": path.display().to_string(),
            "sha256": output::sha256_hex(svg.as_bytes()),
        }));
    }
    json!({
        "command": inv.resolved.name(),
        "config": inv.config_value(),
        "master_seed": inv.resolved.seed(),
        "version": env!("CARGO_PKG_VERSION"),
        "outputs": outputs,
    })
}

pub fn manifest_path(inv: &Invocation) -> Option<PathBuf> {
    inv.manifest.clone().or_else(|| {
        inv.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Renders, writes every output, and writes the manifest.
pub fn run(inv: &Invocation) -> Result<(), CliError> {
    let rendered = render(inv)?;
    match &inv.out {
        Some(path) => write_file(path, &rendered.data)?,
        None => std::io::stdout().write_all(rendered.data.as_bytes())?,
    }
    if let (Some(path), Some(svg)) = (&inv.plot, &rendered.plot) {
        write_file(path, svg)?;
    }
    let mut text = serde_json::to_string_pretty(&manifest(inv, &rendered))?;
    text.push('\n');
    match manifest_path(inv) {
        Some(path) => write_file(&path, &text)?,
        None => std::io::stderr().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn parse(args: &[&str]) -> Invocation {
        let cli = Cli::try_parse_from(std::iter::once("purify").chain(args.iter().copied())).unwrap();
        resolve(&cli).unwrap()
    }

    #[test]
    fn flags_override_defaults() {
        let inv = parse(&["sde", "--gamma", "2.5", "--strategy", "none", "--noise", "gaussian"]);
        match inv.resolved {
            Resolved::Sde(c) => {
                assert_eq!(c.gamma, 2.5);
                assert_eq!(c.strategy, purify_core::Strategy::None);
                assert_eq!(c.noise, purify_core::sde::NoiseKind::Gaussian);
                assert_eq!(c.dt, 1e-4);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(inv.format, Format::Csv);
    }

    #[test]
    fn global_flags_after_subcommand() {
        let inv = parse(&["verify-optimality", "--steps", "2", "--format", "csv", "--workers", "2"]);
        assert_eq!(inv.format, Format::Csv);
        assert_eq!(inv.workers, Some(2));
    }

    #[test]
    fn targets_list() {
        let inv = parse(&["speedup", "--targets", "0.1,0.01"]);
        match inv.resolved {
            Resolved::Speedup(c) => assert_eq!(c.targets, vec![0.1, 0.01]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn manifest_next_to_output() {
        let inv = parse(&["classical", "--out", "run/p.csv"]);
        assert_eq!(manifest_path(&inv), Some(PathBuf::from("run/p.csv.manifest.json")));
        assert_eq!(manifest_path(&parse(&["classical"])), None);
    }

    #[test]
    fn manifest_config_round_trips() {
        let inv = parse(&["discrete", "--steps", "4", "--strategy", "fixed-theta=0.3", "--format", "json"]);
        let rendered = render(&inv).unwrap();
        let m = manifest(&inv, &rendered);
        let file: FileConfig = serde_json::from_value(m["config"].clone()).unwrap();
        assert_eq!(file.steps, Some(4));
        assert_eq!(file.format, Some(Format::Json));
        assert_eq!(m["master_seed"], json!(0));
    }

    #[test]
    fn errors_map_to_exit_codes() {
        let inv = parse(&["discrete", "--b", "1.5"]);
        assert_eq!(render(&inv).unwrap_err().exit_code(), 2);
        let inv = parse(&["speedup", "--targets", "0.6"]);
        assert_eq!(render(&inv).unwrap_err().exit_code(), 2);
        let numerical: CliError = purify_core::Error::BracketFailure("x".into()).into();
        assert_eq!(numerical.exit_code(), 3);
    }
}
