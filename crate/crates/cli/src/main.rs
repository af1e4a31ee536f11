//! `hmv`: field data, cusp depths, resolutions, thresholds, volumes and the verification suites.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hilbert_modular::congruence::Flavor;
use hilbert_modular::verify::DEFAULT_SEED;
use hilbert_modular::Error;

use commands::{DepthArgs, Outcome, VolumeArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    Full,
    Gamma0,
    Gamma1,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Full => Flavor::Full,
            FlavorArg::Gamma0 => Flavor::Gamma0,
            FlavorArg::Gamma1 => Flavor::Gamma1,
        }
    }
}

/// Exact computations on Hilbert modular varieties.
///
/// Fields are given as `sqrt:D`, a squarefree integer `D`, inline JSON or a
/// JSON/TOML file. Ideals are an integer `k` for `(k)`,
/// `{"generators": [[..], ..]}` or `{"basis": [[..], ..]}`, with element
/// coordinates over the integral basis.
#[derive(Debug, Parser)]
#[command(name = "hmv", version)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Width of the rational enclosures of real embeddings.
    #[arg(long, global = true, default_value_t = 1e-12)]
    precision: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree, discriminant, embeddings and units.
    FieldInfo {
        #[arg(long)]
        field: String,
    },
    /// Stabilizer lattices of two cusps and the depth product bound.
    Depth {
        #[arg(long, required_unless_present = "group")]
        field: Option<String>,
        /// Group file `{"field", "a", "level", "flavor"}`; replaces the other group flags.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value = "1")]
        level: String,
        /// The ideal `a` in the upper right corner.
        #[arg(long, default_value = "1")]
        module: String,
        #[arg(long, value_enum, default_value_t = FlavorArg::Gamma0)]
        flavor: FlavorArg,
        /// `inf`, an element `[x0, x1]`, or `{"alpha": .., "beta": ..}`.
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Cusp resolution fan of a lattice, or validation of a supplied fan.
    Resolve {
        #[arg(long)]
        field: String,
        #[arg(long, default_value = "1")]
        lattice: String,
        /// Fan file to validate instead of constructing one.
        #[arg(long)]
        fan: Option<String>,
    },
    /// Threshold constants and flags for a level norm.
    Thresholds {
        /// Degree of the field.
        #[arg(long)]
        n: u32,
        /// Norm of the level.
        #[arg(long)]
        norm: String,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Runs the property suites; exit code 1 when any fails.
    Verify {
        /// Restrict to these suites (repeatable).
        #[arg(long)]
        suite: Vec<String>,
        /// Directory with curves.json and fans.json replacing the shipped fixtures.
        #[arg(long)]
        fixtures: Option<String>,
    },
    /// Volumes of test curves in horoball neighborhoods over log-spaced depths.
    Volume {
        /// Curve fixture file; the shipped curves by default.
        #[arg(long)]
        curves: Option<String>,
        /// Only these curves (repeatable).
        #[arg(long)]
        curve: Vec<String>,
        #[arg(long, default_value_t = 0.1)]
        s_min: f64,
        #[arg(long, default_value_t = 10.0)]
        s_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Emit CSV rows instead of a report.
        #[arg(long)]
        csv: bool,
    },
}

enum Rendered {
    Report(Outcome),
    Raw(String),
}

fn run(cli: &Cli) -> Result<Rendered, Error> {
    Ok(match &cli.command {
        Command::FieldInfo { field } => Rendered::Report(commands::field_info(field, cli.precision)?),
        Command::Depth { field, group, level, module, flavor, first, second } => Rendered::Report(commands::depth(&DepthArgs {
            field: field.as_deref(),
            group: group.as_deref(),
            level,
            module,
            flavor: (*flavor).into(),
            first,
            second,
        })?),
        Command::Resolve { field, lattice, fan } => Rendered::Report(commands::resolve(field, lattice, fan.as_deref())?),
        Command::Thresholds { n, norm, lambda } => Rendered::Report(commands::thresholds(*n, norm, lambda.as_deref())?),
        Command::Verify { suite, fixtures } => Rendered::Report(commands::verify(cli.seed, suite.clone(), fixtures.as_deref())?),
        Command::Volume { curves, curve, s_min, s_max, points, csv } => {
            let args = VolumeArgs { curves: curves.as_deref(), names: curve, s_min: *s_min, s_max: *s_max, points: *points };
            if *csv {
                Rendered::Raw(commands::volume_csv(&args)?)
            } else {
                Rendered::Report(commands::volume(&args)?)
            }
        }
    })
}

fn emit(cli: &Cli, body: &str) -> Result<(), String> {
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.precision > 0.0) {
        eprintln!("error: --precision must be positive");
        return ExitCode::from(2);
    }
    let (body, passed) = match run(&cli) {
        Ok(Rendered::Raw(s)) => (s, true),
        Ok(Rendered::Report(o)) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&o.json).expect("reports serialize") + "\n",
                Format::Text => o.text,
            };
            (body, o.passed)
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &body) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
