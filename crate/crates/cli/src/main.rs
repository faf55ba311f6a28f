use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use acbm_core::commands::{
    cmd_classify, cmd_curvature, cmd_soliton, cmd_verify, export_example, Mode, SolitonOptions,
    DEFAULT_SEED,
};
use acbm_core::error::CommandError;
use acbm_core::manifest::{LoadedManifest, Manifest};
use acbm_core::report::Report;
use acbm_core::scalar::{parse_rational, Rational};
use acbm_core::transform::{Branch, DEFAULT_POINTS};

const REPORT_DIR_ENV: &str = "ACBM_REPORT_DIR";

/// Almost contact B-metric structures on Lie groups: verification,
/// curvature, classification and Yamabe solitons.
#[derive(Parser)]
#[command(name = "acbm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure axioms, connection and curvature identities, Lee form identities
    Verify(Common),
    /// Christoffel symbols, Riemann and Ricci tensors, tau and tau*
    Curvature(Common),
    /// F0, Sasaki-like and F1 verdicts
    Classify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Transformation conditions, transformed identities and the soliton equation
    Soliton {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
        /// Soliton constant sigma_bar; overrides the manifest
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<f64>,
        /// Source class; detected from F when omitted
        #[arg(long, value_enum)]
        branch: Option<BranchArg>,
    },
    /// Print a built-in example as a manifest
    ExportExample {
        /// sasaki5 or abelian5
        name: String,
        #[arg(long, default_value = "0", value_parser = rational, allow_negative_numbers = true)]
        lambda: Rational,
        #[arg(long, default_value = "0", value_parser = rational, allow_negative_numbers = true)]
        mu: Rational,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Manifest file (JSON)
    #[arg(long, conflicts_with = "example")]
    manifest: Option<PathBuf>,
    /// Built-in example instead of a manifest file
    #[arg(long)]
    example: Option<String>,
    /// Parameter lambda of the sasaki5 example
    #[arg(long, default_value = "0", value_parser = rational, allow_negative_numbers = true)]
    lambda: Rational,
    /// Parameter mu of the sasaki5 example
    #[arg(long, default_value = "0", value_parser = rational, allow_negative_numbers = true)]
    mu: Rational,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_enum, default_value_t = ModeArg::Rational)]
    mode: ModeArg,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Sampling {
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rational,
    Double,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Cosymplectic,
    SasakiLike,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<CommandError> for Failure {
    fn from(e: CommandError) -> Self {
        Failure::Input(e.into())
    }
}

impl Common {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Rational => Mode::Rational,
            ModeArg::Double => Mode::Double,
        }
    }

    fn load(&self) -> Result<LoadedManifest, Failure> {
        let manifest = match (&self.manifest, &self.example) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("cannot read {}", path.display()))
                    .map_err(Failure::Input)?;
                Manifest::from_json(&text).map_err(|e| Failure::Input(e.into()))?
            }
            (None, Some(name)) => export_example(name, &self.lambda, &self.mu)
                .map_err(|e| Failure::Input(e.into()))?,
            (None, None) => {
                return Err(Failure::Input(anyhow!(
                    "give a manifest with --manifest PATH or a built-in with --example NAME"
                )))
            }
        };
        manifest.load().map_err(|e| Failure::Input(e.into()))
    }

    fn inputs(&self) -> serde_json::Value {
        json!({
            "manifest": self.manifest.as_ref().map(|p| p.display().to_string()),
            "example": self.example,
            "lambda": self.example.as_ref().map(|_| self.lambda.to_string()),
            "mu": self.example.as_ref().map(|_| self.mu.to_string()),
        })
    }
}

fn emit(command: &str, common: &Common, report: &Report) -> Result<(), Failure> {
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &common.output {
        Some(path) => write(path, &text)?,
        None => {
            print!("{text}");
            if let Some(dir) = std::env::var_os(REPORT_DIR_ENV) {
                let dir = PathBuf::from(dir);
                fs::create_dir_all(&dir)
                    .with_context(|| format!("cannot create {}", dir.display()))
                    .map_err(Failure::Internal)?;
                write(&dir.join(format!("{command}.json")), &report.to_json())?;
            }
        }
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(Failure::Internal)
}

fn merge(mut inputs: serde_json::Value, extra: serde_json::Value) -> serde_json::Value {
    if let (Some(a), serde_json::Value::Object(b)) = (inputs.as_object_mut(), extra) {
        a.extend(b);
    }
    inputs
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let (name, common, report) = match cli.command {
        Command::Verify(common) => {
            let m = common.load()?;
            let r = cmd_verify(&m, common.mode(), common.inputs());
            ("verify", common, r)
        }
        Command::Curvature(common) => {
            let m = common.load()?;
            let r = cmd_curvature(&m, common.mode(), common.inputs());
            ("curvature", common, r)
        }
        Command::Classify { common, sampling } => {
            let m = common.load()?;
            let inputs = merge(
                common.inputs(),
                json!({ "points": sampling.points, "seed": sampling.seed }),
            );
            let r = cmd_classify(&m, common.mode(), inputs, sampling.points, sampling.seed)?;
            ("classify", common, r)
        }
        Command::Soliton {
            common,
            sampling,
            sigma,
            branch,
        } => {
            let m = common.load()?;
            let opts = SolitonOptions {
                branch: branch.map(|b| match b {
                    BranchArg::Cosymplectic => Branch::Cosymplectic,
                    BranchArg::SasakiLike => Branch::SasakiLike,
                }),
                points: sampling.points,
                seed: sampling.seed,
                sigma,
            };
            let inputs = merge(
                common.inputs(),
                json!({
                    "points": sampling.points,
                    "seed": sampling.seed,
                    "sigma": sigma,
                    "branch": opts.branch.map(|b| b.name()),
                }),
            );
            let r = cmd_soliton(&m, common.mode(), inputs, &opts)?;
            ("soliton", common, r)
        }
        Command::ExportExample {
            name,
            lambda,
            mu,
            output,
        } => {
            let m = export_example(&name, &lambda, &mu).map_err(|e| Failure::Input(e.into()))?;
            let text = m.to_json();
            match output {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            return Ok(0);
        }
    };
    emit(name, &common, &report)?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
