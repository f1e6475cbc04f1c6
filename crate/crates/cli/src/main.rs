mod diagram;
mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kirwan_core::config::{Config, OutputFormat, GOLDEN_GENUS4};
use kirwan_core::genus4::golden::{flagship_checks, strata_checks, GoldenCheck};
use kirwan_core::genus4::{run_pipeline, run_strata};
use kirwan_core::Error;
use serde_json::json;

const EXIT_MISMATCH: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "kirwan", version, about = "Equivariant and intersection Poincaré series of GIT quotients")]
struct Cli {
    /// JSON problem description; defaults to the built-in bicubic problem
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Use a shipped configuration (genus4, binary_cubics, empty_semistable)
    #[arg(long, global = true, value_name = "NAME", conflicts_with = "config")]
    builtin: Option<String>,
    /// Report series modulo t^N
    #[arg(long, global = true, value_name = "N")]
    truncate: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Closest-point enumeration: hull-pairs or exhaustive
    #[arg(long, global = true, value_name = "NAME")]
    index_strategy: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Unstable strata, total and semistable series
    Strata {
        /// Compare against the configured golden sheet; exit 1 on mismatch
        #[arg(long)]
        check: bool,
    },
    /// Full pipeline through the intersection Poincaré polynomial
    Genus4 {
        /// Accepted for symmetry with `strata`; golden checks always run here
        #[arg(long)]
        check: bool,
    },
    /// SVG picture of the weights, index set and chamber
    Diagram {
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Print the configuration in canonical form
    Config,
}

enum Failure {
    Mismatch,
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(EXIT_MISMATCH),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { EXIT_CONFIG } else { EXIT_INTERNAL })
        }
    }
}

fn load(cli: &Cli) -> Result<Config, Error> {
    let mut config = match (&cli.config, &cli.builtin) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            Config::parse(&text)?
        }
        (None, Some(name)) => Config::builtin(name)?,
        (None, None) => Config::builtin("genus4")?,
    };
    if let Some(n) = cli.truncate {
        config.truncate = n;
    }
    if let Some(f) = cli.format {
        config.format = match f {
            Format::Json => OutputFormat::Json,
            Format::Markdown => OutputFormat::Markdown,
        };
    }
    if let Some(s) = &cli.index_strategy {
        config.index_strategy = s.clone();
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let config = load(cli)?;
    match &cli.command {
        Command::Config => {
            println!("{}", config.to_json());
            Ok(())
        }
        Command::Strata { check } => {
            let s = run_strata(&config)?;
            let golden = match (check, config.golden.as_deref()) {
                (true, Some(GOLDEN_GENUS4)) => strata_checks(&s.total, &s.strata, &s.semistable),
                _ => Vec::new(),
            };
            let mut warnings = Vec::new();
            if s.semistable.is_zero() {
                warnings.push("the semistable locus is empty");
                eprintln!("warning: the semistable locus is empty");
            }
            match config.format {
                OutputFormat::Json => {
                    let doc = json!({
                        "name": config.name,
                        "truncate": config.truncate,
                        "total": render::series_json(&s.total, config.truncate),
                        "strata": s.strata,
                        "semistable": render::series_json(&s.semistable, config.truncate),
                        "warnings": warnings,
                        "golden": golden,
                    });
                    println!("{}", pretty(&doc));
                }
                OutputFormat::Markdown => print!("{}", render::strata_markdown(&config, &s, &golden)),
            }
            verdict(&golden, true)
        }
        Command::Genus4 { .. } => {
            let report = run_pipeline(&config)?;
            let golden = flagship_checks(&report);
            match config.format {
                OutputFormat::Json => {
                    let doc = json!({
                        "report": report,
                        "golden": golden,
                        "pass": report.checks_pass() && golden.iter().all(|g| g.pass),
                    });
                    println!("{}", pretty(&doc));
                }
                OutputFormat::Markdown => print!("{}", render::pipeline_markdown(&report, &golden)),
            }
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("check failed: {}: {}", c.name, c.detail);
            }
            verdict(&golden, report.checks_pass())
        }
        Command::Diagram { out } => {
            let svg = diagram::render(&config)?;
            match out {
                Some(path) => {
                    fs::write(path, svg).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                }
                None => print!("{svg}"),
            }
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("report serialization cannot fail")
}

fn verdict(golden: &[GoldenCheck], checks_pass: bool) -> Result<(), Failure> {
    let failed: Vec<&GoldenCheck> = golden.iter().filter(|g| !g.pass).collect();
    for g in &failed {
        eprintln!("golden mismatch: {}\n  expected: {}\n  actual:   {}", g.name, g.expected, g.actual);
    }
    if failed.is_empty() && checks_pass {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}
