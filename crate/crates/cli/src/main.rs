use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use pqc_core::models::conformal::conformal_heisenberg;
use pqc_core::models::file::model_to_json;
use pqc_core::models::{builtin_heisenberg, builtin_l0, load_model, save_model, GaugeTransform, PqcModel};
use pqc_core::pipeline::{add_classification, verify_model, Analysis, Suite};
use pqc_core::report::Report;
use pqc_core::sasakian::{classification_ledger, formal_dga_verify};
use pqc_core::scalar::{fmt_rat, parse_rat};
use pqc_core::structure::{reeb_ledger, solve_reeb, validate_pqc};

#[derive(Parser)]
#[command(name = "pqc", version, about = "Exact verification of paraquaternionic contact structures on frame models")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Run every computation on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Write a built-in model.
    Builtin {
        #[command(subcommand)]
        which: Builtin,
    },
    /// Check the model's paraquaternionic contact axioms.
    Validate { file: PathBuf },
    /// Solve for the Reeb fields.
    Reeb { file: PathBuf },
    /// Run verification suites.
    Verify {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Flat Heisenberg, pqc-Einstein, para 3-Sasakian candidate or generic.
    Classify { file: PathBuf },
    /// Apply a seeded random structure-group transformation.
    Gauge {
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        rescale: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symbolic check of the para 3-Sasakian and cone equations.
    FormalSasakian,
}

#[derive(Subcommand)]
enum Builtin {
    /// The paraquaternionic Heisenberg algebra of dimension 4n+3.
    Heisenberg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The seven-dimensional algebra l0 with parameter c.
    L0 {
        #[arg(long)]
        c: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Heisenberg structure rescaled by 1/t^2, a curved test model.
    Conformal {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Bad input, reported with exit code 2.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

fn load(path: &Path) -> Result<PqcModel, Usage> {
    Ok(load_model(path).with_context(|| format!("cannot load {}", path.display()))?)
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
}

/// Writes `model` to `out`, or prints it when there is no `out`; returns the
/// report to show, if any.
fn write_model(model: &PqcModel, command: &str, out: Option<&Path>) -> Result<Option<Report>, Usage> {
    match out {
        Some(path) => {
            save_model(model, path).with_context(|| format!("cannot write {}", path.display()))?;
            let mut r = Report::new(command, Some(model));
            r.results.insert("written".into(), path.display().to_string());
            r.push(validate_pqc(model));
            Ok(Some(r))
        }
        None => {
            print!("{}", model_to_json(model));
            Ok(None)
        }
    }
}

fn run(cli: &Cli) -> Result<Option<Report>, Usage> {
    match &cli.command {
        Command::Builtin { which } => match which {
            Builtin::Heisenberg { n, out } => {
                if *n == 0 {
                    return Err(Usage(anyhow::anyhow!("--n must be at least 1")));
                }
                write_model(&builtin_heisenberg(*n), &format!("builtin heisenberg --n {n}"), out.as_deref())
            }
            Builtin::L0 { c, out } => {
                let c = parse_rat(c)?;
                write_model(&builtin_l0(&c), &format!("builtin l0 --c {}", fmt_rat(&c)), out.as_deref())
            }
            Builtin::Conformal { n, c, out } => {
                if *n == 0 {
                    return Err(Usage(anyhow::anyhow!("--n must be at least 1")));
                }
                let c = parse_rat(c)?;
                let command = format!("builtin conformal --n {n} --c {}", fmt_rat(&c));
                write_model(&conformal_heisenberg(*n, &c), &command, out.as_deref())
            }
        },
        Command::Validate { file } => {
            let m = load(file)?;
            let mut r = Report::new("validate", Some(&m));
            r.push(validate_pqc(&m));
            Ok(Some(r))
        }
        Command::Reeb { file } => {
            let m = load(file)?;
            let mut r = Report::new("reeb", Some(&m));
            r.push(validate_pqc(&m));
            match solve_reeb(&m) {
                Ok(reeb) => {
                    for (s, xi) in reeb.xi.iter().enumerate() {
                        let parts: Vec<String> = xi.iter().map(fmt_rat).collect();
                        r.results.insert(format!("xi{}", s + 1), format!("({})", parts.join(", ")));
                    }
                    r.push(reeb_ledger(&m, &reeb));
                }
                Err(e) => {
                    let mut l = pqc_core::report::Ledger::new("reeb");
                    l.check("reeb-solve", "Reeb fields exist and are unique", Err(e.to_string()));
                    r.push(l);
                }
            }
            Ok(Some(r))
        }
        Command::Verify { file, suite } => {
            let suite: Suite = suite.parse()?;
            let m = load(file)?;
            Ok(Some(verify_model(&m, suite)))
        }
        Command::Classify { file } => {
            let m = load(file)?;
            let mut r = Report::new("classify", Some(&m));
            let validation = validate_pqc(&m);
            let valid = validation.passed();
            r.push(validation);
            if valid {
                match Analysis::build(&m) {
                    Ok(a) => {
                        r.push(classification_ledger(&a.am, &a.conn, &a.tors, &a.curv));
                        add_classification(&mut r, &a);
                    }
                    Err(e) => {
                        let mut l = pqc_core::report::Ledger::new("classification");
                        l.check("pipeline", "canonical connection and curvature computed", Err(e.to_string()));
                        r.push(l);
                    }
                }
            }
            Ok(Some(r))
        }
        Command::Gauge { file, seed, rescale, out } => {
            let m = load(file)?;
            let rescale = rescale.as_deref().map(parse_rat).transpose()?;
            let t = GaugeTransform::random(&m, *seed, rescale)?;
            let g = t.apply(&m)?;
            let report = write_model(&g, &format!("gauge --seed {seed}"), out.as_deref())?;
            Ok(report.map(|mut r| {
                r.seed = Some(*seed);
                r.results.insert("rescale".into(), fmt_rat(&t.rescale));
                r
            }))
        }
        Command::FormalSasakian => {
            let mut r = Report::new("formal-sasakian", None);
            r.push(formal_dga_verify());
            Ok(Some(r))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.sequential {
        pqc_core::par::set_parallel(false);
    }
    let start = Instant::now();
    match run(&cli) {
        Ok(Some(report)) => {
            emit(&report, cli.format);
            eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
