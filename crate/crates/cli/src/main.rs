//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails
//! (the report carries a witness), 2 on usage, input or parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use tropkit::formats::{emit_complex, is_cochain_document, load_complex, load_matroid, CochainFile, FormFile};
use tropkit::report::{self, GramChoice, KahlerChecks, Report};
use tropkit::{bergman_fan, build_cochain_complex, Error, Matroid, MetrizedComplex};

#[derive(Parser)]
#[command(name = "tropkit", version, about = "Exact checks for matroids, Chow rings and tropical complexes")]
struct Cli {
    /// Print the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Matroid invariants and Chow ring checks.
    #[command(subcommand)]
    Matroid(MatroidCmd),
    /// Polyhedral complexes: validation, fans, cohomology.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Hodge theory on metrized cochain complexes.
    #[command(subcommand)]
    Hodge(HodgeCmd),
}

#[derive(Subcommand)]
enum MatroidCmd {
    /// Rank, flats, loops; verifies the lattice of flats.
    Info { file: PathBuf },
    /// Characteristic polynomial, cross-checked by deletion–contraction.
    Chi { file: PathBuf },
    /// Log-concavity of the Whitney numbers (absolute coefficients of χ).
    Logconcave { file: PathBuf },
    /// Hard Lefschetz and Hodge–Riemann for the default ample class.
    Chow {
        file: PathBuf,
        /// Single degree to check.
        #[arg(long = "p", conflicts_with = "all_p")]
        p: Option<usize>,
        /// Comma-separated subset of hl,hr.
        #[arg(long, default_value = "hl,hr")]
        check: String,
        /// Check every degree p <= r/2 (the default when --p is absent).
        #[arg(long)]
        all_p: bool,
    },
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// Structural validation, optionally balancing and Q-smoothness.
    Validate {
        file: PathBuf,
        /// Comma-separated subset of balancing,qsmooth.
        #[arg(long, default_value = "")]
        checks: String,
    },
    /// Bergman fan of a matroid, written as a complex file.
    Bergman {
        #[command(flatten)]
        source: BergmanSource,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Star fan of a cell, written as a complex file.
    Star {
        file: PathBuf,
        #[arg(long)]
        cell: usize,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Dimensions of H^{p,q} for all q.
    Cohomology {
        file: PathBuf,
        #[arg(long = "p")]
        p: usize,
        /// Compactify a fan before computing.
        #[arg(long)]
        compactify: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct BergmanSource {
    /// Uniform matroid U_{R,N}, given as R,N.
    #[arg(long)]
    uniform: Option<String>,
    /// Matroid file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum HodgeCmd {
    /// Hodge isomorphism, adjunction and orthogonal decompositions.
    Verify {
        /// Cochain complex file, or a complex file (fans are compactified).
        file: PathBuf,
        /// Coefficient degree p when FILE is a complex.
        #[arg(long = "p")]
        p: Option<usize>,
        /// identity, weighted, or seed:K.
        #[arg(long, default_value = "identity")]
        gram: String,
        /// Random vectors per degree for the adjunction and decomposition checks.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Seed for the random test vectors.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hodge decomposition of one cochain.
    Decompose {
        file: PathBuf,
        #[arg(long = "q")]
        q: usize,
        /// File holding a JSON array of rationals, or {"values": [...]}.
        #[arg(long)]
        form: PathBuf,
        #[arg(long = "p")]
        p: Option<usize>,
        #[arg(long, default_value = "identity")]
        gram: String,
    },
}

enum Outcome {
    Report(Report),
    /// Raw document for stdout.
    Document(String),
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_or_print(doc: String, out: Option<&Path>, command: &str, summary: serde_json::Value) -> Result<Outcome, Error> {
    match out {
        None => Ok(Outcome::Document(doc)),
        Some(path) => {
            fs::write(path, doc + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            Ok(Outcome::Report(Report::new(command, vec![report::CheckResult::pass("written", summary)])))
        }
    }
}

fn parse_flags(s: &str, allowed: &[&str]) -> Result<Vec<String>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            if allowed.contains(&x) {
                Ok(x.to_owned())
            } else {
                Err(Error::Parse(format!("unknown check {x:?} (expected one of {})", allowed.join(", "))))
            }
        })
        .collect()
}

/// Builds a metrized complex from either a cochain file or a complex file.
fn metrized(file: &Path, p: Option<usize>, gram: &str) -> Result<MetrizedComplex, Error> {
    let text = read(file)?;
    let gram: GramChoice = gram.parse()?;
    if is_cochain_document(&text)? {
        let c = CochainFile::parse(&text)?.to_complex()?;
        return report::metrize(&c, gram);
    }
    let p = p.ok_or_else(|| Error::Parse("--p is required when FILE is a complex".into()))?;
    let tc = report::tangent_complex(&load_complex(&text)?, true)?;
    let cochains = build_cochain_complex(&tc, p)?;
    report::metrize_cellular(&tc, &cochains, gram)
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Matroid(m) => match m {
            MatroidCmd::Info { file } => Ok(Outcome::Report(report::matroid_info(&load_matroid(&read(&file)?)?))),
            MatroidCmd::Chi { file } => Ok(Outcome::Report(report::matroid_chi(&load_matroid(&read(&file)?)?))),
            MatroidCmd::Logconcave { file } => Ok(Outcome::Report(report::matroid_logconcave(&load_matroid(&read(&file)?)?))),
            MatroidCmd::Chow { file, p, check, all_p: _ } => {
                let m = load_matroid(&read(&file)?)?;
                let checks: KahlerChecks = check.parse()?;
                let ps = p.map(|p| vec![p]);
                Ok(Outcome::Report(report::matroid_chow(&m, ps.as_deref(), checks)?))
            }
        },
        Command::Complex(c) => match c {
            ComplexCmd::Validate { file, checks } => {
                let flags = parse_flags(&checks, &["balancing", "qsmooth"])?;
                let c = load_complex(&read(&file)?)?;
                let has = |f: &str| flags.iter().any(|x| x == f);
                Ok(Outcome::Report(report::complex_validate(&c, has("balancing"), has("qsmooth"))))
            }
            ComplexCmd::Bergman { source, out } => {
                let m = match (source.uniform, source.file) {
                    (Some(pair), _) => {
                        let parts: Vec<usize> = pair
                            .split(',')
                            .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("--uniform expects R,N, got {pair:?}"))))
                            .collect::<Result<_, _>>()?;
                        let [r, n] = parts[..] else {
                            return Err(Error::Parse(format!("--uniform expects R,N, got {pair:?}")));
                        };
                        Matroid::uniform(r, n)?
                    }
                    (None, Some(f)) => load_matroid(&read(&f)?)?,
                    (None, None) => unreachable!("clap requires one source"),
                };
                let fan = bergman_fan(&m)?;
                let summary = serde_json::json!({"rays": fan.rays.len(), "cells": fan.cells.len()});
                write_or_print(emit_complex(&fan), out.as_deref(), "complex bergman", summary)
            }
            ComplexCmd::Star { file, cell, out } => {
                let v = load_complex(&read(&file)?)?.validate()?;
                let star = v.star_fan(cell)?;
                let summary = serde_json::json!({"ambient_dim": star.ambient_dim, "rays": star.rays.len(), "cells": star.cells.len()});
                write_or_print(emit_complex(&star), out.as_deref(), "complex star", summary)
            }
            ComplexCmd::Cohomology { file, p, compactify } => {
                let c = load_complex(&read(&file)?)?;
                Ok(Outcome::Report(report::complex_cohomology(&c, p, compactify)?))
            }
        },
        Command::Hodge(h) => match h {
            HodgeCmd::Verify { file, p, gram, samples, seed } => {
                let mc = metrized(&file, p, &gram)?;
                Ok(Outcome::Report(report::hodge_verify(&mc, samples, seed)?))
            }
            HodgeCmd::Decompose { file, q, form, p, gram } => {
                let mc = metrized(&file, p, &gram)?;
                let omega = FormFile::parse(&read(&form)?)?;
                Ok(Outcome::Report(report::hodge_decompose(&mc, q, &omega)?))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli.command) {
        Ok(Outcome::Document(doc)) => {
            println!("{doc}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Report(mut r)) => {
            if cli.timing {
                r.timing_ms = Some(start.elapsed().as_millis());
            }
            if cli.json {
                println!("{}", r.to_json());
            } else {
                print!("{}", r.to_text());
            }
            ExitCode::from(r.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
