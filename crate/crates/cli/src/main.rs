use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cs3_core::invariants::{run_example, run_suite, BuiltinExample, ExampleOutcome, RunOptions, SuiteConfig, SuiteName, SuiteSummary};
use cs3_core::scalar::{format_rational, parse_rational, Notation, Rational};
use cs3_core::Error;

/// Exit status for an unknown or refused example, suite or configuration.
const EXIT_CONFIG: u8 = 2;
/// Exit status for a numerical failure or a failed check.
const EXIT_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(name = "cs3", version, about = "Chern-Simons invariants of connections on parallelizable 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a built-in example and its immersion verdicts.
    Run {
        /// berger-lorentz[:λ], rp3-equiaffine, so4-normalization, s3-round or section-change:<double-cover|identity|constant>.
        example: String,
        /// Berger parameter as a rational ("3/2"); decimals are converted exactly with a warning.
        #[arg(long)]
        lambda: Option<String>,
        /// Write the connection and Chern-Simons forms in their text format.
        #[arg(long)]
        dump_forms: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run a property suite: identities, normalization, examples or all.
    Suite {
        suite: String,
        /// Random trials per identity.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Gauss-Legendre nodes per axis on the finest grid.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(4..))]
    nodes: u64,
    /// Number of grids in the refinement ladder nodes/2^k.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(2..))]
    levels: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

impl Common {
    /// `[nodes/2^(levels−1), …, nodes/2, nodes]`.
    fn ladder(&self) -> Result<Vec<usize>, Error> {
        let nodes = self.nodes as usize;
        let levels = self.levels as u32;
        let coarsest = nodes.checked_shr(levels - 1).unwrap_or(0);
        if coarsest < 2 {
            return Err(Error::InvalidConfig(format!(
                "{nodes} nodes cannot be halved {} times (coarsest grid would have {coarsest} nodes)",
                levels - 1
            )));
        }
        Ok((0..levels).rev().map(|k| nodes >> k).collect())
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn parse_lambda(text: &str) -> Result<Rational, Error> {
    let (q, notation) = parse_rational(text)?;
    if notation == Notation::Decimal {
        eprintln!("warning: λ = {text} read as the exact rational {}", format_rational(&q));
    }
    Ok(q)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnknownExample(_) | Error::OutOfScope(_) | Error::InvalidConfig(_) | Error::Parse { .. } => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |v| format!("{v:.12}"))
}

fn example_table(out: &ExampleOutcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "example: {}", out.example);
    for r in &out.reports {
        let _ = writeln!(s, "\n{}", r.name);
        let _ = writeln!(s, "  route           {}", format!("{:?}", r.route).to_lowercase());
        let _ = writeln!(s, "  value           {:.12}", r.value);
        if let Some(q) = &r.exact {
            let _ = writeln!(s, "  exact           {}", format_rational(q));
        }
        let _ = writeln!(s, "  error estimate  {:.3e}", r.error_estimate);
        let _ = writeln!(s, "  mod 1           {}", fmt_opt(r.mod_one));
        let _ = writeln!(s, "  expected        {}", fmt_opt(r.expected));
        if let Some(c) = &r.chart {
            let nodes: Vec<String> = c.levels.iter().map(|(n, _)| n.to_string()).collect();
            let _ = writeln!(s, "  chart           {} (orientation {:+}, nodes {})", c.name, c.orientation_sign, nodes.join("/"));
        }
        for v in &r.verdicts {
            let _ = writeln!(s, "  verdict         {v}");
        }
        let _ = writeln!(s, "  pass            {}", r.pass);
    }
    if let Some(d) = out.route_difference {
        let _ = writeln!(s, "\nroute difference {d:.3e}");
    }
    for f in &out.forms {
        let _ = writeln!(s, "\n{}:\n{}", f.name, f.text.trim_end());
    }
    let _ = writeln!(s, "\n{}", if out.pass { "PASS" } else { "FAIL" });
    s
}

fn suite_table(summary: &SuiteSummary) -> String {
    let mut s = String::new();
    for c in &summary.checks {
        let _ = writeln!(s, "{} {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    let _ = writeln!(s, "{}: {} passed, {} failed", summary.suite, summary.passed, summary.failed);
    s
}

fn with_newline(json: serde_json::Result<String>) -> String {
    json.expect("reports serialize") + "\n"
}

fn execute(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Run {
            example,
            lambda,
            dump_forms,
            common,
        } => {
            let example = BuiltinExample::parse(&example)?;
            let lambda = lambda.as_deref().map(parse_lambda).transpose()?;
            if lambda.is_some() && !matches!(example, BuiltinExample::BergerLorentz(_)) {
                return Err(Error::InvalidConfig(format!("--lambda does not apply to {example}")));
            }
            let opts = RunOptions {
                lambda,
                levels: common.ladder()?,
                dump_forms,
            };
            let outcome = run_example(&example, &opts)?;
            common.emit(&match common.format {
                Format::Json => with_newline(serde_json::to_string_pretty(&outcome)),
                Format::Table => example_table(&outcome),
            })?;
            Ok(outcome.pass)
        }
        Command::Suite {
            suite,
            trials,
            seed,
            common,
        } => {
            let suite: SuiteName = suite.parse()?;
            let cfg = SuiteConfig {
                trials,
                seed,
                levels: common.ladder()?,
            };
            let summary = run_suite(suite, &cfg);
            common.emit(&match common.format {
                Format::Json => with_newline(serde_json::to_string_pretty(&summary)),
                Format::Table => suite_table(&summary),
            })?;
            Ok(summary.pass())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
