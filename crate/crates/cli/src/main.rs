use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadembed::bounds::{case_classify, global_bounds};
use quadembed::conditions::{check_conditions, TheoremCase};
use quadembed::sweep::{csv_header, parse_range, run_sweep, SweepSpec};
use quadembed::{
    embed, plan, DetachConfig, EmbeddingCertificate, EmbeddingParams, Error, Factorization,
};
use serde_json::json;

/// Embeds r-factorizations of complete 4-uniform multigraphs into larger
/// s-factorizations.
#[derive(Parser)]
#[command(name = "quadembed", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct Tuple {
    m: u64,
    n: u64,
    r: u64,
    s: u64,
    #[arg(default_value_t = 1)]
    lambda: u64,
}

impl Tuple {
    fn params(&self) -> Result<EmbeddingParams, Error> {
        EmbeddingParams::new(self.m, self.n, self.r, self.s, self.lambda)
    }
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the necessary conditions N1..N8; exit 0 iff all hold.
    Check {
        #[command(flatten)]
        tuple: Tuple,
        #[command(flatten)]
        output: Output,
    },
    /// Print the global bounds and the case the tuple falls in.
    Bounds {
        #[command(flatten)]
        tuple: Tuple,
        #[command(flatten)]
        output: Output,
    },
    /// Compute per-color shape counts of the amalgamation.
    Plan {
        #[command(flatten)]
        tuple: Tuple,
        #[command(flatten)]
        output: Output,
    },
    /// Plan, then search for an explicit embedding certificate.
    Embed {
        #[command(flatten)]
        tuple: Tuple,
        /// Factorization file to extend; generated by search if absent.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = quadembed::detach::DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Check a certificate or factorization file; exit 0 iff valid.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate every tuple in a range; one CSV row per tuple.
    Sweep {
        /// Range `a..b` (inclusive), `..b` or a single value.
        #[arg(long, default_value = "4..14")]
        m: String,
        /// Upper end defaults the lower end to m + 1.
        #[arg(long, default_value = "..40")]
        n: String,
        #[arg(long, default_value = "1..12")]
        r: String,
        #[arg(long, default_value = "1..12")]
        s: String,
        #[arg(long, default_value = "1")]
        lambda: String,
        /// Include tuples with an inadmissible triple.
        #[arg(long)]
        all: bool,
        /// Keep only these theorem cases (strict-ratio, equal-ratio, out-of-scope).
        #[arg(long, value_delimiter = ',')]
        theorem: Vec<String>,
        /// Skip planning.
        #[arg(long)]
        no_plan: bool,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

/// Exit status with a message for standard error.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConditionsFail(_) | Error::OutOfScope(_) | Error::Invariant(_) => 1,
            Error::SearchExhausted { .. } | Error::PlanNotFound(_) => 2,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 3, message }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("plain json") + "\n"
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check { tuple, output } => {
            let report = check_conditions(&tuple.params()?);
            let text = match output.format {
                Format::Json => pretty(&report.to_json()),
                _ => report.to_text(),
            };
            emit(&output.out, &text)?;
            Ok(if report.all_hold() { 0 } else { 1 })
        }
        Command::Bounds { tuple, output } => {
            let p = tuple.params()?;
            let b = global_bounds(&p)?;
            let case = case_classify(&p).ok();
            let violations = b.invariant_violations();
            let text = match output.format {
                Format::Json => {
                    let opt = |x: Option<String>| {
                        x.map_or(serde_json::Value::Null, serde_json::Value::from)
                    };
                    pretty(&json!({
                        "q": b.q,
                        "k": b.k,
                        "iota1": b.iota1.to_string(),
                        "rho1": quadembed::exact::fmt_rat(&b.rho1),
                        "rhop1": quadembed::exact::fmt_rat(&b.rhop1),
                        "iota2": opt(b.iota2.as_ref().map(|x| x.to_string())),
                        "rho2": opt(b.rho2.as_ref().map(quadembed::exact::fmt_rat)),
                        "rhop2": opt(b.rhop2.as_ref().map(quadembed::exact::fmt_rat)),
                        "case": case.map(|c| c.number()),
                        "violations": violations,
                    }))
                }
                _ => {
                    let mut t = b.to_text();
                    t += &format!(
                        "case={}\n",
                        case.map_or("-".into(), |c| c.number().to_string())
                    );
                    for v in &violations {
                        t += &format!("violated: {v}\n");
                    }
                    t
                }
            };
            emit(&output.out, &text)?;
            Ok(0)
        }
        Command::Plan { tuple, output } => {
            let pl = plan(&tuple.params()?)?;
            let text = match output.format {
                Format::Json => pretty(&pl.to_json()),
                _ => pl.to_text(),
            };
            emit(&output.out, &text)?;
            Ok(0)
        }
        Command::Embed {
            tuple,
            base,
            seed,
            node_budget,
            output,
        } => {
            let p = tuple.params()?;
            let base = match &base {
                Some(path) => {
                    let text = read(path)?;
                    Some(
                        Factorization::parse(&text)
                            .map_err(|e| input_error(format!("{}: {e}", path.display())))?,
                    )
                }
                None => None,
            };
            let found = embed(&p, base, DetachConfig { node_budget, seed })?;
            let text = match output.format {
                Format::Json => pretty(&json!({
                    "params": p,
                    "nodes": found.nodes,
                    "plan": found.plan.to_json(),
                    "certificate": found.certificate.render(),
                })),
                _ => found.certificate.render(),
            };
            emit(&output.out, &text)?;
            eprintln!("certificate found after {} search nodes", found.nodes);
            Ok(0)
        }
        Command::Verify { file, output } => {
            let text = read(&file)?;
            let cert = EmbeddingCertificate::parse(&text)
                .map_err(|e| input_error(format!("{}: {e}", file.display())))?;
            let violations = cert.violations();
            let report = match output.format {
                Format::Json => pretty(&json!({
                    "valid": violations.is_empty(),
                    "levels": cert.levels.len(),
                    "violations": violations,
                })),
                _ if violations.is_empty() => {
                    let grounds: Vec<String> =
                        cert.levels.iter().map(|l| l.ground.to_string()).collect();
                    format!(
                        "valid: {} level(s), ground sets {}\n",
                        cert.levels.len(),
                        grounds.join(" < ")
                    )
                }
                _ => violations
                    .iter()
                    .map(|v| format!("invalid: {v}\n"))
                    .collect(),
            };
            emit(&output.out, &report)?;
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        Command::Sweep {
            m,
            n,
            r,
            s,
            lambda,
            all,
            theorem,
            no_plan,
            threads,
            out,
            format,
        } => {
            let m = parse_range(&m, 4)?;
            let n_range = parse_range(&n, 0)?;
            let mut spec = SweepSpec::new(m, *n_range.end());
            spec.n_min = (*n_range.start() > 0).then_some(*n_range.start());
            spec.r = parse_range(&r, 1)?;
            spec.s = parse_range(&s, 1)?;
            spec.lambda = parse_range(&lambda, 1)?;
            spec.admissible_only = !all;
            spec.plan = !no_plan;
            spec.threads = threads;
            spec.theorem_cases = theorem
                .iter()
                .map(|t| match t.as_str() {
                    "strict-ratio" => Ok(TheoremCase::StrictRatio),
                    "equal-ratio" => Ok(TheoremCase::EqualRatio),
                    "out-of-scope" => Ok(TheoremCase::OutOfScope),
                    other => Err(input_error(format!("unknown theorem case `{other}`"))),
                })
                .collect::<Result<_, _>>()?;
            let rows = run_sweep(&spec)?;
            let text = match format {
                Format::Json => pretty(&serde_json::to_value(&rows).expect("plain data")),
                _ => {
                    let mut t = csv_header() + "\n";
                    for row in &rows {
                        t += &row.to_csv();
                        t.push('\n');
                    }
                    t
                }
            };
            emit(&out, &text)?;
            Ok(if rows.iter().any(|r| r.plan_found == Some(false)) {
                1
            } else {
                0
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
