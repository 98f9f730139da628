//! `polynet`: decide controllability of polynomial-spring networks.
//!
//! Exit status: 0 when the answer is positive (controllable, certified,
//! Kalman rank full, corpus clean), 2 when it is not, 1 on any error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use polynet::corpus::{self, CORPUS};
use polynet::engine::{analyze, Method, Status};
use polynet::genericity::genericity_batch;
use polynet::network::{parse_network, parse_shape, Network};
use polynet::oracle::{
    certificate_from_json, certificate_to_json, kalman_rank, sample_points, saturate_with, verify_certificate,
    Budget, Certification, PhaseSpace,
};
use polynet::report::{analysis_doc, analysis_text, certificate_text, kalman_doc, kalman_text, to_json};
use polynet::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Algorithm,
    Ck,
    Singleton,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Algorithm => Method::Algorithm,
            MethodArg::Ck => Method::CkRecursion,
            MethodArg::Singleton => Method::Singleton,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "polynet", version, about = "Controllability of polynomial-spring networks driven by heat baths")]
struct Cli {
    /// Report format on standard output.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide controllability with one of the sufficient criteria.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "algorithm")]
        method: MethodArg,
        /// Append the derivation trace.
        #[arg(long)]
        trace: bool,
    },
    /// Certify the bracket rank condition at sampled points.
    Verify {
        file: PathBuf,
        /// Number of random points.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        points: u64,
        #[arg(long, env = "POLYNET_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = Budget::default().max_fields)]
        max_fields: usize,
        #[arg(long, default_value_t = Budget::default().max_degree)]
        max_degree: u32,
        #[arg(long, default_value_t = Budget::default().max_generations)]
        max_generations: usize,
        /// JSON array of points (objects keyed by coordinate name) to use
        /// instead of random ones.
        #[arg(long, conflicts_with = "certificate")]
        points_file: Option<PathBuf>,
        /// Re-check a certificate produced earlier instead of saturating.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Kalman rank test for networks with linear forces.
    Kalman { file: PathBuf },
    /// Random potentials on a fixed shape, analyzed by the refinement algorithm.
    Random {
        shape: PathBuf,
        /// Degree of every edge potential (at least 3).
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "POLYNET_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// The bundled example networks.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Subcommand)]
enum CorpusAction {
    /// List bundled networks.
    List,
    /// Check bundled networks against their recorded verdicts.
    Run { name: Option<String> },
    /// Print one bundled network document.
    Show { name: String },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(String, bool), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<Network, Failure> {
    parse_network(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn exec(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Analyze { file, method, trace } => {
            let net = load_network(file)?;
            let analysis = analyze(&net, (*method).into())?;
            let ok = analysis.verdict.status == Status::Controllable;
            let out = match cli.format {
                Format::Json => to_json(&analysis_doc(&net, &analysis, *trace)),
                Format::Text => analysis_text(&net, &analysis, *trace),
            };
            Ok((out, ok))
        }
        Command::Verify {
            file,
            points,
            seed,
            max_fields,
            max_degree,
            max_generations,
            points_file,
            certificate,
        } => {
            let net = load_network(file)?;
            if let Some(path) = certificate {
                let cert = certificate_from_json(&net, &read(path)?)?;
                let ranks = verify_certificate(&net, &cert)?;
                let ok = cert.status == Certification::Certified;
                let out = match cli.format {
                    Format::Json => to_json(&json!({
                        "replayed": true,
                        "status": if ok { "certified" } else { "inconclusive" },
                        "ranks": ranks,
                        "dim": cert.dim,
                    })),
                    Format::Text => format!("replayed: ranks {ranks:?} of {}\n{}", cert.dim, certificate_text(&net, &cert)),
                };
                return Ok((out, ok));
            }
            let budget = Budget {
                max_fields: *max_fields,
                max_degree: *max_degree,
                max_generations: *max_generations,
            };
            let space = PhaseSpace::new(&net);
            let (pts, used_seed) = match points_file {
                Some(path) => {
                    let value: serde_json::Value = serde_json::from_str(&read(path)?)?;
                    let list = value
                        .as_array()
                        .ok_or_else(|| Failure(format!("{}: expected a JSON array of points", path.display())))?;
                    let pts = list
                        .iter()
                        .map(|p| space.point_from_json(p))
                        .collect::<Result<Vec<_>, _>>()?;
                    (pts, None)
                }
                None => (sample_points(space.dim(), *points as usize, *seed), Some(*seed)),
            };
            let mut cert = saturate_with(&net, &pts, budget, exec(cli))?;
            cert.seed = used_seed;
            let ok = cert.status == Certification::Certified;
            let out = match cli.format {
                Format::Json => to_json(&certificate_to_json(&net, &cert)),
                Format::Text => certificate_text(&net, &cert),
            };
            Ok((out, ok))
        }
        Command::Kalman { file } => {
            let net = load_network(file)?;
            let report = kalman_rank(&net)?;
            let out = match cli.format {
                Format::Json => to_json(&kalman_doc(&report)),
                Format::Text => kalman_text(&report),
            };
            Ok((out, report.controllable()))
        }
        Command::Random {
            shape,
            degree,
            trials,
            seed,
        } => {
            let shape_doc = parse_shape(&read(shape)?).map_err(|e| Failure(format!("{}: {e}", shape.display())))?;
            let degrees = vec![*degree; shape_doc.pairs.len()];
            let results = genericity_batch(&shape_doc, &degrees, *seed, *trials, exec(cli));
            let mut rows = Vec::with_capacity(results.len());
            let mut controllable = 0;
            for (i, r) in results.into_iter().enumerate() {
                let a = r?;
                if a.verdict.status == Status::Controllable {
                    controllable += 1;
                }
                rows.push((seed.wrapping_add(i as u64), a.verdict.status.name()));
            }
            let ok = controllable == *trials;
            let out = match cli.format {
                Format::Json => to_json(&json!({
                    "trials": trials,
                    "controllable": controllable,
                    "inconclusive": trials - controllable,
                    "seed": seed,
                    "degree": degree,
                    "results": rows.iter().map(|(s, v)| json!({"seed": s, "verdict": v})).collect::<Vec<_>>(),
                })),
                Format::Text => format!("{controllable}/{trials} controllable (degree {degree}, seeds {seed}..)\n"),
            };
            Ok((out, ok))
        }
        Command::Corpus { action } => run_corpus(cli, action),
    }
}

fn run_corpus(cli: &Cli, action: &CorpusAction) -> Outcome {
    match action {
        CorpusAction::List => {
            let out = match cli.format {
                Format::Json => to_json(
                    &CORPUS
                        .iter()
                        .map(|e| json!({"name": e.name, "note": e.expected().note}))
                        .collect::<Vec<_>>(),
                ),
                Format::Text => CORPUS
                    .iter()
                    .map(|e| format!("{:<26} {}\n", e.name, e.expected().note))
                    .collect(),
            };
            Ok((out, true))
        }
        CorpusAction::Show { name } => {
            let entry = corpus::find(name).ok_or_else(|| Failure(format!("no corpus network named {name:?}")))?;
            Ok((entry.network.to_string(), true))
        }
        CorpusAction::Run { name } => {
            let outcomes = match name {
                Some(n) => {
                    let entry = corpus::find(n).ok_or_else(|| Failure(format!("no corpus network named {n:?}")))?;
                    vec![corpus::check_entry(entry)]
                }
                None => corpus::run_corpus(exec(cli)),
            };
            let ok = outcomes.iter().all(|o| o.passed());
            let out = match cli.format {
                Format::Json => to_json(
                    &outcomes
                        .iter()
                        .map(|o| json!({"name": o.name, "passed": o.passed(), "mismatches": o.mismatches}))
                        .collect::<Vec<_>>(),
                ),
                Format::Text => outcomes
                    .iter()
                    .map(|o| {
                        if o.passed() {
                            format!("ok       {}\n", o.name)
                        } else {
                            format!("MISMATCH {}: {}\n", o.name, o.mismatches.join("; "))
                        }
                    })
                    .collect(),
            };
            Ok((out, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            ExitCode::from(if ok { 0 } else { 2 })
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
