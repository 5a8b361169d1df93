use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sethforge::bundle::{read_bundle, write_bundle, write_witness, BundleError};
use sethforge::formula::{parse_dimacs, CnfFormula};
use sethforge::reductions::{check_solution, reduce, Problem, ReductionError};
use sethforge::selftest::{self, SUITES};
use sethforge::solvers::{brute_force, solve_instance, DpOptions, SolveError, DEFAULT_STATE_CAP};
use sethforge::suite::DEFAULT_SEED;
use sethforge::verify::{verify, VerifyOptions, DEFAULT_PROBLEMS};

#[derive(Parser)]
#[command(name = "sethforge", version, about = "Reduce CNF formulas to width-certified graph instances and solve them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a DIMACS formula to an instance bundle (.gr, .td, .json).
    Reduce {
        /// DIMACS CNF file.
        input: PathBuf,
        /// One of is, ds, maxcut, qcol, qlist, oct, packing, partition.
        #[arg(long, value_parser = parse_problem)]
        problem: Problem,
        /// Group exponent for ds, oct and the colorings.
        #[arg(long, default_value_t = 1)]
        p: u32,
        /// Number of colors for the colorings.
        #[arg(long, default_value_t = 3)]
        q: u32,
        /// Output directory.
        #[arg(short = 'o', default_value = ".")]
        out: PathBuf,
        /// Also write a Graphviz rendering of the labeled graph.
        #[arg(long)]
        dot: bool,
    },
    /// Solve a bundle given by any of its files or their common stem.
    Solve {
        /// Any of `<stem>.gr`, `<stem>.td`, `<stem>.json`, or the stem itself.
        bundle: PathBuf,
        #[arg(long, value_enum, default_value_t = Oracle::Dp)]
        oracle: Oracle,
        /// Write `<stem>.witness.json` when the verdict is yes.
        #[arg(long)]
        witness: bool,
    },
    /// Reduce, certify, solve and cross-check every problem on one formula.
    Verify {
        /// DIMACS CNF file.
        input: PathBuf,
        /// Comma-separated problems; default: all except qlist.
        #[arg(long, value_parser = parse_problem, value_delimiter = ',')]
        problem: Vec<Problem>,
        /// Group exponent for ds, oct and the colorings.
        #[arg(long, default_value_t = 1)]
        p: u32,
        /// Number of colors for the colorings.
        #[arg(long, default_value_t = 3)]
        q: u32,
        /// Write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Include per-row elapsed time (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Run the exhaustive self-check suites.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Run only these suites.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES), value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Dp,
    Brute,
}

fn parse_problem(s: &str) -> Result<Problem, String> {
    Problem::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Problem::ALL.iter().map(|p| p.name()).collect();
        format!("unknown problem {s:?}; expected one of {}", names.join(", "))
    })
}

struct CliError {
    category: &'static str,
    detail: String,
}

impl CliError {
    fn new(category: &'static str, detail: impl Into<String>) -> Self {
        CliError { category, detail: detail.into() }
    }

    /// Bad input exits 2, failures while running exit 1.
    fn exit_code(&self) -> u8 {
        match self.category {
            "parse" | "degenerate-input" | "invalid-parameter" | "invalid-bundle" => 2,
            _ => 1,
        }
    }
}

/// Splits `category: detail` as produced by the library's error types.
fn categorized(msg: String, fallback: &'static str) -> CliError {
    const KNOWN: [&str; 9] = [
        "degenerate-input",
        "size-cap",
        "invalid-parameter",
        "invalid-bundle",
        "invalid-decomposition",
        "state-cap",
        "width",
        "unsupported",
        "experimental",
    ];
    for k in KNOWN {
        if let Some(rest) = msg.strip_prefix(k).and_then(|r| r.strip_prefix(": ")) {
            return CliError::new(k, rest);
        }
    }
    CliError::new(fallback, msg)
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        categorized(e.to_string(), "reduction")
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        categorized(e.to_string(), "solver")
    }
}

impl From<BundleError> for CliError {
    fn from(e: BundleError) -> Self {
        let category = e.category();
        let msg = e.to_string();
        let detail = msg.split_once(": ").map_or(msg.clone(), |(_, d)| d.to_string());
        CliError::new(category, detail)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

fn read_formula(path: &Path) -> Result<CnfFormula, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    parse_dimacs(&text).map_err(|e| CliError::new("parse", e.to_string()))
}

fn dp_options() -> Result<DpOptions, CliError> {
    let state_cap = match std::env::var("SETHFORGE_STATE_CAP") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| CliError::new("invalid-parameter", format!("SETHFORGE_STATE_CAP={v:?} is not a positive integer")))?,
        Err(_) => DEFAULT_STATE_CAP,
    };
    Ok(DpOptions { state_cap, ..Default::default() })
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Reduce { input, problem, p, q, out, dot } => {
            let phi = read_formula(&input)?;
            let inst = reduce(problem, &phi, p, q)?;
            let name = stem(&input);
            let base = write_bundle(&inst, &out, &name)?;
            if dot {
                write_file(&base.with_extension("dot"), &inst.graph.to_dot())?;
            }
            println!(
                "{} {}: {} vertices, {} edges, width {}, target {}",
                name,
                inst.kind,
                inst.graph.num_vertices(),
                inst.graph.num_edges(),
                inst.decomposition.width(),
                inst.target.map_or("-".into(), |t| t.to_string())
            );
            Ok(true)
        }
        Command::Solve { bundle, oracle, witness } => {
            let inst = read_bundle(&bundle)?;
            let answer = match oracle {
                Oracle::Dp => solve_instance(&inst, &DpOptions { witness, ..dp_options()? })?,
                Oracle::Brute => brute_force(&inst)?,
            };
            println!("{}", answer.verdict_line());
            if witness {
                match &answer.solution {
                    Some(sol) if answer.verdict => {
                        if !check_solution(&inst, sol).unwrap_or(false) {
                            return Err(CliError::new("solver", "reconstructed witness failed its check"));
                        }
                        let path = bundle.with_extension("witness.json");
                        write_witness(&path, sol)?;
                        eprintln!("witness written to {}", path.display());
                    }
                    _ => eprintln!("no witness: the verdict is no"),
                }
            }
            Ok(true)
        }
        Command::Verify { input, problem, p, q, json, timings } => {
            let phi = read_formula(&input)?;
            let problems = if problem.is_empty() { DEFAULT_PROBLEMS.to_vec() } else { problem };
            let opts = VerifyOptions { p, q, dp: dp_options()?, timings };
            let report = verify(&stem(&input), &phi, &problems, &opts);
            print!("{}", report.table());
            if let Some(path) = json {
                write_file(&path, &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))?;
            }
            Ok(report.pass)
        }
        Command::Selftest { seed, json, only } => {
            let report = selftest::run(seed, &only, &dp_options()?);
            for s in &report.suites {
                println!("{}", s.line());
            }
            println!("overall: {}", if report.pass { "PASS" } else { "FAIL" });
            if let Some(path) = json {
                write_file(&path, &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))?;
            }
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}: {}", e.category, e.detail);
            ExitCode::from(e.exit_code())
        }
    }
}
