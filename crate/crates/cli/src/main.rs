//! `riccati-verify`: verify, benchmark and generate Riccati problems.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use riccati_core::bench::generate::{
    experiment1_solution, gen_experiment1, gen_known_solution, gen_lyapunov,
};
use riccati_core::bench::report::{
    problem_to_json, read_problem_json, reports_to_json, write_csv, MatrixJson,
};
use riccati_core::bench::suite::{run_suite, seed_from_env, suite, SuiteKind, SuiteProblem};
use riccati_core::bench::{KnownOptions, VerificationReport};
use riccati_core::enclosure::{DEFAULT_K_MAX, DEFAULT_TAU};
use riccati_core::{Method, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "riccati-verify",
    version,
    about = "Verified enclosures of stabilizing CARE solutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    H,
    K,
    F,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::H => vec![Method::H],
            MethodArg::K => vec![Method::K],
            MethodArg::F => vec![Method::F],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Default,
    Scaling,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Experiment1,
    Lyapunov,
    Known,
}

#[derive(clap::Args)]
struct Tuning {
    /// Iteration budget of every method.
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    kmax: usize,
    /// Entry bound for the permuted basis; must exceed sqrt(2).
    #[arg(long, default_value_t = DEFAULT_TAU)]
    tau: f64,
    /// Override the shift of method F.
    #[arg(long)]
    shift: Option<f64>,
}

impl Tuning {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            k_max: self.kmax,
            tau: self.tau,
            shift: self.shift,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify the problem in a JSON file.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        #[command(flatten)]
        tuning: Tuning,
        /// Problem JSON; `-` reads standard input.
        #[arg(long)]
        input: PathBuf,
        /// Report JSON; standard output if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark suite and print a summary table.
    Bench {
        #[arg(long, value_enum, default_value = "default")]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        #[command(flatten)]
        tuning: Tuning,
        /// Seed of the generated problems; defaults to RICCATI_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the summary table as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the reports as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a generated problem as JSON.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Defaults to RICCATI_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Plant a Jordan block in the closed loop (known only).
        #[arg(long)]
        defective: bool,
        /// Gaussian-integer data (known only).
        #[arg(long)]
        complex: bool,
        /// Problem JSON; standard output if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the exact solution, when known.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
}

type CliResult<T> = Result<T, String>;

fn read_input(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("writing {}: {e}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| e.to_string())
        }
    }
}

fn all_succeeded(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.status.is_success())
}

fn print_table(reports: &[VerificationReport]) {
    println!(
        "{:<14} {:>4} {:>2} {:<22} {:>10} {:>3} {:>10} {:>9} stab",
        "problem", "n", "m", "status", "nre", "k", "garp", "time"
    );
    let num = |v: Option<f64>| v.map_or_else(|| "-".to_owned(), |x| format!("{x:.2e}"));
    for r in reports {
        println!(
            "{:<14} {:>4} {:>2} {:<22} {:>10} {:>3} {:>10} {:>9.4} {}",
            r.problem_id,
            r.n,
            r.method,
            r.status.to_string(),
            num(r.nre),
            r.iterations,
            num(r.garp),
            r.wall_time,
            r.stabilizing
        );
    }
}

fn problem_id(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty() && *s != "-")
        .unwrap_or("input")
        .to_owned()
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Verify {
            method,
            tuning,
            input,
            output,
        } => {
            let problem = read_problem_json(&read_input(&input)?).map_err(|e| e.to_string())?;
            let sp = SuiteProblem::new(problem_id(&input), problem, None);
            let reports = run_suite(&[sp], &method.methods(), &tuning.options());
            write_output(output.as_deref(), &reports_to_json(&reports))?;
            Ok(all_succeeded(&reports))
        }
        Command::Bench {
            suite: kind,
            method,
            tuning,
            seed,
            csv,
            json,
        } => {
            let kind = match kind {
                SuiteArg::Default => SuiteKind::Default,
                SuiteArg::Scaling => SuiteKind::Scaling,
            };
            let problems = suite(kind, seed.unwrap_or_else(seed_from_env));
            let reports = run_suite(&problems, &method.methods(), &tuning.options());
            print_table(&reports);
            if let Some(path) = csv {
                let file = fs::File::create(&path)
                    .map_err(|e| format!("creating {}: {e}", path.display()))?;
                write_csv(file, &reports)
                    .map_err(|e| format!("writing {}: {e}", path.display()))?;
            }
            if let Some(path) = json {
                write_output(Some(&path), &reports_to_json(&reports))?;
            }
            Ok(all_succeeded(&reports))
        }
        Command::Gen {
            kind,
            n,
            seed,
            defective,
            complex,
            output,
            solution,
        } => {
            if n == 0 {
                return Err("--n must be positive".into());
            }
            let (problem, xs) = match kind {
                KindArg::Experiment1 => (gen_experiment1(), Some(experiment1_solution())),
                KindArg::Lyapunov => (gen_lyapunov(n), None),
                KindArg::Known => {
                    let opts = KnownOptions {
                        defective,
                        complex,
                        ..KnownOptions::default()
                    };
                    let (p, xs) = gen_known_solution(n, seed.unwrap_or_else(seed_from_env), opts);
                    (p, Some(xs))
                }
            };
            write_output(output.as_deref(), &problem_to_json(&problem))?;
            if let Some(path) = solution {
                let xs = xs.ok_or("no exact solution is known for this kind")?;
                let text = serde_json::to_string_pretty(&MatrixJson::from_matrix(&xs))
                    .map_err(|e| e.to_string())?;
                write_output(Some(&path), &text)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("riccati-verify: {e}");
            ExitCode::from(2)
        }
    }
}
