//! `braidstir`: classify braided stirring protocols and measure stretching.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 malformed input,
//! 3 classification inconclusive.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use braidstir::report::{run_classify, run_simulation, ProtocolFile, RunReport, Stages, SUMMARY_JSON};
use braidstir::{parse_braid, BraidWord, ClassifyOptions, Error, TnType};
use clap::{Args, Parser, Subcommand};

const EXIT_RUNTIME: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "braidstir", version, about = "Thurston-Nielsen classification and stirring simulation for braids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the braid of a protocol file.
    Classify(RunArgs),
    /// Classify, advect the seed curve and the seeded scalar, write CSVs.
    Simulate(RunArgs),
    /// Classify and advect the seeded scalar only.
    Scalar(RunArgs),
    /// Braid word utilities.
    #[command(subcommand)]
    Braid(BraidCommand),
}

#[derive(Args)]
struct RunArgs {
    /// Protocol file (JSON).
    protocol: PathBuf,
    /// Output directory for CSV files and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    periods: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum BraidCommand {
    /// Concatenate two words.
    Compose {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        #[arg(long)]
        n: Option<usize>,
    },
    Inverse {
        #[arg(allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Free reduction.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Final position of each strand.
    Perm {
        #[arg(allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input_error(e: Error) -> Failure {
    let code = match e {
        Error::Io(_) => EXIT_RUNTIME,
        _ => EXIT_INPUT,
    };
    Failure {
        code,
        error: e.into(),
    }
}

fn runtime<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure {
        code: EXIT_RUNTIME,
        error: e.into(),
    }
}

impl RunArgs {
    fn load(&self) -> Result<(ProtocolFile, ClassifyOptions), Failure> {
        let mut p = ProtocolFile::load(&self.protocol).map_err(|e| {
            let f = input_error(e);
            Failure {
                error: f.error.context(format!("reading {}", self.protocol.display())),
                ..f
            }
        })?;
        if let Some(v) = self.periods {
            p.periods = v;
        }
        if let Some(v) = self.grid {
            p.grid_n = Some(v);
        }
        if let Some(v) = self.seed {
            p.seed = Some(v);
        }
        p.validate().map_err(input_error)?;
        let mut opts = ClassifyOptions::default();
        if let Some(v) = self.tol {
            opts.tol = v;
        }
        if let Some(v) = self.max_iter {
            opts.max_iter = v;
        }
        Ok((p, opts))
    }
}

fn print_classification(r: &RunReport) {
    let c = &r.classification;
    println!("tag: {}", c.tag);
    println!("lambda: {:.12}", c.lambda);
    println!("log_dilation: {:.12}", c.log_dilation);
    println!("burau_lower_bound: {:.12}", c.burau_lower_bound);
    println!("iterations: {}", c.iterations);
    println!("converged: {}", c.converged);
    if let Some(k) = c.recurrence_period {
        println!("recurrence_period: {k}");
    }
    println!("notes: {}", c.notes);
}

fn print_series(name: &str, s: &braidstir::GrowthSeries) {
    match &s.fit {
        Some(f) => println!(
            "{name}: rate {:.6} ({:?}, window {}..={}, residual {:.3e}){}",
            f.rate(),
            f.kind,
            f.window.0,
            f.window.1,
            f.residual(),
            if s.truncated { " truncated" } else { "" }
        ),
        None => println!("{name}: no fit ({} points)", s.values.len()),
    }
}

fn write_summary(dir: &Path, report: &RunReport) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(SUMMARY_JSON), report.to_json()?)
        .with_context(|| format!("writing {}", dir.join(SUMMARY_JSON).display()))
}

fn cmd_classify(args: &RunArgs) -> Result<u8, Failure> {
    let (p, opts) = args.load()?;
    let report = run_classify(&p, opts).map_err(input_error)?;
    print_classification(&report);
    if let Some(dir) = &args.out {
        write_summary(dir, &report).map_err(runtime)?;
    }
    Ok(if report.classification.tag == TnType::Inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        0
    })
}

fn cmd_simulate(args: &RunArgs, stages: Stages) -> Result<u8, Failure> {
    let (p, opts) = args.load()?;
    let report = run_simulation(&p, opts, stages, args.out.as_deref()).map_err(runtime)?;
    print_classification(&report);
    print_series("topological", &report.topological);
    for (name, s) in [
        ("metric", &report.metric),
        ("scalar_sup", &report.scalar_sup),
        ("scalar_l1", &report.scalar_l1),
    ] {
        if let Some(s) = s {
            print_series(name, s);
        }
    }
    if let Some(lb) = report.lowerbound {
        println!(
            "lowerbound_satisfied: {} (metric {:.6} vs topological {:.6})",
            lb.lowerbound_satisfied, lb.metric_rate, lb.topological_rate
        );
    }
    if report.truncated {
        println!("truncated: true");
    }
    Ok(0)
}

/// Strand count from `--n`, else one more than the largest generator index.
fn word(text: &str, n: Option<usize>) -> Result<BraidWord, Failure> {
    let n = match n {
        Some(n) => n,
        None => {
            let widest = text
                .split_whitespace()
                .filter_map(|t| t.parse::<i64>().ok())
                .map(|v| v.unsigned_abs() as usize)
                .max()
                .unwrap_or(1);
            widest.max(1) + 1
        }
    };
    parse_braid(text, n).map_err(input_error)
}

fn cmd_braid(cmd: &BraidCommand) -> Result<u8, Failure> {
    let out = match cmd {
        BraidCommand::Compose { left, right, n } => {
            let (a, b) = (word(left, *n)?, word(right, *n)?);
            let k = a.strands().max(b.strands());
            let widen = |w: &BraidWord| BraidWord::new(k, w.letters().to_vec()).map_err(input_error);
            widen(&a)?.compose(&widen(&b)?).map_err(input_error)?.to_string()
        }
        BraidCommand::Inverse { word: w, n } => word(w, *n)?.inverse().to_string(),
        BraidCommand::Reduce { word: w, n } => word(w, *n)?.free_reduce().to_string(),
        BraidCommand::Perm { word: w, n } => word(w, *n)?.strand_permutation().to_string(),
    };
    println!("{out}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Simulate(a) => cmd_simulate(
            a,
            Stages {
                metric: true,
                scalar: true,
            },
        ),
        Command::Scalar(a) => cmd_simulate(
            a,
            Stages {
                metric: false,
                scalar: true,
            },
        ),
        Command::Braid(b) => cmd_braid(b),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
