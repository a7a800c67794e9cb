//! `ovalbent`: build and verify bent functions, their duals, ovals, line
//! ovals and spreads from the command line.

mod dual;
mod ea;
mod niho;
mod oval;
mod report;
mod spread;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::{to_json, Context, Failure, RunReport, EXIT_FAIL, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(
    name = "ovalbent",
    version,
    about = "Bent functions linear on spreads, their duals and line ovals"
)]
struct Cli {
    /// Directory for artifacts (truth tables, g tables, JSON point and line sets).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Seed for sampled validations above the exhaustive caps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Add wall time to the report.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a univariate Niho bent function, its dual and its line oval.
    Niho(niho::NihoArgs),
    /// Verify ovals and hyperovals, convert between points and lines, run the catalog.
    #[command(subcommand)]
    Oval(oval::OvalCommand),
    /// Build, validate, transpose and combine prequasifields.
    #[command(subcommand)]
    Spread(spread::SpreadCommand),
    /// Compute a dual by one route and cross-check it against others.
    Dual(dual::DualArgs),
    /// EA invariants of a truth table, optionally compared with another.
    Ea(ea::EaArgs),
}

/// Niho spec flags shared by `niho` and `dual`.
#[derive(Args, Debug, Clone)]
pub struct NihoFlags {
    /// quadratic, binomial_3, binomial_1_6 or leander_r.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    /// Index of a (alpha_1 for binomials) in K; default is the smallest with a + a-bar = 1.
    #[arg(long)]
    a_index: Option<u64>,
    /// Index of alpha_2 for binomials; default 1.
    #[arg(long)]
    alpha2_index: Option<u64>,
    /// r for leander_r; default 2.
    #[arg(long)]
    r: Option<u32>,
    /// JSON descriptor {family, m, a_index?, r?, alpha2_index?} instead of flags.
    #[arg(long, conflicts_with_all = ["family", "a_index", "alpha2_index", "r"])]
    spec: Option<PathBuf>,
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("OVALBENT_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            Failure::usage(format!(
                "OVALBENT_THREADS must be a positive integer, got `{v}`"
            ))
        })?;
        if n == 0 {
            return Err(Failure::usage("OVALBENT_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli, argv: Vec<String>) -> Result<(RunReport, bool), Failure> {
    init_threads()?;
    let ctx = Context {
        out_dir: cli.out_dir,
        seed: cli.seed,
        started: Instant::now(),
    };
    let mut report = RunReport::new(argv);
    // Some commands stream a table to stdout; their report goes to stderr.
    let stdout_taken = match cli.command {
        Command::Niho(a) => niho::run(&ctx, &mut report, &a).map(|_| false)?,
        Command::Oval(c) => oval::run(&ctx, &mut report, c).map(|_| false)?,
        Command::Spread(c) => spread::run(&ctx, &mut report, c)?,
        Command::Dual(a) => dual::run(&ctx, &mut report, &a).map(|_| false)?,
        Command::Ea(a) => ea::run(&ctx, &mut report, &a).map(|_| false)?,
    };
    if cli.timing {
        report.wall_time_ms = Some(ctx.started.elapsed().as_secs_f64() * 1e3);
    }
    Ok((report, stdout_taken))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli, argv.into_iter().skip(1).collect()) {
        Ok((report, stdout_taken)) => {
            if stdout_taken {
                eprintln!("{}", to_json(&report));
            } else {
                println!("{}", to_json(&report));
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
