//! `mgpkit` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or domain error, 2 undecided
//! within the search budget, 3 I/O failure.

mod commands;
mod load;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mgpkit::agent::{PolicyKind, DEFAULT_EXPLORATION_BUDGET};
use mgpkit::bench::RandomSizes;
use mgpkit::mgp::Budget;
use mgpkit::planner::DEFAULT_CAP;

use commands::{Done, SolveArgs};
use output::{write_atomic, write_sidecar, Envelope};

#[derive(Debug)]
pub enum Failure {
    /// Rendered diagnostics or domain errors.
    Invalid(Vec<String>),
    /// A search hit its cap before reaching a verdict.
    Budget(String),
    Io(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Budget(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "mgpkit", version, about = "Plan, classify, solve and judge open-world problems")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of stored states per search.
    #[arg(long, global = true, env = "MGPKIT_BUDGET", default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Maximum number of candidate extension sets to test.
    #[arg(long, global = true, default_value_t = Budget::default().max_subsets)]
    max_subsets: usize,
    /// Write the JSON report here (atomically) instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// World file for problem inputs; defaults to `<name>.world` beside the problem.
    #[arg(long, global = true)]
    world: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse worlds and problems and report diagnostics.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Shortest plan in the agent's subdomain.
    Plan { problem: PathBuf },
    /// Classify a problem and list its minimal extensions.
    CheckMgp {
        problem: PathBuf,
        /// Also evaluate the universally quantified reading over full closures.
        #[arg(long)]
        strict: bool,
    },
    /// Run a simulated agent and record its trace.
    Solve {
        problem: PathBuf,
        #[arg(long, default_value = "plan-first")]
        policy: PolicyKind,
        #[arg(long, default_value_t = DEFAULT_EXPLORATION_BUDGET)]
        exploration_budget: usize,
        #[arg(long, default_value_t = 1)]
        relaxation_depth: usize,
        /// Write the JSON-lines trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Expected progress of a recorded trace.
    Judge {
        problem: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Weight progress by priors only, without strategy likelihoods.
        #[arg(long)]
        paper_pure: bool,
    },
    /// Approximate M-number of a problem.
    Mnumber { problem: PathBuf },
    /// Generate a seeded random world and problem.
    Gen {
        #[arg(long, default_value_t = 4)]
        objects: usize,
        #[arg(long, default_value_t = 3)]
        predicates: usize,
        #[arg(long, default_value_t = 5)]
        schemas: usize,
        #[arg(long, default_value_t = 0.4)]
        hidden: f64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Plan { .. } => "plan",
            Command::CheckMgp { .. } => "check-mgp",
            Command::Solve { .. } => "solve",
            Command::Judge { .. } => "judge",
            Command::Mnumber { .. } => "mnumber",
            Command::Gen { .. } => "gen",
        }
    }
}

fn dispatch(cli: &Cli, budget: &Budget) -> Result<Done, Failure> {
    let world = cli.common.world.as_deref();
    match &cli.command {
        Command::Validate { files } => commands::validate(files, world),
        Command::Plan { problem } => commands::plan(problem, world, budget),
        Command::CheckMgp { problem, strict } => commands::check_mgp(problem, world, budget, *strict),
        Command::Solve {
            problem,
            policy,
            exploration_budget,
            relaxation_depth,
            trace,
        } => commands::solve(
            problem,
            world,
            budget,
            &SolveArgs {
                policy: *policy,
                seed: cli.common.seed,
                exploration_budget: *exploration_budget,
                relaxation_depth: *relaxation_depth,
                trace: trace.as_deref(),
            },
        ),
        Command::Judge {
            problem,
            trace,
            paper_pure,
        } => commands::judge(problem, world, budget, trace, *paper_pure),
        Command::Mnumber { problem } => commands::mnumber(problem, world, budget),
        Command::Gen {
            objects,
            predicates,
            schemas,
            hidden,
            out_dir,
        } => commands::gen(
            cli.common.seed,
            RandomSizes::new(*objects, *predicates, *schemas, *hidden),
            out_dir,
            budget,
        ),
    }
}

fn emit(cli: &Cli, budget: Budget, done: &Done) -> Result<(), Failure> {
    let envelope = Envelope::new(cli.command.name(), cli.common.seed, budget, &done.report);
    let json = envelope.to_json();
    match &cli.common.out {
        Some(path) => {
            write_atomic(path, json.as_bytes()).map_err(Failure::Io)?;
            let args: Vec<String> = std::env::args().collect();
            write_sidecar(Path::new(path), &args).map_err(Failure::Io)?;
            if !done.summary.is_empty() {
                println!("{}", done.summary);
            }
        }
        None => print!("{json}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = Budget {
        cap: cli.common.cap,
        max_subsets: cli.common.max_subsets,
    };
    let result = dispatch(&cli, &budget).and_then(|done| {
        for w in &done.warnings {
            eprintln!("{w}");
        }
        emit(&cli, budget, &done)?;
        Ok(done.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            match &f {
                Failure::Invalid(lines) => lines.iter().for_each(|l| eprintln!("{l}")),
                Failure::Budget(m) => eprintln!("undecided: {m}"),
                Failure::Io(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
