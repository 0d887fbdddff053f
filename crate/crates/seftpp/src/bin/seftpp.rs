use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use seftpp::bench::{render_table, run_bench, BenchConfig};
use seftpp::geometry::Pose2;
use seftpp::planner::{plan, validate_path, Strategy};
use seftpp::scenario::Scenario;
use seftpp::svg::render_svg;
use seftpp::Error;

#[derive(Parser)]
#[command(name = "seftpp", about = "Tethered path planner with entanglement constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a path for a scenario file and emit path, stats, and SVG artifacts.
    Plan(PlanArgs),
    /// Run a benchmark sweep over primitive lengths, resolutions, and strategies.
    Bench(BenchArgs),
    /// Replay a path file against a scenario and report per-condition validity.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Use the sparsity-improved node expansion (default).
    #[arg(long, conflicts_with = "normal")]
    improved: bool,
    /// Use the dense per-waypoint node expansion.
    #[arg(long)]
    normal: bool,
    /// Write an SVG rendering of the scenario and path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the path as one "x y theta" line per pose (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write planner statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// Write the sweep rows as JSON; the aligned table goes to stdout.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Path file with one "x y theta" line per pose.
    #[arg(long)]
    path: PathBuf,
    /// Replay resolution in grid units.
    #[arg(long, default_value_t = 0.01)]
    step: f64,
}

const EXIT_NO_PATH: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Plan(args) => run_plan(args),
        Command::Bench(args) => run_bench_cmd(args),
        Command::Validate(args) => run_validate(args),
    };
    match outcome {
        Ok(code) => code,
        Err(Error::NoPath) => {
            eprintln!("no path found");
            ExitCode::from(EXIT_NO_PATH)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn format_path(path: &[Pose2]) -> String {
    let mut out = String::new();
    for p in path {
        out.push_str(&format!("{} {} {}\n", p.x, p.y, p.theta));
    }
    out
}

fn parse_path(text: &str) -> Result<Vec<Pose2>, Error> {
    let mut path = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| Error::scenario("path", format!("line {}: expected three numbers", i + 1)))?;
        if fields.len() != 3 {
            return Err(Error::scenario(
                "path",
                format!("line {}: expected three numbers, got {}", i + 1, fields.len()),
            ));
        }
        path.push(Pose2 {
            x: fields[0],
            y: fields[1],
            theta: fields[2],
        });
    }
    if path.is_empty() {
        return Err(Error::scenario("path", "file contains no poses"));
    }
    Ok(path)
}

fn run_plan(args: PlanArgs) -> Result<ExitCode, Error> {
    let sc = Scenario::load(&args.scenario)?;
    let strategy = if args.normal {
        Strategy::Normal
    } else {
        Strategy::Improved
    };
    let result = plan(&sc, strategy)?;
    let text = format_path(&result.path);
    match &args.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    if let Some(p) = &args.stats {
        std::fs::write(p, serde_json::to_string_pretty(&result.stats).unwrap())?;
    }
    if let Some(p) = &args.svg {
        std::fs::write(p, render_svg(&sc, &result))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_bench_cmd(args: BenchArgs) -> Result<ExitCode, Error> {
    let cfg = BenchConfig::load(&args.config)?;
    let rows = run_bench(&cfg)?;
    std::fs::write(&args.out, serde_json::to_string_pretty(&rows).unwrap())?;
    print!("{}", render_table(&rows));
    Ok(ExitCode::SUCCESS)
}

fn run_validate(args: ValidateArgs) -> Result<ExitCode, Error> {
    let sc = Scenario::load(&args.scenario)?;
    let path = parse_path(&std::fs::read_to_string(&args.path)?)?;
    let report = validate_path(&sc, &path, args.step)?;
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    if report.all_ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_NO_PATH))
    }
}
