//! Command line front end: builds or reads a problem, searches it with one
//! or all decomposition variants and reports statistics.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use intprop::bench::{to_csv, to_table, Benchmark, StatsReport};
use intprop::decompose::Variant;
use intprop::engine::Mode;
use intprop::search::{maximize, solve_all, SearchConfig, SearchError};
use intprop::{parse, Csp, Goal, Int};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Division {
    Weak,
    Strong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Schedule {
    Generated,
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GoalArg {
    All,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StatsFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "intprop", about = "Integer interval constraint propagation with branch and propagate search")]
pub struct Args {
    /// cubes, opt, fractions, kyoto, sumprod or file:PATH
    #[arg(long)]
    pub problem: String,
    /// Size of sumprod.
    #[arg(long, default_value_t = 13)]
    pub n: u32,
    #[arg(long, default_value = "du", value_parser = parse_variant)]
    pub variant: Variant,
    #[arg(long, value_enum, default_value_t = Division::Strong)]
    pub division: Division,
    #[arg(long, value_enum, default_value_t = Schedule::Generated)]
    pub schedule: Schedule,
    /// Defaults to the goal stated by the problem.
    #[arg(long, value_enum)]
    pub goal: Option<GoalArg>,
    #[arg(long, value_enum, default_value_t = StatsFormat::Table)]
    pub stats: StatsFormat,
    #[arg(long)]
    pub print_solutions: bool,
    #[arg(long)]
    pub max_nodes: Option<u64>,
    /// Run every variant, concurrently.
    #[arg(long)]
    pub compare: bool,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

/// How a run ended, mapped to the process exit status.
#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Infeasible,
    Usage(String),
}

impl Status {
    pub fn code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Infeasible => 1,
            Status::Usage(_) => 2,
        }
    }
}

pub fn load_problem(args: &Args) -> Result<(String, Csp), String> {
    if let Some(path) = args.problem.strip_prefix("file:") {
        let src = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        let csp = parse(&src).map_err(|e| format!("{path}:{e}"))?;
        return Ok((path.to_string(), csp));
    }
    let b = Benchmark::standard(&args.problem, args.n).ok_or_else(|| format!("unknown problem `{}`", args.problem))?;
    let name = match b {
        Benchmark::Sumprod { n } => format!("sumprod{n}"),
        _ => b.name().to_string(),
    };
    Ok((name, b.build()))
}

struct Outcome {
    report: StatsReport,
    solutions: Vec<Vec<Int>>,
    infeasible: bool,
}

fn run_variant(name: &str, csp: &Csp, maximizing: bool, config: SearchConfig) -> Result<Outcome, SearchError> {
    let start = Instant::now();
    let (stats, solutions, infeasible) = match (&csp.goal, maximizing) {
        (Goal::Maximize(objective), true) => match maximize(csp, objective, &config) {
            Ok(o) => (o.stats, o.best.into_iter().collect(), false),
            Err(SearchError::Infeasible) => {
                let stats = solve_all(csp, &config)?.stats;
                (stats, Vec::new(), true)
            }
            Err(e) => return Err(e),
        },
        _ => {
            let s = solve_all(csp, &config)?;
            let infeasible = s.stats.complete && s.solutions.is_empty();
            (s.stats, s.solutions, infeasible)
        }
    };
    let report = StatsReport::new(name, config.variant, &stats, start.elapsed().as_secs_f64());
    Ok(Outcome { report, solutions, infeasible })
}

/// Runs the command and returns its output together with the exit status.
pub fn run(args: &Args) -> (String, Status) {
    let mut out = String::new();
    let (name, csp) = match load_problem(args) {
        Ok(p) => p,
        Err(e) => return (out, Status::Usage(e)),
    };
    let maximizing = match args.goal {
        Some(GoalArg::Maximize) if csp.goal == Goal::All => {
            return (out, Status::Usage(format!("problem `{name}` has no objective to maximize")));
        }
        Some(GoalArg::All) => false,
        _ => matches!(csp.goal, Goal::Maximize(_)),
    };
    let base = SearchConfig {
        variant: args.variant,
        weak: args.division == Division::Weak,
        mode: match args.schedule {
            Schedule::Generated => Mode::Scheduled,
            Schedule::Cycle => Mode::Cycle,
        },
        max_nodes: args.max_nodes,
        ..SearchConfig::default()
    };
    let variants = if args.compare { Variant::ALL.to_vec() } else { vec![args.variant] };
    let results: Vec<Result<Outcome, SearchError>> = std::thread::scope(|s| {
        let handles: Vec<_> = variants
            .iter()
            .map(|&variant| {
                let (name, csp) = (&name, &csp);
                s.spawn(move || run_variant(name, csp, maximizing, SearchConfig { variant, ..base }))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search thread panicked")).collect()
    });
    let mut outcomes = Vec::new();
    for r in results {
        match r {
            Ok(o) => outcomes.push(o),
            Err(e) => return (out, Status::Usage(e.to_string())),
        }
    }
    if args.print_solutions {
        if let Some(first) = outcomes.first() {
            for point in &first.solutions {
                let cells: Vec<String> = point.iter().enumerate().map(|(v, x)| format!("{}={x}", csp.name(v))).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
        }
    }
    let reports: Vec<StatsReport> = outcomes.iter().map(|o| o.report.clone()).collect();
    match args.stats {
        StatsFormat::Table => out.push_str(&to_table(&reports)),
        StatsFormat::Csv => out.push_str(&to_csv(&reports)),
        StatsFormat::Json => {
            let json = if args.compare { serde_json::to_string_pretty(&reports) } else { serde_json::to_string_pretty(&reports[0]) };
            out.push_str(&json.expect("reports serialize"));
            out.push('\n');
        }
    }
    let status = if outcomes.iter().any(|o| o.infeasible) { Status::Infeasible } else { Status::Ok };
    (out, status)
}
