//! `starfactor`: generate graphs, build star factors, verify them, and
//! benchmark the solvers. Every run is a pure function of its flags.

mod bench;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use starfactor::basic::star_factor_basic;
use starfactor::general::{star_factor_general, GeneralConfig, SpecialScope};
use starfactor::generators::{complete_bipartite, paley_bipartite, random_regular, spanning_regular_subgraph};
use starfactor::regular::{star_factor_regular, RegularConfig, Solution};
use starfactor::report::render_record;
use starfactor::verify::{min_dominating_set, validate_star_factor, ValidationReport, DEFAULT_DOMSET_BUDGET};
use starfactor::{Graph, StarFactor};

#[derive(Parser)]
#[command(name = "starfactor", version, about = "Spanning star factors with large stars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Gen {
        #[command(subcommand)]
        family: Family,
        #[arg(long, default_value_t = 0, global = true)]
        seed: u64,
        /// Output file (stdout if omitted).
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Build a star factor and validate it. Exits 0 iff the result is valid.
    Solve(SolveArgs),
    /// Check a star factor against a graph. Exits 0 iff it is valid.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        factor: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_size: usize,
    },
    /// Exact minimum dominating set by branch and bound.
    Domset {
        #[arg(long = "in")]
        input: PathBuf,
        /// Search-node budget; past it the best set found is reported as inexact.
        #[arg(long, default_value_t = DEFAULT_DOMSET_BUDGET)]
        budget: u64,
    },
    /// Solve a grid of generated instances and print one row per cell.
    Bench(bench::BenchArgs),
}

#[derive(Subcommand)]
enum Family {
    /// Uniform-ish random d-regular graph on n vertices.
    Regular { n: usize, d: usize },
    /// Bipartite Paley graph on 2p vertices, optionally thinned to a
    /// spanning d-regular subgraph.
    Paley {
        p: u64,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Complete bipartite graph K_{a,b}.
    Kab { a: usize, b: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub(crate) enum Mode {
    Regular,
    General,
    Basic,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Regular => "regular",
            Mode::General => "general",
            Mode::Basic => "basic",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Scope {
    Block,
    Full,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long = "in")]
    input: PathBuf,
    /// Degree parameter; defaults to the minimum degree for `basic`.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scale factor in (0, 1] for the random-subset thresholds (general mode).
    #[arg(long)]
    relax: Option<f64>,
    /// Which neighbours a high vertex's lower-bound event inspects (general mode).
    #[arg(long, value_enum, default_value_t = Scope::Block)]
    special_scope: Scope,
    /// Resampling round budget for each phase.
    #[arg(long)]
    max_rounds: Option<usize>,
    /// Star-factor output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run report file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Run record with timings (stderr if omitted).
    #[arg(long)]
    record: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { family, seed, out } => {
            let g = generate(&family, seed).context("gen")?;
            emit(out.as_deref(), &g.to_edge_list())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => solve(args),
        Command::Verify {
            input,
            factor,
            min_size,
        } => {
            let g = read_graph(&input)?;
            let text = fs::read_to_string(&factor).with_context(|| format!("read: {}", factor.display()))?;
            let sf = StarFactor::parse(&text).with_context(|| format!("read: {}", factor.display()))?;
            let verdict = validate_star_factor(&g, &sf, min_size);
            print!("{}", render_verdict(&verdict));
            Ok(exit_for(&verdict))
        }
        Command::Domset { input, budget } => {
            let g = read_graph(&input)?;
            let r = min_dominating_set(&g, budget);
            let witness: Vec<String> = r.witness.iter().map(usize::to_string).collect();
            println!("size={}", r.size);
            println!("exact={}", r.exact);
            println!("nodes={}", r.nodes_explored);
            println!("witness={}", witness.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench(args) => bench::run(&args),
    }
}

fn generate(family: &Family, seed: u64) -> starfactor::Result<Graph> {
    match *family {
        Family::Regular { n, d } => random_regular(n, d, seed, bench::GEN_RETRIES),
        Family::Paley { p, degree: None } => paley_bipartite(p),
        Family::Paley { p, degree: Some(d) } => spanning_regular_subgraph(&paley_bipartite(p)?, d, seed),
        Family::Kab { a, b } => complete_bipartite(a, b),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let file = fs::File::open(path).with_context(|| format!("read: {}", path.display()))?;
    Graph::read_edge_list(file).with_context(|| format!("read: {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("write: {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("write: stdout"),
    }
}

fn exit_for(verdict: &ValidationReport) -> ExitCode {
    if verdict.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn render_verdict(v: &ValidationReport) -> String {
    let mut out = format!(
        "valid={}\nstars={}\nmin_star={}\nmax_star={}\nuncovered={}\n",
        v.valid,
        v.star_count,
        v.min_star,
        v.max_star,
        v.coverage_gap.len()
    );
    for violation in &v.violations {
        out.push_str(&format!("violation: {violation}\n"));
    }
    for u in v.coverage_gap.iter().take(20) {
        out.push_str(&format!("violation: vertex {u} is not covered\n"));
    }
    out
}

/// Runs one solver on `g`. Shared with `bench`.
pub(crate) fn solve_graph(
    g: &Graph,
    mode: Mode,
    d: usize,
    seed: u64,
    relax: Option<f64>,
    max_rounds: Option<usize>,
    scope: SpecialScope,
) -> Result<(Solution, Value)> {
    match mode {
        Mode::Regular => {
            if relax.is_some() {
                return Err(anyhow!("solve: --relax applies to general mode only"));
            }
            let cfg = RegularConfig {
                max_rounds,
                ..RegularConfig::new(d, seed)
            };
            let sol = star_factor_regular(g, &cfg).context("solve")?;
            Ok((sol, serde_json::to_value(&cfg)?))
        }
        Mode::General => {
            let cfg = GeneralConfig {
                max_rounds,
                relax: relax.unwrap_or(1.0),
                special_scope: scope,
                ..GeneralConfig::new(d, seed)
            };
            let sol = star_factor_general(g, &cfg).context("solve")?;
            Ok((sol, serde_json::to_value(&cfg)?))
        }
        Mode::Basic => {
            let sol = star_factor_basic(g).context("solve")?;
            Ok((sol, json!({ "d": d, "seed": seed })))
        }
    }
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let t_read = Instant::now();
    let g = read_graph(&args.input)?;
    let read_ms = t_read.elapsed().as_secs_f64() * 1e3;

    let d = match (args.d, args.mode) {
        (Some(d), _) => d,
        (None, Mode::Basic) => g.min_degree().context("solve")?,
        (None, _) => return Err(anyhow!("solve: --d is required in {} mode", args.mode.name())),
    };
    let scope = match args.special_scope {
        Scope::Block => SpecialScope::AssignedBlock,
        Scope::Full => SpecialScope::FullNeighborhood,
    };

    let t_solve = Instant::now();
    let (sol, config) = solve_graph(&g, args.mode, d, args.seed, args.relax, args.max_rounds, scope)?;
    let solve_ms = t_solve.elapsed().as_secs_f64() * 1e3;

    let t_verify = Instant::now();
    let verdict = validate_star_factor(&g, &sol.factor, 1);
    let verify_ms = t_verify.elapsed().as_secs_f64() * 1e3;

    emit(args.out.as_deref(), &sol.factor.to_text())?;
    if let Some(path) = &args.report {
        emit(Some(path), &sol.report.render())?;
    }
    let record = json!({
        "command": "solve",
        "seed": args.seed,
        "config": config,
        "timings_ms": { "read": read_ms, "solve": solve_ms, "verify": verify_ms },
        "report": sol.report.to_json(),
        "verdict": verdict,
    });
    let record = render_record(&record);
    match &args.record {
        Some(path) => emit(Some(path), &record)?,
        None => eprint!("{record}"),
    }
    if !verdict.valid {
        eprint!("{}", render_verdict(&verdict));
    }
    Ok(exit_for(&verdict))
}
