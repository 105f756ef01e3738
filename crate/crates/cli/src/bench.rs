//! `bench`: one (size, seed) cell per generated instance, solved in parallel,
//! printed in cell order.

use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::ValueEnum;
use rayon::prelude::*;

use starfactor::general::SpecialScope;
use starfactor::generators::{complete_bipartite, paley_bipartite, random_regular};
use starfactor::verify::validate_star_factor;
use starfactor::Graph;

use crate::{solve_graph, Mode};

pub(crate) const GEN_RETRIES: usize = 1000;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub(crate) enum BenchFamily {
    /// Random d-regular graphs; sizes are vertex counts.
    Regular,
    /// K_{d,b}; sizes are b.
    Kab,
    /// Bipartite Paley graphs; sizes are primes, d defaults to (p - 1) / 2.
    Paley,
}

#[derive(clap::Args)]
pub(crate) struct BenchArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, value_enum)]
    family: BenchFamily,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Comma-separated seeds, or a half-open range `a..b`.
    #[arg(long, value_parser = parse_seeds)]
    seeds: SeedList,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    relax: Option<f64>,
}

#[derive(Clone, Debug)]
pub(crate) struct SeedList(Vec<u64>);

fn parse_seeds(s: &str) -> std::result::Result<SeedList, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| format!("bad seed range {s:?}"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad seed range {s:?}"))?;
        return Ok(SeedList((a..b).collect()));
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad seed {t:?}")))
        .collect::<std::result::Result<_, _>>()
        .map(SeedList)
}

struct Row {
    size: usize,
    seed: u64,
    line: String,
    valid: bool,
}

fn instance(family: BenchFamily, size: usize, d: Option<usize>, seed: u64) -> Result<(Graph, usize)> {
    match family {
        BenchFamily::Regular => {
            let d = d.ok_or_else(|| anyhow!("bench: --d is required for the regular family"))?;
            Ok((random_regular(size, d, seed, GEN_RETRIES)?, d))
        }
        BenchFamily::Kab => {
            let d = d.ok_or_else(|| anyhow!("bench: --d is required for the kab family"))?;
            Ok((complete_bipartite(d, size)?, d))
        }
        BenchFamily::Paley => {
            let g = paley_bipartite(size as u64)?;
            Ok((g, d.unwrap_or((size - 1) / 2)))
        }
    }
}

fn cell(args: &BenchArgs, size: usize, seed: u64) -> Result<Row> {
    let t_gen = Instant::now();
    let (g, d) = instance(args.family, size, args.d, seed).with_context(|| format!("gen size={size} seed={seed}"))?;
    let gen_ms = t_gen.elapsed().as_secs_f64() * 1e3;
    let t_solve = Instant::now();
    let (sol, _) = solve_graph(&g, args.mode, d, seed, args.relax, None, SpecialScope::AssignedBlock)
        .with_context(|| format!("size={size} seed={seed}"))?;
    let solve_ms = t_solve.elapsed().as_secs_f64() * 1e3;
    let verdict = validate_star_factor(&g, &sol.factor, 1);
    let line = format!(
        "{size}\t{seed}\t{}\t{d}\t{}\t{}\t{}\t{}\t{}\t{gen_ms:.2}\t{solve_ms:.2}",
        g.vertex_count(),
        sol.report.min_star,
        sol.report.max_star,
        sol.report.star_count,
        sol.report.fallbacks.len(),
        verdict.valid,
    );
    Ok(Row {
        size,
        seed,
        line,
        valid: verdict.valid,
    })
}

pub(crate) fn run(args: &BenchArgs) -> Result<ExitCode> {
    let cells: Vec<(usize, u64)> = args
        .sizes
        .iter()
        .flat_map(|&s| args.seeds.0.iter().map(move |&seed| (s, seed)))
        .collect();
    let mut rows = cells
        .par_iter()
        .map(|&(size, seed)| cell(args, size, seed))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.size, r.seed));
    println!("size\tseed\tn\td\tmin_star\tmax_star\tstars\tfallbacks\tvalid\tgen_ms\tsolve_ms");
    for r in &rows {
        println!("{}", r.line);
    }
    Ok(if rows.iter().all(|r| r.valid) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
