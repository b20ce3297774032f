use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use polarchan::equiv::normalized_diff_auto;
use polarchan::harness::{build_example2_circuit, example1_instance, example2_probe_state};
use polarchan::matkit::{hermitian_eig, random_density, random_unitary, ComplexMatrix};
use polarchan::search::{
    solve_with_observer, ChannelInstance, ChannelPair, SolveResult, SolverConfig, Status,
};
use polarchan::tomo::{
    reconstruct as run_reconstruction, ChannelOracle, ReconstructionReport, RECONSTRUCTION_SOLVER,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Circuit, ReconstructArgs, ReproEx1Args, ReproEx2Args, SolveArgs};
use crate::output::{read_matrix, write_json, write_trace, ReportJson, TraceWriter};
use crate::Completion;

#[derive(Debug, Serialize)]
struct SolveSummary {
    status: Status,
    iterations: usize,
    final_objective: f64,
    final_residual: f64,
    wall_time: f64,
}

fn completion(statuses: impl IntoIterator<Item = Status>) -> Completion {
    if statuses.into_iter().all(Status::is_converged) {
        Completion::Converged
    } else {
        Completion::HitIterationCap
    }
}

fn prepare_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Pairs from `dir`: either `rho.json`/`sigma.json` or numbered
/// `rho_K.json`/`sigma_K.json` starting at 0.
fn load_pairs(dir: &Path) -> Result<Vec<ChannelPair>> {
    let single = (dir.join("rho.json"), dir.join("sigma.json"));
    if single.0.exists() {
        return Ok(vec![ChannelPair::new(
            read_matrix(&single.0)?,
            read_matrix(&single.1)?,
        )]);
    }
    let mut pairs = Vec::new();
    for k in 0.. {
        let rho = dir.join(format!("rho_{k}.json"));
        if !rho.exists() {
            break;
        }
        let sigma = dir.join(format!("sigma_{k}.json"));
        pairs.push(ChannelPair::new(read_matrix(&rho)?, read_matrix(&sigma)?));
    }
    if pairs.is_empty() {
        bail!("no rho.json or rho_0.json in {}", dir.display());
    }
    Ok(pairs)
}

fn solve_traced(
    instance: &ChannelInstance,
    config: &SolverConfig,
    trace_path: &Path,
) -> Result<SolveResult> {
    let mut writer = TraceWriter::create(trace_path)?;
    let mut write_error = None;
    let result = solve_with_observer(instance, config, |rec, _| {
        if write_error.is_none() {
            write_error = writer.push(rec).err();
        }
    })?;
    if let Some(e) = write_error {
        return Err(e);
    }
    Ok(result)
}

fn summarize(r: &SolveResult, wall_time: f64) -> SolveSummary {
    SolveSummary {
        status: r.status,
        iterations: r.iterations(),
        final_objective: r.final_objective(),
        final_residual: r.final_residual(),
        wall_time,
    }
}

pub fn solve(args: &SolveArgs) -> Result<Completion> {
    let seed = args.common.seed;
    let config = args.common.solver.config(SolverConfig::default(), seed);
    let instance = match &args.input {
        Some(dir) => ChannelInstance::new(load_pairs(dir)?)?,
        None => example1_instance(args.n as usize, seed, args.pairs as usize)?.instance,
    };
    prepare_out(&args.common.out)?;
    let start = Instant::now();
    let r = solve_traced(&instance, &config, &args.common.out.join("trace.csv"))?;
    let summary = summarize(&r, start.elapsed().as_secs_f64());
    write_json(&args.common.out.join("summary.json"), &summary)?;
    println!(
        "{}: objective {:.3e} after {} iterations",
        r.status,
        r.final_objective(),
        r.iterations()
    );
    Ok(completion([r.status]))
}

/// A density whose two largest eigenvalues coincide.
fn degenerate_density(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n < 2 {
        bail!("a degenerate probe state needs n >= 2");
    }
    let eig = hermitian_eig(&random_density(n, seed))?;
    let mut spectrum = eig.eigenvalues.clone();
    spectrum[1] = spectrum[0];
    let total: f64 = spectrum.iter().sum();
    let d: Vec<f64> = spectrum.iter().map(|x| x / total).collect();
    Ok(ComplexMatrix::from_real_diagonal(&d).conjugate_by(&eig.eigenvectors))
}

fn reconstruct_once(
    hidden: &ComplexMatrix,
    rho0: &ComplexMatrix,
    config: &SolverConfig,
) -> Result<(ReconstructionReport, f64)> {
    let oracle = ChannelOracle::new(hidden.clone())?;
    let report = run_reconstruction(&oracle, rho0, config)?;
    let diff = normalized_diff_auto(&report.u_recovered, hidden)?;
    Ok((report, diff))
}

pub fn reconstruct(args: &ReconstructArgs) -> Result<Completion> {
    let seed = args.common.seed;
    let config = args.common.solver.config(RECONSTRUCTION_SOLVER, seed);
    let hidden = match (&args.input, args.circuit) {
        (Some(path), _) => read_matrix(path)?,
        (None, Some(Circuit::Example2)) => build_example2_circuit(),
        (None, None) => random_unitary(args.n as usize, seed),
    };
    let n = hidden.rows();
    let rho0 = if args.degenerate_rho0 {
        degenerate_density(n, seed)?
    } else {
        random_density(n, seed)
    };
    prepare_out(&args.common.out)?;
    let (report, diff) = reconstruct_once(&hidden, &rho0, &config)?;
    write_trace(&args.common.out.join("trace.csv"), &report.trace)?;
    write_json(
        &args.common.out.join("report.json"),
        &ReportJson::new(&report, diff),
    )?;
    println!(
        "{}: normalized_diff {diff:.3e}, {} queries",
        report.solver_status, report.budget_used
    );
    Ok(completion([report.solver_status]))
}

#[derive(Debug, Serialize)]
struct Ex1Summary {
    single: SolveSummary,
    multi: SolveSummary,
    pairs: u64,
}

pub fn repro_ex1(args: &ReproEx1Args) -> Result<Completion> {
    let seed = args.common.seed;
    let out = &args.common.out;
    let config = args.common.solver.config(SolverConfig::default(), seed);
    prepare_out(out)?;

    let single = example1_instance(args.n as usize, seed, 1)?;
    let start = Instant::now();
    let r1 = solve_traced(&single.instance, &config, &out.join("ex1_single_trace.csv"))?;
    let s1 = summarize(&r1, start.elapsed().as_secs_f64());

    let multi = example1_instance(args.n as usize, seed, args.pairs as usize)?;
    let start = Instant::now();
    let r2 = solve_traced(&multi.instance, &config, &out.join("ex1_multi_trace.csv"))?;
    let s2 = summarize(&r2, start.elapsed().as_secs_f64());

    for (name, r) in [("single", &r1), ("multi", &r2)] {
        println!(
            "{name}: {} objective {:.3e} after {} iterations",
            r.status,
            r.final_objective(),
            r.iterations()
        );
    }
    write_json(
        &out.join("ex1_summary.json"),
        &Ex1Summary {
            single: s1,
            multi: s2,
            pairs: args.pairs,
        },
    )?;
    Ok(completion([r1.status, r2.status]))
}

#[derive(Debug, Serialize)]
struct Ex2Run {
    run: u64,
    seed: u64,
    status: Status,
    iterations: usize,
    final_objective: f64,
    budget_used: u64,
    normalized_diff: f64,
}

#[derive(Debug, Serialize)]
struct Ex2Summary {
    runs: Vec<Ex2Run>,
    max_normalized_diff: f64,
}

fn run_file(out: &Path, run: u64) -> PathBuf {
    out.join(format!("ex2_trace_run{run:02}.csv"))
}

pub fn repro_ex2(args: &ReproEx2Args) -> Result<Completion> {
    let base = args.common.seed;
    let out = &args.common.out;
    let config = args.common.solver.config(RECONSTRUCTION_SOLVER, base);
    prepare_out(out)?;
    let circuit = build_example2_circuit();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs as usize)
        .build()?;
    let results: Vec<Result<(Ex2Run, ReconstructionReport)>> = pool.install(|| {
        (0..args.runs)
            .into_par_iter()
            .map(|run| {
                let seed = base.wrapping_add(run);
                let (report, diff) =
                    reconstruct_once(&circuit, &example2_probe_state(seed), &config)
                        .with_context(|| format!("run {run} (seed {seed})"))?;
                let row = Ex2Run {
                    run,
                    seed,
                    status: report.solver_status,
                    iterations: report.trace.records.len() - 1,
                    final_objective: report.trace.last().map_or(f64::NAN, |r| r.objective),
                    budget_used: report.budget_used,
                    normalized_diff: diff,
                };
                Ok((row, report))
            })
            .collect()
    });

    let mut rows = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        let (row, report) = r?;
        if k == 0 {
            write_trace(&run_file(out, row.run), &report.trace)?;
        }
        rows.push(row);
    }

    let mut hist = String::from("run,seed,normalized_diff\n");
    for r in &rows {
        hist.push_str(&format!("{},{},{:e}\n", r.run, r.seed, r.normalized_diff));
    }
    fs::write(out.join("ex2_normalized_diff.csv"), hist)?;

    let max_normalized_diff = rows.iter().map(|r| r.normalized_diff).fold(0.0, f64::max);
    println!(
        "{} runs, max normalized_diff {max_normalized_diff:.3e}",
        rows.len()
    );
    let statuses: Vec<Status> = rows.iter().map(|r| r.status).collect();
    write_json(
        &out.join("ex2_summary.json"),
        &Ex2Summary {
            runs: rows,
            max_normalized_diff,
        },
    )?;
    Ok(completion(statuses))
}
