//! Command-line front end for the common fixed point solver.
//!
//! Exit codes: 0 success (run converged / verification passed), 1 problem
//! or configuration errors, 2 budget exhausted or verification gap above
//! tolerance, 3 oracle unavailable for the given operator family.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use parfix::oracle::{self, OracleConfig};
use parfix::schemes::SnapshotPolicy;
use parfix::{Error, Problem, RunConfig, RunResult, Vector};

#[derive(Parser)]
#[command(
    name = "parfix",
    version,
    about = "Common fixed point solver: greedy parallel selection with Halpern and Picard drivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file; write an iteration trace and a result summary
    Run(RunArgs),
    /// Solve a problem file and check its limit against the Dykstra oracle
    Verify(VerifyArgs),
    /// Report each schedule condition required by the file's scheme
    ScheduleCheck {
        /// Path to the problem file
        problem: PathBuf,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the problem file
    problem: PathBuf,
    /// Override the file's iteration budget
    #[arg(long)]
    max_iters: Option<usize>,
    /// Override the file's residual stopping tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Override the file's trace row stride
    #[arg(long)]
    trace_every: Option<usize>,
    /// Trace output path (default: <problem stem>.trace.csv)
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Summary output path (default: <problem stem>.summary.toml)
    #[arg(long)]
    summary_out: Option<PathBuf>,
    /// Worker threads for the per-iteration operator evaluations
    /// (default: one per processor; results are identical for any count)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Acceptable gap to the oracle target (anchored schemes) or to the
    /// common fixed point set (picard)
    #[arg(long, default_value_t = 1e-3)]
    verify_tol: f64,
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::OracleUnavailable(_) | Error::PossiblyEmptyIntersection { .. } => 3,
        _ => 1,
    }
}

fn dispatch() -> Result<ExitCode, Error> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::ScheduleCheck { problem } => cmd_schedule_check(&problem),
    }
}

fn install_thread_pool(threads: Option<usize>) {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .expect("thread pool is configured once, before any solve");
    }
}

fn load(path: &Path) -> Result<Problem, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Problem {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    Problem::from_toml_str(&text)
}

fn configure(problem: &Problem, args: &CommonArgs) -> RunConfig {
    let mut config = problem.run_config();
    if let Some(n) = args.max_iters {
        config.max_iters = n;
    }
    if let Some(t) = args.tol {
        config.residual_tol = t;
    }
    if let Some(k) = args.trace_every {
        config.trace_every = k;
    }
    config
}

fn out_path(args: &CommonArgs, explicit: &Option<PathBuf>, suffix: &str) -> PathBuf {
    explicit.clone().unwrap_or_else(|| {
        let stem = args
            .problem
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "problem".into());
        PathBuf::from(format!("{stem}.{suffix}"))
    })
}

fn write_outputs(problem: &Problem, result: &RunResult, args: &CommonArgs) -> Result<(), Error> {
    let trace_path = out_path(args, &args.trace_out, "trace.csv");
    let summary_path = out_path(args, &args.summary_out, "summary.toml");
    let write = |path: &Path, contents: String| {
        std::fs::write(path, contents).map_err(|e| Error::Problem {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    };
    write(&trace_path, output::trace_csv(&result.trace))?;
    write(
        &summary_path,
        output::summary_toml(problem.scheme.name(), result),
    )?;
    println!(
        "trace: {} ({} rows)",
        trace_path.display(),
        result.trace.rows.len()
    );
    println!("summary: {}", summary_path.display());
    Ok(())
}

fn describe(problem: &Problem, result: &RunResult) {
    println!(
        "scheme: {} ({} operators, dim {})",
        problem.scheme.name(),
        problem.operators.len(),
        problem.dim
    );
    println!(
        "stop: {} after {} iterations (residual {})",
        result.stop_reason.name(),
        result.iterations_used,
        output::float17(result.final_residual)
    );
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, Error> {
    install_thread_pool(args.common.threads);
    let problem = load(&args.common.problem)?;
    let config = configure(&problem, &args.common);
    let result = problem.solve_with(&config)?;
    describe(&problem, &result);
    write_outputs(&problem, &result, &args.common)?;
    Ok(if result.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    install_thread_pool(args.common.threads);
    let problem = load(&args.common.problem)?;
    let mut config = configure(&problem, &args.common);

    // the family's fixed point sets, plus the outer domain for the
    // projected scheme (its fixed points live inside the domain)
    let mut sets = oracle::family_fixed_point_sets(&problem.operators)?;
    if let Some(domain) = &problem.domain {
        sets.push(domain.clone());
    }
    let oracle_cfg = OracleConfig::default();

    let passed = if problem.scheme.is_anchored() {
        let anchor = problem
            .anchor
            .clone()
            .expect("validated: anchored schemes carry an anchor");
        let target = oracle::project_intersection(&sets, &anchor, &oracle_cfg)?;
        config.reference = Some(target.clone());
        let result = problem.solve_with(&config)?;
        describe(&problem, &result);
        write_outputs(&problem, &result, &args.common)?;

        let gap = result.final_iterate.distance(&target)?;
        println!("oracle target: {}", render_vector(&target));
        println!(
            "gap |final - P_F(u)| = {} (tolerance {})",
            output::float17(gap),
            output::float17(args.verify_tol)
        );
        gap <= args.verify_tol
    } else {
        // picard: certify membership of the limit and report how far the
        // oracle shadow moves over the sampled trajectory
        config.snapshot_policy = SnapshotPolicy::EveryK((config.max_iters / 16).max(1));
        let result = problem.solve_with(&config)?;
        describe(&problem, &result);
        write_outputs(&problem, &result, &args.common)?;

        let shadow = oracle::project_intersection(&sets, &result.final_iterate, &oracle_cfg)?;
        let certificate = result.final_iterate.distance(&shadow)?;
        println!(
            "membership certificate |final - P_F(final)| = {} (tolerance {})",
            output::float17(certificate),
            output::float17(args.verify_tol)
        );
        let mut shadows = Vec::new();
        for (n, iterate) in &result.trace.snapshots {
            shadows.push((*n, oracle::project_intersection(&sets, iterate, &oracle_cfg)?));
        }
        if shadows.len() >= 2 {
            let drift = shadows
                .windows(2)
                .map(|w| w[0].1.distance(&w[1].1).unwrap_or(f64::INFINITY))
                .fold(0.0f64, f64::max);
            println!(
                "shadow stabilization: max step of P_F(x_n) over {} samples = {} (diagnostic)",
                shadows.len(),
                output::float17(drift)
            );
        }
        certificate <= args.verify_tol
    };

    println!("verify: {}", if passed { "PASS" } else { "FAIL" });
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_schedule_check(path: &Path) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Problem {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    // lenient parse: the point is to report on schedules a full load rejects
    let problem = Problem::parse_unvalidated(&text)?;
    let report = parfix::validate_schedule(&problem.schedule, problem.scheme);
    println!("scheme: {}", problem.scheme.name());
    for entry in &report.entries {
        let verdict = match (entry.required, entry.satisfied) {
            (true, true) => "pass",
            (true, false) => "FAIL",
            (false, _) => "not required",
        };
        println!(
            "{:<22} {:<14} {}",
            entry.condition.name(),
            verdict,
            entry.detail
        );
    }
    if report.passes() {
        println!("schedule: valid for {}", problem.scheme.name());
        Ok(ExitCode::SUCCESS)
    } else {
        println!(
            "schedule: INVALID for {} ({} condition(s) failed)",
            problem.scheme.name(),
            report.failures().len()
        );
        Ok(ExitCode::from(1))
    }
}

fn render_vector(v: &Vector) -> String {
    let coords: Vec<String> = v.coords().iter().map(|&c| output::float17(c)).collect();
    format!("[{}]", coords.join(", "))
}
