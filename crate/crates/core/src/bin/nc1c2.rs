//! Command-line driver: convergence studies and single solves.
//!
//! Exit codes: 0 on success, 1 on solver or I/O failure, 2 on invalid flags.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};

use nc1c2::assembly::{BcMode, DEFAULT_LOAD_QUAD_DEGREE, DEFAULT_PENALTY_EPS};
use nc1c2::problems::Problem;
use nc1c2::solver::DEFAULT_TOL;
use nc1c2::space::ElementKind;
use nc1c2::study::{run_study, solve_problem, StudyConfig};
use nc1c2::{ExecutionMode, FemError};

#[derive(Parser)]
#[command(name = "nc1c2", version, about = "NC1-C2 / Crouzeix-Raviart / P2 Poisson solver and convergence studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence study over n0, 2 n0, 4 n0, ...
    Study(StudyArgs),
    /// Solve once and report errors.
    Solve(SolveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Sine,
    Patch,
    Quad,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Sine => Problem::sine(),
            ProblemArg::Patch => Problem::patch(),
            ProblemArg::Quad => Problem::quadratic(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ElementArg {
    Nc1c2,
    Cr,
    P2,
}

impl From<ElementArg> for ElementKind {
    fn from(e: ElementArg) -> Self {
        match e {
            ElementArg::Nc1c2 => ElementKind::Nc1c2,
            ElementArg::Cr => ElementKind::Cr,
            ElementArg::P2 => ElementKind::P2c,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BcArg {
    Eliminate,
    Penalty,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "sine")]
    problem: ProblemArg,
    #[arg(long, value_enum, default_value = "nc1c2")]
    element: ElementArg,
    #[arg(long, value_enum, default_value = "eliminate")]
    bc: BcArg,
    #[arg(long, default_value_t = DEFAULT_PENALTY_EPS)]
    penalty_eps: f64,
    /// Quadrature degree for the load vector (2..=6).
    #[arg(long, default_value_t = DEFAULT_LOAD_QUAD_DEGREE, value_parser = clap::value_parser!(u8).range(2..=6).map(usize::from))]
    quad_degree: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Single-threaded, bit-reproducible run (pass `--deterministic=false` to parallelize).
    #[arg(long, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
    deterministic: bool,
}

impl Common {
    fn bc_mode(&self) -> BcMode {
        match self.bc {
            BcArg::Eliminate => BcMode::Eliminate,
            BcArg::Penalty => BcMode::Penalty(self.penalty_eps),
        }
    }

    fn mode(&self) -> ExecutionMode {
        if self.deterministic {
            ExecutionMode::Sequential
        } else {
            ExecutionMode::Parallel
        }
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.tol > 0.0) {
            return Err(format!("--tol must be positive, got {}", self.tol));
        }
        if matches!(self.bc, BcArg::Penalty) && !(self.penalty_eps > 0.0) {
            return Err(format!("--penalty-eps must be positive, got {}", self.penalty_eps));
        }
        Ok(())
    }
}

#[derive(Args)]
struct StudyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(2..).map(|v| v as usize))]
    n0: usize,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(2..=12).map(|v| v as usize))]
    levels: usize,
    /// Write the report as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..).map(|v| v as usize))]
    n: usize,
    /// Write `dof value` lines.
    #[arg(long)]
    dump_solution: Option<PathBuf>,
    /// Write the system matrix in Matrix Market format.
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
    /// Write the mesh as `v x y` / `t i j k` lines.
    #[arg(long)]
    dump_mesh: Option<PathBuf>,
}

fn run_study_command(args: StudyArgs) -> Result<(), FemError> {
    let c = &args.common;
    let config = StudyConfig {
        problem: c.problem.into(),
        kind: c.element.into(),
        n0: args.n0,
        levels: args.levels,
        bc_mode: c.bc_mode(),
        tol: c.tol,
        load_quad_degree: c.quad_degree,
        mode: c.mode(),
    };
    let report = match run_study(&config) {
        Ok(r) => r,
        Err(failure) => {
            if !failure.partial.rows.is_empty() {
                print!("{}", failure.partial.to_table());
                if let Some(path) = &args.out {
                    failure.partial.emit_csv(path)?;
                }
            }
            return Err(failure.error);
        }
    };
    print!("{}", report.to_table());
    if let Some(path) = &args.out {
        report.emit_csv(path)?;
    }
    Ok(())
}

fn run_solve_command(args: SolveArgs) -> Result<(), FemError> {
    let c = &args.common;
    let problem: Problem = c.problem.into();
    let solved = solve_problem(&problem, c.element.into(), args.n, c.bc_mode(), c.tol, c.quad_degree, c.mode())?;
    println!("problem   {}", problem.name);
    println!("element   {}", solved.dofmap.kind);
    println!("n         {}", args.n);
    println!("h         {:e}", solved.mesh.h_max);
    println!("ndofs     {}", solved.dofmap.n_dofs);
    println!("cg iters  {}", solved.cg.iterations);
    println!("residual  {:e}", solved.cg.relative_residual);
    println!("L2 error  {:e}", solved.l2_error(&problem)?);
    println!("H1 error  {:e}", solved.h1_error(&problem)?);
    if let Some(path) = &args.dump_solution {
        solved.function().write_text(BufWriter::new(File::create(path)?))?;
    }
    if let Some(path) = &args.dump_matrix {
        solved.system.matrix.write_matrix_market(BufWriter::new(File::create(path)?))?;
    }
    if let Some(path) = &args.dump_mesh {
        solved.mesh.write_text(BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let validation = match &cli.command {
        Command::Study(args) => args.common.validate(),
        Command::Solve(args) => args.common.validate(),
    };
    if let Err(msg) = validation {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Study(args) => run_study_command(args),
        Command::Solve(args) => run_solve_command(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(FemError::InvalidArgument(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
