//! Manufactured-solution solves and convergence studies with EOC tables.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use crate::analysis::{h1_broken_error, l2_error, DEFAULT_ERROR_QUAD_DEGREE};
use crate::assembly::{
    assemble_load, assemble_stiffness_with, boundary_values, BcMode, LinearSystem, DEFAULT_LOAD_QUAD_DEGREE,
};
use crate::error::{FemError, Result};
use crate::mesh::{generate_structured, Mesh};
use crate::problems::Problem;
use crate::solver::{cg_solve_with, default_max_iter, CgSolution, DEFAULT_TOL};
use crate::space::{build_dofmap, DiscreteFunction, DofMap, ElementKind};
use crate::ExecutionMode;

pub const CSV_HEADER: [&str; 10] =
    ["level", "n", "h", "ndofs", "l2_error", "h1_error", "l2_eoc", "h1_eoc", "cg_iters", "wall_time_s"];

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub problem: Problem,
    pub kind: ElementKind,
    pub n0: usize,
    pub levels: usize,
    pub bc_mode: BcMode,
    pub tol: f64,
    pub load_quad_degree: usize,
    pub mode: ExecutionMode,
}

impl StudyConfig {
    /// Defaults: `n0 = 8`, 4 levels, elimination, `tol = 1e-10`, degree-6
    /// load quadrature, sequential execution.
    pub fn new(problem: Problem, kind: ElementKind) -> Self {
        Self {
            problem,
            kind,
            n0: 8,
            levels: 4,
            bc_mode: BcMode::Eliminate,
            tol: DEFAULT_TOL,
            load_quad_degree: DEFAULT_LOAD_QUAD_DEGREE,
            mode: ExecutionMode::Sequential,
        }
    }
}

/// Assembled and solved problem on one mesh.
#[derive(Debug, Clone)]
pub struct Solved {
    pub mesh: Mesh,
    pub dofmap: DofMap,
    pub system: LinearSystem,
    pub cg: CgSolution,
}

impl Solved {
    pub fn function(&self) -> DiscreteFunction<'_> {
        DiscreteFunction { dofmap: &self.dofmap, coefficients: self.cg.x.clone() }
    }

    pub fn l2_error(&self, problem: &Problem) -> Result<f64> {
        l2_error(&self.mesh, &self.function(), problem.exact, DEFAULT_ERROR_QUAD_DEGREE)
    }

    pub fn h1_error(&self, problem: &Problem) -> Result<f64> {
        h1_broken_error(&self.mesh, &self.function(), problem.gradient, DEFAULT_ERROR_QUAD_DEGREE)
    }
}

/// Assembles the linear system for `problem` on the `n x n` mesh.
pub fn build_system(
    problem: &Problem,
    kind: ElementKind,
    n: usize,
    bc_mode: BcMode,
    load_quad_degree: usize,
    mode: ExecutionMode,
) -> Result<(Mesh, DofMap, LinearSystem)> {
    let mesh = generate_structured(n)?;
    let dofmap = build_dofmap(&mesh, kind);
    let matrix = assemble_stiffness_with(&mesh, &dofmap, mode)?;
    let load = assemble_load(&mesh, &dofmap, problem.source, load_quad_degree)?;
    let data = if problem.homogeneous {
        boundary_values(&mesh, &dofmap, None::<fn(&nalgebra::Point2<f64>) -> f64>)
    } else {
        boundary_values(&mesh, &dofmap, Some(problem.exact))
    };
    let system = LinearSystem::new(matrix, load)?.apply_dirichlet(bc_mode, &data)?;
    Ok((mesh, dofmap, system))
}

pub fn solve_problem(problem: &Problem, kind: ElementKind, n: usize, bc_mode: BcMode, tol: f64, load_quad_degree: usize, mode: ExecutionMode) -> Result<Solved> {
    let (mesh, dofmap, system) = build_system(problem, kind, n, bc_mode, load_quad_degree, mode)?;
    let cg = cg_solve_with(&system, tol, default_max_iter(system.dim()), mode)?;
    Ok(Solved { mesh, dofmap, system, cg })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub level: usize,
    pub n: usize,
    pub h: f64,
    pub n_dofs: usize,
    pub l2_error: f64,
    pub h1_error: f64,
    pub l2_eoc: Option<f64>,
    pub h1_eoc: Option<f64>,
    pub cg_iters: usize,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
}

/// A study that stopped early; `partial` holds the completed levels.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyFailure {
    pub partial: ConvergenceReport,
    pub error: FemError,
}

impl std::fmt::Display for StudyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "study aborted after {} level(s): {}", self.partial.rows.len(), self.error)
    }
}

impl std::error::Error for StudyFailure {}

/// Experimental order of convergence `log2(e_coarse / e_fine)` for a
/// halved mesh size; `None` unless both errors are positive and finite.
pub fn eoc(e_coarse: f64, e_fine: f64) -> Option<f64> {
    (e_coarse > 0.0 && e_fine > 0.0 && e_coarse.is_finite() && e_fine.is_finite()).then(|| (e_coarse / e_fine).log2())
}

/// Solves on meshes `n0 * 2^level` for `level in 0..levels`.
pub fn run_study(config: &StudyConfig) -> std::result::Result<ConvergenceReport, StudyFailure> {
    let mut report = ConvergenceReport::default();
    let fail = |report: ConvergenceReport, error| StudyFailure { partial: report, error };
    if config.levels < 2 || config.n0 < 2 {
        return Err(fail(report, FemError::InvalidArgument("a study needs levels >= 2 and n0 >= 2".into())));
    }
    for level in 0..config.levels {
        let n = config.n0 << level;
        let start = Instant::now();
        let solved = match solve_problem(&config.problem, config.kind, n, config.bc_mode, config.tol, config.load_quad_degree, config.mode) {
            Ok(s) => s,
            Err(e) => return Err(fail(report, e)),
        };
        let errors = solved.l2_error(&config.problem).and_then(|l2| Ok((l2, solved.h1_error(&config.problem)?)));
        let (l2, h1) = match errors {
            Ok(v) => v,
            Err(e) => return Err(fail(report, e)),
        };
        let wall_time = start.elapsed().as_secs_f64();
        let previous = report.rows.last();
        report.rows.push(ReportRow {
            level,
            n,
            h: solved.mesh.h_max,
            n_dofs: solved.dofmap.n_dofs,
            l2_error: l2,
            h1_error: h1,
            l2_eoc: previous.and_then(|p| eoc(p.l2_error, l2)),
            h1_eoc: previous.and_then(|p| eoc(p.h1_error, h1)),
            cg_iters: solved.cg.iterations,
            wall_time,
        });
    }
    Ok(report)
}

fn optional(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ConvergenceReport {
    pub fn last(&self) -> Option<&ReportRow> {
        self.rows.last()
    }

    /// CSV with header [`CSV_HEADER`]; floats in shortest round-trip form,
    /// missing EOC cells left empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.level.to_string(),
                r.n.to_string(),
                r.h.to_string(),
                r.n_dofs.to_string(),
                r.l2_error.to_string(),
                r.h1_error.to_string(),
                optional(r.l2_eoc),
                optional(r.h1_eoc),
                r.cg_iters.to_string(),
                r.wall_time.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(input);
        let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
        if header != CSV_HEADER {
            return Err(FemError::Io(format!("unexpected CSV header {header:?}")));
        }
        let bad = |what: &str, s: &str| FemError::Io(format!("cannot parse {what} '{s}'"));
        let int = |s: &str, what: &str| s.parse::<usize>().map_err(|_| bad(what, s));
        let float = |s: &str, what: &str| s.parse::<f64>().map_err(|_| bad(what, s));
        let opt = |s: &str, what: &str| if s.is_empty() { Ok(None) } else { float(s, what).map(Some) };
        let mut rows = Vec::new();
        for record in reader.records() {
            let r = record?;
            if r.len() != CSV_HEADER.len() {
                return Err(FemError::Io(format!("expected {} fields, found {}", CSV_HEADER.len(), r.len())));
            }
            rows.push(ReportRow {
                level: int(&r[0], "level")?,
                n: int(&r[1], "n")?,
                h: float(&r[2], "h")?,
                n_dofs: int(&r[3], "ndofs")?,
                l2_error: float(&r[4], "l2_error")?,
                h1_error: float(&r[5], "h1_error")?,
                l2_eoc: opt(&r[6], "l2_eoc")?,
                h1_eoc: opt(&r[7], "h1_eoc")?,
                cg_iters: int(&r[8], "cg_iters")?,
                wall_time: float(&r[9], "wall_time_s")?,
            });
        }
        Ok(Self { rows })
    }

    pub fn emit_csv(&self, path: &Path) -> Result<()> {
        if self.rows.is_empty() {
            return Err(FemError::InvalidArgument("refusing to write an empty report".into()));
        }
        self.write_csv(File::create(path)?)
    }

    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "{:>5} {:>5} {:>10} {:>8} {:>12} {:>12} {:>7} {:>7} {:>6}\n",
            "level", "n", "h", "ndofs", "L2 error", "H1 error", "L2 eoc", "H1 eoc", "cg"
        );
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
        for r in &self.rows {
            s.push_str(&format!(
                "{:>5} {:>5} {:>10.3e} {:>8} {:>12.4e} {:>12.4e} {:>7} {:>7} {:>6}\n",
                r.level,
                r.n,
                r.h,
                r.n_dofs,
                r.l2_error,
                r.h1_error,
                cell(r.l2_eoc),
                cell(r.h1_eoc),
                r.cg_iters
            ));
        }
        s
    }
}
