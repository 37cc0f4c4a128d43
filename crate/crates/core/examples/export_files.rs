//! Writes every file format the crate produces into a temporary directory:
//! convergence CSV, Matrix Market stiffness matrix, mesh and solution text.
//! The CSV is read back to show that it round-trips exactly.

use std::fs::{self, File};
use std::io::BufWriter;

use nc1c2::assembly::{BcMode, DEFAULT_LOAD_QUAD_DEGREE};
use nc1c2::problems::Problem;
use nc1c2::solver::DEFAULT_TOL;
use nc1c2::space::ElementKind;
use nc1c2::study::{run_study, solve_problem, ConvergenceReport, StudyConfig};
use nc1c2::ExecutionMode;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("nc1c2-export-{}", std::process::id()));
    fs::create_dir_all(&dir)?;

    let report = run_study(&StudyConfig { levels: 3, ..StudyConfig::new(Problem::sine(), ElementKind::Nc1c2) })?;
    let csv = dir.join("study.csv");
    report.emit_csv(&csv)?;
    let back = ConvergenceReport::read_csv(File::open(&csv)?)?;
    println!("{} ({} rows, round trip exact: {})", csv.display(), back.rows.len(), back == report);

    let solved = solve_problem(
        &Problem::sine(),
        ElementKind::Nc1c2,
        4,
        BcMode::Eliminate,
        DEFAULT_TOL,
        DEFAULT_LOAD_QUAD_DEGREE,
        ExecutionMode::Sequential,
    )?;
    let mtx = dir.join("stiffness.mtx");
    solved.system.matrix.write_matrix_market(BufWriter::new(File::create(&mtx)?))?;
    let mesh = dir.join("mesh.txt");
    solved.mesh.write_text(BufWriter::new(File::create(&mesh)?))?;
    let solution = dir.join("solution.txt");
    solved.function().write_text(BufWriter::new(File::create(&solution)?))?;

    for path in [&mtx, &mesh, &solution] {
        let text = fs::read_to_string(path)?;
        println!("{} ({} lines), first lines:", path.display(), text.lines().count());
        for line in text.lines().take(3) {
            println!("    {line}");
        }
    }
    fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
