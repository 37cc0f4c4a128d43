//! Assemble and solve -Laplace(u) = 2 pi^2 sin(pi x) sin(pi y) with zero
//! boundary values on a 16 x 16 mesh, step by step.

use nc1c2::analysis::{error_report, DEFAULT_ERROR_QUAD_DEGREE};
use nc1c2::assembly::{assemble_load, assemble_stiffness, boundary_values, BcMode, LinearSystem};
use nc1c2::mesh::generate_structured;
use nc1c2::problems::Problem;
use nc1c2::solver::{cg_solve, default_max_iter, galerkin_residual_check, DEFAULT_TOL};
use nc1c2::space::{build_dofmap, DiscreteFunction, ElementKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let problem = Problem::sine();
    let mesh = generate_structured(16)?;
    let dofmap = build_dofmap(&mesh, ElementKind::Nc1c2);
    println!(
        "mesh: {} vertices, {} triangles, {} edges, h = {:.4}",
        mesh.n_vertices(),
        mesh.n_triangles(),
        mesh.n_edges(),
        mesh.h_max
    );
    println!("nc1c2 dofs: {} ({} on the boundary)", dofmap.n_dofs, dofmap.boundary_dofs.len());

    let matrix = assemble_stiffness(&mesh, &dofmap)?;
    println!("stiffness: {} nonzeros, symmetric: {}", matrix.nnz(), matrix.is_exactly_symmetric());
    let load = assemble_load(&mesh, &dofmap, problem.source, 6)?;
    let data = boundary_values(&mesh, &dofmap, None::<fn(&nalgebra::Point2<f64>) -> f64>);
    let system = LinearSystem::new(matrix, load)?.apply_dirichlet(BcMode::Eliminate, &data)?;
    system.matrix.cholesky_check()?;
    println!("constrained matrix passes the Cholesky check");

    let solution = cg_solve(&system, DEFAULT_TOL, default_max_iter(system.dim()))?;
    println!(
        "cg: {} iterations, scaled residual {:.2e}, max Galerkin residual {:.2e}",
        solution.iterations,
        solution.relative_residual,
        galerkin_residual_check(&system, &solution.x)
    );

    let uh = DiscreteFunction::new(&dofmap, solution.x)?;
    let report = error_report(&mesh, &uh, problem.exact, problem.gradient)?;
    println!("errors (degree-{DEFAULT_ERROR_QUAD_DEGREE} quadrature):");
    println!("  L2        {:.4e}", report.l2);
    println!("  broken H1 {:.4e}", report.h1_broken);
    println!("  max |int_e [u_h] ds| {:.2e}", report.max_edge_jump_integral);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
