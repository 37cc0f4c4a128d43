//! Interpolation errors of the two-step operator for the sine solution.
//!
//! The element-local interpolant reproduces P2 on every triangle and
//! converges at third order in L2 and second order in the broken H1 norm.
//! The global NC1-C2 function has one coefficient per vertex, taken from the
//! owner triangle; adjacent triangles disagree on that coefficient by O(h),
//! which costs one order in both norms.

use nc1c2::analysis::{h1_broken_error, interpolate, l2_error, DEFAULT_ERROR_QUAD_DEGREE};
use nc1c2::mesh::generate_structured;
use nc1c2::problems::Problem;
use nc1c2::space::{build_dofmap, ElementKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let problem = Problem::sine();
    let q = DEFAULT_ERROR_QUAD_DEGREE;
    println!("{:>4} {:>12} {:>12} {:>12} {:>12} {:>12}", "n", "local L2", "local H1", "global L2", "global H1", "vertex gap");
    let mut previous: Option<[f64; 4]> = None;
    for n in [4, 8, 16, 32] {
        let mesh = generate_structured(n)?;
        let dofmap = build_dofmap(&mesh, ElementKind::Nc1c2);
        let result = interpolate(&mesh, &dofmap, problem.exact)?;
        let errors = [
            l2_error(&mesh, &result.local, problem.exact, q)?,
            h1_broken_error(&mesh, &result.local, problem.gradient, q)?,
            l2_error(&mesh, &result.function, problem.exact, q)?,
            h1_broken_error(&mesh, &result.function, problem.gradient, q)?,
        ];
        println!(
            "{n:>4} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            errors[0], errors[1], errors[2], errors[3], result.max_vertex_discrepancy
        );
        if let Some(prev) = previous {
            let r: Vec<String> = prev.iter().zip(&errors).map(|(a, b)| format!("{:.2}", a / b)).collect();
            println!("     ratios {}", r.join("  "));
        }
        previous = Some(errors);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
