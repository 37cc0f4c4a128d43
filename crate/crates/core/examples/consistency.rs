//! The consistency term sum_e int_e (grad u . n) [w] ds for the sine solution.
//!
//! Against a single Crouzeix-Raviart basis function it shrinks like h^2: the
//! zero-mean jump lets the normal flux be replaced by its deviation from the
//! edge mean. Its dual norm over the whole discrete space shrinks like h,
//! which is the rate that limits the energy error.

use nc1c2::analysis::{consistency_dual_norm, consistency_gap, interior_edge_basis};
use nc1c2::mesh::generate_structured;
use nc1c2::problems::Problem;
use nc1c2::space::{build_dofmap, ElementKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let problem = Problem::sine();
    println!("{:>4} {:>14} {:>14} {:>14}", "n", "max basis gap", "dual (cr)", "dual (nc1c2)");
    let mut previous: Option<(f64, f64)> = None;
    for n in [4, 8, 16, 32] {
        let mesh = generate_structured(n)?;
        let cr = build_dofmap(&mesh, ElementKind::Cr);
        let nc = build_dofmap(&mesh, ElementKind::Nc1c2);
        let gap = consistency_gap(&mesh, problem.gradient, &interior_edge_basis(&mesh, &cr))?;
        let dual_cr = consistency_dual_norm(&mesh, &cr, problem.gradient, 1e-12)?;
        let dual_nc = consistency_dual_norm(&mesh, &nc, problem.gradient, 1e-12)?;
        println!("{n:>4} {gap:>14.4e} {dual_cr:>14.4e} {dual_nc:>14.4e}");
        if let Some((g, d)) = previous {
            println!("     ratios {:>7.2} {:>14.2}", g / gap, d / dual_cr);
        }
        previous = Some((gap, dual_cr));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
