//! Jumps of NC1-C2 functions across interior edges: zero at the midpoint,
//! zero mean, and identically zero for the quadratic vertex part. Also
//! reports the per-edge ratio |e| ||[f]||^2 / sum h_K^2 |f|^2_H1(K) and its
//! exact supremum.

use nc1c2::analysis::{edge_ratio_supremum, jump_diagnostics};
use nc1c2::mesh::generate_structured;
use nc1c2::space::{build_dofmap, edge_jump, DiscreteFunction, DofEntity, ElementKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = generate_structured(8)?;
    let dofmap = build_dofmap(&mesh, ElementKind::Nc1c2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coefficients: Vec<f64> = (0..dofmap.n_dofs).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let f = DiscreteFunction::new(&dofmap, coefficients.clone())?;

    let interior: Vec<usize> = (0..mesh.n_edges()).filter(|&e| !mesh.edges[e].boundary).collect();
    let midpoint = interior.iter().map(|&e| edge_jump(&mesh, &f, e, 0.5).abs()).fold(0.0, f64::max);
    let quarter = interior.iter().map(|&e| edge_jump(&mesh, &f, e, 0.25).abs()).fold(0.0, f64::max);
    let reports = jump_diagnostics(&mesh, &f)?;
    let mean = reports.iter().map(|r| r.integral.abs()).fold(0.0, f64::max);
    println!("{} interior edges", interior.len());
    println!("max |[f](midpoint)|    = {midpoint:e}");
    println!("max |[f](t = 1/4)|     = {quarter:e}");
    println!("max |int_e [f] ds|     = {mean:e}");

    let mut vertex_part = DiscreteFunction::zeros(&dofmap);
    for (d, c) in coefficients.iter().enumerate() {
        if matches!(dofmap.entity(d), DofEntity::Vertex(_)) {
            vertex_part.coefficients[d] = *c;
        }
    }
    let vertex_jump = interior
        .iter()
        .flat_map(|&e| (0..20).map(move |i| (e, i as f64 / 19.0)))
        .map(|(e, t)| edge_jump(&mesh, &vertex_part, e, t).abs())
        .fold(0.0, f64::max);
    println!("max jump of the vertex part over 20 points/edge = {vertex_jump:e}");

    let sampled = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let supremum = interior.iter().map(|&e| edge_ratio_supremum(&mesh, &dofmap, e)).collect::<Result<Vec<_>, _>>()?;
    let supremum = supremum.into_iter().fold(0.0, f64::max);
    println!("edge ratio: sampled max {sampled:.4}, supremum over the space {supremum:.4}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
