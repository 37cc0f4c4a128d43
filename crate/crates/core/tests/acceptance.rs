//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the report is always printed; exits nonzero if any
//! criterion fails.

use std::time::Instant;

use nalgebra::{Point2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nc1c2::analysis::{
    edge_ratio_supremum, h1_broken_error, interpolate, jump_diagnostics, l2_error, DEFAULT_ERROR_QUAD_DEGREE,
};
use nc1c2::assembly::{assemble_stiffness, BcMode, DEFAULT_LOAD_QUAD_DEGREE};
use nc1c2::mesh::generate_structured;
use nc1c2::problems::Problem;
use nc1c2::reference::{functionals, unisolvence_certificate, NC1C2_BASIS};
use nc1c2::space::{build_dofmap, edge_jump, DiscreteFunction, DofEntity, ElementKind};
use nc1c2::study::{build_system, run_study, ConvergenceReport, StudyConfig};
use nc1c2::ExecutionMode;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn in_band(x: Option<f64>, lo: f64, hi: f64) -> bool {
    x.is_some_and(|v| (lo..=hi).contains(&v))
}

fn sine_study(kind: ElementKind) -> ConvergenceReport {
    run_study(&StudyConfig::new(Problem::sine(), kind)).expect("study")
}

fn final_eocs(r: &ConvergenceReport) -> (Option<f64>, Option<f64>) {
    let last = r.last().expect("rows");
    (last.l2_eoc, last.h1_eoc)
}

fn fmt_eoc(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into())
}

fn criterion_1(nc: &ConvergenceReport, seconds: f64) -> Outcome {
    let (l2, h1) = final_eocs(nc);
    outcome(
        in_band(l2, 1.9, 2.1) && in_band(h1, 0.9, 1.1) && seconds < 60.0,
        format!("nc1c2 sine: l2_eoc {} h1_eoc {}, {seconds:.2} s", fmt_eoc(l2), fmt_eoc(h1)),
    )
}

fn criterion_2(nc: &ConvergenceReport, cr: &ConvergenceReport) -> Outcome {
    let (l2, h1) = final_eocs(cr);
    let worst_factor = nc
        .rows
        .iter()
        .zip(&cr.rows)
        .map(|(a, b)| (a.l2_error / b.l2_error).max(b.l2_error / a.l2_error))
        .fold(1.0, f64::max);
    outcome(
        in_band(l2, 1.9, 2.1) && in_band(h1, 0.9, 1.1) && worst_factor <= 4.0,
        format!("cr sine: l2_eoc {} h1_eoc {}, worst per-level L2 factor {worst_factor:.3}", fmt_eoc(l2), fmt_eoc(h1)),
    )
}

fn criterion_3(p2: &ConvergenceReport) -> Outcome {
    let (l2, h1) = final_eocs(p2);
    outcome(
        in_band(l2, 2.8, 3.2) && in_band(h1, 1.9, 2.1),
        format!("p2 sine: l2_eoc {} h1_eoc {}", fmt_eoc(l2), fmt_eoc(h1)),
    )
}

fn criterion_4() -> Outcome {
    let cert = unisolvence_certificate();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let c: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-5.0..5.0));
        let p = move |q: &Point2<f64>| c[0] + c[1] * q.x + c[2] * q.y + c[3] * q.x * q.x + c[4] * q.x * q.y + c[5] * q.y * q.y;
        let coefficients = functionals(p);
        for _ in 0..20 {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let q = if a + b > 1.0 { Point2::new(1.0 - a, 1.0 - b) } else { Point2::new(a, b) };
            let ip: f64 = NC1C2_BASIS.iter().zip(&coefficients).map(|(basis, k)| k * basis.eval(&q)).sum();
            worst = worst.max((ip - p(&q)).abs());
        }
    }
    outcome(
        cert.is_identity(1e-12) && worst <= 1e-11,
        format!("max |M - I| {:.1e}, max |I(p) - p| over 100 quadratics {worst:.1e}", cert.deviation),
    )
}

fn criterion_5() -> Outcome {
    let mesh = generate_structured(8).unwrap();
    let dofmap = build_dofmap(&mesh, ElementKind::Nc1c2);
    let interior: Vec<usize> = (0..mesh.n_edges()).filter(|&e| !mesh.edges[e].boundary).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut midpoint, mut mean, mut vertex_only): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..50 {
        let c: Vec<f64> = (0..dofmap.n_dofs).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = DiscreteFunction::new(&dofmap, c.clone()).unwrap();
        for &e in &interior {
            midpoint = midpoint.max(edge_jump(&mesh, &f, e, 0.5).abs());
        }
        for j in jump_diagnostics(&mesh, &f).unwrap() {
            mean = mean.max(j.integral.abs());
        }
        let mut v = DiscreteFunction::zeros(&dofmap);
        for (d, x) in c.iter().enumerate() {
            if matches!(dofmap.entity(d), DofEntity::Vertex(_)) {
                v.coefficients[d] = *x;
            }
        }
        for &e in &interior {
            for i in 0..20 {
                vertex_only = vertex_only.max(edge_jump(&mesh, &v, e, i as f64 / 19.0).abs());
            }
        }
    }
    outcome(
        midpoint <= 1e-12 && mean <= 1e-12 && vertex_only <= 1e-12,
        format!("{} edges x 50 functions: midpoint {midpoint:.1e}, mean {mean:.1e}, vertex part {vertex_only:.1e}", interior.len()),
    )
}

fn criterion_6() -> Outcome {
    let mesh = generate_structured(8).unwrap();
    let dofmap = build_dofmap(&mesh, ElementKind::Nc1c2);
    let a = assemble_stiffness(&mesh, &dofmap).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let v: Vec<f64> = (0..dofmap.n_dofs).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let form = a.quadratic_form(&v);
        let f = DiscreteFunction::new(&dofmap, v).unwrap();
        let seminorm = h1_broken_error(&mesh, &f, |_| Vector2::zeros(), DEFAULT_ERROR_QUAD_DEGREE).unwrap().powi(2);
        worst = worst.max((form - seminorm).abs() / seminorm);
    }
    let mut meshes = 0;
    let mut spd_failures = Vec::new();
    for kind in ElementKind::ALL {
        for n in [8, 16, 32, 64] {
            let (_, _, system) = build_system(
                &Problem::sine(),
                kind,
                n,
                BcMode::Eliminate,
                DEFAULT_LOAD_QUAD_DEGREE,
                ExecutionMode::Sequential,
            )
            .unwrap();
            meshes += 1;
            if let Err(e) = system.matrix.cholesky_check() {
                spd_failures.push(format!("{kind} n={n}: {e}"));
            }
        }
    }
    outcome(
        worst <= 1e-10 && spd_failures.is_empty(),
        format!("max relative |v'Av - |v|_h^2| {worst:.1e}; SPD on {}/{meshes} study matrices {spd_failures:?}", meshes - spd_failures.len()),
    )
}

fn criterion_7() -> Outcome {
    let problem = Problem::patch();
    let mut errors = Vec::new();
    for n in [8, 16, 32] {
        let (mesh, dofmap, system) =
            build_system(&problem, ElementKind::Nc1c2, n, BcMode::Penalty(1e-10), DEFAULT_LOAD_QUAD_DEGREE, ExecutionMode::Sequential)
                .unwrap();
        let sol = nc1c2::solver::cg_solve(&system, 1e-10, nc1c2::solver::default_max_iter(system.dim())).unwrap();
        let f = DiscreteFunction::new(&dofmap, sol.x).unwrap();
        errors.push(l2_error(&mesh, &f, problem.exact, DEFAULT_ERROR_QUAD_DEGREE).unwrap());
    }
    outcome(
        errors.iter().all(|&e| e <= 1e-6),
        format!("nc1c2 patch, penalty 1e-10, n = 8/16/32: L2 {:.1e} {:.1e} {:.1e}", errors[0], errors[1], errors[2]),
    )
}

/// Interpolation ratios n=8 -> 16 for the element-local and the
/// owner-element global interpolant: `[local L2, local H1, global L2, global H1]`.
fn interpolation_ratios() -> [f64; 4] {
    let p = Problem::sine();
    let q = DEFAULT_ERROR_QUAD_DEGREE;
    let errors = |n| {
        let mesh = generate_structured(n).unwrap();
        let dofmap = build_dofmap(&mesh, ElementKind::Nc1c2);
        let r = interpolate(&mesh, &dofmap, p.exact).unwrap();
        [
            l2_error(&mesh, &r.local, p.exact, q).unwrap(),
            h1_broken_error(&mesh, &r.local, p.gradient, q).unwrap(),
            l2_error(&mesh, &r.function, p.exact, q).unwrap(),
            h1_broken_error(&mesh, &r.function, p.gradient, q).unwrap(),
        ]
    };
    let (coarse, fine) = (errors(8), errors(16));
    std::array::from_fn(|i| coarse[i] / fine[i])
}

fn criterion_8(r: &[f64; 4]) -> Outcome {
    outcome(
        (7.0..=9.0).contains(&r[0]) && (3.5..=4.5).contains(&r[1]),
        format!("element-local interpolant, n = 8 -> 16: L2 ratio {:.3}, H1 ratio {:.3}", r[0], r[1]),
    )
}

fn criterion_9() -> Outcome {
    let mut sampled = Vec::new();
    let mut supremum = Vec::new();
    for n in [8, 16, 32] {
        let mesh = generate_structured(n).unwrap();
        let dofmap = build_dofmap(&mesh, ElementKind::Nc1c2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let c: Vec<f64> = (0..dofmap.n_dofs).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = DiscreteFunction::new(&dofmap, c).unwrap();
            worst = jump_diagnostics(&mesh, &f).unwrap().iter().map(|j| j.ratio).fold(worst, f64::max);
        }
        sampled.push(worst);
        supremum.push(
            (0..mesh.n_edges())
                .filter(|&e| !mesh.edges[e].boundary)
                .map(|e| edge_ratio_supremum(&mesh, &dofmap, e).unwrap())
                .fold(0.0, f64::max),
        );
    }
    let growth = sampled[2] / sampled[0];
    outcome(
        growth <= 1.1 && sampled.iter().zip(&supremum).all(|(s, m)| *s <= m * (1.0 + 1e-10)),
        format!(
            "sampled max n = 8/16/32: {:.4} {:.4} {:.4} (growth {growth:.3}); exact sup {:.4} {:.4} {:.4}",
            sampled[0], sampled[1], sampled[2], supremum[0], supremum[1], supremum[2]
        ),
    )
}

fn csv_without_wall_time(report: &ConvergenceReport) -> String {
    let mut bytes = Vec::new();
    report.write_csv(&mut bytes).unwrap();
    String::from_utf8(bytes)
        .unwrap()
        .lines()
        .map(|line| line.rsplit_once(',').map(|(head, _)| head).unwrap_or(line).to_owned())
        .collect::<Vec<_>>()
        .join("\n")
}

fn criterion_10() -> Outcome {
    let config = StudyConfig::new(Problem::sine(), ElementKind::Nc1c2);
    let runs: Vec<String> = (0..3).map(|_| csv_without_wall_time(&run_study(&config).unwrap())).collect();
    outcome(
        runs.windows(2).all(|w| w[0] == w[1]) && !runs[0].is_empty(),
        format!("3 deterministic runs, {} CSV bytes each excluding wall_time, identical", runs[0].len()),
    )
}

fn main() {
    let start = Instant::now();
    let nc = sine_study(ElementKind::Nc1c2);
    let nc_seconds = start.elapsed().as_secs_f64();
    let cr = sine_study(ElementKind::Cr);
    let p2 = sine_study(ElementKind::P2c);
    let ratios = interpolation_ratios();

    let results = [
        criterion_1(&nc, nc_seconds),
        criterion_2(&nc, &cr),
        criterion_3(&p2),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(&ratios),
        criterion_9(),
        criterion_10(),
    ];
    for (i, r) in results.iter().enumerate() {
        println!("criterion {:>2}: {}  {}", i + 1, if r.pass { "PASS" } else { "FAIL" }, r.detail);
    }
    println!(
        "criterion  8 note: owner-element global interpolant, n = 8 -> 16: L2 ratio {:.3}, H1 ratio {:.3} \
         (one order lower: adjacent triangles disagree on the shared vertex coefficient)",
        ratios[2], ratios[3]
    );
    println!("total {:.2} s", start.elapsed().as_secs_f64());
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, r)| !r.pass).map(|(i, _)| i + 1).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
