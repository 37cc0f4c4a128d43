//! The six NC1-C2 functionals are unisolvent on P2: the functional/basis
//! matrix is the identity and the two-step interpolant reproduces quadratics.

use nalgebra::Point2;
use nc1c2::reference::{functionals, unisolvence_certificate, NC1C2_BASIS};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let report = unisolvence_certificate();
    println!("functional/basis matrix:{}", report.matrix);
    println!("max |M - I| = {:e}, condition number = {:.3}", report.deviation, report.condition_number);
    if !report.is_identity(1e-12) {
        return Err("functional matrix is not the identity".into());
    }

    // p(x, y) = 1 - 2x + 3y + x^2 - 4xy + 0.5y^2
    let c = [1.0, -2.0, 3.0, 1.0, -4.0, 0.5];
    let p = |q: &Point2<f64>| c[0] + c[1] * q.x + c[2] * q.y + c[3] * q.x * q.x + c[4] * q.x * q.y + c[5] * q.y * q.y;
    let coefficients = functionals(p);
    println!("two-step coefficients of p: {coefficients:?}");
    let mut worst: f64 = 0.0;
    for i in 0..=10 {
        for j in 0..=(10 - i) {
            let q = Point2::new(i as f64 / 10.0, j as f64 / 10.0);
            let ip: f64 = NC1C2_BASIS.iter().zip(&coefficients).map(|(b, a)| a * b.eval(&q)).sum();
            worst = worst.max((ip - p(&q)).abs());
        }
    }
    println!("max |I(p) - p| on a 66-point lattice: {worst:e}");
    if worst > 1e-12 {
        return Err("interpolant does not reproduce p".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
