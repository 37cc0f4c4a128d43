//! Convergence of NC1-C2, Crouzeix-Raviart and conforming P2 on the sine
//! problem. NC1-C2 tracks Crouzeix-Raviart (orders 2 and 1) even though it
//! contains all quadratics locally; conforming P2 reaches orders 3 and 2.

use nc1c2::problems::Problem;
use nc1c2::space::ElementKind;
use nc1c2::study::{run_study, StudyConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for kind in ElementKind::ALL {
        let report = run_study(&StudyConfig::new(Problem::sine(), kind))?;
        println!("{kind}");
        print!("{}", report.to_table());
        let last = report.last().ok_or("empty report")?;
        println!(
            "final EOC: L2 {:.3}, H1 {:.3}\n",
            last.l2_eoc.unwrap_or(f64::NAN),
            last.h1_eoc.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
