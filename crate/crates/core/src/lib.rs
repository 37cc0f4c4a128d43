//! NC1-C2 finite elements for the Poisson problem on the unit square.
//!
//! The NC1-C2 space is the Crouzeix-Raviart (P1-nonconforming) space plus a
//! continuous span of quadratic vertex functions. Locally it spans all of P2,
//! yet the jump across any interior edge is affine with zero mean, so the
//! method converges like Crouzeix-Raviart: first order in the broken energy
//! norm and second order in L2. The crate also provides Crouzeix-Raviart and
//! conforming P2 for comparison, a convergence-study driver and diagnostics
//! for the interpolation operator and edge jumps.
//!
//! ```
//! use nc1c2::{problems::Problem, space::ElementKind, study::{run_study, StudyConfig}};
//!
//! let config = StudyConfig { n0: 2, levels: 2, ..StudyConfig::new(Problem::sine(), ElementKind::Nc1c2) };
//! let report = run_study(&config).unwrap();
//! assert_eq!(report.rows.len(), 2);
//! assert!(report.rows[1].l2_error < report.rows[0].l2_error);
//! ```

pub mod analysis;
pub mod assembly;
pub mod error;
pub mod mesh;
pub mod problems;
pub mod quadrature;
pub mod reference;
pub mod solver;
pub mod space;
pub mod sparse;
pub mod study;

pub use error::{FemError, Result};

/// Whether element loops and solver kernels may use several threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    /// Single-threaded, bit-reproducible.
    #[default]
    Sequential,
    /// Parallel element integration and CG kernels. Dot products may be
    /// reassociated, so iterates can differ in the last bits.
    Parallel,
}
