//! Jacobi-preconditioned conjugate gradients.
//!
//! Convergence is measured on the diagonally scaled residual,
//! `||D^-1 r|| <= tol * ||D^-1 b||`. Penalized rows carry entries of order
//! `1/eps`; scaling by the diagonal keeps them from swamping the residual of
//! the unconstrained rows.

use rayon::prelude::*;

use crate::assembly::LinearSystem;
use crate::error::{FemError, Result};
use crate::ExecutionMode;

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CgSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Default iteration cap: ten times the system dimension.
pub fn default_max_iter(dim: usize) -> usize {
    10 * dim.max(1)
}

pub fn cg_solve(system: &LinearSystem, tol: f64, max_iter: usize) -> Result<CgSolution> {
    cg_solve_with(system, tol, max_iter, ExecutionMode::Sequential)
}

pub fn cg_solve_with(system: &LinearSystem, tol: f64, max_iter: usize, mode: ExecutionMode) -> Result<CgSolution> {
    if !(tol > 0.0) {
        return Err(FemError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let a = &system.matrix;
    let b = &system.rhs;
    let n = b.len();
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();

    let dot = |u: &[f64], v: &[f64]| -> f64 {
        match mode {
            ExecutionMode::Sequential => u.iter().zip(v).map(|(x, y)| x * y).sum(),
            ExecutionMode::Parallel => u.par_iter().zip(v).map(|(x, y)| x * y).sum(),
        }
    };
    let matvec = |x: &[f64], y: &mut [f64]| match mode {
        ExecutionMode::Sequential => a.mul_vec_into(x, y),
        ExecutionMode::Parallel => a.par_mul_vec_into(x, y),
    };
    let scaled_norm = |r: &[f64]| r.iter().zip(&inv_diag).map(|(r, d)| (r * d) * (r * d)).sum::<f64>().sqrt();

    let mut x = vec![0.0; n];
    let b_norm = scaled_norm(b);
    if b_norm == 0.0 {
        return Ok(CgSolution { x, iterations: 0, relative_residual: 0.0 });
    }
    let mut r = b.clone();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut relative = 1.0;

    for it in 1..=max_iter {
        matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(FemError::NotPositiveDefinite { row: it, pivot: pap });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        relative = scaled_norm(&r) / b_norm;
        if relative <= tol {
            return Ok(CgSolution { x, iterations: it, relative_residual: relative });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(FemError::NotConverged { iterations: max_iter, residual: relative })
}

/// Largest `|(A u - b)_i|` over unconstrained DOFs.
pub fn galerkin_residual_check(system: &LinearSystem, solution: &[f64]) -> f64 {
    let au = system.matrix.mul_vec(solution);
    system
        .free_dofs()
        .into_iter()
        .map(|i| (au[i] - system.rhs[i]).abs())
        .fold(0.0, f64::max)
}
