//! Assembly of the broken stiffness matrix and load vector, and Dirichlet
//! boundary treatment.

use nalgebra::{Point2, SMatrix};
use rayon::prelude::*;

use crate::error::{FemError, Result};
use crate::mesh::Mesh;
use crate::quadrature::triangle_rule;
use crate::reference::{two_step_coefficients, MIDPOINTS, VERTICES};
use crate::space::{DofEntity, DofMap, ElementKind};
use crate::sparse::SparseSymmetricMatrix;
use crate::ExecutionMode;

/// Quadrature degree for the stiffness matrix; the integrand is quadratic.
pub const STIFFNESS_QUAD_DEGREE: usize = 2;
pub const DEFAULT_LOAD_QUAD_DEGREE: usize = 6;
pub const DEFAULT_PENALTY_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcMode {
    /// Constrained rows and columns replaced by identity, data moved to the rhs.
    Eliminate,
    /// Diagonal of each constrained DOF increased by `1/eps`, rhs by `g/eps`.
    Penalty(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: SparseSymmetricMatrix,
    pub rhs: Vec<f64>,
    pub bc_mode: Option<BcMode>,
    /// Prescribed `(dof, value)` pairs, sorted by dof.
    pub dirichlet_values: Vec<(usize, f64)>,
    constrained: Vec<bool>,
}

impl LinearSystem {
    pub fn new(matrix: SparseSymmetricMatrix, rhs: Vec<f64>) -> Result<Self> {
        if rhs.len() != matrix.dim() {
            return Err(FemError::DimensionMismatch { expected: matrix.dim(), actual: rhs.len() });
        }
        let constrained = vec![false; rhs.len()];
        Ok(Self { matrix, rhs, bc_mode: None, dirichlet_values: Vec::new(), constrained })
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.constrained[dof]
    }

    pub fn free_dofs(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&d| !self.constrained[d]).collect()
    }

    /// Enforces `values` as Dirichlet data.
    pub fn apply_dirichlet(mut self, mode: BcMode, values: &[(usize, f64)]) -> Result<Self> {
        if let BcMode::Penalty(eps) = mode {
            if !(eps > 0.0) {
                return Err(FemError::InvalidArgument(format!("penalty parameter must be positive, got {eps}")));
            }
        }
        if self.bc_mode.is_some() {
            return Err(FemError::InvalidArgument("boundary conditions already applied".into()));
        }
        let n = self.dim();
        let mut prescribed = vec![None; n];
        for &(d, g) in values {
            if d >= n {
                return Err(FemError::InvalidArgument(format!("constrained dof {d} out of range")));
            }
            prescribed[d] = Some(g);
            self.constrained[d] = true;
        }

        match mode {
            BcMode::Eliminate => {
                for i in 0..n {
                    if prescribed[i].is_some() {
                        continue;
                    }
                    let mut shift = 0.0;
                    for (j, v) in self.matrix.row_mut(i) {
                        if let Some(g) = prescribed[j] {
                            shift += *v * g;
                            *v = 0.0;
                        }
                    }
                    self.rhs[i] -= shift;
                }
                for (i, g) in prescribed.iter().enumerate() {
                    if let Some(g) = g {
                        for (j, v) in self.matrix.row_mut(i) {
                            *v = if j == i { 1.0 } else { 0.0 };
                        }
                        self.rhs[i] = *g;
                    }
                }
            }
            BcMode::Penalty(eps) => {
                for (i, g) in prescribed.iter().enumerate() {
                    if let Some(g) = g {
                        *self
                            .matrix
                            .entry_mut(i, i)
                            .ok_or_else(|| FemError::InvalidArgument(format!("dof {i} has no diagonal entry")))? += 1.0 / eps;
                        self.rhs[i] += g / eps;
                    }
                }
            }
        }
        let mut sorted: Vec<(usize, f64)> = values.to_vec();
        sorted.sort_by_key(|&(d, _)| d);
        self.dirichlet_values = sorted;
        self.bc_mode = Some(mode);
        Ok(self)
    }
}

type LocalMatrix = SMatrix<f64, 6, 6>;

/// Element stiffness matrix of triangle `k` in the order of `dofmap.cell_dofs[k]`.
pub fn local_stiffness(mesh: &Mesh, dofmap: &DofMap, k: usize) -> Result<LocalMatrix> {
    let map = mesh.affine_map(k)?;
    let rule = triangle_rule(STIFFNESS_QUAD_DEGREE)?;
    let cell = &dofmap.cell_dofs[k];
    let mut local = LocalMatrix::zeros();
    for (p, w) in rule.points.iter().zip(&rule.weights) {
        let grads: Vec<_> = cell.iter().map(|d| map.push_gradient(&d.basis.gradient(p))).collect();
        for a in 0..cell.len() {
            for b in a..cell.len() {
                local[(a, b)] += w * map.det * grads[a].dot(&grads[b]);
            }
        }
    }
    for a in 0..cell.len() {
        for b in 0..a {
            local[(a, b)] = local[(b, a)];
        }
    }
    Ok(local)
}

fn sparsity(dofmap: &DofMap) -> SparseSymmetricMatrix {
    let mut rows = vec![Vec::new(); dofmap.n_dofs];
    for cell in &dofmap.cell_dofs {
        for a in cell {
            rows[a.global].extend(cell.iter().map(|b| b.global));
        }
    }
    SparseSymmetricMatrix::from_pattern(dofmap.n_dofs, rows)
}

pub fn assemble_stiffness(mesh: &Mesh, dofmap: &DofMap) -> Result<SparseSymmetricMatrix> {
    assemble_stiffness_with(mesh, dofmap, ExecutionMode::Sequential)
}

/// Element matrices may be computed in parallel; they are always scattered
/// in triangle order, so the result does not depend on `mode`.
pub fn assemble_stiffness_with(mesh: &Mesh, dofmap: &DofMap, mode: ExecutionMode) -> Result<SparseSymmetricMatrix> {
    let locals: Vec<LocalMatrix> = match mode {
        ExecutionMode::Sequential => (0..mesh.n_triangles()).map(|k| local_stiffness(mesh, dofmap, k)).collect::<Result<_>>()?,
        ExecutionMode::Parallel => (0..mesh.n_triangles())
            .into_par_iter()
            .map(|k| local_stiffness(mesh, dofmap, k))
            .collect::<Result<_>>()?,
    };
    let mut matrix = sparsity(dofmap);
    for (cell, local) in dofmap.cell_dofs.iter().zip(&locals) {
        for (a, da) in cell.iter().enumerate() {
            for (b, db) in cell.iter().enumerate() {
                matrix.add(da.global, db.global, local[(a, b)]);
            }
        }
    }
    Ok(matrix)
}

/// Load vector `F_i = sum_K int_K f phi_i` by quadrature of degree `quad_degree`.
pub fn assemble_load<F>(mesh: &Mesh, dofmap: &DofMap, f: F, quad_degree: usize) -> Result<Vec<f64>>
where
    F: Fn(&Point2<f64>) -> f64,
{
    if quad_degree < 2 {
        return Err(FemError::InvalidArgument(format!("load quadrature degree must be >= 2, got {quad_degree}")));
    }
    let rule = triangle_rule(quad_degree)?;
    let mut load = vec![0.0; dofmap.n_dofs];
    for (k, cell) in dofmap.cell_dofs.iter().enumerate() {
        let map = mesh.affine_map(k)?;
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let fx = f(&map.apply(p)) * w * map.det;
            for d in cell {
                load[d.global] += fx * d.basis.eval(p);
            }
        }
    }
    Ok(load)
}

/// Prescribed values for every boundary DOF, taken from `g` (a function
/// defined on the closed domain, usually the exact solution).
///
/// Edge DOFs get `g` at the edge midpoint and P2 vertex DOFs get `g` at the
/// vertex. NC1-C2 vertex DOFs get the two-step interpolation coefficient of
/// `g` on the lowest-index triangle containing the vertex; for affine `g`
/// this is zero on every triangle. Passing `None` prescribes zero everywhere.
pub fn boundary_values<G>(mesh: &Mesh, dofmap: &DofMap, g: Option<G>) -> Vec<(usize, f64)>
where
    G: Fn(&Point2<f64>) -> f64,
{
    let Some(g) = g else {
        return dofmap.boundary_dofs.iter().map(|&d| (d, 0.0)).collect();
    };
    let owners = mesh.vertex_owners();
    dofmap
        .boundary_dofs
        .iter()
        .map(|&d| {
            let value = match dofmap.entity(d) {
                DofEntity::Edge(e) => g(&mesh.edges[e].midpoint),
                DofEntity::Vertex(v) => match dofmap.kind {
                    ElementKind::P2c => g(&mesh.vertices[v]),
                    _ => {
                        let k = owners[v];
                        let map = mesh.affine_map(k).expect("mesh triangles are valid");
                        let (vertex, _) = two_step_coefficients(VERTICES.map(|p| g(&map.apply(&p))), MIDPOINTS.map(|p| g(&map.apply(&p))));
                        let i = mesh.triangles[k].iter().position(|&x| x == v).expect("owner contains vertex");
                        vertex[i]
                    }
                },
            };
            (d, value)
        })
        .collect()
}
