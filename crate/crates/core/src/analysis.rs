//! Two-step interpolation, error norms and edge-jump diagnostics.
//!
//! The two-step interpolant is defined element by element: on a triangle it
//! takes the midpoint values of `u` as Crouzeix-Raviart coefficients and then
//! corrects each vertex by `u(b) - I1(u)(b)`. The result reproduces every
//! quadratic on that triangle. The vertex correction depends on the edge
//! vectors of the triangle, so neighbouring triangles generally disagree on
//! it. The NC1-C2 space has one coefficient per vertex, so
//! [`interpolate`] returns both the element-local interpolant and a global
//! function that takes each vertex coefficient from the lowest-index triangle
//! containing the vertex, together with the measured disagreement.

use nalgebra::{DMatrix, Point2, Vector2};

use crate::error::{FemError, Result};
use crate::mesh::Mesh;
use crate::quadrature::{gauss_legendre_unit, triangle_rule};
use crate::reference::{two_step_coefficients, MIDPOINTS, NC1C2_BASIS, VERTICES};
use crate::space::{edge_jump, edge_reference_point, DiscreteFunction, DofEntity, DofMap, ElementKind, PiecewiseField};

pub const DEFAULT_ERROR_QUAD_DEGREE: usize = 6;

/// Per-triangle NC1-C2 coefficients in [`NC1C2_BASIS`] order, with no
/// coupling between triangles beyond shared midpoint values.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalInterpolant {
    pub coefficients: Vec<[f64; 6]>,
}

impl PiecewiseField for LocalInterpolant {
    fn value(&self, k: usize, xi: &Point2<f64>) -> f64 {
        NC1C2_BASIS.iter().zip(&self.coefficients[k]).map(|(b, c)| c * b.eval(xi)).sum()
    }

    fn reference_gradient(&self, k: usize, xi: &Point2<f64>) -> Vector2<f64> {
        NC1C2_BASIS
            .iter()
            .zip(&self.coefficients[k])
            .fold(Vector2::zeros(), |acc, (b, c)| acc + b.gradient(xi) * *c)
    }
}

/// Element-by-element two-step interpolant of `u`.
pub fn interpolate_local<U>(mesh: &Mesh, u: U) -> Result<LocalInterpolant>
where
    U: Fn(&Point2<f64>) -> f64,
{
    let coefficients = (0..mesh.n_triangles())
        .map(|k| {
            let map = mesh.affine_map(k)?;
            let (v, m) = two_step_coefficients(VERTICES.map(|p| u(&map.apply(&p))), MIDPOINTS.map(|p| u(&map.apply(&p))));
            Ok([v[0], v[1], v[2], m[0], m[1], m[2]])
        })
        .collect::<Result<_>>()?;
    Ok(LocalInterpolant { coefficients })
}

#[derive(Debug, Clone)]
pub struct InterpolationResult<'a> {
    /// Global NC1-C2 function; vertex coefficients from the owner triangle.
    pub function: DiscreteFunction<'a>,
    pub local: LocalInterpolant,
    /// Largest difference between the owner's vertex coefficient and the one
    /// any other adjacent triangle would assign.
    pub max_vertex_discrepancy: f64,
    pub worst_vertex: Option<usize>,
}

impl InterpolationResult<'_> {
    /// Fails if adjacent triangles disagree on a vertex coefficient by more
    /// than `tol`.
    pub fn require_consistent(&self, tol: f64) -> Result<()> {
        match self.worst_vertex {
            Some(vertex) if self.max_vertex_discrepancy > tol => {
                Err(FemError::InconsistentVertexCoefficient { vertex, discrepancy: self.max_vertex_discrepancy })
            }
            _ => Ok(()),
        }
    }
}

pub fn interpolate<'a, U>(mesh: &Mesh, dofmap: &'a DofMap, u: U) -> Result<InterpolationResult<'a>>
where
    U: Fn(&Point2<f64>) -> f64,
{
    if dofmap.kind != ElementKind::Nc1c2 {
        return Err(FemError::InvalidArgument(format!("two-step interpolation targets nc1c2, not {}", dofmap.kind)));
    }
    let local = interpolate_local(mesh, &u)?;
    let mut coefficients = vec![0.0; dofmap.n_dofs];
    for (e, edge) in mesh.edges.iter().enumerate() {
        coefficients[dofmap.edge_dof(e)] = u(&edge.midpoint);
    }
    let mut assigned = vec![false; mesh.n_vertices()];
    let mut max_vertex_discrepancy: f64 = 0.0;
    let mut worst_vertex = None;
    for (k, tri) in mesh.triangles.iter().enumerate() {
        for (i, &v) in tri.iter().enumerate() {
            let dof = dofmap.vertex_dof(v).expect("nc1c2 has vertex dofs");
            let c = local.coefficients[k][i];
            if !assigned[v] {
                coefficients[dof] = c;
                assigned[v] = true;
                if worst_vertex.is_none() {
                    worst_vertex = Some(v);
                }
            } else {
                let d = (coefficients[dof] - c).abs();
                if d > max_vertex_discrepancy {
                    max_vertex_discrepancy = d;
                    worst_vertex = Some(v);
                }
            }
        }
    }
    Ok(InterpolationResult {
        function: DiscreteFunction::new(dofmap, coefficients)?,
        local,
        max_vertex_discrepancy,
        worst_vertex,
    })
}

/// Nodal interpolant for the CR (midpoint values) and P2 (vertex and
/// midpoint values) spaces.
pub fn nodal_interpolate<'a, U>(mesh: &Mesh, dofmap: &'a DofMap, u: U) -> Result<DiscreteFunction<'a>>
where
    U: Fn(&Point2<f64>) -> f64,
{
    if dofmap.kind == ElementKind::Nc1c2 {
        return Err(FemError::InvalidArgument("use interpolate() for nc1c2".into()));
    }
    let coefficients = (0..dofmap.n_dofs)
        .map(|d| match dofmap.entity(d) {
            DofEntity::Edge(e) => u(&mesh.edges[e].midpoint),
            DofEntity::Vertex(v) => u(&mesh.vertices[v]),
        })
        .collect();
    DiscreteFunction::new(dofmap, coefficients)
}

/// `sqrt(sum_K int_K (u - f)^2)`.
pub fn l2_error<F, U>(mesh: &Mesh, f: &F, u: U, quad_degree: usize) -> Result<f64>
where
    F: PiecewiseField,
    U: Fn(&Point2<f64>) -> f64,
{
    if quad_degree < 4 {
        return Err(FemError::InvalidArgument(format!("L2 error quadrature degree must be >= 4, got {quad_degree}")));
    }
    let rule = triangle_rule(quad_degree)?;
    let mut sum = 0.0;
    for k in 0..mesh.n_triangles() {
        let map = mesh.affine_map(k)?;
        sum += map.det * rule.integrate(|p| (u(&map.apply(p)) - f.value(k, p)).powi(2));
    }
    Ok(sum.sqrt())
}

/// `sqrt(sum_K int_K |grad u - grad f|^2)`.
pub fn h1_broken_error<F, G>(mesh: &Mesh, f: &F, grad_u: G, quad_degree: usize) -> Result<f64>
where
    F: PiecewiseField,
    G: Fn(&Point2<f64>) -> Vector2<f64>,
{
    if quad_degree < 2 {
        return Err(FemError::InvalidArgument(format!("H1 error quadrature degree must be >= 2, got {quad_degree}")));
    }
    let rule = triangle_rule(quad_degree)?;
    let mut sum = 0.0;
    for k in 0..mesh.n_triangles() {
        let map = mesh.affine_map(k)?;
        sum += map.det
            * rule.integrate(|p| (grad_u(&map.apply(p)) - map.push_gradient(&f.reference_gradient(k, p))).norm_squared());
    }
    Ok(sum.sqrt())
}

/// `|f|^2_{H1(K)}` for every triangle, exact for piecewise quadratics.
pub fn element_seminorms_squared<F: PiecewiseField>(mesh: &Mesh, f: &F) -> Result<Vec<f64>> {
    let rule = triangle_rule(2)?;
    (0..mesh.n_triangles())
        .map(|k| {
            let map = mesh.affine_map(k)?;
            Ok(map.det * rule.integrate(|p| map.push_gradient(&f.reference_gradient(k, p)).norm_squared()))
        })
        .collect()
}

/// The broken energy norm `sqrt(sum_K |f|^2_{H1(K)})`.
pub fn broken_seminorm<F: PiecewiseField>(mesh: &Mesh, f: &F) -> Result<f64> {
    Ok(element_seminorms_squared(mesh, f)?.iter().sum::<f64>().sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub l2: f64,
    pub h1_broken: f64,
    pub max_edge_jump_integral: f64,
}

pub fn error_report<F, U, G>(mesh: &Mesh, f: &F, u: U, grad_u: G) -> Result<ErrorReport>
where
    F: PiecewiseField,
    U: Fn(&Point2<f64>) -> f64,
    G: Fn(&Point2<f64>) -> Vector2<f64>,
{
    let jumps = jump_diagnostics(mesh, f)?;
    Ok(ErrorReport {
        l2: l2_error(mesh, f, u, DEFAULT_ERROR_QUAD_DEGREE)?,
        h1_broken: h1_broken_error(mesh, f, grad_u, DEFAULT_ERROR_QUAD_DEGREE)?,
        max_edge_jump_integral: jumps.iter().map(|j| j.integral.abs()).fold(0.0, f64::max),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeJumpReport {
    pub edge: usize,
    /// `int_e [f] ds`, 2-point Gauss.
    pub integral: f64,
    /// `||[f]||^2_{L2(e)}`, 3-point Gauss.
    pub l2_squared: f64,
    /// `|e| ||[f]||^2 / sum_{K in tau_e} h_K^2 |f|^2_{H1(K)}`.
    pub ratio: f64,
}

/// Jump quantities on every interior edge.
pub fn jump_diagnostics<F: PiecewiseField>(mesh: &Mesh, f: &F) -> Result<Vec<EdgeJumpReport>> {
    let (x2, w2) = gauss_legendre_unit(2)?;
    let (x3, w3) = gauss_legendre_unit(3)?;
    let seminorms = element_seminorms_squared(mesh, f)?;
    let mut out = Vec::new();
    for (e, edge) in mesh.edges.iter().enumerate() {
        let Some(k2) = edge.neighbors.1 else { continue };
        let integral = edge.length * x2.iter().zip(&w2).map(|(t, w)| w * edge_jump(mesh, f, e, *t)).sum::<f64>();
        let l2_squared = edge.length * x3.iter().zip(&w3).map(|(t, w)| w * edge_jump(mesh, f, e, *t).powi(2)).sum::<f64>();
        let denom: f64 = [edge.neighbors.0, k2]
            .iter()
            .map(|&k| mesh.diameter(k).powi(2) * seminorms[k])
            .sum();
        let numer = edge.length * l2_squared;
        let ratio = if denom > 0.0 {
            numer / denom
        } else if numer <= 1e-20 {
            0.0
        } else {
            f64::INFINITY
        };
        out.push(EdgeJumpReport { edge: e, integral, l2_squared, ratio });
    }
    Ok(out)
}

/// Supremum over all discrete functions of the edge ratio reported by
/// [`jump_diagnostics`] for interior edge `e`, as the largest generalized
/// eigenvalue of the local jump and energy forms.
pub fn edge_ratio_supremum(mesh: &Mesh, dofmap: &DofMap, e: usize) -> Result<f64> {
    let edge = &mesh.edges[e];
    let Some(k2) = edge.neighbors.1 else {
        return Err(FemError::InvalidArgument(format!("edge {e} is on the boundary")));
    };
    let cells = [edge.neighbors.0, k2];
    let mut dofs: Vec<usize> = cells.iter().flat_map(|&k| dofmap.cell_dofs[k].iter().map(|d| d.global)).collect();
    dofs.sort_unstable();
    dofs.dedup();
    let n = dofs.len();
    let slot = |g: usize| dofs.binary_search(&g).expect("patch dof");

    let mut energy = DMatrix::<f64>::zeros(n, n);
    for &k in &cells {
        let local = crate::assembly::local_stiffness(mesh, dofmap, k)?;
        let h2 = mesh.diameter(k).powi(2);
        let cell = &dofmap.cell_dofs[k];
        for (a, da) in cell.iter().enumerate() {
            for (b, db) in cell.iter().enumerate() {
                energy[(slot(da.global), slot(db.global))] += h2 * local[(a, b)];
            }
        }
    }

    let (x3, w3) = gauss_legendre_unit(3)?;
    let mut jump = DMatrix::<f64>::zeros(n, n);
    for (t, w) in x3.iter().zip(&w3) {
        let mut row = vec![0.0; n];
        for (sign, &k) in [1.0, -1.0].iter().zip(&cells) {
            let xi = edge_reference_point(mesh, k, e, *t);
            for d in &dofmap.cell_dofs[k] {
                row[slot(d.global)] += sign * d.basis.eval(&xi);
            }
        }
        for a in 0..n {
            for b in 0..n {
                jump[(a, b)] += edge.length * edge.length * w * row[a] * row[b];
            }
        }
    }

    let eig = energy.symmetric_eigen();
    let top = eig.eigenvalues.max();
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 1e-12 * top).collect();
    let basis = DMatrix::from_fn(n, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])] / eig.eigenvalues[keep[c]].sqrt());
    let reduced = basis.transpose() * jump * &basis;
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    Ok(reduced.symmetric_eigenvalues().max())
}

/// Largest normalized consistency term `|sum_e int_e (grad u . n_e) [w] ds| / ||w||_h`
/// over the test functions. Uses 4-point Gauss on every edge, boundary
/// edges included.
pub fn consistency_gap<G>(mesh: &Mesh, grad_u: G, tests: &[DiscreteFunction<'_>]) -> Result<f64>
where
    G: Fn(&Point2<f64>) -> Vector2<f64>,
{
    let (x4, w4) = gauss_legendre_unit(4)?;
    let mut worst: f64 = 0.0;
    for w in tests {
        // only edges touching the support contribute
        let mut touched = vec![false; mesh.n_edges()];
        for (k, cell) in w.dofmap.cell_dofs.iter().enumerate() {
            if cell.iter().any(|d| w.coefficients[d.global] != 0.0) {
                for &e in &mesh.triangle_edges[k] {
                    touched[e] = true;
                }
            }
        }
        let mut gap = 0.0;
        for (e, edge) in mesh.edges.iter().enumerate().filter(|(e, _)| touched[*e]) {
            gap += edge.length
                * x4.iter()
                    .zip(&w4)
                    .map(|(t, q)| q * grad_u(&edge.point_at(mesh, *t)).dot(&edge.normal) * edge_jump(mesh, w, e, *t))
                    .sum::<f64>();
        }
        let norm = broken_seminorm(mesh, w)?;
        if norm > 0.0 {
            worst = worst.max(gap.abs() / norm);
        }
    }
    Ok(worst)
}

/// One-hot functions for the interior edge DOFs of `dofmap`.
pub fn interior_edge_basis<'a>(mesh: &Mesh, dofmap: &'a DofMap) -> Vec<DiscreteFunction<'a>> {
    mesh.edges
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.boundary)
        .map(|(e, _)| {
            let mut f = DiscreteFunction::zeros(dofmap);
            f.coefficients[dofmap.edge_dof(e)] = 1.0;
            f
        })
        .collect()
}

/// `g_i = sum_e int_e (grad u . n_e) [phi_i] ds` for every free DOF of
/// `dofmap`, in [`DofMap::free_dofs`] order.
pub fn consistency_functional<G>(mesh: &Mesh, dofmap: &DofMap, grad_u: G) -> Result<Vec<f64>>
where
    G: Fn(&Point2<f64>) -> Vector2<f64>,
{
    let (x4, w4) = gauss_legendre_unit(4)?;
    let mut g = vec![0.0; dofmap.n_dofs];
    for (e, edge) in mesh.edges.iter().enumerate() {
        let sides = [Some(edge.neighbors.0), edge.neighbors.1];
        for (t, q) in x4.iter().zip(&w4) {
            let flux = edge.length * q * grad_u(&edge.point_at(mesh, *t)).dot(&edge.normal);
            for (sign, k) in [1.0, -1.0].iter().zip(sides) {
                let Some(k) = k else { continue };
                let xi = edge_reference_point(mesh, k, e, *t);
                for d in &dofmap.cell_dofs[k] {
                    g[d.global] += sign * flux * d.basis.eval(&xi);
                }
            }
        }
    }
    Ok(dofmap.free_dofs().into_iter().map(|d| g[d]).collect())
}

/// Dual norm of the consistency functional over the discrete space with
/// zero boundary DOFs: `sup_w |sum_e int_e (grad u . n_e) [w] ds| / ||w||_h`,
/// computed as `sqrt(g^T A^-1 g)` with the stiffness matrix on free DOFs.
pub fn consistency_dual_norm<G>(mesh: &Mesh, dofmap: &DofMap, grad_u: G, tol: f64) -> Result<f64>
where
    G: Fn(&Point2<f64>) -> Vector2<f64>,
{
    let g = consistency_functional(mesh, dofmap, grad_u)?;
    let a = crate::assembly::assemble_stiffness(mesh, dofmap)?.principal_submatrix(&dofmap.free_dofs());
    let system = crate::assembly::LinearSystem::new(a, g.clone())?;
    let z = crate::solver::cg_solve(&system, tol, crate::solver::default_max_iter(g.len()))?;
    Ok(g.iter().zip(&z.x).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_structured;
    use crate::space::build_dofmap;

    fn reference_mesh() -> Mesh {
        crate::mesh::build_edges(crate::mesh::Triangulation {
            vertices: VERTICES.to_vec(),
            triangles: vec![[0, 1, 2]],
        })
        .unwrap()
    }

    #[test]
    fn local_interpolation_examples() {
        let mesh = reference_mesh();
        let one = interpolate_local(&mesh, |_| 1.0).unwrap();
        assert_eq!(one.coefficients[0], [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let x = interpolate_local(&mesh, |p| p.x).unwrap();
        assert_eq!(x.coefficients[0], [0.0, 0.0, 0.0, 0.5, 0.5, 0.0]);
        // x^2 = (2x^2 - x) / 2 + x / 2: only b1 needs a correction
        let xx = interpolate_local(&mesh, |p| p.x * p.x).unwrap();
        let expected = [0.0, 0.5, 0.0, 0.25, 0.25, 0.0];
        for (c, e) in xx.coefficients[0].iter().zip(expected) {
            assert!((c - e).abs() < 1e-15, "{c} vs {e}");
        }
        for p in [Point2::new(0.3, 0.2), Point2::new(0.0, 1.0), Point2::new(0.7, 0.1)] {
            assert!((xx.value(0, &p) - p.x * p.x).abs() < 1e-14);
        }
    }

    #[test]
    fn global_interpolant_reproduces_affine_and_flags_quadratics() {
        let mesh = generate_structured(4).unwrap();
        let d = build_dofmap(&mesh, ElementKind::Nc1c2);
        let affine = interpolate(&mesh, &d, |p| 1.0 + 2.0 * p.x - p.y).unwrap();
        assert_eq!(affine.max_vertex_discrepancy, 0.0);
        assert!(affine.require_consistent(1e-14).is_ok());
        assert!(l2_error(&mesh, &affine.function, |p| 1.0 + 2.0 * p.x - p.y, 6).unwrap() < 1e-14);
        let quad = interpolate(&mesh, &d, |p| p.x * p.y).unwrap();
        assert!(quad.max_vertex_discrepancy > 1e-3);
        assert!(matches!(quad.require_consistent(1e-8), Err(FemError::InconsistentVertexCoefficient { .. })));
        assert!(l2_error(&mesh, &quad.local, |p| p.x * p.y, 6).unwrap() < 1e-14);
        let cr = build_dofmap(&mesh, ElementKind::Cr);
        assert!(interpolate(&mesh, &cr, |p| p.x).is_err());
        assert!(nodal_interpolate(&mesh, &d, |p| p.x).is_err());
    }

    #[test]
    fn nodal_interpolation_reproduces_degree() {
        let mesh = generate_structured(3).unwrap();
        let p2 = build_dofmap(&mesh, ElementKind::P2c);
        let u = |p: &Point2<f64>| 1.0 + p.x * p.y - 2.0 * p.y * p.y;
        let f = nodal_interpolate(&mesh, &p2, u).unwrap();
        assert!(l2_error(&mesh, &f, u, 6).unwrap() < 1e-13);
        let cr = build_dofmap(&mesh, ElementKind::Cr);
        let f = nodal_interpolate(&mesh, &cr, |p| 3.0 * p.x - p.y).unwrap();
        assert!(l2_error(&mesh, &f, |p| 3.0 * p.x - p.y, 6).unwrap() < 1e-14);
    }

    #[test]
    fn norm_examples() {
        let mesh = reference_mesh();
        let cr = build_dofmap(&mesh, ElementKind::Cr);
        let zero = DiscreteFunction::zeros(&cr);
        // constant c on an area-1/2 triangle
        assert!((l2_error(&mesh, &zero, |_| 3.0, 6).unwrap() - 3.0 / 2f64.sqrt()).abs() < 1e-14);
        let mut psi = DiscreteFunction::zeros(&cr);
        psi.coefficients[cr.cell_dofs[0][1].global] = 1.0;
        // -1 + 2x + 2y has |grad|^2 = 8 on area 1/2
        assert!((h1_broken_error(&mesh, &psi, |_| Vector2::zeros(), 2).unwrap() - 2.0).abs() < 1e-14);
        assert!((broken_seminorm(&mesh, &psi).unwrap() - 2.0).abs() < 1e-14);
        assert!(l2_error(&mesh, &zero, |_| 1.0, 3).is_err());
        assert!(h1_broken_error(&mesh, &zero, |_| Vector2::zeros(), 1).is_err());
    }

    #[test]
    fn unit_square_l2_of_constant() {
        let mesh = generate_structured(4).unwrap();
        let d = build_dofmap(&mesh, ElementKind::Cr);
        let zero = DiscreteFunction::zeros(&d);
        assert!((l2_error(&mesh, &zero, |_| -2.5, 4).unwrap() - 2.5).abs() < 1e-13);
        assert_eq!(l2_error(&mesh, &zero, |_| 0.0, 6).unwrap(), 0.0);
    }

    #[test]
    fn jump_diagnostics_of_single_cr_function() {
        let mesh = generate_structured(3).unwrap();
        let d = build_dofmap(&mesh, ElementKind::Cr);
        let e = mesh.edges.iter().position(|e| !e.boundary).unwrap();
        let mut f = DiscreteFunction::zeros(&d);
        f.coefficients[e] = 1.0;
        let jumps = jump_diagnostics(&mesh, &f).unwrap();
        assert_eq!(jumps.len(), mesh.edges.iter().filter(|e| !e.boundary).count());
        let mut nonzero = 0;
        for j in &jumps {
            assert!(j.integral.abs() < 1e-15);
            assert!(j.ratio.is_finite() && j.ratio >= 0.0);
            if j.l2_squared > 1e-20 {
                nonzero += 1;
            }
        }
        assert!(nonzero > 0);
        let report = error_report(&mesh, &f, |_| 0.0, |_| Vector2::zeros()).unwrap();
        assert!(report.max_edge_jump_integral < 1e-15);
        assert!((report.h1_broken - broken_seminorm(&mesh, &f).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn sampled_ratio_bounded_by_supremum() {
        let mesh = generate_structured(2).unwrap();
        let d = build_dofmap(&mesh, ElementKind::Nc1c2);
        let f = DiscreteFunction::new(&d, (0..d.n_dofs).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect()).unwrap();
        for j in jump_diagnostics(&mesh, &f).unwrap() {
            let sup = edge_ratio_supremum(&mesh, &d, j.edge).unwrap();
            assert!(j.ratio <= sup * (1.0 + 1e-10), "{} > {}", j.ratio, sup);
        }
        let boundary = mesh.edges.iter().position(|e| e.boundary).unwrap();
        assert!(edge_ratio_supremum(&mesh, &d, boundary).is_err());
    }

    #[test]
    fn consistency_gap_vanishes_for_affine_u_and_conforming_tests() {
        let mesh = generate_structured(4).unwrap();
        let cr = build_dofmap(&mesh, ElementKind::Cr);
        let tests = interior_edge_basis(&mesh, &cr);
        assert!(consistency_gap(&mesh, |_| Vector2::new(2.0, -3.0), &tests).unwrap() < 1e-14);
        assert!(consistency_dual_norm(&mesh, &cr, |_| Vector2::new(2.0, -3.0), 1e-12).unwrap() < 1e-12);

        let p2 = build_dofmap(&mesh, ElementKind::P2c);
        let w = nodal_interpolate(&mesh, &p2, |p| p.x * (1.0 - p.x) * p.y * (1.0 - p.y)).unwrap();
        let grad = |p: &Point2<f64>| Vector2::new(p.y.sin(), p.x * p.x);
        assert!(consistency_gap(&mesh, grad, &[w]).unwrap() < 1e-14);
    }

    #[test]
    fn consistency_dual_norm_is_first_order() {
        let grad = |p: &Point2<f64>| {
            use std::f64::consts::PI;
            Vector2::new(PI * (PI * p.x).cos() * (PI * p.y).sin(), PI * (PI * p.x).sin() * (PI * p.y).cos())
        };
        let norm = |n| {
            let mesh = generate_structured(n).unwrap();
            let d = build_dofmap(&mesh, ElementKind::Cr);
            consistency_dual_norm(&mesh, &d, grad, 1e-12).unwrap()
        };
        let ratio = norm(4) / norm(8);
        assert!((1.7..=2.3).contains(&ratio), "ratio {ratio}");
    }
}
