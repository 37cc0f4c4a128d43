//! Global degrees of freedom for the three element kinds and evaluation of
//! discrete functions.
//!
//! Numbering is edges first, then vertices, each in ascending index order.
//! In the NC1-C2 space every mesh vertex carries one coefficient shared by
//! all adjacent triangles, which keeps the quadratic part continuous across
//! edges. A vertex coefficient multiplies the quadratic vertex function; it is
//! not the value of the discrete function at that vertex.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::{Point2, Vector2};

use crate::error::{FemError, Result};
use crate::mesh::Mesh;
use crate::reference::{ReferenceBasis, VERTICES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    /// Crouzeix-Raviart midpoint values plus shared quadratic vertex functions.
    Nc1c2,
    /// Crouzeix-Raviart, one DOF per edge.
    Cr,
    /// Conforming quadratic Lagrange element.
    P2c,
}

impl ElementKind {
    pub const ALL: [ElementKind; 3] = [ElementKind::Nc1c2, ElementKind::Cr, ElementKind::P2c];

    pub fn name(&self) -> &'static str {
        match self {
            ElementKind::Nc1c2 => "nc1c2",
            ElementKind::Cr => "cr",
            ElementKind::P2c => "p2",
        }
    }

    pub fn has_vertex_dofs(&self) -> bool {
        !matches!(self, ElementKind::Cr)
    }

    /// Reference function bound to local edge `i`.
    fn edge_basis(&self, i: usize) -> ReferenceBasis {
        match self {
            ElementKind::P2c => ReferenceBasis::lagrange_midpoint(i),
            _ => ReferenceBasis::cr(i),
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementKind {
    type Err = FemError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nc1c2" => Ok(ElementKind::Nc1c2),
            "cr" => Ok(ElementKind::Cr),
            "p2" | "p2c" => Ok(ElementKind::P2c),
            other => Err(FemError::InvalidArgument(format!("unknown element kind '{other}'"))),
        }
    }
}

/// Mesh entity a global DOF is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofEntity {
    Edge(usize),
    Vertex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalDof {
    pub global: usize,
    pub basis: ReferenceBasis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    pub kind: ElementKind,
    pub n_dofs: usize,
    n_edges: usize,
    /// Local DOFs per triangle: vertex functions first (if any), then edge
    /// functions, each in local index order.
    pub cell_dofs: Vec<Vec<LocalDof>>,
    /// Sorted global indices of DOFs on the boundary.
    pub boundary_dofs: Vec<usize>,
    boundary_mask: Vec<bool>,
}

pub fn build_dofmap(mesh: &Mesh, kind: ElementKind) -> DofMap {
    let n_edges = mesh.n_edges();
    let n_dofs = n_edges + if kind.has_vertex_dofs() { mesh.n_vertices() } else { 0 };
    let cell_dofs = mesh
        .triangles
        .iter()
        .zip(&mesh.triangle_edges)
        .map(|(tri, edges)| {
            let mut local = Vec::with_capacity(6);
            if kind.has_vertex_dofs() {
                for (i, &v) in tri.iter().enumerate() {
                    local.push(LocalDof { global: n_edges + v, basis: ReferenceBasis::vertex(i) });
                }
            }
            for (i, &e) in edges.iter().enumerate() {
                local.push(LocalDof { global: e, basis: kind.edge_basis(i) });
            }
            local
        })
        .collect();

    let mut boundary_mask = vec![false; n_dofs];
    for (e, edge) in mesh.edges.iter().enumerate() {
        if edge.boundary {
            boundary_mask[e] = true;
        }
    }
    if kind.has_vertex_dofs() {
        for (v, on_boundary) in mesh.boundary_vertices().into_iter().enumerate() {
            boundary_mask[n_edges + v] = on_boundary;
        }
    }
    let boundary_dofs = (0..n_dofs).filter(|&d| boundary_mask[d]).collect();

    DofMap { kind, n_dofs, n_edges, cell_dofs, boundary_dofs, boundary_mask }
}

impl DofMap {
    pub fn is_boundary(&self, dof: usize) -> bool {
        self.boundary_mask[dof]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary_mask
    }

    pub fn free_dofs(&self) -> Vec<usize> {
        (0..self.n_dofs).filter(|&d| !self.boundary_mask[d]).collect()
    }

    pub fn entity(&self, dof: usize) -> DofEntity {
        if dof < self.n_edges {
            DofEntity::Edge(dof)
        } else {
            DofEntity::Vertex(dof - self.n_edges)
        }
    }

    pub fn edge_dof(&self, e: usize) -> usize {
        e
    }

    pub fn vertex_dof(&self, v: usize) -> Option<usize> {
        self.kind.has_vertex_dofs().then_some(self.n_edges + v)
    }
}

/// A function defined triangle by triangle through reference coordinates.
pub trait PiecewiseField {
    fn value(&self, k: usize, xi: &Point2<f64>) -> f64;

    /// Gradient with respect to reference coordinates.
    fn reference_gradient(&self, k: usize, xi: &Point2<f64>) -> Vector2<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFunction<'a> {
    pub dofmap: &'a DofMap,
    pub coefficients: Vec<f64>,
}

impl<'a> DiscreteFunction<'a> {
    pub fn new(dofmap: &'a DofMap, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != dofmap.n_dofs {
            return Err(FemError::DimensionMismatch { expected: dofmap.n_dofs, actual: coefficients.len() });
        }
        Ok(Self { dofmap, coefficients })
    }

    pub fn zeros(dofmap: &'a DofMap) -> Self {
        Self { dofmap, coefficients: vec![0.0; dofmap.n_dofs] }
    }

    /// Value on triangle `k` at reference point `xi`.
    pub fn evaluate(&self, k: usize, xi: &Point2<f64>) -> f64 {
        self.value(k, xi)
    }

    /// Plain text dump: one `dof value` line per coefficient.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (d, c) in self.coefficients.iter().enumerate() {
            writeln!(out, "{d} {c}")?;
        }
        Ok(())
    }
}

impl PiecewiseField for DiscreteFunction<'_> {
    fn value(&self, k: usize, xi: &Point2<f64>) -> f64 {
        self.dofmap.cell_dofs[k]
            .iter()
            .map(|d| self.coefficients[d.global] * d.basis.eval(xi))
            .sum()
    }

    fn reference_gradient(&self, k: usize, xi: &Point2<f64>) -> Vector2<f64> {
        self.dofmap.cell_dofs[k]
            .iter()
            .fold(Vector2::zeros(), |acc, d| acc + d.basis.gradient(xi) * self.coefficients[d.global])
    }
}

/// Reference coordinates in triangle `k` of the point at parameter `t` on
/// edge `e` (measured from `endpoints[0]`).
pub fn edge_reference_point(mesh: &Mesh, k: usize, e: usize, t: f64) -> Point2<f64> {
    let li = mesh.local_edge(k, e).expect("edge does not belong to triangle");
    let (a, b) = (VERTICES[li], VERTICES[(li + 1) % 3]);
    let s = if mesh.edge_signs[k][li] > 0 { t } else { 1.0 - t };
    a + (b - a) * s
}

/// Trace difference across edge `e` at parameter `t`: the trace from the
/// triangle the edge normal points out of, minus the trace from the other
/// one. On a boundary edge this is the trace itself.
pub fn edge_jump<F: PiecewiseField>(mesh: &Mesh, f: &F, e: usize, t: f64) -> f64 {
    let edge = &mesh.edges[e];
    let (k1, k2) = edge.neighbors;
    let inner = f.value(k1, &edge_reference_point(mesh, k1, e, t));
    match k2 {
        Some(k2) => inner - f.value(k2, &edge_reference_point(mesh, k2, e, t)),
        None => inner,
    }
}
