//! Reference-element basis functions on the triangle `(0,0), (1,0), (0,1)`.
//!
//! Vertex `b_i` and midpoint `m_i` use 0-based local indices here. Midpoint
//! `m_i` lies on the side joining `b_i` and `b_{(i+1) % 3}`.
//!
//! Evaluation outside the closed triangle is allowed and extrapolates the
//! polynomial.

use nalgebra::{Point2, SMatrix, Vector2};

pub const VERTICES: [Point2<f64>; 3] = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];

pub const MIDPOINTS: [Point2<f64>; 3] = [Point2::new(0.5, 0.0), Point2::new(0.5, 0.5), Point2::new(0.0, 0.5)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Quadratic function attached to a vertex: 1 there, 0 at the other
    /// vertices and at all midpoints.
    QuadraticVertex,
    /// Affine Crouzeix-Raviart function: 1 at one midpoint, 0 at the others.
    CrMidpoint,
    /// Quadratic Lagrange function of a midpoint (conforming P2 only).
    LagrangeMidpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReferenceBasis {
    pub kind: BasisKind,
    /// Local vertex or midpoint index, 0..3.
    pub index: usize,
}

impl ReferenceBasis {
    pub const fn vertex(index: usize) -> Self {
        Self { kind: BasisKind::QuadraticVertex, index }
    }

    pub const fn cr(index: usize) -> Self {
        Self { kind: BasisKind::CrMidpoint, index }
    }

    pub const fn lagrange_midpoint(index: usize) -> Self {
        Self { kind: BasisKind::LagrangeMidpoint, index }
    }

    pub fn eval(&self, p: &Point2<f64>) -> f64 {
        eval_basis(*self, p)
    }

    pub fn gradient(&self, p: &Point2<f64>) -> Vector2<f64> {
        eval_gradient(*self, p)
    }
}

/// The six NC1-C2 reference functions in the order
/// `phi_1, phi_2, phi_3` (vertex) then `phi_4, phi_5, phi_6` (midpoint).
pub const NC1C2_BASIS: [ReferenceBasis; 6] = [
    ReferenceBasis::vertex(0),
    ReferenceBasis::vertex(1),
    ReferenceBasis::vertex(2),
    ReferenceBasis::cr(0),
    ReferenceBasis::cr(1),
    ReferenceBasis::cr(2),
];

fn barycentric(p: &Point2<f64>) -> [f64; 3] {
    [1.0 - p.x - p.y, p.x, p.y]
}

pub fn eval_basis(b: ReferenceBasis, p: &Point2<f64>) -> f64 {
    let (x, y) = (p.x, p.y);
    match (b.kind, b.index) {
        (BasisKind::QuadraticVertex, 0) => (-1.0 + 2.0 * x + 2.0 * y) * (-1.0 + x + y),
        (BasisKind::QuadraticVertex, 1) => (2.0 * x - 1.0) * x,
        (BasisKind::QuadraticVertex, 2) => (2.0 * y - 1.0) * y,
        (BasisKind::CrMidpoint, 0) => 1.0 - 2.0 * y,
        (BasisKind::CrMidpoint, 1) => -1.0 + 2.0 * x + 2.0 * y,
        (BasisKind::CrMidpoint, 2) => 1.0 - 2.0 * x,
        (BasisKind::LagrangeMidpoint, i @ 0..=2) => {
            let l = barycentric(p);
            4.0 * l[i] * l[(i + 1) % 3]
        }
        (_, i) => panic!("local basis index {i} out of range"),
    }
}

pub fn eval_gradient(b: ReferenceBasis, p: &Point2<f64>) -> Vector2<f64> {
    let (x, y) = (p.x, p.y);
    match (b.kind, b.index) {
        (BasisKind::QuadraticVertex, 0) => {
            let d = 4.0 * (x + y) - 3.0;
            Vector2::new(d, d)
        }
        (BasisKind::QuadraticVertex, 1) => Vector2::new(4.0 * x - 1.0, 0.0),
        (BasisKind::QuadraticVertex, 2) => Vector2::new(0.0, 4.0 * y - 1.0),
        (BasisKind::CrMidpoint, 0) => Vector2::new(0.0, -2.0),
        (BasisKind::CrMidpoint, 1) => Vector2::new(2.0, 2.0),
        (BasisKind::CrMidpoint, 2) => Vector2::new(-2.0, 0.0),
        (BasisKind::LagrangeMidpoint, i @ 0..=2) => {
            let l = barycentric(p);
            let dl = [Vector2::new(-1.0, -1.0), Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0)];
            let j = (i + 1) % 3;
            (dl[i] * l[j] + dl[j] * l[i]) * 4.0
        }
        (_, i) => panic!("local basis index {i} out of range"),
    }
}

/// Coefficients of the local two-step interpolant from point values.
///
/// Returns `(vertex, midpoint)` coefficients: midpoint coefficients are the
/// midpoint values; vertex coefficients are the vertex values minus the
/// value of the midpoint (Crouzeix-Raviart) interpolant at that vertex.
pub fn two_step_coefficients(vertex_values: [f64; 3], midpoint_values: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let mut vertex = [0.0; 3];
    for (i, c) in vertex.iter_mut().enumerate() {
        let cr_at_vertex: f64 = (0..3)
            .map(|j| midpoint_values[j] * eval_basis(ReferenceBasis::cr(j), &VERTICES[i]))
            .sum();
        *c = vertex_values[i] - cr_at_vertex;
    }
    (vertex, midpoint_values)
}

/// Applies the six interpolation functionals to `f`, in basis order.
pub fn functionals<F: Fn(&Point2<f64>) -> f64>(f: F) -> [f64; 6] {
    let (v, m) = two_step_coefficients(VERTICES.map(|p| f(&p)), MIDPOINTS.map(|p| f(&p)));
    [v[0], v[1], v[2], m[0], m[1], m[2]]
}

#[derive(Debug, Clone)]
pub struct UnisolvenceReport {
    /// Entry `(j, k)` is functional `j` applied to basis function `k`.
    pub matrix: SMatrix<f64, 6, 6>,
    /// Max-norm distance of `matrix` from the identity.
    pub deviation: f64,
    pub condition_number: f64,
}

impl UnisolvenceReport {
    pub fn is_identity(&self, tol: f64) -> bool {
        self.deviation <= tol
    }
}

/// Builds the functional/basis matrix of the NC1-C2 element.
pub fn unisolvence_certificate() -> UnisolvenceReport {
    let mut matrix = SMatrix::<f64, 6, 6>::zeros();
    for (k, basis) in NC1C2_BASIS.iter().enumerate() {
        let column = functionals(|p| basis.eval(p));
        for (j, value) in column.iter().enumerate() {
            matrix[(j, k)] = *value;
        }
    }
    let deviation = (matrix - SMatrix::<f64, 6, 6>::identity()).abs().max();
    let sv = matrix.singular_values();
    let condition_number = sv.max() / sv.min();
    UnisolvenceReport { matrix, deviation, condition_number }
}
