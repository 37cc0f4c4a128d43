//! Conforming triangulations of the unit square with full edge topology.
//!
//! Triangles are stored counterclockwise. Local edge `i` of a triangle joins
//! its local vertices `i` and `(i + 1) % 3`, so on the reference triangle
//! local edge 0 is the bottom side, 1 the hypotenuse and 2 the left side.

use std::collections::HashMap;
use std::io::Write;

use nalgebra::{Matrix2, Point2, Vector2};

use crate::error::{FemError, Result};

/// Vertices and triangles without topology.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    pub vertices: Vec<Point2<f64>>,
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Endpoint vertex indices, smaller index first.
    pub endpoints: [usize; 2],
    pub midpoint: Point2<f64>,
    pub length: f64,
    pub boundary: bool,
    /// Adjacent triangles. The first one is the triangle the edge normal
    /// points out of.
    pub neighbors: (usize, Option<usize>),
    /// Unit normal, outward with respect to `neighbors.0`.
    pub normal: Vector2<f64>,
}

impl Edge {
    /// Point at parameter `t` in `[0, 1]`, measured from `endpoints[0]`.
    pub fn point_at(&self, mesh: &Mesh, t: f64) -> Point2<f64> {
        let a = mesh.vertices[self.endpoints[0]];
        let b = mesh.vertices[self.endpoints[1]];
        a + (b - a) * t
    }
}

/// Affine map `x = origin + jacobian * xi` from the reference triangle
/// `(0,0), (1,0), (0,1)` onto a physical triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub origin: Point2<f64>,
    pub jacobian: Matrix2<f64>,
    pub det: f64,
    pub inverse_transpose: Matrix2<f64>,
}

impl AffineMap {
    pub fn from_vertices(a: Point2<f64>, b: Point2<f64>, c: Point2<f64>) -> Option<Self> {
        let jacobian = Matrix2::from_columns(&[b - a, c - a]);
        let det = jacobian.determinant();
        let scale = (b - a).norm_squared().max((c - a).norm_squared());
        if !(det > 1e-14 * scale) {
            return None;
        }
        let inverse = Matrix2::new(jacobian[(1, 1)], -jacobian[(0, 1)], -jacobian[(1, 0)], jacobian[(0, 0)]) / det;
        Some(Self {
            origin: a,
            jacobian,
            det,
            inverse_transpose: inverse.transpose(),
        })
    }

    pub fn apply(&self, xi: &Point2<f64>) -> Point2<f64> {
        self.origin + self.jacobian * xi.coords
    }

    /// Inverse map from physical to reference coordinates.
    pub fn pull_back(&self, x: &Point2<f64>) -> Point2<f64> {
        Point2::from(self.inverse_transpose.transpose() * (x - self.origin))
    }

    /// Physical gradient from a reference gradient.
    pub fn push_gradient(&self, g: &Vector2<f64>) -> Vector2<f64> {
        self.inverse_transpose * g
    }

    pub fn area(&self) -> f64 {
        0.5 * self.det
    }
}

/// Immutable triangulation with edge table.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point2<f64>>,
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<Edge>,
    /// For each triangle the global index of local edges 0, 1, 2.
    pub triangle_edges: Vec<[usize; 3]>,
    /// +1 where the local edge runs from the smaller to the larger vertex index.
    pub edge_signs: Vec<[i8; 3]>,
    pub h_max: f64,
}

/// Uniform `n x n` mesh of the unit square, each cell cut along the
/// lower-left to upper-right diagonal.
pub fn generate_structured(n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(FemError::InvalidArgument("structured mesh needs n >= 1".into()));
    }
    let step = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Point2::new(i as f64 * step, j as f64 * step));
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let a = j * (n + 1) + i;
            let b = a + 1;
            let c = a + n + 2;
            let d = a + n + 1;
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    build_edges(Triangulation { vertices, triangles })
}

/// Orients triangles counterclockwise and builds the edge table.
///
/// Edges are numbered in order of first appearance while walking triangles
/// and their local edges.
pub fn build_edges(t: Triangulation) -> Result<Mesh> {
    let Triangulation { vertices, mut triangles } = t;
    for (k, tri) in triangles.iter_mut().enumerate() {
        for &v in tri.iter() {
            if v >= vertices.len() {
                return Err(FemError::BadVertexIndex(k, v, vertices.len()));
            }
        }
        let [a, b, c] = tri.map(|v| vertices[v]);
        let area2 = (b - a).perp(&(c - a));
        if area2 < 0.0 {
            tri.swap(1, 2);
        }
        let [a, b, c] = tri.map(|v| vertices[v]);
        if AffineMap::from_vertices(a, b, c).is_none() {
            return Err(FemError::DegenerateTriangle(k, 0.5 * area2));
        }
    }

    let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
    let mut adjacency: Vec<Vec<usize>> = Vec::new();
    let mut endpoints: Vec<[usize; 2]> = Vec::new();
    let mut triangle_edges = Vec::with_capacity(triangles.len());
    let mut edge_signs = Vec::with_capacity(triangles.len());
    for (k, tri) in triangles.iter().enumerate() {
        let mut local = [0usize; 3];
        let mut signs = [0i8; 3];
        for i in 0..3 {
            let (p, q) = (tri[i], tri[(i + 1) % 3]);
            let key = (p.min(q), p.max(q));
            let e = *lookup.entry(key).or_insert_with(|| {
                adjacency.push(Vec::with_capacity(2));
                endpoints.push([key.0, key.1]);
                endpoints.len() - 1
            });
            adjacency[e].push(k);
            local[i] = e;
            signs[i] = if p < q { 1 } else { -1 };
        }
        triangle_edges.push(local);
        edge_signs.push(signs);
    }

    let mut edges = Vec::with_capacity(endpoints.len());
    for (e, (ends, adj)) in endpoints.iter().zip(&adjacency).enumerate() {
        if adj.len() > 2 {
            return Err(FemError::Nonconforming(ends[0], ends[1], adj.len()));
        }
        let (a, b) = (vertices[ends[0]], vertices[ends[1]]);
        let first = adj[0];
        let tangent = b - a;
        let length = tangent.norm();
        let mut normal = Vector2::new(tangent.y, -tangent.x) / length;
        // flip to point out of the first neighbor
        let li = triangle_edges[first].iter().position(|&x| x == e).expect("edge registered");
        let opposite = vertices[triangles[first][(li + 2) % 3]];
        if normal.dot(&(opposite - a)) > 0.0 {
            normal = -normal;
        }
        edges.push(Edge {
            endpoints: *ends,
            midpoint: Point2::from((a.coords + b.coords) * 0.5),
            length,
            boundary: adj.len() == 1,
            neighbors: (first, adj.get(1).copied()),
            normal,
        });
    }

    let mut h_max: f64 = 0.0;
    for tri in &triangle_edges {
        for &e in tri {
            h_max = h_max.max(edges[e].length);
        }
    }

    Ok(Mesh {
        vertices,
        triangles,
        edges,
        triangle_edges,
        edge_signs,
        h_max,
    })
}

impl Mesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn affine_map(&self, k: usize) -> Result<AffineMap> {
        let tri = self
            .triangles
            .get(k)
            .ok_or_else(|| FemError::InvalidArgument(format!("triangle index {k} out of range")))?;
        let [a, b, c] = tri.map(|v| self.vertices[v]);
        AffineMap::from_vertices(a, b, c).ok_or_else(|| FemError::DegenerateTriangle(k, 0.5 * (b - a).perp(&(c - a))))
    }

    /// Longest side of triangle `k`.
    pub fn diameter(&self, k: usize) -> f64 {
        self.triangle_edges[k]
            .iter()
            .map(|&e| self.edges[e].length)
            .fold(0.0, f64::max)
    }

    /// Local index (0..3) of edge `e` inside triangle `k`.
    pub fn local_edge(&self, k: usize, e: usize) -> Option<usize> {
        self.triangle_edges[k].iter().position(|&x| x == e)
    }

    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for e in self.edges.iter().filter(|e| e.boundary) {
            flags[e.endpoints[0]] = true;
            flags[e.endpoints[1]] = true;
        }
        flags
    }

    /// Lowest-index triangle containing each vertex.
    pub fn vertex_owners(&self) -> Vec<usize> {
        let mut owner = vec![usize::MAX; self.vertices.len()];
        for (k, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                if owner[v] == usize::MAX {
                    owner[v] = k;
                }
            }
        }
        owner
    }

    /// Plain text dump: `v x y` per vertex, then `t i j k` per triangle.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for p in &self.vertices {
            writeln!(out, "v {} {}", p.x, p.y)?;
        }
        for t in &self.triangles {
            writeln!(out, "t {} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }
}
