//! Compressed sparse row storage for symmetric matrices, plus an envelope
//! Cholesky factorization used to certify positive definiteness.

use std::collections::VecDeque;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{FemError, Result};

/// Square CSR matrix holding both triangles of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymmetricMatrix {
    /// Zero matrix with the given sparsity pattern. Each row's column list is
    /// sorted and deduplicated.
    pub fn from_pattern(dim: usize, mut rows: Vec<Vec<usize>>) -> Self {
        assert_eq!(rows.len(), dim);
        let mut row_ptr = Vec::with_capacity(dim + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for row in rows.iter_mut() {
            row.sort_unstable();
            row.dedup();
            col_idx.extend_from_slice(row);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        Self { dim, row_ptr, col_idx, values: vec![0.0; nnz] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::from_pattern(dim, (0..dim).map(|i| vec![i]).collect());
        m.values.fill(1.0);
        m
    }

    /// Dense-to-sparse conversion keeping exact zeros out of the pattern.
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let pattern = rows
            .iter()
            .map(|r| (0..dim).filter(|&j| r[j] != 0.0).collect())
            .collect();
        let mut m = Self::from_pattern(dim, pattern);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                if *v != 0.0 {
                    *m.entry_mut(i, j).unwrap() = *v;
                }
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    fn position(&self, i: usize, j: usize) -> Option<usize> {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].binary_search(&j).ok().map(|p| range.start + p)
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> Option<&mut f64> {
        self.position(i, j).map(move |p| &mut self.values[p])
    }

    /// Adds `v` to entry `(i, j)`, which must be in the pattern.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let p = self.position(i, j).unwrap_or_else(|| panic!("({i}, {j}) not in sparsity pattern"));
        self.values[p] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |p| self.values[p])
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> impl Iterator<Item = (usize, &mut f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter_mut())
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    /// Row-parallel product; every row is still summed in column order.
    pub fn par_mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        });
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Largest `|a_ij - a_ji|` relative to the largest `|a_ij|`.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst / scale
    }

    /// True when every stored `a_ij` has an identical `a_ji`.
    pub fn is_exactly_symmetric(&self) -> bool {
        (0..self.dim).all(|i| self.row(i).all(|(j, v)| self.position(j, i).is_some_and(|p| self.values[p] == v)))
    }

    /// Principal submatrix on `keep` (in the given order).
    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.dim];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let pattern = keep
            .iter()
            .map(|&old| self.row(old).filter(|(j, _)| map[*j] != usize::MAX).map(|(j, _)| map[j]).collect())
            .collect();
        let mut sub = Self::from_pattern(keep.len(), pattern);
        for (new, &old) in keep.iter().enumerate() {
            for (j, v) in self.row(old) {
                if map[j] != usize::MAX {
                    sub.add(new, map[j], v);
                }
            }
        }
        sub
    }

    /// Matrix Market coordinate format, `symmetric` qualifier, lower
    /// triangle, 1-based indices.
    pub fn write_matrix_market<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let lower: Vec<(usize, usize, f64)> = (0..self.dim)
            .flat_map(|i| self.row(i).filter(move |(j, _)| *j <= i).map(move |(j, v)| (i, j, v)))
            .collect();
        writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
        writeln!(out, "{} {} {}", self.dim, self.dim, lower.len())?;
        for (i, j, v) in lower {
            writeln!(out, "{} {} {:e}", i + 1, j + 1, v)?;
        }
        Ok(())
    }

    /// Reverse Cuthill-McKee ordering of the matrix graph.
    pub fn reverse_cuthill_mckee(&self) -> Vec<usize> {
        let degree: Vec<usize> = (0..self.dim).map(|i| self.row_ptr[i + 1] - self.row_ptr[i]).collect();
        let mut visited = vec![false; self.dim];
        let mut order = Vec::with_capacity(self.dim);
        while order.len() < self.dim {
            let start = (0..self.dim).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]).expect("unvisited node");
            visited[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                order.push(i);
                let mut next: Vec<usize> = self.row(i).map(|(j, _)| j).filter(|&j| !visited[j]).collect();
                next.sort_by_key(|&j| (degree[j], j));
                for j in next {
                    visited[j] = true;
                    queue.push_back(j);
                }
            }
        }
        order.reverse();
        order
    }

    /// Envelope (skyline) Cholesky after RCM reordering. Succeeds exactly when
    /// every pivot is positive, which certifies positive definiteness.
    pub fn cholesky_check(&self) -> Result<()> {
        let perm = self.reverse_cuthill_mckee();
        let a = self.principal_submatrix(&perm);
        let n = a.dim;
        // first stored column of each row in the lower triangle
        let first: Vec<usize> = (0..n).map(|i| a.row(i).map(|(j, _)| j).next().unwrap_or(i).min(i)).collect();
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + i - first[i] + 1);
        }
        let mut env = vec![0.0; start[n]];
        for i in 0..n {
            for (j, v) in a.row(i).filter(|(j, _)| *j <= i) {
                env[start[i] + j - first[i]] = v;
            }
        }
        for i in 0..n {
            for j in first[i]..=i {
                let lo = first[i].max(first[j]);
                let mut s = env[start[i] + j - first[i]];
                for k in lo..j {
                    s -= env[start[i] + k - first[i]] * env[start[j] + k - first[j]];
                }
                if j == i {
                    if !(s > 0.0) {
                        return Err(FemError::NotPositiveDefinite { row: perm[i], pivot: s });
                    }
                    env[start[i] + i - first[i]] = s.sqrt();
                } else {
                    env[start[i] + j - first[i]] = s / env[start[j] + j - first[j]];
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> SparseSymmetricMatrix {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2.0,
                        1 => -1.0,
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect();
        SparseSymmetricMatrix::from_dense(&rows)
    }

    #[test]
    fn pattern_and_access() {
        let mut m = SparseSymmetricMatrix::from_pattern(3, vec![vec![1, 0, 1], vec![0, 1], vec![2]]);
        assert_eq!(m.nnz(), 5);
        m.add(0, 1, 2.5);
        m.add(1, 0, 2.5);
        assert_eq!(m.get(0, 1), 2.5);
        assert_eq!(m.get(2, 0), 0.0);
        assert!(m.is_exactly_symmetric());
        m.add(0, 1, 1e-3);
        assert!(!m.is_exactly_symmetric());
        assert!(m.symmetry_defect() > 0.0);
    }

    #[test]
    #[should_panic(expected = "not in sparsity pattern")]
    fn add_outside_pattern_panics() {
        let mut m = SparseSymmetricMatrix::identity(2);
        m.add(0, 1, 1.0);
    }

    #[test]
    fn matvec_and_parallel_agree() {
        let m = laplacian_1d(50);
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut y = vec![0.0; 50];
        m.par_mul_vec_into(&x, &mut y);
        assert_eq!(m.mul_vec(&x), y);
        assert_eq!(m.mul_vec(&vec![1.0; 50])[10], 0.0);
    }

    #[test]
    fn cholesky_accepts_spd_and_rejects_indefinite() {
        assert!(laplacian_1d(40).cholesky_check().is_ok());
        let singular = SparseSymmetricMatrix::from_dense(&[vec![1.0, -1.0], vec![-1.0, 1.0]]);
        assert!(matches!(singular.cholesky_check(), Err(FemError::NotPositiveDefinite { .. })));
        let indefinite = SparseSymmetricMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(indefinite.cholesky_check().is_err());
    }

    #[test]
    fn rcm_is_a_permutation() {
        let m = laplacian_1d(17);
        let mut p = m.reverse_cuthill_mckee();
        p.sort_unstable();
        assert_eq!(p, (0..17).collect::<Vec<_>>());
    }

    #[test]
    fn submatrix() {
        let m = laplacian_1d(5);
        let s = m.principal_submatrix(&[1, 2, 4]);
        assert_eq!(s.get(0, 1), -1.0);
        assert_eq!(s.get(1, 2), 0.0);
        assert_eq!(s.get(2, 2), 2.0);
    }

    #[test]
    fn matrix_market_header() {
        let mut buf = Vec::new();
        laplacian_1d(3).write_matrix_market(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "%%MatrixMarket matrix coordinate real symmetric");
        assert_eq!(lines[1], "3 3 5");
        assert_eq!(lines[2], "1 1 2e0");
        assert_eq!(lines[3], "2 1 -1e0");
    }
}
