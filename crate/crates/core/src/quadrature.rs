//! Symmetric quadrature on the reference triangle and Gauss-Legendre rules
//! on the unit interval.

use nalgebra::Point2;

use crate::error::{FemError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<Point2<f64>>,
    /// Weights sum to 1/2, the reference triangle area.
    pub weights: Vec<f64>,
    pub exact_degree: usize,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(&Point2<f64>) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Rule builder from barycentric orbits given for unit area.
struct Orbits {
    points: Vec<Point2<f64>>,
    weights: Vec<f64>,
}

impl Orbits {
    fn new() -> Self {
        Self { points: Vec::new(), weights: Vec::new() }
    }

    fn centroid(mut self, w: f64) -> Self {
        self.points.push(Point2::new(1.0 / 3.0, 1.0 / 3.0));
        self.weights.push(w);
        self
    }

    /// Barycentric permutations of (a, a, 1 - 2a).
    fn s21(mut self, a: f64, w: f64) -> Self {
        let b = 1.0 - 2.0 * a;
        for (x, y) in [(a, a), (b, a), (a, b)] {
            self.points.push(Point2::new(x, y));
            self.weights.push(w);
        }
        self
    }

    /// Barycentric permutations of (a, b, 1 - a - b).
    fn s111(mut self, a: f64, b: f64, w: f64) -> Self {
        let c = 1.0 - a - b;
        for (x, y) in [(a, b), (b, a), (b, c), (c, b), (c, a), (a, c)] {
            self.points.push(Point2::new(x, y));
            self.weights.push(w);
        }
        self
    }

    fn finish(self, exact_degree: usize) -> QuadratureRule {
        QuadratureRule {
            points: self.points,
            weights: self.weights.into_iter().map(|w| 0.5 * w).collect(),
            exact_degree,
        }
    }
}

/// Symmetric rule exact for polynomials of total degree `degree`.
///
/// Degree 1 uses the centroid, degree 2 the three edge midpoints, degrees
/// 3 to 5 the 7-point Radon rule and degree 6 the 12-point Dunavant rule.
pub fn triangle_rule(degree: usize) -> Result<QuadratureRule> {
    match degree {
        1 => Ok(Orbits::new().centroid(1.0).finish(1)),
        2 => {
            let mut rule = Orbits::new();
            for p in [(0.5, 0.0), (0.5, 0.5), (0.0, 0.5)] {
                rule.points.push(Point2::new(p.0, p.1));
                rule.weights.push(1.0 / 3.0);
            }
            Ok(rule.finish(2))
        }
        3..=5 => {
            let r15 = 15f64.sqrt();
            Ok(Orbits::new()
                .centroid(9.0 / 40.0)
                .s21((6.0 - r15) / 21.0, (155.0 - r15) / 1200.0)
                .s21((6.0 + r15) / 21.0, (155.0 + r15) / 1200.0)
                .finish(5))
        }
        6 => Ok(Orbits::new()
            .s21(0.063_089_014_491_502_228_340_331_602_870_819, 0.050_844_906_370_206_816_920_936_809_106_869)
            .s21(0.249_286_745_170_910_421_291_638_553_107_02, 0.116_786_275_726_379_366_025_289_611_385_58)
            .s111(
                0.053_145_049_844_816_947_353_249_671_631_398,
                0.310_352_451_033_784_405_416_607_733_956_55,
                0.082_851_075_618_373_575_193_553_456_420_442,
            )
            .finish(6)),
        d => Err(FemError::UnsupportedQuadrature(d)),
    }
}

/// Gauss-Legendre rule on `[0, 1]` as `(nodes, weights)`; weights sum to 1.
pub fn gauss_legendre_unit(points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (x, w): (Vec<f64>, Vec<f64>) = match points {
        1 => (vec![0.0], vec![2.0]),
        2 => {
            let a = 1.0 / 3f64.sqrt();
            (vec![-a, a], vec![1.0, 1.0])
        }
        3 => {
            let a = (0.6f64).sqrt();
            (vec![-a, 0.0, a], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
        }
        4 => {
            let s = (6.0f64 / 5.0).sqrt();
            let inner = ((3.0 - 2.0 * s) / 7.0).sqrt();
            let outer = ((3.0 + 2.0 * s) / 7.0).sqrt();
            let wi = (18.0 + 30f64.sqrt()) / 36.0;
            let wo = (18.0 - 30f64.sqrt()) / 36.0;
            (vec![-outer, -inner, inner, outer], vec![wo, wi, wi, wo])
        }
        n => return Err(FemError::InvalidArgument(format!("no {n}-point Gauss-Legendre rule"))),
    };
    Ok((x.iter().map(|t| 0.5 * (t + 1.0)).collect(), w.iter().map(|w| 0.5 * w).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Exact integral of x^a y^b over the reference triangle.
    fn monomial_integral(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn weights_sum_to_half() {
        for d in 1..=6 {
            let rule = triangle_rule(d).unwrap();
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 0.5).abs() < 1e-15, "degree {d}: {s}");
            assert!(rule.exact_degree >= d);
        }
    }

    #[test]
    fn monomials_integrated_exactly() {
        for d in 1..=6 {
            let rule = triangle_rule(d).unwrap();
            for a in 0..=rule.exact_degree as u32 {
                for b in 0..=(rule.exact_degree as u32 - a) {
                    let exact = monomial_integral(a, b);
                    let got = rule.integrate(|p| p.x.powi(a as i32) * p.y.powi(b as i32));
                    assert!(((got - exact) / exact).abs() < 1e-13, "degree {d} x^{a} y^{b}: {got} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn documented_values() {
        let r2 = triangle_rule(2).unwrap();
        assert!((r2.integrate(|_| 1.0) - 0.5).abs() < 1e-15);
        assert!((r2.integrate(|p| p.x) - 1.0 / 6.0).abs() < 1e-15);
        let r6 = triangle_rule(6).unwrap();
        assert_eq!(monomial_integral(3, 3), 1.0 / 1120.0);
        assert!((r6.integrate(|p| (p.x * p.y).powi(3)) - 1.0 / 1120.0).abs() < 1e-16);
    }

    #[test]
    fn points_inside_reference_triangle() {
        for d in 1..=6 {
            for p in triangle_rule(d).unwrap().points {
                assert!(p.x >= 0.0 && p.y >= 0.0 && p.x + p.y <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn unsupported_degree() {
        assert_eq!(triangle_rule(0), Err(FemError::UnsupportedQuadrature(0)));
        assert_eq!(triangle_rule(7), Err(FemError::UnsupportedQuadrature(7)));
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in 1..=4usize {
            let (x, w) = gauss_legendre_unit(n).unwrap();
            for k in 0..(2 * n) as i32 {
                let got: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(k)).sum();
                assert!((got - 1.0 / (k as f64 + 1.0)).abs() < 1e-15, "{n} points, t^{k}");
            }
        }
        assert!(gauss_legendre_unit(5).is_err());
    }
}
