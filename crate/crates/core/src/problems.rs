//! Manufactured-solution problems on the unit square.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Point2, Vector2};

use crate::error::FemError;

/// A Poisson problem `-Δu = f` with known solution.
#[derive(Clone, Copy)]
pub struct Problem {
    pub name: &'static str,
    pub source: fn(&Point2<f64>) -> f64,
    pub exact: fn(&Point2<f64>) -> f64,
    pub gradient: fn(&Point2<f64>) -> Vector2<f64>,
    /// Exact solution vanishes on the boundary.
    pub homogeneous: bool,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem").field("name", &self.name).field("homogeneous", &self.homogeneous).finish()
    }
}

impl PartialEq for Problem {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Problem {
    pub const NAMES: [&'static str; 3] = ["sine", "patch", "quad"];

    /// `u = sin(πx) sin(πy)`, `f = 2π² sin(πx) sin(πy)`, zero boundary data.
    pub fn sine() -> Self {
        Self {
            name: "sine",
            source: |p| 2.0 * PI * PI * (PI * p.x).sin() * (PI * p.y).sin(),
            exact: |p| (PI * p.x).sin() * (PI * p.y).sin(),
            gradient: |p| {
                Vector2::new(
                    PI * (PI * p.x).cos() * (PI * p.y).sin(),
                    PI * (PI * p.x).sin() * (PI * p.y).cos(),
                )
            },
            homogeneous: true,
        }
    }

    /// Linear patch test `u = 1 + 2x + 3y`, `f = 0`.
    pub fn patch() -> Self {
        Self {
            name: "patch",
            source: |_| 0.0,
            exact: |p| 1.0 + 2.0 * p.x + 3.0 * p.y,
            gradient: |_| Vector2::new(2.0, 3.0),
            homogeneous: false,
        }
    }

    /// `u = x² + y²`, `f = -4`.
    pub fn quadratic() -> Self {
        Self {
            name: "quad",
            source: |_| -4.0,
            exact: |p| p.x * p.x + p.y * p.y,
            gradient: |p| Vector2::new(2.0 * p.x, 2.0 * p.y),
            homogeneous: false,
        }
    }
}

impl FromStr for Problem {
    type Err = FemError;

    fn from_str(s: &str) -> Result<Self, FemError> {
        match s {
            "sine" => Ok(Problem::sine()),
            "patch" => Ok(Problem::patch()),
            "quad" => Ok(Problem::quadratic()),
            other => Err(FemError::InvalidArgument(format!("unknown problem '{other}'"))),
        }
    }
}
