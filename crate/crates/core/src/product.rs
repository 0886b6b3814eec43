//! Points of the product space X×ℝ and the hyperplane A = X×{0}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An iterate z = (x, ρ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductPoint {
    pub x: Vec<f64>,
    pub rho: f64,
}

impl ProductPoint {
    pub fn new(x: Vec<f64>, rho: f64) -> Self {
        ProductPoint { x, rho }
    }

    pub fn scalar(x: f64, rho: f64) -> Self {
        ProductPoint { x: vec![x], rho }
    }

    pub fn dimension(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.x.iter().all(|v| v.is_finite())
    }

    /// Euclidean norm √(‖x‖² + ρ²).
    pub fn norm(&self) -> f64 {
        let s: f64 = self.x.iter().map(|v| v * v).sum::<f64>() + self.rho * self.rho;
        s.sqrt()
    }

    pub fn distance(&self, other: &ProductPoint) -> f64 {
        debug_assert_eq!(self.x.len(), other.x.len());
        let s: f64 = self
            .x
            .iter()
            .zip(&other.x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            + (self.rho - other.rho) * (self.rho - other.rho);
        s.sqrt()
    }

    pub fn sub(&self, other: &ProductPoint) -> ProductPoint {
        ProductPoint {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a - b).collect(),
            rho: self.rho - other.rho,
        }
    }

    pub fn dot(&self, other: &ProductPoint) -> f64 {
        self.x.iter().zip(&other.x).map(|(a, b)| a * b).sum::<f64>() + self.rho * other.rho
    }

    pub(crate) fn validate(&self, dimension: usize) -> Result<()> {
        if self.x.len() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                got: self.x.len(),
            });
        }
        if !self.is_finite() {
            return Err(Error::NonFinite(format!("{:?}", self)));
        }
        Ok(())
    }
}

/// P_A(x, ρ) = (x, 0).
pub fn project_a(z: &ProductPoint) -> ProductPoint {
    ProductPoint {
        x: z.x.clone(),
        rho: 0.0,
    }
}

/// R_A(x, ρ) = (x, −ρ).
pub fn reflect_a(z: &ProductPoint) -> ProductPoint {
    ProductPoint {
        x: z.x.clone(),
        rho: -z.rho,
    }
}

/// Tolerances and search parameters shared by every solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericConfig {
    pub step_tolerance: f64,
    pub residual_tolerance: f64,
    pub max_iterations: usize,
    /// Samples per arc for the uniform scan used on functions without a slope bound.
    pub projection_grid_points: usize,
    pub projection_refine_tolerance: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            step_tolerance: 1e-10,
            residual_tolerance: 1e-10,
            max_iterations: 10_000,
            projection_grid_points: 4097,
            projection_refine_tolerance: 1e-12,
        }
    }
}

impl NumericConfig {
    /// Same as the default but with both stopping tolerances set to `tol`.
    pub fn with_tolerance(tol: f64) -> Self {
        NumericConfig {
            step_tolerance: tol,
            residual_tolerance: tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("step_tolerance", self.step_tolerance)?;
        positive("residual_tolerance", self.residual_tolerance)?;
        positive("projection_refine_tolerance", self.projection_refine_tolerance)?;
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if self.projection_grid_points < 3 {
            return Err(Error::InvalidConfig("projection_grid_points must be at least 3".into()));
        }
        Ok(())
    }
}
