//! The Douglas–Rachford operator for A = X×{0} and B = gra f.
//!
//! T(x, ρ) = (0, ρ) + P_B(x, −ρ), so one step maps (x, ρ) to (p, ρ + f(p))
//! where (p, f(p)) is a nearest point of the graph to (x, −ρ). On smooth
//! pieces the step is inverted by T⁻¹(y, σ) = (y + σ∇f(y), σ − f(y)).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::FunctionModel;
use crate::product::{NumericConfig, ProductPoint};
use crate::projection::{project_graph, GraphProjection};

/// Iterates with norm beyond this are reported as diverged.
pub const DIVERGENCE_BOUND: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// Steps and residual are small but ρ is not: a critical fixed point.
    StepTolerance,
    /// Steps, residual and ρ are small: a point of A ∩ B.
    ResidualTolerance,
    MaxIterations,
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    DouglasRachford,
    AlternatingProjections,
    Newton,
}

/// Which nearest point to follow when P_B is multivalued.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionPolicy {
    /// Lowest p.
    #[default]
    First,
    /// Nearest to the current abscissa.
    #[serde(alias = "nearest_to_previous")]
    Nearest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub method: Method,
    pub iterates: Vec<ProductPoint>,
    /// f(xₙ), absent where xₙ lies outside dom f.
    pub f_values: Vec<Option<f64>>,
    pub step_norms: Vec<f64>,
    pub selection_indices: Vec<usize>,
    pub termination: Termination,
    pub step_tolerance: f64,
}

impl Trajectory {
    pub fn last(&self) -> &ProductPoint {
        self.iterates.last().expect("trajectory has at least one iterate")
    }

    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedPointClass {
    Intersection,
    CriticalPositiveRho,
    CriticalNegativeRho,
    NotFixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub point: ProductPoint,
    pub is_fixed: bool,
    pub classification: FixedPointClass,
    /// ‖Tz − z‖ for the best selection.
    pub residual: f64,
}

fn step_from(z: &ProductPoint, g: &GraphProjection) -> ProductPoint {
    ProductPoint {
        x: g.p.clone(),
        rho: z.rho + g.fp,
    }
}

/// One step z₊ = (p, ρ + f(p)) using the projection with index `selection`.
pub fn dr_step(m: &FunctionModel, z: &ProductPoint, cfg: &NumericConfig, selection: usize) -> Result<ProductPoint> {
    z.validate(m.dimension())?;
    let projections = project_graph(m, &z.x, -z.rho, cfg)?;
    let g = projections.get(selection).ok_or(Error::InvalidSelection {
        index: selection,
        available: projections.len(),
    })?;
    Ok(step_from(z, g))
}

fn dr_step_policy(
    m: &FunctionModel,
    z: &ProductPoint,
    cfg: &NumericConfig,
    policy: SelectionPolicy,
) -> Result<(ProductPoint, usize)> {
    let projections = project_graph(m, &z.x, -z.rho, cfg)?;
    let idx = match policy {
        SelectionPolicy::First => 0,
        SelectionPolicy::Nearest => {
            let dist = |g: &GraphProjection| -> f64 {
                g.p.iter().zip(&z.x).map(|(a, b)| (a - b) * (a - b)).sum()
            };
            (0..projections.len())
                .min_by(|&a, &b| dist(&projections[a]).total_cmp(&dist(&projections[b])))
                .unwrap_or(0)
        }
    };
    Ok((step_from(z, &projections[idx]), idx))
}

/// T⁻¹(y, σ) = (y + σ∇f(y), σ − f(y)).
pub fn dr_inverse(m: &FunctionModel, z: &ProductPoint) -> Result<ProductPoint> {
    z.validate(m.dimension())?;
    let fy = m.evaluate(&z.x)?;
    let g = m
        .gradient(&z.x)?
        .ok_or_else(|| Error::Unsupported(format!("f is not differentiable at {:?}", z.x)))?;
    Ok(ProductPoint {
        x: z.x.iter().zip(&g).map(|(y, d)| y + z.rho * d).collect(),
        rho: z.rho - fy,
    })
}

/// Runs the iteration from z0 until the stopping rule, the iteration cap, or
/// divergence.
pub fn iterate(
    m: &FunctionModel,
    z0: &ProductPoint,
    cfg: &NumericConfig,
    policy: SelectionPolicy,
) -> Result<Trajectory> {
    iterate_until(m, z0, cfg, policy, |_| false)
}

/// As [`iterate`], but also stops (with `ResidualTolerance`) as soon as
/// `target_reached` accepts an iterate, including z0.
pub fn iterate_until(
    m: &FunctionModel,
    z0: &ProductPoint,
    cfg: &NumericConfig,
    policy: SelectionPolicy,
    mut target_reached: impl FnMut(&ProductPoint) -> bool,
) -> Result<Trajectory> {
    cfg.validate()?;
    z0.validate(m.dimension())?;
    let f_at = |z: &ProductPoint| m.in_domain(&z.x).then(|| m.evaluate(&z.x).ok()).flatten();
    let rho_tol = classification_tolerance(cfg);
    let mut t = Trajectory {
        method: Method::DouglasRachford,
        iterates: vec![z0.clone()],
        f_values: vec![f_at(z0)],
        step_norms: Vec::new(),
        selection_indices: Vec::new(),
        termination: Termination::MaxIterations,
        step_tolerance: cfg.step_tolerance,
    };
    if z0.norm() > DIVERGENCE_BOUND {
        t.termination = Termination::Diverged;
        return Ok(t);
    }
    if target_reached(z0) {
        t.termination = Termination::ResidualTolerance;
        return Ok(t);
    }
    for _ in 0..cfg.max_iterations {
        let z = t.last().clone();
        let (next, idx) = dr_step_policy(m, &z, cfg, policy)?;
        let step = next.distance(&z);
        let f_prev = *t.f_values.last().unwrap();
        t.f_values.push(f_at(&next));
        t.step_norms.push(step);
        t.selection_indices.push(idx);
        t.iterates.push(next);
        let next = t.last();
        if next.norm() > DIVERGENCE_BOUND {
            t.termination = Termination::Diverged;
            return Ok(t);
        }
        if target_reached(next) {
            t.termination = Termination::ResidualTolerance;
            return Ok(t);
        }
        let residual_small = f_prev.is_some_and(|f| f.abs() <= cfg.residual_tolerance);
        if step <= cfg.step_tolerance && residual_small {
            t.termination = if next.rho.abs() <= rho_tol {
                Termination::ResidualTolerance
            } else {
                Termination::StepTolerance
            };
            return Ok(t);
        }
    }
    t.termination = Termination::MaxIterations;
    Ok(t)
}

/// Common tolerance for fixed-point tests: ten times the looser stopping tolerance.
pub fn classification_tolerance(cfg: &NumericConfig) -> f64 {
    10.0 * cfg.step_tolerance.max(cfg.residual_tolerance)
}

/// Decides whether z is fixed and, if so, whether it is a point of A ∩ B or a
/// critical fixed point (f(x) = 0 and 0 ∈ ∂f(x) for ρ > 0, 0 ∈ ∂⁺f(x) for ρ < 0).
pub fn classify_fixed_point(m: &FunctionModel, z: &ProductPoint, cfg: &NumericConfig) -> Result<FixedPointReport> {
    z.validate(m.dimension())?;
    let tol = classification_tolerance(cfg);
    let projections = project_graph(m, &z.x, -z.rho, cfg)?;
    let residual = projections
        .iter()
        .map(|g| step_from(z, g).distance(z))
        .fold(f64::INFINITY, f64::min);
    let is_fixed = residual <= tol;
    let mut classification = FixedPointClass::NotFixed;
    if is_fixed && m.in_domain(&z.x) {
        let fx = m.evaluate(&z.x)?;
        if fx.abs() <= tol {
            if z.rho.abs() <= tol {
                classification = FixedPointClass::Intersection;
            } else if z.rho > 0.0 && m.limiting_subdifferential(&z.x)?.contains_zero(tol) {
                classification = FixedPointClass::CriticalPositiveRho;
            } else if z.rho < 0.0 && m.upper_subdifferential(&z.x)?.contains_zero(tol) {
                classification = FixedPointClass::CriticalNegativeRho;
            }
        }
    }
    Ok(FixedPointReport {
        point: z.clone(),
        is_fixed,
        classification,
        residual,
    })
}
