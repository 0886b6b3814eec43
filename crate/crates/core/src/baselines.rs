//! Reference methods: alternating projections and Newton's method.

use serde::{Deserialize, Serialize};

use crate::douglas_rachford::{iterate, Method, SelectionPolicy, Termination, Trajectory, DIVERGENCE_BOUND};
use crate::error::{Error, Result};
use crate::functions::FunctionModel;
use crate::product::{NumericConfig, ProductPoint};
use crate::projection::project_graph;

/// Consecutive MAP iterates closer than this count as coincident.
pub const MAP_STALL_THRESHOLD: f64 = 1e-12;

/// z₊ ∈ P_B P_A z = P_B(x, 0).
pub fn map_step(m: &FunctionModel, z: &ProductPoint, cfg: &NumericConfig, selection: usize) -> Result<ProductPoint> {
    z.validate(m.dimension())?;
    let projections = project_graph(m, &z.x, 0.0, cfg)?;
    let g = projections.get(selection).ok_or(Error::InvalidSelection {
        index: selection,
        available: projections.len(),
    })?;
    Ok(ProductPoint::new(g.p.clone(), g.fp))
}

/// x − f(x)/f′(x); in ℝⁿ the minimum-norm solution x − f(x)∇f(x)/‖∇f(x)‖².
pub fn newton_step(m: &FunctionModel, x: &[f64]) -> Result<Vec<f64>> {
    let f = m.evaluate(x)?;
    let g = m.gradient(x)?.ok_or_else(|| Error::NotDifferentiable { x: x.to_vec() })?;
    let gg: f64 = g.iter().map(|v| v * v).sum();
    if gg == 0.0 || !gg.is_finite() {
        return Err(Error::DerivativeSingular { x: x.to_vec() });
    }
    Ok(x.iter().zip(&g).map(|(xi, gi)| xi - f * gi / gg).collect())
}

fn f_or_none(m: &FunctionModel, x: &[f64]) -> Option<f64> {
    m.in_domain(x).then(|| m.evaluate(x).ok()).flatten()
}

fn empty_trajectory(method: Method, z0: &ProductPoint, f0: Option<f64>, cfg: &NumericConfig) -> Trajectory {
    Trajectory {
        method,
        iterates: vec![z0.clone()],
        f_values: vec![f0],
        step_norms: Vec::new(),
        selection_indices: Vec::new(),
        termination: Termination::MaxIterations,
        step_tolerance: cfg.step_tolerance,
    }
}

/// Alternating projections from z0. Stops on convergence, on a stall
/// (coincident iterates with |f| above tolerance), on divergence, or at the
/// iteration cap.
pub fn run_map(m: &FunctionModel, z0: &ProductPoint, cfg: &NumericConfig) -> Result<Trajectory> {
    cfg.validate()?;
    z0.validate(m.dimension())?;
    let mut t = empty_trajectory(Method::AlternatingProjections, z0, f_or_none(m, &z0.x), cfg);
    for _ in 0..cfg.max_iterations {
        let z = t.last().clone();
        let next = map_step(m, &z, cfg, 0)?;
        let step = next.distance(&z);
        let f_prev = *t.f_values.last().unwrap();
        let f_next = f_or_none(m, &next.x);
        t.f_values.push(f_next);
        t.step_norms.push(step);
        t.selection_indices.push(0);
        t.iterates.push(next);
        if t.last().norm() > DIVERGENCE_BOUND {
            t.termination = Termination::Diverged;
            return Ok(t);
        }
        let small = |f: Option<f64>| f.is_some_and(|f| f.abs() <= cfg.residual_tolerance);
        if step <= cfg.step_tolerance && small(f_prev) {
            t.termination = Termination::ResidualTolerance;
            return Ok(t);
        }
        if step <= MAP_STALL_THRESHOLD && !small(f_next) {
            t.termination = Termination::StepTolerance;
            return Ok(t);
        }
    }
    Ok(t)
}

/// Newton's method from x0; iterates are stored as (xₙ, 0). A step that is
/// not defined ends the run with the error.
pub fn run_newton(m: &FunctionModel, x0: &[f64], cfg: &NumericConfig) -> Result<(Trajectory, Option<Error>)> {
    cfg.validate()?;
    let z0 = ProductPoint::new(x0.to_vec(), 0.0);
    z0.validate(m.dimension())?;
    let mut t = empty_trajectory(Method::Newton, &z0, f_or_none(m, x0), cfg);
    for _ in 0..cfg.max_iterations {
        let x = t.last().x.clone();
        let next = match newton_step(m, &x) {
            Ok(v) => v,
            Err(e) => return Ok((t, Some(e))),
        };
        let z = ProductPoint::new(next, 0.0);
        let step = z.distance(t.last());
        let f_prev = *t.f_values.last().unwrap();
        t.f_values.push(f_or_none(m, &z.x));
        t.step_norms.push(step);
        t.selection_indices.push(0);
        t.iterates.push(z);
        if !t.last().is_finite() || t.last().norm() > DIVERGENCE_BOUND {
            t.termination = Termination::Diverged;
            return Ok((t, None));
        }
        if step <= cfg.step_tolerance && f_prev.is_some_and(|f| f.abs() <= cfg.residual_tolerance) {
            t.termination = Termination::ResidualTolerance;
            return Ok((t, None));
        }
    }
    Ok((t, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MethodVerdict {
    ConvergedToSolution,
    Stalled,
    Diverged,
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRun {
    pub trajectory: Trajectory,
    pub verdict: MethodVerdict,
    /// Why the run stopped early, if a step was undefined.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub douglas_rachford: MethodRun,
    pub alternating_projections: MethodRun,
    pub newton: MethodRun,
}

fn verdict_of(t: &Trajectory, cfg: &NumericConfig) -> MethodVerdict {
    let last = t.last();
    let solved = t.f_values.last().copied().flatten().is_some_and(|f| f.abs() <= 10.0 * cfg.residual_tolerance);
    match t.termination {
        Termination::Diverged => MethodVerdict::Diverged,
        Termination::ResidualTolerance if solved && last.rho.abs() <= 1e-6 => MethodVerdict::ConvergedToSolution,
        _ => MethodVerdict::Stalled,
    }
}

fn failed_run(method: Method, z0: &ProductPoint, cfg: &NumericConfig, e: Error) -> MethodRun {
    MethodRun {
        trajectory: empty_trajectory(method, z0, None, cfg),
        verdict: MethodVerdict::Undefined,
        error: Some(e.to_string()),
    }
}

/// Runs the three methods from the same start with shared tolerances.
pub fn run_comparison(m: &FunctionModel, z0: &ProductPoint, cfg: &NumericConfig) -> Result<ComparisonReport> {
    cfg.validate()?;
    z0.validate(m.dimension())?;
    let dr = match iterate(m, z0, cfg, SelectionPolicy::First) {
        Ok(t) => MethodRun {
            verdict: verdict_of(&t, cfg),
            trajectory: t,
            error: None,
        },
        Err(e) => failed_run(Method::DouglasRachford, z0, cfg, e),
    };
    let map = match run_map(m, z0, cfg) {
        Ok(t) => MethodRun {
            verdict: verdict_of(&t, cfg),
            trajectory: t,
            error: None,
        },
        Err(e) => failed_run(Method::AlternatingProjections, z0, cfg, e),
    };
    let newton = match run_newton(m, &z0.x, cfg) {
        Ok((t, None)) => MethodRun {
            verdict: verdict_of(&t, cfg),
            trajectory: t,
            error: None,
        },
        Ok((t, Some(e))) => MethodRun {
            trajectory: t,
            verdict: MethodVerdict::Undefined,
            error: Some(e.to_string()),
        },
        Err(e) => failed_run(Method::Newton, z0, cfg, e),
    };
    Ok(ComparisonReport {
        douglas_rachford: dr,
        alternating_projections: map,
        newton,
    })
}
