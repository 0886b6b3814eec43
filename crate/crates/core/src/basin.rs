//! Grid scans over starting points and empirical convergence rates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::douglas_rachford::{iterate_until, SelectionPolicy, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::functions::{Family, FunctionModel};
use crate::product::{NumericConfig, ProductPoint};

/// Terminal |ρ| above which a stop near a zero is a critical fixed point.
pub const CRITICAL_RHO: f64 = 1e-3;
/// Distances at or below this are numerical noise for rate estimates.
pub const RATE_FLOOR: f64 = 1e-13;
/// Iterates above the floor required for a rate estimate.
pub const MIN_TAIL: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_range: [f64; 2],
    pub rho_range: [f64; 2],
    pub nx: usize,
    pub nrho: usize,
    /// Distance to (x̄, 0) that counts as reaching the solution.
    pub tol: f64,
}

impl GridSpec {
    pub fn square(lo: f64, hi: f64, n: usize, tol: f64) -> Self {
        GridSpec {
            x_range: [lo, hi],
            rho_range: [lo, hi],
            nx: n,
            nrho: n,
            tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.nx == 0 || self.nrho == 0 {
            return bad("grid resolution must be positive");
        }
        let ranges = [self.x_range, self.rho_range];
        if ranges.iter().flatten().any(|v| !v.is_finite()) || ranges.iter().any(|r| r[0] > r[1]) {
            return bad("grid ranges must be finite with lo <= hi");
        }
        if !(self.tol > 0.0) {
            return bad("grid tolerance must be positive");
        }
        Ok(())
    }

    fn coordinate(range: [f64; 2], n: usize, k: usize) -> f64 {
        if n == 1 {
            range[0]
        } else if k == n - 1 {
            range[1]
        } else {
            range[0] + (range[1] - range[0]) * k as f64 / (n - 1) as f64
        }
    }

    /// Starting point of the cell in row `row` (ρ index) and column `col` (x index).
    pub fn start(&self, row: usize, col: usize) -> ProductPoint {
        ProductPoint::scalar(
            Self::coordinate(self.x_range, self.nx, col),
            Self::coordinate(self.rho_range, self.nrho, row),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellClass {
    Solution,
    CriticalFixedPoint,
    MaxedOut,
    Diverged,
}

impl CellClass {
    pub fn label(self) -> &'static str {
        match self {
            CellClass::Solution => "Solution",
            CellClass::CriticalFixedPoint => "CriticalFixedPoint",
            CellClass::MaxedOut => "MaxedOut",
            CellClass::Diverged => "Diverged",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinCell {
    pub row: usize,
    pub col: usize,
    pub start: ProductPoint,
    /// Steps taken; absent when the run maxed out or diverged.
    pub iterations: Option<usize>,
    pub terminal: ProductPoint,
    pub classification: CellClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinGrid {
    pub spec: GridSpec,
    /// Row-major: row is the ρ index, column the x index.
    pub cells: Vec<BasinCell>,
}

impl BasinGrid {
    pub fn cell(&self, row: usize, col: usize) -> &BasinCell {
        &self.cells[row * self.spec.nx + col]
    }

    pub fn fraction(&self, class: CellClass) -> f64 {
        let k = self.cells.iter().filter(|c| c.classification == class).count();
        k as f64 / self.cells.len() as f64
    }
}

fn distance_to_zero(x: &[f64], rho: f64, zero: &[f64]) -> f64 {
    let dx: f64 = x.iter().zip(zero).map(|(a, b)| (a - b) * (a - b)).sum();
    (dx + rho * rho).sqrt()
}

fn x_distance(x: &[f64], zeros: &[Vec<f64>]) -> f64 {
    zeros
        .iter()
        .map(|z| x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .fold(f64::INFINITY, f64::min)
}

fn run_cell(m: &FunctionModel, spec: &GridSpec, cfg: &NumericConfig, row: usize, col: usize) -> (BasinCell, Option<Trajectory>) {
    let mut start = spec.start(row, col);
    if matches!(m.family(), Some(Family::Benoist { .. })) {
        start.x[0] = start.x[0].clamp(-1.0, 1.0);
    }
    let zeros = m.known_zeros();
    // Zeros with 0 in the subdifferential can anchor fixed points off A∩B;
    // those are measured in x alone.
    let critical: Vec<Vec<f64>> = zeros
        .iter()
        .filter(|z| {
            crate::functions::symmetric_subdifferential(m, z)
                .map(|d| d.contains_zero(0.0))
                .unwrap_or(false)
        })
        .cloned()
        .collect();
    let at_critical = |z: &ProductPoint| z.rho.abs() > CRITICAL_RHO && x_distance(&z.x, &critical) <= spec.tol;
    let solved = |z: &ProductPoint| zeros.iter().any(|zero| distance_to_zero(&z.x, z.rho, zero) <= spec.tol);
    let reached = |z: &ProductPoint| solved(z) || at_critical(z);
    let t = match iterate_until(m, &start, cfg, SelectionPolicy::First, reached) {
        Ok(t) => t,
        Err(_) => {
            let cell = BasinCell {
                row,
                col,
                terminal: start.clone(),
                start,
                iterations: None,
                classification: CellClass::MaxedOut,
            };
            return (cell, None);
        }
    };
    let last = t.last().clone();
    let (classification, iterations) = match t.termination {
        Termination::Diverged => (CellClass::Diverged, None),
        Termination::MaxIterations => (CellClass::MaxedOut, None),
        _ if solved(&last) => (CellClass::Solution, Some(t.steps())),
        _ if at_critical(&last) || x_distance(&last.x, &zeros) <= spec.tol && last.rho.abs() > CRITICAL_RHO => {
            (CellClass::CriticalFixedPoint, Some(t.steps()))
        }
        _ => (CellClass::MaxedOut, None),
    };
    let cell = BasinCell {
        row,
        col,
        start,
        iterations,
        terminal: last,
        classification,
    };
    (cell, Some(t))
}

/// Runs the iteration from every grid point until it comes within `tol` of a
/// known zero, stops at a fixed point, diverges, or exhausts the budget.
pub fn scan(m: &FunctionModel, spec: &GridSpec, cfg: &NumericConfig) -> Result<BasinGrid> {
    Ok(scan_with_trajectories(m, spec, cfg, 0)?.0)
}

/// As [`scan`], also returning the trajectories of the first `keep` cells in
/// row-major order.
pub fn scan_with_trajectories(
    m: &FunctionModel,
    spec: &GridSpec,
    cfg: &NumericConfig,
    keep: usize,
) -> Result<(BasinGrid, Vec<(usize, usize, Trajectory)>)> {
    spec.validate()?;
    cfg.validate()?;
    if m.dimension() != 1 {
        return Err(Error::Unsupported("basin scans need a one-dimensional function".into()));
    }
    let results: Vec<(BasinCell, Option<Trajectory>)> = (0..spec.nx * spec.nrho)
        .into_par_iter()
        .map(|k| {
            let (cell, t) = run_cell(m, spec, cfg, k / spec.nx, k % spec.nx);
            (cell, if k < keep { t } else { None })
        })
        .collect();
    let mut kept = Vec::new();
    let mut cells = Vec::with_capacity(results.len());
    for (cell, t) in results {
        if let Some(t) = t {
            kept.push((cell.row, cell.col, t));
        }
        cells.push(cell);
    }
    Ok((BasinGrid { spec: *spec, cells }, kept))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    /// Largest of the last ratios ‖zₙ₊₁ − z̄‖/‖zₙ − z̄‖.
    pub q_rate: f64,
    /// exp of the least-squares slope of log ‖zₙ − z̄‖.
    pub r_rate: f64,
    pub tail_length: usize,
    pub target: ProductPoint,
}

/// Empirical Q- and R-rates of `t` towards `target` over the last iterates
/// above the numerical floor.
pub fn estimate_rate(t: &Trajectory, target: &ProductPoint) -> Result<RateEstimate> {
    let dist: Vec<f64> = t.iterates.iter().map(|z| z.distance(target)).collect();
    let final_dist = *dist.last().unwrap();
    if !(final_dist <= 10.0 * t.step_tolerance) {
        return Err(Error::InsufficientTail(format!(
            "trajectory ends at distance {final_dist:e} from the target"
        )));
    }
    let end = dist.iter().position(|&d| d <= RATE_FLOOR).unwrap_or(dist.len());
    if end < MIN_TAIL {
        return Err(Error::InsufficientTail(format!(
            "{end} iterates above the floor {RATE_FLOOR:e}, need {MIN_TAIL}"
        )));
    }
    let k = (end - 1).min(10);
    let tail = &dist[end - k - 1..end];
    let q_rate = tail.windows(2).map(|w| w[1] / w[0]).fold(0.0f64, f64::max);

    let n = tail.len() as f64;
    let mean_i = (n - 1.0) / 2.0;
    let logs: Vec<f64> = tail.iter().map(|d| d.ln()).collect();
    let mean_l = logs.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, l) in logs.iter().enumerate() {
        let dx = i as f64 - mean_i;
        sxy += dx * (l - mean_l);
        sxx += dx * dx;
    }
    Ok(RateEstimate {
        q_rate,
        r_rate: (sxy / sxx).exp(),
        tail_length: tail.len(),
        target: target.clone(),
    })
}
