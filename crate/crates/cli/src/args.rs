use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use drzero::acceptance::DEFAULT_SEED;
use drzero::douglas_rachford::SelectionPolicy;
use drzero::NumericConfig;

#[derive(Parser, Debug)]
#[command(name = "drzero", version, about = "Douglas-Rachford zero finding for scalar functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the iteration and emit the trajectory.
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        start: Start,
        #[arg(long, value_enum, default_value_t = Selection::First)]
        selection: Selection,
    },
    /// Project (x, rho) onto the graph of f.
    Project {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
    },
    /// Jacobian, sign condition and local modulus at a fixed point.
    Stability {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        xbar: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        rhobar: f64,
    },
    /// Check the merit function along a trajectory.
    Lyapunov {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        start: Start,
    },
    /// Compare Douglas-Rachford, alternating projections and Newton.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        start: Start,
    },
    /// Scan a grid of starting points.
    Basin(BasinArgs),
    /// Estimate the convergence rate towards a zero.
    Rate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        start: Start,
        /// Target point as x...,rho; defaults to the nearest known zero.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        target: Option<Vec<f64>>,
    },
    /// Run the acceptance suite.
    VerifyAll {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug)]
pub struct Common {
    /// Family as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub family_json: String,
    /// Sets both the step and residual tolerances.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub numeric: Numeric,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl Common {
    pub fn numeric_config(&self) -> NumericConfig {
        let mut cfg = self.numeric.to_config();
        if let Some(t) = self.tol {
            cfg.step_tolerance = t;
            cfg.residual_tolerance = t;
        }
        cfg
    }
}

#[derive(Args, Debug)]
pub struct Numeric {
    #[arg(long)]
    pub step_tol: Option<f64>,
    #[arg(long)]
    pub residual_tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long)]
    pub refine_tol: Option<f64>,
}

impl Numeric {
    pub fn to_config(&self) -> NumericConfig {
        let d = NumericConfig::default();
        NumericConfig {
            step_tolerance: self.step_tol.unwrap_or(d.step_tolerance),
            residual_tolerance: self.residual_tol.unwrap_or(d.residual_tolerance),
            max_iterations: self.max_iter.unwrap_or(d.max_iterations),
            projection_grid_points: self.grid_points.unwrap_or(d.projection_grid_points),
            projection_refine_tolerance: self.refine_tol.unwrap_or(d.projection_refine_tolerance),
        }
    }
}

#[derive(Args, Debug)]
pub struct Start {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x0: Vec<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub rho0: f64,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write the primary payload here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    First,
    #[value(alias = "nearest-to-previous")]
    Nearest,
}

impl From<Selection> for SelectionPolicy {
    fn from(s: Selection) -> Self {
        match s {
            Selection::First => SelectionPolicy::First,
            Selection::Nearest => SelectionPolicy::Nearest,
        }
    }
}

#[derive(Args, Debug)]
pub struct BasinArgs {
    #[arg(long)]
    pub family_json: String,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-10,10")]
    pub x_range: [f64; 2],
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-10,10")]
    pub rho_range: [f64; 2],
    /// Grid size as NX or NXxNRHO.
    #[arg(long, value_parser = parse_resolution, default_value = "101")]
    pub resolution: (usize, usize),
    /// Distance to a zero that counts as solved.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Directory for per-cell trajectory CSV files.
    #[arg(long)]
    pub dump_trajectories: Option<PathBuf>,
    /// Maximum number of trajectories to dump.
    #[arg(long, default_value_t = 100)]
    pub dump_limit: usize,
    #[command(flatten)]
    pub numeric: Numeric,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_range(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected lo,hi but got {s:?}"));
    }
    let lo = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([lo, hi])
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(['x', 'X', ',']).collect();
    let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("bad resolution {s:?}: {e}"));
    match parts.as_slice() {
        [n] => parse(n).map(|n| (n, n)),
        [nx, nrho] => Ok((parse(nx)?, parse(nrho)?)),
        _ => Err(format!("expected NX or NXxNRHO but got {s:?}")),
    }
}
