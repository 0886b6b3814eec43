//! Zero finding for scalar functions with the Douglas–Rachford algorithm.
//!
//! A zero of f: ℝⁿ → ℝ is a point of A ∩ B where A = ℝⁿ×{0} and B = gra f.
//! The crate provides the Douglas–Rachford operator for this pair of sets,
//! the graph projector it relies on, local stability analysis, Lyapunov
//! certificates along trajectories, alternating projections and Newton's
//! method as baselines, and basin-of-attraction scans.

pub mod acceptance;
pub mod baselines;
pub mod basin;
pub mod douglas_rachford;
pub mod error;
pub mod functions;
pub mod lyapunov;
pub mod product;
pub mod projection;
pub mod stability;

pub use error::{Error, Result};
pub use functions::{CustomFunction, Family, FunctionModel, Subdifferential};
pub use product::{project_a, reflect_a, NumericConfig, ProductPoint};
