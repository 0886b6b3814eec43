//! The merit function V(x, ρ) = F(x) + ½ρ² and its checks along trajectories.
//!
//! F is an antiderivative of f/f′ that is convex on a set D. Whenever two
//! consecutive iterates lie in D, V drops by at least ½(ρₙ − ρₙ₊₁)², and the
//! gradient of V at zₙ₊₁ is orthogonal to the step zₙ − zₙ₊₁.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::douglas_rachford::Trajectory;
use crate::error::{Error, Result};
use crate::functions::{FunctionModel, LyapunovDomain};
use crate::product::ProductPoint;

pub const DECREASE_SLACK: f64 = 1e-9;
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-6;
pub const IDENTITY_TOLERANCE: f64 = 1e-7;
/// |f(x)| at or below this selects the zero subgradient of F.
const ZERO_BRANCH: f64 = 1e-12;

/// V(x, ρ) = F(x) + ½ρ².
pub fn lyapunov_value(m: &FunctionModel, z: &ProductPoint) -> Result<f64> {
    Ok(m.lyapunov_potential(&z.x)? + 0.5 * z.rho * z.rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Certified,
    DecreaseOnly,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovCertificate {
    pub family: String,
    pub domain: LyapunovDomain,
    /// V(zₙ) where xₙ ∈ D.
    pub values: Vec<Option<f64>>,
    /// V(zₙ) − V(zₙ₊₁) − ½(ρₙ − ρₙ₊₁)² for steps with both ends in D.
    pub decrease_margins: Vec<Option<f64>>,
    /// |⟨∇V(zₙ₊₁), zₙ − zₙ₊₁⟩| where xₙ₊₁ ∈ D and f is not critical there.
    pub orthogonality_residuals: Vec<Option<f64>>,
    pub in_domain_flags: Vec<bool>,
    /// First index from which every iterate stays in D.
    pub first_stable_index: Option<usize>,
    pub verdict: Verdict,
}

/// Checks the decrease inequality and the orthogonality identity at every
/// step of `t` whose iterates lie in D. D is the branch containing the last
/// iterate.
pub fn check_trajectory(m: &FunctionModel, t: &Trajectory) -> Result<LyapunovCertificate> {
    let last = t.last();
    let domain = m.lyapunov_domain(&last.x)?;
    let inside = |z: &ProductPoint| domain.contains(&z.x) && m.in_lyapunov_value_domain(&z.x);

    let in_domain_flags: Vec<bool> = t.iterates.iter().map(inside).collect();
    let values: Vec<Option<f64>> = t
        .iterates
        .iter()
        .zip(&in_domain_flags)
        .map(|(z, &ok)| if ok { lyapunov_value(m, z).ok() } else { None })
        .collect();

    let mut decrease_margins = Vec::with_capacity(t.steps());
    let mut orthogonality_residuals = Vec::with_capacity(t.steps());
    for n in 0..t.steps() {
        let (z0, z1) = (&t.iterates[n], &t.iterates[n + 1]);
        let dr = z0.rho - z1.rho;
        decrease_margins.push(match (values[n], values[n + 1]) {
            (Some(v0), Some(v1)) => Some(v0 - v1 - 0.5 * dr * dr),
            _ => None,
        });
        orthogonality_residuals.push(if in_domain_flags[n + 1] {
            orthogonality_residual(m, z0, z1)?
        } else {
            None
        });
    }

    let first_stable_index = in_domain_flags
        .iter()
        .rposition(|ok| !ok)
        .map_or(Some(0), |k| (k + 1 < in_domain_flags.len()).then_some(k + 1));

    let decrease_ok = decrease_margins.iter().flatten().all(|&d| d >= -DECREASE_SLACK);
    let orth_ok = orthogonality_residuals.iter().zip(0..).all(|(r, n)| match r {
        Some(r) => {
            let step = t.iterates[n].distance(&t.iterates[n + 1]);
            *r <= ORTHOGONALITY_TOLERANCE * (1.0 + step)
        }
        None => true,
    });
    let verdict = match (decrease_ok, orth_ok) {
        (true, true) => Verdict::Certified,
        (true, false) => Verdict::DecreaseOnly,
        (false, _) => Verdict::Violated,
    };
    Ok(LyapunovCertificate {
        family: m.name(),
        domain,
        values,
        decrease_margins,
        orthogonality_residuals,
        in_domain_flags,
        first_stable_index,
        verdict,
    })
}

fn orthogonality_residual(m: &FunctionModel, z0: &ProductPoint, z1: &ProductPoint) -> Result<Option<f64>> {
    let f1 = m.evaluate(&z1.x)?;
    let grad = if f1.abs() <= ZERO_BRANCH {
        vec![0.0; z1.x.len()]
    } else {
        if m.symmetric_subdifferential(&z1.x)?.contains_zero(0.0) {
            return Ok(None);
        }
        m.lyapunov_gradient(&z1.x)?
    };
    let inner: f64 = grad.iter().zip(z0.x.iter().zip(&z1.x)).map(|(g, (a, b))| g * (a - b)).sum::<f64>()
        + z1.rho * (z0.rho - z1.rho);
    Ok(Some(inner.abs()))
}

/// Sampled checks of the three parts of the standing assumption on F.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// ∇F(x) = f(x)∇f(x)/‖∇f(x)‖² at every sample of D.
    pub identity_holds: bool,
    pub max_identity_error: f64,
    /// F grows without bound along rays leaving each zero.
    pub coercive: bool,
    /// F is finite and continuous at each zero inside D.
    pub continuous_at_zeros: bool,
    pub samples: usize,
}

fn sample_domains(m: &FunctionModel) -> Result<Vec<LyapunovDomain>> {
    let mut out: Vec<LyapunovDomain> = Vec::new();
    for z in m.known_zeros() {
        let d = m.lyapunov_domain(&z)?;
        if !out.contains(&d) {
            out.push(d);
        }
    }
    if out.is_empty() {
        out.push(m.lyapunov_domain(&vec![0.0; m.dimension()])?);
    }
    Ok(out)
}

/// Checks the assumption at `sample_count` seeded random points of D.
pub fn check_assumption_v(m: &FunctionModel, sample_count: usize, seed: u64) -> Result<AssumptionReport> {
    if !m.has_closed_form_lyapunov() {
        return Err(Error::Unsupported(format!("no closed-form potential for {}", m.name())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = m.dimension();
    let domains = sample_domains(m)?;

    let mut max_err = 0.0f64;
    let mut checked = 0;
    let mut identity_holds = true;
    for k in 0..sample_count {
        let d = domains[k % domains.len()];
        let (lo, hi) = (d.lo.max(-10.0), d.hi.min(10.0));
        let x: Vec<f64> = if n == 1 {
            let mut t = rng.gen_range(lo..hi);
            if t == lo {
                t = 0.5 * (lo + hi);
            }
            vec![t]
        } else {
            (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect()
        };
        if !m.in_lyapunov_value_domain(&x) {
            continue;
        }
        let Some(g) = m.gradient(&x)? else { continue };
        let gg: f64 = g.iter().map(|v| v * v).sum();
        if gg == 0.0 {
            continue;
        }
        let f = m.evaluate(&x)?;
        let dfv = m.lyapunov_gradient(&x)?;
        for (a, gi) in dfv.iter().zip(&g) {
            let expected = f * gi / gg;
            let err = (a - expected).abs() / (1.0 + expected.abs());
            max_err = max_err.max(err);
            if !(err <= IDENTITY_TOLERANCE) {
                identity_holds = false;
            }
        }
        checked += 1;
    }

    let mut coercive = true;
    let mut continuous_at_zeros = true;
    for z in m.known_zeros() {
        let d = m.lyapunov_domain(&z)?;
        if !d.contains(&z) || !m.in_lyapunov_value_domain(&z) {
            continue;
        }
        let f0 = m.lyapunov_potential(&z)?;
        if !f0.is_finite() {
            continuous_at_zeros = false;
            continue;
        }
        for sign in [-1.0, 1.0] {
            let shifted = |h: f64| {
                let mut x = z.clone();
                x[0] += sign * h;
                x
            };
            let near = shifted(1e-7);
            if d.contains(&near) && m.in_lyapunov_value_domain(&near) {
                let jump = (m.lyapunov_potential(&near)? - f0).abs();
                if !(jump <= 1e-5) {
                    continuous_at_zeros = false;
                }
            }
            // A bounded side of D makes every level set bounded there.
            let unbounded = if sign > 0.0 { d.hi == f64::INFINITY } else { d.lo == f64::NEG_INFINITY };
            if !unbounded {
                continue;
            }
            let mut prev = 0.0;
            for k in 0..12 {
                let x = shifted(2f64.powi(k));
                let margin = m.lyapunov_potential(&x)? - f0;
                if !(margin > prev || margin == f64::INFINITY) {
                    coercive = false;
                }
                prev = margin;
            }
        }
    }

    Ok(AssumptionReport {
        identity_holds,
        max_identity_error: max_err,
        coercive,
        continuous_at_zeros,
        samples: checked,
    })
}
