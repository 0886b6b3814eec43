//! Local stability of the iteration at a fixed point.
//!
//! On a smooth piece T⁻¹ has Jacobian
//!
//! ```text
//! J = [ I + ρ̄∇²f(x̄)   ∇f(x̄) ]
//!     [ −∇f(x̄)ᵀ       1      ]
//! ```
//!
//! and the local Lipschitz modulus of T is ℓ = ‖J⁻¹‖. J⁻¹ is formed blockwise
//! from the Schur complement S = A + ∇f∇fᵀ, whose inverse comes from a
//! Sherman–Morrison update of A⁻¹.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::FunctionModel;
use crate::product::ProductPoint;

/// Updates whose denominator is this small are treated as singular.
pub const SM_SINGULAR_THRESHOLD: f64 = 1e-14;
/// Reciprocal condition number below which J is reported singular.
pub const JACOBIAN_RCOND_THRESHOLD: f64 = 1e-12;
/// Eigenvalue slack for the sign condition ρ̄∇²f(x̄) ⪰ 0.
pub const PSD_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub point: ProductPoint,
    /// Row-major entries of J.
    pub jacobian_t_inverse: Vec<Vec<f64>>,
    pub psd_condition_holds: bool,
    pub modulus: f64,
    pub predicted_q_rate: Option<f64>,
    pub jacobian_nonsingular: bool,
}

impl StabilityReport {
    pub fn jacobian(&self) -> DMatrix<f64> {
        let n = self.jacobian_t_inverse.len();
        DMatrix::from_fn(n, n, |i, j| self.jacobian_t_inverse[i][j])
    }
}

fn derivatives(m: &FunctionModel, x: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let g = m
        .gradient(x)?
        .ok_or_else(|| Error::Unsupported(format!("f is not differentiable at {x:?}")))?;
    let h = m
        .hessian(x)?
        .ok_or_else(|| Error::Unsupported(format!("f is not twice differentiable at {x:?}")))?;
    Ok((g, h))
}

/// The Jacobian of T⁻¹ at z̄.
pub fn jacobian_t_inverse(m: &FunctionModel, z: &ProductPoint) -> Result<DMatrix<f64>> {
    z.validate(m.dimension())?;
    let (g, h) = derivatives(m, &z.x)?;
    let n = g.len();
    let mut j = DMatrix::zeros(n + 1, n + 1);
    for r in 0..n {
        for c in 0..n {
            j[(r, c)] = z.rho * h[(r, c)] + if r == c { 1.0 } else { 0.0 };
        }
        j[(r, n)] = g[r];
        j[(n, r)] = -g[r];
    }
    j[(n, n)] = 1.0;
    Ok(j)
}

fn check_square(m: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    for w in [u, v] {
        if w.len() != m.nrows() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: w.len(),
            });
        }
    }
    Ok(())
}

/// (M + uvᵀ)⁻¹ given M⁻¹.
pub fn sherman_morrison_update(m_inv: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> Result<DMatrix<f64>> {
    check_square(m_inv, u, v)?;
    let mu = m_inv * u;
    let vm = m_inv.transpose() * v;
    let denominator = 1.0 + v.dot(&mu);
    if denominator.abs() <= SM_SINGULAR_THRESHOLD {
        return Err(Error::SingularUpdate { denominator });
    }
    Ok(m_inv - (mu * vm.transpose()) / denominator)
}

/// (M + uvᵀ)⁻¹ = M⁻¹ − M⁻¹uvᵀM⁻¹ / (1 + vᵀM⁻¹u).
pub fn sherman_morrison_inverse(m: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> Result<DMatrix<f64>> {
    check_square(m, u, v)?;
    let m_inv = m.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    sherman_morrison_update(&m_inv, u, v)
}

/// J⁻¹ by block elimination on the last row and column.
fn block_inverse(j: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = j.nrows() - 1;
    let a = j.view((0, 0), (n, n)).into_owned();
    let g = j.view((0, n), (n, 1)).column(0).into_owned();
    let s_inv = sherman_morrison_inverse(&a, &g, &g)?;
    let sg = &s_inv * &g;
    let gs = s_inv.transpose() * &g;
    let mut out = DMatrix::zeros(n + 1, n + 1);
    out.view_mut((0, 0), (n, n)).copy_from(&s_inv);
    for r in 0..n {
        out[(r, n)] = -sg[r];
        out[(n, r)] = gs[r];
    }
    out[(n, n)] = 1.0 - g.dot(&sg);
    Ok(out)
}

fn spectral_norm(k: &DMatrix<f64>) -> f64 {
    let ktk = k.transpose() * k;
    let eig = SymmetricEigen::new(ktk);
    eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b)).sqrt()
}

fn reciprocal_condition(j: &DMatrix<f64>) -> f64 {
    let sv = j.clone().singular_values();
    let max = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let min = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if max == 0.0 {
        0.0
    } else {
        min / max
    }
}

/// Jacobian, sign condition and local modulus ℓ = ‖J⁻¹‖ at z̄.
pub fn stability_report(m: &FunctionModel, z: &ProductPoint) -> Result<StabilityReport> {
    let j = jacobian_t_inverse(m, z)?;
    let rcond = reciprocal_condition(&j);
    if !(rcond >= JACOBIAN_RCOND_THRESHOLD) {
        return Err(Error::SingularJacobian { rcond });
    }
    let j_inv = match block_inverse(&j) {
        Ok(k) => k,
        Err(Error::SingularMatrix | Error::SingularUpdate { .. }) => {
            j.clone().try_inverse().ok_or(Error::SingularJacobian { rcond })?
        }
        Err(e) => return Err(e),
    };
    let modulus = spectral_norm(&j_inv);

    let (g, h) = derivatives(m, &z.x)?;
    let sym = (&h + h.transpose()) * (0.5 * z.rho);
    let min_eig = SymmetricEigen::new(sym).eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let psd_condition_holds = min_eig >= -PSD_SLACK;

    let at_intersection = z.rho.abs() <= 1e-8 && m.evaluate(&z.x)?.abs() <= 1e-8;
    let predicted_q_rate = (z.x.len() == 1 && at_intersection && g[0] != 0.0).then_some(modulus);

    let n = j.nrows();
    Ok(StabilityReport {
        point: z.clone(),
        jacobian_t_inverse: (0..n).map(|r| (0..n).map(|c| j[(r, c)]).collect()).collect(),
        psd_condition_holds,
        modulus,
        predicted_q_rate,
        jacobian_nonsingular: true,
    })
}
