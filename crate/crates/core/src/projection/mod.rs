//! Nearest-point projection onto the graph B = gra f.
//!
//! The projection minimises ‖y − x‖² + (f(y) − ρ)² over y ∈ dom f. The linear
//! family has a closed form; one-dimensional families are handled by a
//! certified global search over the arcs of the graph; the radial family in
//! ℝⁿ reduces to its one-dimensional profile along the ray through x.
//!
//! Every global minimiser found is returned, sorted ascending by p, and each
//! carries the residual of the first-order condition
//! x ∈ p + (f(p) − ρ)·∂f(p) (or ∂⁺f(p) when f(p) < ρ).

mod arcs;
mod search;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{norm, Family, FunctionModel};
use crate::product::NumericConfig;

/// One nearest point (p, f(p)) of the graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphProjection {
    pub p: Vec<f64>,
    pub fp: f64,
    pub squared_distance: f64,
    pub multivalued: bool,
    pub certificate_residual: f64,
}

/// P_B(x, ρ).
pub fn project_graph(
    m: &FunctionModel,
    x: &[f64],
    rho: f64,
    cfg: &NumericConfig,
) -> Result<Vec<GraphProjection>> {
    validate_input(m, x, rho)?;
    match m.family() {
        Some(Family::Linear { alpha, beta }) => {
            let p = (x[0] + alpha * (rho + beta)) / (1.0 + alpha * alpha);
            Ok(vec![finish(m, vec![p], x, rho, false)?])
        }
        Some(Family::PowerNorm { dimension, .. }) if *dimension > 1 => {
            radial_project_powernorm(m, x, rho, cfg)
        }
        Some(fam) => {
            let arcs = arcs::family_arcs(fam);
            project_scalar(m, &arcs, x[0], rho, cfg)
        }
        None => {
            let c = m.custom_function().expect("custom model");
            if c.dimension != 1 {
                return Err(Error::Unsupported(
                    "graph projection for custom functions of dimension > 1".into(),
                ));
            }
            let arcs = arcs::custom_arcs(c);
            project_scalar(m, &arcs, x[0], rho, cfg)
        }
    }
}

/// P_B(x, ρ) for f = α‖·‖ᵖ on ℝⁿ through the one-dimensional problem in the
/// signed radius t: minimise (t − ‖x‖)² + (α|t|ᵖ − ρ)² and map t to t·x/‖x‖.
///
/// When x = 0 every direction is optimal; the representatives ±t·e₁ are
/// returned and flagged multivalued unless t = 0.
pub fn radial_project_powernorm(
    m: &FunctionModel,
    x: &[f64],
    rho: f64,
    cfg: &NumericConfig,
) -> Result<Vec<GraphProjection>> {
    validate_input(m, x, rho)?;
    let Some(&Family::PowerNorm { alpha, p, .. }) = m.family() else {
        return Err(Error::Unsupported("radial projection requires the power_norm family".into()));
    };
    let profile = Family::PowerNorm {
        alpha,
        p,
        dimension: 1,
    };
    let r = norm(x);
    let mut dir = vec![0.0; x.len()];
    if r > 0.0 {
        for (d, v) in dir.iter_mut().zip(x) {
            *d = v / r;
        }
    } else {
        dir[0] = 1.0;
    }
    let arcs = arcs::family_arcs(&profile);
    let ts = scalar_minimisers(&arcs, |t| alpha * t.abs().powf(p), r, rho, cfg)?;
    let sphere = r == 0.0 && ts.iter().any(|t| *t != 0.0);
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let pt: Vec<f64> = dir.iter().map(|d| t * d).collect();
        out.push(finish(m, pt, x, rho, false)?);
    }
    let multi = out.len() > 1 || sphere;
    for g in &mut out {
        g.multivalued = multi;
    }
    Ok(out)
}

fn validate_input(m: &FunctionModel, x: &[f64], rho: f64) -> Result<()> {
    if x.len() != m.dimension() {
        return Err(Error::DimensionMismatch {
            expected: m.dimension(),
            got: x.len(),
        });
    }
    if !rho.is_finite() || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("projection input ({x:?}, {rho})")));
    }
    Ok(())
}

fn project_scalar(
    m: &FunctionModel,
    arcs: &[arcs::Arc<'_>],
    x: f64,
    rho: f64,
    cfg: &NumericConfig,
) -> Result<Vec<GraphProjection>> {
    let f = |y: f64| m.evaluate(&[y]).unwrap_or(f64::NAN);
    let ys = scalar_minimisers(arcs, f, x, rho, cfg)?;
    let multi = ys.len() > 1;
    ys.into_iter()
        .map(|y| finish(m, vec![y], &[x], rho, multi))
        .collect()
}

/// Abscissae of the global minimisers of (y − x)² + (f(y) − ρ)² over the arcs.
fn scalar_minimisers(
    arcs: &[arcs::Arc<'_>],
    f: impl Fn(f64) -> f64,
    x: f64,
    rho: f64,
    cfg: &NumericConfig,
) -> Result<Vec<f64>> {
    // Any graph point bounds the distance to the nearest one; use the point
    // above x clamped into the domain.
    let lo = arcs.iter().map(|a| a.point(a.lo).0).fold(f64::INFINITY, f64::min);
    let hi = arcs.iter().map(|a| a.point(a.hi).0).fold(f64::NEG_INFINITY, f64::max);
    let y0 = x.clamp(lo.min(hi), hi.max(lo));
    let f0 = f(y0);
    if !f0.is_finite() {
        return Err(Error::SearchFailure(format!("f is not finite at {y0}")));
    }
    let radius = ((y0 - x).powi(2) + (f0 - rho).powi(2)).sqrt();
    let radius = radius * (1.0 + 1e-9) + 1e-12;

    let mut cands = search::minimise(
        arcs,
        x,
        rho,
        radius,
        cfg.projection_grid_points,
        cfg.projection_refine_tolerance,
    )?;
    // Scores use the recomputed graph point so that ties are judged on the
    // values that will be reported.
    for c in &mut cands {
        let fy = f(c.y);
        c.v = fy;
        c.sq = (c.y - x).powi(2) + (fy - rho).powi(2);
    }
    cands.retain(|c| c.sq.is_finite());
    cands.sort_by(|a, b| a.sq.total_cmp(&b.sq));
    let best = cands
        .first()
        .ok_or_else(|| Error::SearchFailure(format!("no finite candidate for ({x}, {rho})")))?
        .sq;
    let tie = best + 1e-10 * best + 1e-24;
    let sep = 10.0 * cfg.projection_refine_tolerance;
    let mut kept: Vec<search::Candidate> = Vec::new();
    for c in cands.into_iter().filter(|c| c.sq <= tie) {
        let dup = kept
            .iter()
            .any(|k| ((k.y - c.y).powi(2) + (k.v - c.v).powi(2)).sqrt() <= sep);
        if !dup {
            kept.push(c);
        }
    }
    let mut ys: Vec<f64> = kept.into_iter().map(|c| c.y).collect();
    ys.sort_by(f64::total_cmp);
    Ok(ys)
}

fn finish(m: &FunctionModel, p: Vec<f64>, x: &[f64], rho: f64, multivalued: bool) -> Result<GraphProjection> {
    let fp = m.evaluate(&p)?;
    let squared_distance =
        p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() + (fp - rho) * (fp - rho);
    let certificate_residual = certificate_residual(m, &p, fp, x, rho)?;
    Ok(GraphProjection {
        p,
        fp,
        squared_distance,
        multivalued,
        certificate_residual,
    })
}

/// dist(x, p + (f(p) − ρ)·S) with S = ∂f(p) when f(p) ≥ ρ and S = ∂⁺f(p)
/// otherwise; infinite when S is empty.
pub fn certificate_residual(m: &FunctionModel, p: &[f64], fp: f64, x: &[f64], rho: f64) -> Result<f64> {
    let t = fp - rho;
    let set = if m.custom_function().is_some() {
        m.symmetric_subdifferential(p)?
    } else if t >= 0.0 {
        m.limiting_subdifferential(p)?
    } else {
        m.upper_subdifferential(p)?
    };
    let w: Vec<f64> = x.iter().zip(p).map(|(a, b)| a - b).collect();
    Ok(set.scaled_distance(&w, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    #[test]
    fn linear_closed_form() {
        let m = FunctionModel::linear(1.0, 0.0).unwrap();
        let pr = project_graph(&m, &[1.0], 0.0, &cfg()).unwrap();
        assert_eq!(pr.len(), 1);
        assert!((pr[0].p[0] - 0.5).abs() < 1e-15 && (pr[0].fp - 0.5).abs() < 1e-15);
        assert!(pr[0].certificate_residual < 1e-15);
    }

    #[test]
    fn half_square_projection_of_its_critical_point() {
        let m = FunctionModel::power_norm(0.5, 2.0, 1).unwrap();
        let pr = project_graph(&m, &[0.0], 0.5, &cfg()).unwrap();
        assert_eq!(pr.len(), 1);
        assert!(pr[0].p[0].abs() < 1e-12);
        assert!(pr[0].fp.abs() < 1e-20);
    }

    #[test]
    fn steep_cusp_is_resolved() {
        // The nearest point of gra 3∛· to (0, −1e−5) sits at y = −(1e−5/3)³.
        let m = FunctionModel::signed_power(3.0, 1.0 / 3.0).unwrap();
        let pr = project_graph(&m, &[0.0], -1e-5, &cfg()).unwrap();
        assert_eq!(pr.len(), 1);
        let y = pr[0].p[0];
        let expected = -(1e-5f64 / 3.0).powi(3);
        assert!((y - expected).abs() < 1e-3 * expected.abs(), "y = {y:e}");
        assert!((pr[0].fp + 1e-5).abs() < 1e-12);
    }

    #[test]
    fn symmetric_input_is_multivalued() {
        // ½x² seen from (0, 5): two nearest points ±√8.
        let m = FunctionModel::power_norm(0.5, 2.0, 1).unwrap();
        let pr = project_graph(&m, &[0.0], 5.0, &cfg()).unwrap();
        assert_eq!(pr.len(), 2, "{pr:?}");
        assert!(pr[0].multivalued && pr[1].multivalued);
        assert!((pr[0].p[0] + 8f64.sqrt()).abs() < 1e-9 && (pr[1].p[0] - 8f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn custom_function_uses_uniform_scan() {
        use crate::functions::{CustomFunction, Subdifferential};
        let c = CustomFunction::new("cubic", 1, |x| x[0] * x[0] * x[0] - 1.0)
            .with_gradient(|x| Some(vec![3.0 * x[0] * x[0]]))
            .with_hessian(|x| Some(nalgebra::DMatrix::from_element(1, 1, 6.0 * x[0])))
            .with_subdifferential(|x| Subdifferential::scalar(3.0 * x[0] * x[0]));
        let m = FunctionModel::custom(c).unwrap();
        let pr = project_graph(&m, &[1.0], 0.0, &cfg()).unwrap();
        assert_eq!(pr.len(), 1);
        assert!(pr[0].certificate_residual < 1e-9);
    }
}
