//! Target functions f whose zeros are sought.
//!
//! Each built-in [`Family`] carries closed-form values, derivatives, limiting
//! and upper subdifferentials, known zeros and, where one exists, the
//! antiderivative F of f/f′ used as the Lyapunov potential. Arbitrary scalar
//! functions can be supplied through [`CustomFunction`].

mod subdiff;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use subdiff::{Interval, Subdifferential};

/// The built-in families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    /// αx − β.
    Linear { alpha: f64, beta: f64 },
    /// αeˣ − β.
    Exponential { alpha: f64, beta: f64 },
    /// α‖x‖ᵖ on ℝⁿ.
    #[serde(alias = "powernorm")]
    PowerNorm {
        alpha: f64,
        p: f64,
        #[serde(default = "one", alias = "n")]
        dimension: usize,
    },
    /// α|x|ᵖ sgn x.
    #[serde(alias = "signedpower")]
    SignedPower { alpha: f64, p: f64 },
    /// α − β√(1 − x²) on [−1, 1].
    Benoist { alpha: f64, beta: f64 },
    /// xᵖ for x ≥ 0 and x for x < 0.
    #[serde(alias = "piecewisenonconvex")]
    PiecewiseNonconvex { p: f64 },
    /// −1 for x ≤ 0 and ½x² − 1 for x > 0.
    #[serde(alias = "piecewiseconvex")]
    PiecewiseConvex {},
}

fn one() -> usize {
    1
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Linear { .. } => "linear",
            Family::Exponential { .. } => "exponential",
            Family::PowerNorm { .. } => "power_norm",
            Family::SignedPower { .. } => "signed_power",
            Family::Benoist { .. } => "benoist",
            Family::PiecewiseNonconvex { .. } => "piecewise_nonconvex",
            Family::PiecewiseConvex {} => "piecewise_convex",
        }
    }

    fn validate(&self) -> Result<()> {
        let name = self.name();
        let bad = |reason: &str| Err(Error::InvalidParameters {
            family: name,
            reason: reason.to_string(),
        });
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        match *self {
            Family::Linear { alpha, beta } => {
                if !finite(&[alpha, beta]) {
                    return bad("parameters must be finite");
                }
                if alpha == 0.0 {
                    return bad("alpha must be nonzero");
                }
            }
            Family::Exponential { alpha, beta } => {
                if !finite(&[alpha, beta]) || alpha <= 0.0 || beta <= 0.0 {
                    return bad("alpha and beta must be positive and finite");
                }
            }
            Family::PowerNorm { alpha, p, dimension } => {
                if !finite(&[alpha, p]) || alpha == 0.0 || p <= 0.0 {
                    return bad("alpha must be nonzero and p positive");
                }
                if dimension == 0 {
                    return bad("dimension must be at least 1");
                }
            }
            Family::SignedPower { alpha, p } => {
                if !finite(&[alpha, p]) || alpha == 0.0 || p <= 0.0 {
                    return bad("alpha must be nonzero and p positive");
                }
            }
            Family::Benoist { alpha, beta } => {
                if !finite(&[alpha, beta]) || beta <= 0.0 || alpha <= 0.0 || alpha >= beta {
                    return bad("requires beta > 0 and 0 < alpha < beta");
                }
            }
            Family::PiecewiseNonconvex { p } => {
                if !p.is_finite() || p <= 1.0 {
                    return bad("p must exceed 1");
                }
            }
            Family::PiecewiseConvex {} => {}
        }
        Ok(())
    }
}

pub type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync>;
pub type HessianFn = Arc<dyn Fn(&[f64]) -> Option<DMatrix<f64>> + Send + Sync>;
pub type SubdiffFn = Arc<dyn Fn(&[f64]) -> Subdifferential + Send + Sync>;

/// A user-supplied target function.
///
/// The symmetric subdifferential must be supplied for certificates; gradient
/// and Hessian are optional and only enable the smooth-analysis tools.
#[derive(Clone)]
pub struct CustomFunction {
    pub name: String,
    pub dimension: usize,
    /// Per-coordinate domain.
    pub domain: Interval,
    pub eval: ValueFn,
    pub gradient: Option<GradientFn>,
    pub hessian: Option<HessianFn>,
    pub subdifferential: Option<SubdiffFn>,
    pub zeros: Vec<Vec<f64>>,
}

impl CustomFunction {
    pub fn new(
        name: impl Into<String>,
        dimension: usize,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CustomFunction {
            name: name.into(),
            dimension,
            domain: Interval::REAL_LINE,
            eval: Arc::new(eval),
            gradient: None,
            hessian: None,
            subdifferential: None,
            zeros: Vec::new(),
        }
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = Interval::new(lo, hi);
        self
    }

    pub fn with_gradient(
        mut self,
        g: impl Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    pub fn with_hessian(
        mut self,
        h: impl Fn(&[f64]) -> Option<DMatrix<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.hessian = Some(Arc::new(h));
        self
    }

    pub fn with_subdifferential(
        mut self,
        s: impl Fn(&[f64]) -> Subdifferential + Send + Sync + 'static,
    ) -> Self {
        self.subdifferential = Some(Arc::new(s));
        self
    }

    pub fn with_zeros(mut self, zeros: Vec<Vec<f64>>) -> Self {
        self.zeros = zeros;
        self
    }
}

impl fmt::Debug for CustomFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFunction")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("domain", &self.domain)
            .field("zeros", &self.zeros)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
enum Model {
    Builtin(Family),
    Custom(Arc<CustomFunction>),
}

/// An open set D on which the Lyapunov potential is convex.
///
/// In dimension one this is the interval (lo, hi); in higher dimensions only
/// the whole space is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovDomain {
    pub lo: f64,
    pub hi: f64,
}

impl LyapunovDomain {
    pub const WHOLE: LyapunovDomain = LyapunovDomain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() == 1 {
            self.lo < x[0] && x[0] < self.hi
        } else {
            self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
        }
    }
}

/// A validated target function.
#[derive(Debug, Clone)]
pub struct FunctionModel {
    model: Model,
}

impl FunctionModel {
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        Ok(FunctionModel {
            model: Model::Builtin(family),
        })
    }

    pub fn custom(c: CustomFunction) -> Result<Self> {
        if c.dimension == 0 {
            return Err(Error::InvalidParameters {
                family: "custom",
                reason: "dimension must be at least 1".into(),
            });
        }
        Ok(FunctionModel {
            model: Model::Custom(Arc::new(c)),
        })
    }

    pub fn linear(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Family::Linear { alpha, beta })
    }

    pub fn exponential(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Family::Exponential { alpha, beta })
    }

    pub fn power_norm(alpha: f64, p: f64, dimension: usize) -> Result<Self> {
        Self::new(Family::PowerNorm { alpha, p, dimension })
    }

    pub fn signed_power(alpha: f64, p: f64) -> Result<Self> {
        Self::new(Family::SignedPower { alpha, p })
    }

    pub fn benoist(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Family::Benoist { alpha, beta })
    }

    pub fn piecewise_nonconvex(p: f64) -> Result<Self> {
        Self::new(Family::PiecewiseNonconvex { p })
    }

    pub fn piecewise_convex() -> Self {
        FunctionModel {
            model: Model::Builtin(Family::PiecewiseConvex {}),
        }
    }

    /// Parses a JSON object such as `{"family": "exponential", "alpha": 0.1, "beta": 1.0}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        if value.get("family").and_then(|f| f.as_str()) == Some("custom") {
            return Err(Error::InvalidSpec(
                "custom functions are only constructible through the library API".into(),
            ));
        }
        let family: Family =
            serde_json::from_value(value).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        Self::new(family)
    }

    pub fn family(&self) -> Option<&Family> {
        match &self.model {
            Model::Builtin(f) => Some(f),
            Model::Custom(_) => None,
        }
    }

    pub(crate) fn custom_function(&self) -> Option<&CustomFunction> {
        match &self.model {
            Model::Custom(c) => Some(c),
            Model::Builtin(_) => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.model {
            Model::Builtin(f) => f.name().to_string(),
            Model::Custom(c) => c.name.clone(),
        }
    }

    fn static_name(&self) -> &'static str {
        match &self.model {
            Model::Builtin(f) => f.name(),
            Model::Custom(_) => "custom",
        }
    }

    pub fn dimension(&self) -> usize {
        match &self.model {
            Model::Builtin(Family::PowerNorm { dimension, .. }) => *dimension,
            Model::Builtin(_) => 1,
            Model::Custom(c) => c.dimension,
        }
    }

    /// Domain of every coordinate.
    pub fn domain(&self) -> Interval {
        match &self.model {
            Model::Builtin(Family::Benoist { .. }) => Interval::new(-1.0, 1.0),
            Model::Builtin(_) => Interval::REAL_LINE,
            Model::Custom(c) => c.domain,
        }
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        let d = self.domain();
        x.len() == self.dimension() && x.iter().all(|v| v.is_finite() && d.contains(*v))
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("{x:?}")));
        }
        if !self.in_domain(x) {
            return Err(Error::Domain {
                family: self.static_name(),
                x: x.to_vec(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.model {
            Model::Builtin(Family::PowerNorm { alpha, p, .. }) => alpha * norm(x).powf(*p),
            Model::Builtin(f) => scalar_value(f, x[0]),
            Model::Custom(c) => (c.eval)(x),
        })
    }

    /// ∇f(x), or `None` where f is not differentiable.
    pub fn gradient(&self, x: &[f64]) -> Result<Option<Vec<f64>>> {
        self.check(x)?;
        Ok(match &self.model {
            Model::Builtin(Family::PowerNorm { alpha, p, dimension }) if *dimension > 1 => {
                let r = norm(x);
                if r > 0.0 {
                    let c = alpha * p * r.powf(p - 2.0);
                    Some(x.iter().map(|v| c * v).collect())
                } else if *p > 1.0 {
                    Some(vec![0.0; *dimension])
                } else {
                    None
                }
            }
            Model::Builtin(f) => scalar_derivative(f, x[0]).map(|d| vec![d]),
            Model::Custom(c) => c.gradient.as_ref().and_then(|g| g(x)),
        })
    }

    /// ∇²f(x), or `None` where f is not twice differentiable.
    pub fn hessian(&self, x: &[f64]) -> Result<Option<DMatrix<f64>>> {
        self.check(x)?;
        Ok(match &self.model {
            Model::Builtin(Family::PowerNorm { alpha, p, dimension }) if *dimension > 1 => {
                let n = *dimension;
                let r = norm(x);
                if r > 0.0 {
                    let c = alpha * p * r.powf(p - 2.0);
                    let mut h = DMatrix::<f64>::identity(n, n) * c;
                    for i in 0..n {
                        for j in 0..n {
                            h[(i, j)] += c * (p - 2.0) * x[i] * x[j] / (r * r);
                        }
                    }
                    Some(h)
                } else if *p == 2.0 {
                    Some(DMatrix::identity(n, n) * (2.0 * alpha))
                } else if *p > 2.0 {
                    Some(DMatrix::zeros(n, n))
                } else {
                    None
                }
            }
            Model::Builtin(f) => scalar_second_derivative(f, x[0]).map(|h| DMatrix::from_element(1, 1, h)),
            Model::Custom(c) => c.hessian.as_ref().and_then(|h| h(x)),
        })
    }

    /// The limiting subdifferential ∂f(x).
    pub fn limiting_subdifferential(&self, x: &[f64]) -> Result<Subdifferential> {
        self.one_sided_subdifferential(x, false)
    }

    /// The limiting upper subdifferential ∂⁺f(x) = −∂(−f)(x).
    pub fn upper_subdifferential(&self, x: &[f64]) -> Result<Subdifferential> {
        self.one_sided_subdifferential(x, true)
    }

    /// ∂⁰f(x) = ∂f(x) ∪ ∂⁺f(x).
    pub fn symmetric_subdifferential(&self, x: &[f64]) -> Result<Subdifferential> {
        if let Model::Custom(c) = &self.model {
            self.check(x)?;
            return custom_subdifferential(c, x);
        }
        let lower = self.limiting_subdifferential(x)?;
        let upper = self.upper_subdifferential(x)?;
        Ok(lower.union(&upper))
    }

    fn one_sided_subdifferential(&self, x: &[f64], upper: bool) -> Result<Subdifferential> {
        self.check(x)?;
        let fam = match &self.model {
            Model::Custom(c) => return custom_subdifferential(c, x),
            Model::Builtin(f) => f,
        };
        if let Some(g) = self.gradient(x)? {
            return Ok(Subdifferential::gradient(g));
        }
        let n = self.dimension();
        let radial = |ball_first: bool, r: f64| -> Subdifferential {
            let ball = ball_first != upper;
            if n == 1 {
                if ball {
                    Subdifferential::interval(-r, r)
                } else {
                    Subdifferential::from_intervals(vec![Interval::point(-r), Interval::point(r)])
                }
            } else if ball {
                Subdifferential::Ball { radius: r }
            } else {
                Subdifferential::Sphere { radius: r }
            }
        };
        let whole_or_empty = |whole_first: bool| -> Subdifferential {
            if whole_first != upper {
                if n == 1 {
                    Subdifferential::real_line()
                } else {
                    Subdifferential::Whole
                }
            } else {
                Subdifferential::Empty
            }
        };
        Ok(match *fam {
            // Kink of α‖·‖ or cusp of α‖·‖ᵖ (p < 1) at the origin.
            Family::PowerNorm { alpha, p, .. } => {
                if p == 1.0 {
                    radial(alpha > 0.0, alpha.abs())
                } else {
                    whole_or_empty(alpha > 0.0)
                }
            }
            // Vertical tangent at 0 for p < 1.
            Family::SignedPower { .. } => Subdifferential::Empty,
            // Vertical tangents at ±1.
            Family::Benoist { .. } => {
                if upper {
                    Subdifferential::real_line()
                } else {
                    Subdifferential::Empty
                }
            }
            Family::PiecewiseNonconvex { .. } => {
                if upper {
                    Subdifferential::interval(0.0, 1.0)
                } else {
                    Subdifferential::from_intervals(vec![Interval::point(0.0), Interval::point(1.0)])
                }
            }
            Family::Linear { .. } | Family::Exponential { .. } | Family::PiecewiseConvex {} => {
                unreachable!("smooth family without gradient")
            }
        })
    }

    /// Whether f is Lipschitz on a neighbourhood of x.
    pub fn is_locally_lipschitz(&self, x: &[f64]) -> Result<bool> {
        self.check(x)?;
        Ok(match &self.model {
            Model::Builtin(Family::PowerNorm { p, .. }) => *p >= 1.0 || norm(x) > 0.0,
            Model::Builtin(Family::SignedPower { p, .. }) => *p >= 1.0 || x[0] != 0.0,
            Model::Builtin(Family::Benoist { .. }) => x[0].abs() < 1.0,
            Model::Builtin(_) => true,
            Model::Custom(_) => true,
        })
    }

    pub fn known_zeros(&self) -> Vec<Vec<f64>> {
        match &self.model {
            Model::Builtin(f) => match *f {
                Family::Linear { alpha, beta } => vec![vec![beta / alpha]],
                Family::Exponential { alpha, beta } => vec![vec![(beta / alpha).ln()]],
                Family::PowerNorm { dimension, .. } => vec![vec![0.0; dimension]],
                Family::SignedPower { .. } | Family::PiecewiseNonconvex { .. } => vec![vec![0.0]],
                Family::Benoist { alpha, beta } => {
                    let r = benoist_zero(alpha / beta);
                    vec![vec![-r], vec![r]]
                }
                Family::PiecewiseConvex {} => vec![vec![std::f64::consts::SQRT_2]],
            },
            Model::Custom(c) => c.zeros.clone(),
        }
    }

    pub fn has_closed_form_lyapunov(&self) -> bool {
        matches!(self.model, Model::Builtin(_))
    }

    fn lyapunov_family(&self) -> Result<&Family> {
        match &self.model {
            Model::Builtin(f) => Ok(f),
            Model::Custom(c) => Err(Error::Unsupported(format!(
                "no closed-form Lyapunov potential for custom function {}",
                c.name
            ))),
        }
    }

    /// Whether x lies where the closed-form F is defined.
    pub fn in_lyapunov_value_domain(&self, x: &[f64]) -> bool {
        match self.model {
            Model::Builtin(Family::Benoist { .. }) => {
                x.len() == 1 && x[0].abs() < 1.0 && x[0] != 0.0
            }
            Model::Builtin(Family::PiecewiseConvex {}) => x.len() == 1 && x[0] > 0.0,
            Model::Builtin(_) => x.len() == self.dimension() && x.iter().all(|v| v.is_finite()),
            Model::Custom(_) => false,
        }
    }

    /// The closed-form potential F, an antiderivative of f/f′.
    pub fn lyapunov_potential(&self, x: &[f64]) -> Result<f64> {
        let fam = self.lyapunov_family()?;
        self.check_lyapunov(x)?;
        let t = x[0];
        Ok(match *fam {
            Family::Linear { alpha, beta } => 0.5 * t * t - beta / alpha * t,
            Family::Exponential { alpha, beta } => t + beta / alpha * (-t).exp(),
            Family::PowerNorm { p, .. } => x.iter().map(|v| v * v).sum::<f64>() / (2.0 * p),
            Family::SignedPower { p, .. } => t * t / (2.0 * p),
            Family::Benoist { alpha, beta } => {
                let a = alpha / beta;
                let s = ((1.0 - t) * (1.0 + t)).sqrt();
                0.5 * t * t - (1.0 - a) * t.abs().ln() + a * s - a * s.ln_1p()
            }
            Family::PiecewiseNonconvex { p } => {
                if t >= 0.0 {
                    t * t / (2.0 * p)
                } else {
                    0.5 * t * t
                }
            }
            Family::PiecewiseConvex {} => 0.25 * t * t - t.ln(),
        })
    }

    /// F′(x) from the closed form.
    pub fn lyapunov_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let fam = self.lyapunov_family()?;
        self.check_lyapunov(x)?;
        let t = x[0];
        Ok(match *fam {
            Family::Linear { alpha, beta } => vec![t - beta / alpha],
            Family::Exponential { alpha, beta } => vec![1.0 - beta / alpha * (-t).exp()],
            Family::PowerNorm { p, .. } => x.iter().map(|v| v / p).collect(),
            Family::SignedPower { p, .. } => vec![t / p],
            Family::Benoist { alpha, beta } => {
                let a = alpha / beta;
                let s = ((1.0 - t) * (1.0 + t)).sqrt();
                vec![t - (1.0 - a) / t - a * t / (1.0 + s)]
            }
            Family::PiecewiseNonconvex { p } => vec![if t >= 0.0 { t / p } else { t }],
            Family::PiecewiseConvex {} => vec![0.5 * t - 1.0 / t],
        })
    }

    fn check_lyapunov(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: x.len(),
            });
        }
        if !self.in_lyapunov_value_domain(x) {
            return Err(Error::Domain {
                family: self.static_name(),
                x: x.to_vec(),
            });
        }
        Ok(())
    }

    /// The convex domain D of the potential, choosing the branch containing
    /// `reference` when the family has two.
    pub fn lyapunov_domain(&self, reference: &[f64]) -> Result<LyapunovDomain> {
        let fam = self.lyapunov_family()?;
        Ok(match *fam {
            Family::Benoist { alpha, beta } => {
                let xc = benoist_convexity_bound(alpha / beta);
                if reference.first().copied().unwrap_or(0.0) < 0.0 {
                    LyapunovDomain { lo: -xc, hi: 0.0 }
                } else {
                    LyapunovDomain { lo: 0.0, hi: xc }
                }
            }
            Family::PiecewiseConvex {} => LyapunovDomain {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            _ => LyapunovDomain::WHOLE,
        })
    }
}

fn custom_subdifferential(c: &CustomFunction, x: &[f64]) -> Result<Subdifferential> {
    match &c.subdifferential {
        Some(s) => Ok(s(x)),
        None => Err(Error::Unsupported(format!(
            "custom function {} supplies no subdifferential",
            c.name
        ))),
    }
}

/// Free-function form of [`FunctionModel::evaluate`].
pub fn evaluate(m: &FunctionModel, x: &[f64]) -> Result<f64> {
    m.evaluate(x)
}

pub fn symmetric_subdifferential(m: &FunctionModel, x: &[f64]) -> Result<Subdifferential> {
    m.symmetric_subdifferential(x)
}

pub fn closed_form_lyapunov(m: &FunctionModel, x: &[f64]) -> Result<f64> {
    m.lyapunov_potential(x)
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn benoist_zero(a: f64) -> f64 {
    ((1.0 - a) * (1.0 + a)).sqrt()
}

/// Right end x_c of the convex branch ]0, x_c[ of the Benoist potential:
/// the root of (x² + 1)√(1 − x²) = a in ]1/√3, 1[.
pub fn benoist_convexity_bound(a: f64) -> f64 {
    let g = |x: f64| (x * x + 1.0) * ((1.0 - x) * (1.0 + x)).sqrt() - a;
    let mut lo = 1.0 / 3f64.sqrt();
    let mut hi = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// f for one-dimensional built-ins, without domain checks.
pub(crate) fn scalar_value(f: &Family, y: f64) -> f64 {
    match *f {
        Family::Linear { alpha, beta } => alpha * y - beta,
        Family::Exponential { alpha, beta } => alpha * y.exp() - beta,
        Family::PowerNorm { alpha, p, .. } => alpha * y.abs().powf(p),
        Family::SignedPower { alpha, p } => alpha * y.abs().powf(p) * sign(y),
        Family::Benoist { alpha, beta } => alpha - beta * ((1.0 - y) * (1.0 + y)).sqrt(),
        Family::PiecewiseNonconvex { p } => {
            if y >= 0.0 {
                y.powf(p)
            } else {
                y
            }
        }
        Family::PiecewiseConvex {} => {
            if y <= 0.0 {
                -1.0
            } else {
                0.5 * y * y - 1.0
            }
        }
    }
}

fn sign(y: f64) -> f64 {
    if y > 0.0 {
        1.0
    } else if y < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub(crate) fn scalar_derivative(f: &Family, y: f64) -> Option<f64> {
    match *f {
        Family::Linear { alpha, .. } => Some(alpha),
        Family::Exponential { alpha, .. } => Some(alpha * y.exp()),
        Family::PowerNorm { alpha, p, .. } => {
            if y != 0.0 {
                Some(alpha * p * y.abs().powf(p - 1.0) * sign(y))
            } else if p > 1.0 {
                Some(0.0)
            } else {
                None
            }
        }
        Family::SignedPower { alpha, p } => {
            if y != 0.0 {
                Some(alpha * p * y.abs().powf(p - 1.0))
            } else if p > 1.0 {
                Some(0.0)
            } else if p == 1.0 {
                Some(alpha)
            } else {
                None
            }
        }
        Family::Benoist { beta, .. } => {
            if y.abs() < 1.0 {
                Some(beta * y / ((1.0 - y) * (1.0 + y)).sqrt())
            } else {
                None
            }
        }
        Family::PiecewiseNonconvex { p } => {
            if y > 0.0 {
                Some(p * y.powf(p - 1.0))
            } else if y < 0.0 {
                Some(1.0)
            } else {
                None
            }
        }
        Family::PiecewiseConvex {} => Some(if y > 0.0 { y } else { 0.0 }),
    }
}

pub(crate) fn scalar_second_derivative(f: &Family, y: f64) -> Option<f64> {
    match *f {
        Family::Linear { .. } => Some(0.0),
        Family::Exponential { alpha, .. } => Some(alpha * y.exp()),
        Family::PowerNorm { alpha, p, .. } => {
            if y != 0.0 {
                Some(alpha * p * (p - 1.0) * y.abs().powf(p - 2.0))
            } else if p == 2.0 {
                Some(2.0 * alpha)
            } else if p > 2.0 {
                Some(0.0)
            } else {
                None
            }
        }
        Family::SignedPower { alpha, p } => {
            if y != 0.0 {
                Some(alpha * p * (p - 1.0) * y.abs().powf(p - 2.0) * sign(y))
            } else if p > 2.0 || p == 1.0 {
                Some(0.0)
            } else {
                None
            }
        }
        Family::Benoist { beta, .. } => {
            if y.abs() < 1.0 {
                Some(beta / ((1.0 - y) * (1.0 + y)).powf(1.5))
            } else {
                None
            }
        }
        Family::PiecewiseNonconvex { p } => {
            if y > 0.0 {
                Some(p * (p - 1.0) * y.powf(p - 2.0))
            } else if y < 0.0 {
                Some(0.0)
            } else {
                None
            }
        }
        Family::PiecewiseConvex {} => {
            if y > 0.0 {
                Some(1.0)
            } else if y < 0.0 {
                Some(0.0)
            } else {
                None
            }
        }
    }
}
