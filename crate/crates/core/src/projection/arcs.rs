//! Graphs of the one-dimensional families as unions of smooth arcs.
//!
//! Every arc of a built-in family is parametrised by the coordinate along
//! which its slope is at most one: the abscissa where |f′| ≤ 1, the ordinate
//! where |f′| ≥ 1, and the angle on Benoist's circular arc. The parametrisation
//! is therefore Lipschitz with a small known constant, which makes the global
//! search certifiable and keeps steep pieces well conditioned.

use std::f64::consts::FRAC_PI_2;

use crate::functions::{CustomFunction, Family};

/// Lipschitz constant used for slope-balanced arcs (exact bound is √2).
const BALANCED_SPEED: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Coordinate {
    Abscissa,
    Ordinate,
    Angle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Branch {
    Positive,
    Negative,
    /// Sign of the rescaled ordinate (odd functions).
    Odd,
}

#[derive(Clone, Copy)]
pub(crate) enum Curve<'a> {
    /// y = s, v = slope·s + intercept.
    Line { slope: f64, intercept: f64 },
    /// y = s, v = αeˢ − β.
    ExpAbscissa { alpha: f64, beta: f64 },
    /// v = s, y = ln((s + β)/α).
    ExpOrdinate { alpha: f64, beta: f64 },
    /// y = s, v = α|s|ᵖ (times sgn s when odd) + offset.
    PowAbscissa { alpha: f64, p: f64, odd: bool, offset: f64 },
    /// v = s, y = ±|(s − offset)/α|^(1/p).
    PowOrdinate { alpha: f64, p: f64, branch: Branch, offset: f64 },
    /// y = sin s, v = α − β cos s.
    Circle { alpha: f64, beta: f64 },
    /// y = s, v = f(s).
    Custom(&'a CustomFunction),
}

/// First and second derivatives (y′, v′, y″, v″) of an arc parametrisation.
pub(crate) type Derivatives = (f64, f64, f64, f64);

#[derive(Clone, Copy)]
pub(crate) struct Arc<'a> {
    pub curve: Curve<'a>,
    pub lo: f64,
    pub hi: f64,
}

impl<'a> Arc<'a> {
    fn new(curve: Curve<'a>, lo: f64, hi: f64) -> Self {
        Arc { curve, lo, hi }
    }

    pub fn coordinate(&self) -> Coordinate {
        match self.curve {
            Curve::ExpOrdinate { .. } | Curve::PowOrdinate { .. } => Coordinate::Ordinate,
            Curve::Circle { .. } => Coordinate::Angle,
            _ => Coordinate::Abscissa,
        }
    }

    /// Lipschitz constant of s ↦ (y(s), v(s)), if known.
    pub fn speed_bound(&self) -> Option<f64> {
        match self.curve {
            Curve::Line { slope, .. } => Some((1.0 + slope * slope).sqrt() * (1.0 + 1e-12)),
            Curve::Circle { beta, .. } => Some(beta.max(1.0) * (1.0 + 1e-12)),
            Curve::Custom(_) => None,
            _ => Some(BALANCED_SPEED),
        }
    }

    pub fn point(&self, s: f64) -> (f64, f64) {
        match self.curve {
            Curve::Line { slope, intercept } => (s, slope * s + intercept),
            Curve::ExpAbscissa { alpha, beta } => (s, alpha * s.exp() - beta),
            Curve::ExpOrdinate { alpha, beta } => (((s + beta) / alpha).ln(), s),
            Curve::PowAbscissa { alpha, p, odd, offset } => {
                let mut v = alpha * s.abs().powf(p);
                if odd && s < 0.0 {
                    v = -v;
                }
                (s, v + offset)
            }
            Curve::PowOrdinate { alpha, p, branch, offset } => {
                let u = (s - offset) / alpha;
                let mag = u.abs().powf(1.0 / p);
                let y = match branch {
                    Branch::Positive => mag,
                    Branch::Negative => -mag,
                    Branch::Odd => {
                        if u < 0.0 {
                            -mag
                        } else {
                            mag
                        }
                    }
                };
                (y, s)
            }
            Curve::Circle { alpha, beta } => (s.sin(), alpha - beta * s.cos()),
            Curve::Custom(c) => (s, (c.eval)(&[s])),
        }
    }

    pub fn derivatives(&self, s: f64) -> Option<Derivatives> {
        let d = match self.curve {
            Curve::Line { slope, .. } => (1.0, slope, 0.0, 0.0),
            Curve::ExpAbscissa { alpha, .. } => {
                let e = alpha * s.exp();
                (1.0, e, 0.0, e)
            }
            Curve::ExpOrdinate { beta, .. } => {
                let w = s + beta;
                (1.0 / w, 1.0, -1.0 / (w * w), 0.0)
            }
            Curve::PowAbscissa { alpha, p, odd, .. } => {
                let a = s.abs();
                let sg = if s < 0.0 { -1.0 } else { 1.0 };
                let d1 = alpha * p * a.powf(p - 1.0) * if odd { 1.0 } else { sg };
                let d2 = alpha * p * (p - 1.0) * a.powf(p - 2.0) * if odd { sg } else { 1.0 };
                (1.0, d1, 0.0, d2)
            }
            Curve::PowOrdinate { alpha, p, branch, offset } => {
                let u = (s - offset) / alpha;
                let q = 1.0 / p;
                let a = u.abs();
                let su = if u < 0.0 { -1.0 } else { 1.0 };
                let b = match branch {
                    Branch::Positive => 1.0,
                    Branch::Negative => -1.0,
                    Branch::Odd => su,
                };
                let d1 = b * q * a.powf(q - 1.0) * su / alpha;
                let d2 = b * q * (q - 1.0) * a.powf(q - 2.0) / (alpha * alpha);
                (d1, 1.0, d2, 0.0)
            }
            Curve::Circle { beta, .. } => {
                let (sn, cs) = s.sin_cos();
                (cs, beta * sn, -sn, beta * cs)
            }
            Curve::Custom(c) => {
                let g = c.gradient.as_ref()?(&[s])?;
                let h = c.hessian.as_ref()?(&[s])?;
                (1.0, g[0], 0.0, h[(0, 0)])
            }
        };
        let finite = d.0.is_finite() && d.1.is_finite() && d.2.is_finite() && d.3.is_finite();
        finite.then_some(d)
    }

    /// Parameter interval of the points whose abscissa lies within r of x and
    /// whose ordinate lies within r of ρ, as far as the chart can tell.
    pub fn window(&self, x: f64, rho: f64, r: f64) -> Option<(f64, f64)> {
        let (a, b) = match self.coordinate() {
            Coordinate::Abscissa => (x - r, x + r),
            Coordinate::Ordinate => (rho - r, rho + r),
            Coordinate::Angle => {
                let lo = (x - r).clamp(-1.0, 1.0);
                let hi = (x + r).clamp(-1.0, 1.0);
                (lo.asin(), hi.asin())
            }
        };
        let lo = a.max(self.lo);
        let hi = b.min(self.hi);
        (lo <= hi && lo.is_finite() && hi.is_finite()).then_some((lo, hi))
    }
}

/// Splits the graph of a one-dimensional family into slope-balanced arcs.
pub(crate) fn family_arcs(f: &Family) -> Vec<Arc<'static>> {
    let inf = f64::INFINITY;
    match *f {
        Family::Linear { alpha, beta } => vec![Arc::new(
            Curve::Line {
                slope: alpha,
                intercept: -beta,
            },
            -inf,
            inf,
        )],
        Family::Exponential { alpha, beta } => {
            let ys = -alpha.ln();
            let vs = 1.0 - beta;
            vec![
                Arc::new(Curve::ExpAbscissa { alpha, beta }, -inf, ys),
                Arc::new(Curve::ExpOrdinate { alpha, beta }, vs, inf),
            ]
        }
        Family::SignedPower { alpha, p } => {
            if p == 1.0 {
                return vec![Arc::new(
                    Curve::Line {
                        slope: alpha,
                        intercept: 0.0,
                    },
                    -inf,
                    inf,
                )];
            }
            let (ys, vs) = unit_slope_point(alpha.abs(), p);
            let abscissa = |lo, hi| {
                Arc::new(
                    Curve::PowAbscissa {
                        alpha,
                        p,
                        odd: true,
                        offset: 0.0,
                    },
                    lo,
                    hi,
                )
            };
            let ordinate = |lo, hi| {
                Arc::new(
                    Curve::PowOrdinate {
                        alpha,
                        p,
                        branch: Branch::Odd,
                        offset: 0.0,
                    },
                    lo,
                    hi,
                )
            };
            if p < 1.0 {
                vec![abscissa(-inf, -ys), ordinate(-vs, vs), abscissa(ys, inf)]
            } else {
                vec![ordinate(-inf, -vs), abscissa(-ys, ys), ordinate(vs, inf)]
            }
        }
        Family::PowerNorm { alpha, p, .. } => {
            if p == 1.0 {
                return vec![
                    Arc::new(
                        Curve::Line {
                            slope: -alpha,
                            intercept: 0.0,
                        },
                        -inf,
                        0.0,
                    ),
                    Arc::new(
                        Curve::Line {
                            slope: alpha,
                            intercept: 0.0,
                        },
                        0.0,
                        inf,
                    ),
                ];
            }
            let (ys, vs) = unit_slope_point(alpha.abs(), p);
            let abscissa = |lo, hi| {
                Arc::new(
                    Curve::PowAbscissa {
                        alpha,
                        p,
                        odd: false,
                        offset: 0.0,
                    },
                    lo,
                    hi,
                )
            };
            let ordinate = |branch, lo: f64, hi: f64| {
                let (lo, hi) = if alpha > 0.0 { (lo, hi) } else { (-hi, -lo) };
                Arc::new(
                    Curve::PowOrdinate {
                        alpha,
                        p,
                        branch,
                        offset: 0.0,
                    },
                    lo,
                    hi,
                )
            };
            if p < 1.0 {
                vec![
                    abscissa(-inf, -ys),
                    ordinate(Branch::Negative, 0.0, vs),
                    ordinate(Branch::Positive, 0.0, vs),
                    abscissa(ys, inf),
                ]
            } else {
                vec![
                    ordinate(Branch::Negative, vs, inf),
                    abscissa(-ys, ys),
                    ordinate(Branch::Positive, vs, inf),
                ]
            }
        }
        Family::Benoist { alpha, beta } => {
            vec![Arc::new(Curve::Circle { alpha, beta }, -FRAC_PI_2, FRAC_PI_2)]
        }
        Family::PiecewiseNonconvex { p } => {
            let (ys, vs) = unit_slope_point(1.0, p);
            vec![
                Arc::new(
                    Curve::Line {
                        slope: 1.0,
                        intercept: 0.0,
                    },
                    -inf,
                    0.0,
                ),
                Arc::new(
                    Curve::PowAbscissa {
                        alpha: 1.0,
                        p,
                        odd: false,
                        offset: 0.0,
                    },
                    0.0,
                    ys,
                ),
                Arc::new(
                    Curve::PowOrdinate {
                        alpha: 1.0,
                        p,
                        branch: Branch::Positive,
                        offset: 0.0,
                    },
                    vs,
                    inf,
                ),
            ]
        }
        Family::PiecewiseConvex {} => vec![
            Arc::new(
                Curve::Line {
                    slope: 0.0,
                    intercept: -1.0,
                },
                -inf,
                0.0,
            ),
            Arc::new(
                Curve::PowAbscissa {
                    alpha: 0.5,
                    p: 2.0,
                    odd: false,
                    offset: -1.0,
                },
                0.0,
                1.0,
            ),
            Arc::new(
                Curve::PowOrdinate {
                    alpha: 0.5,
                    p: 2.0,
                    branch: Branch::Positive,
                    offset: -1.0,
                },
                -0.5,
                inf,
            ),
        ],
    }
}

pub(crate) fn custom_arcs(c: &CustomFunction) -> Vec<Arc<'_>> {
    vec![Arc::new(Curve::Custom(c), c.domain.lo, c.domain.hi)]
}

/// Abscissa y > 0 where a·p·y^(p−1) = 1, and the magnitude a·yᵖ there.
fn unit_slope_point(a: f64, p: f64) -> (f64, f64) {
    let ys = (1.0 / (a * p)).powf(1.0 / (p - 1.0));
    (ys, a * ys.powf(p))
}
