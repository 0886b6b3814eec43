use serde::{Deserialize, Serialize};

/// A closed interval with possibly infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.max(self.lo).min(self.hi)
    }

    pub fn distance(&self, v: f64) -> f64 {
        if v < self.lo {
            self.lo - v
        } else if v > self.hi {
            v - self.hi
        } else {
            0.0
        }
    }

    fn scale(&self, t: f64) -> Interval {
        let a = scale_bound(self.lo, t);
        let b = scale_bound(self.hi, t);
        Interval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }
}

fn scale_bound(v: f64, t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        v * t
    }
}

/// A subdifferential-type set in X.
///
/// One-dimensional sets are finite unions of closed intervals; an empty union
/// is represented by `Empty`. Higher-dimensional sets are limited to the shapes
/// that arise for the radial family: a single gradient, an origin-centred ball
/// or sphere, or the whole space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Subdifferential {
    Empty,
    Intervals { intervals: Vec<Interval> },
    Point { g: Vec<f64> },
    Ball { radius: f64 },
    Sphere { radius: f64 },
    Whole,
}

impl Subdifferential {
    pub fn scalar(v: f64) -> Self {
        Subdifferential::Intervals {
            intervals: vec![Interval::point(v)],
        }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Subdifferential::Intervals {
            intervals: vec![Interval::new(lo, hi)],
        }
    }

    pub fn real_line() -> Self {
        Subdifferential::Intervals {
            intervals: vec![Interval::REAL_LINE],
        }
    }

    /// Union of intervals, sorted and merged.
    pub fn from_intervals(mut intervals: Vec<Interval>) -> Self {
        if intervals.is_empty() {
            return Subdifferential::Empty;
        }
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        Subdifferential::Intervals { intervals: merged }
    }

    /// The gradient singleton, using the interval form in dimension one.
    pub fn gradient(g: Vec<f64>) -> Self {
        if g.len() == 1 {
            Subdifferential::scalar(g[0])
        } else {
            Subdifferential::Point { g }
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Subdifferential::Empty)
    }

    /// Euclidean distance from `v` to the set; infinite when empty.
    pub fn distance(&self, v: &[f64]) -> f64 {
        self.scaled_distance(v, 1.0)
    }

    /// Distance from `v` to t·S.
    pub fn scaled_distance(&self, v: &[f64], t: f64) -> f64 {
        match self {
            Subdifferential::Empty => f64::INFINITY,
            Subdifferential::Intervals { intervals } => {
                debug_assert_eq!(v.len(), 1);
                intervals
                    .iter()
                    .map(|iv| iv.scale(t).distance(v[0]))
                    .fold(f64::INFINITY, f64::min)
            }
            Subdifferential::Point { g } => v
                .iter()
                .zip(g)
                .map(|(a, b)| (a - t * b).powi(2))
                .sum::<f64>()
                .sqrt(),
            Subdifferential::Ball { radius } => (norm(v) - t.abs() * radius).max(0.0),
            Subdifferential::Sphere { radius } => (norm(v) - t.abs() * radius).abs(),
            Subdifferential::Whole => {
                if t == 0.0 {
                    norm(v)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn contains_zero(&self, tol: f64) -> bool {
        match self {
            Subdifferential::Empty => false,
            Subdifferential::Intervals { intervals } => {
                intervals.iter().any(|iv| iv.distance(0.0) <= tol)
            }
            Subdifferential::Point { g } => norm(g) <= tol,
            Subdifferential::Ball { .. } | Subdifferential::Whole => true,
            Subdifferential::Sphere { radius } => *radius <= tol,
        }
    }

    /// Set union for the shapes produced by the built-in families.
    pub fn union(&self, other: &Subdifferential) -> Subdifferential {
        use Subdifferential::*;
        match (self, other) {
            (Empty, s) | (s, Empty) => s.clone(),
            (Intervals { intervals: a }, Intervals { intervals: b }) => {
                Subdifferential::from_intervals(a.iter().chain(b).copied().collect())
            }
            (Whole, _) | (_, Whole) => Whole,
            (Ball { radius: r }, Sphere { radius: s }) | (Sphere { radius: s }, Ball { radius: r })
                if s <= r =>
            {
                Ball { radius: *r }
            }
            (Ball { radius: r }, Ball { radius: s }) => Ball { radius: r.max(*s) },
            (a, b) if a == b => a.clone(),
            (a, b) => panic!("unsupported subdifferential union {a:?} with {b:?}"),
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}
