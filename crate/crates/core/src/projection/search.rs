//! Global minimisation of the squared distance from (x, ρ) to a union of arcs.

use super::arcs::Arc;
use crate::error::{Error, Result};

/// Initial subintervals per arc for branch and bound.
const INITIAL_SPLITS: usize = 32;
/// Branch and bound stops subdividing at window / 2^14.
const FINEST_LEVEL: f64 = 16384.0;
/// Hard cap on objective evaluations spent on branch and bound.
const EVAL_BUDGET: usize = 20_000;
const GOLDEN_MAX_ITER: usize = 200;
const POLISH_MAX_ITER: usize = 16;

/// A local minimiser on one arc.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub y: f64,
    pub v: f64,
    pub sq: f64,
}

struct Problem<'a, 'b> {
    arcs: &'b [Arc<'a>],
    x: f64,
    rho: f64,
    refine_tol: f64,
}

impl Problem<'_, '_> {
    fn sq(&self, arc: usize, s: f64) -> f64 {
        let (y, v) = self.arcs[arc].point(s);
        let d = (y - self.x) * (y - self.x) + (v - self.rho) * (v - self.rho);
        if d.is_nan() {
            f64::INFINITY
        } else {
            d
        }
    }

    fn candidate(&self, arc: usize, s: f64) -> Candidate {
        let (y, v) = self.arcs[arc].point(s);
        Candidate {
            y,
            v,
            sq: self.sq(arc, s),
        }
    }

    /// Golden-section search on [a, b] followed by a Newton polish on the
    /// stationarity condition of the squared distance.
    fn refine(&self, arc: usize, a: f64, b: f64, lo: f64, hi: f64) -> Candidate {
        let s = golden(|s| self.sq(arc, s), a, b, self.refine_tol);
        let s = self.polish(arc, s, lo, hi);
        self.candidate(arc, s)
    }

    /// Half the derivative and second derivative of the squared distance.
    fn slope(&self, arc: usize, s: f64) -> Option<(f64, f64)> {
        let a = &self.arcs[arc];
        let (dy, dv, ddy, ddv) = a.derivatives(s)?;
        let (y, v) = a.point(s);
        let g = (y - self.x) * dy + (v - self.rho) * dv;
        let h = dy * dy + dv * dv + (y - self.x) * ddy + (v - self.rho) * ddv;
        (g.is_finite() && h.is_finite()).then_some((g, h))
    }

    /// Rounding error bound for `sq` at s.
    fn sq_noise(&self, arc: usize, s: f64) -> f64 {
        let (y, v) = self.arcs[arc].point(s);
        let e = (y - self.x).abs() * (y.abs() + self.x.abs()) + (v - self.rho).abs() * (v.abs() + self.rho.abs());
        16.0 * f64::EPSILON * e
    }

    /// Newton on the stationarity condition. A step is kept if it lowers the
    /// objective or, where the objective is flat to rounding, the slope.
    fn polish(&self, arc: usize, mut s: f64, lo: f64, hi: f64) -> f64 {
        let mut cur = self.sq(arc, s);
        let Some((mut g, mut h)) = self.slope(arc, s) else { return s };
        for _ in 0..POLISH_MAX_ITER {
            if !(h > 0.0) || g == 0.0 {
                break;
            }
            let next = (s - g / h).clamp(lo, hi);
            if next == s {
                break;
            }
            let val = self.sq(arc, next);
            let Some((g_next, h_next)) = self.slope(arc, next) else { break };
            let flat = val <= cur + 64.0 * f64::EPSILON * cur + self.sq_noise(arc, s);
            if !(val < cur || flat && g_next.abs() < g.abs()) {
                break;
            }
            s = next;
            cur = val;
            g = g_next;
            h = h_next;
        }
        s
    }
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_MAX_ITER {
        if b - a <= tol * (1.0 + a.abs().min(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let (fa, fb) = (f(a), f(b));
    let mut best = (c, fc);
    for cand in [(d, fd), (a, fa), (b, fb)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best.0
}

#[derive(Clone, Copy)]
struct Cell {
    arc: usize,
    s0: f64,
    s1: f64,
    d0: f64,
    d1: f64,
}

/// All local minimisers that may be global, found over the parts of the arcs
/// within distance `radius` of (x, ρ).
///
/// Arcs with a Lipschitz bound are searched by branch and bound on the
/// distance, so every region that could hold a global minimiser is refined.
/// Arcs without one fall back to a uniform scan of `grid_points` samples.
pub(crate) fn minimise(
    arcs: &[Arc<'_>],
    x: f64,
    rho: f64,
    radius: f64,
    grid_points: usize,
    refine_tol: f64,
) -> Result<Vec<Candidate>> {
    let prob = Problem {
        arcs,
        x,
        rho,
        refine_tol,
    };
    let mut candidates = Vec::new();
    let mut cells = Vec::new();
    let mut best = f64::INFINITY;
    let mut windows = Vec::with_capacity(arcs.len());

    for (i, arc) in arcs.iter().enumerate() {
        let Some((lo, hi)) = arc.window(x, rho, radius) else {
            windows.push(None);
            continue;
        };
        windows.push(Some((lo, hi)));
        for s in [arc.lo, arc.hi] {
            if s.is_finite() && lo <= s && s <= hi {
                candidates.push(prob.candidate(i, s));
            }
        }
        if lo == hi {
            candidates.push(prob.candidate(i, lo));
            continue;
        }
        if arc.speed_bound().is_none() {
            candidates.extend(scan_uniform(&prob, i, lo, hi, grid_points));
            continue;
        }
        let h = (hi - lo) / INITIAL_SPLITS as f64;
        let mut prev_s = lo;
        let mut prev_d = prob.sq(i, lo).sqrt();
        best = best.min(prev_d);
        for k in 1..=INITIAL_SPLITS {
            let s = if k == INITIAL_SPLITS { hi } else { lo + h * k as f64 };
            let d = prob.sq(i, s).sqrt();
            best = best.min(d);
            cells.push(Cell {
                arc: i,
                s0: prev_s,
                s1: s,
                d0: prev_d,
                d1: d,
            });
            prev_s = s;
            prev_d = d;
        }
    }

    // Sampled distances carry rounding error, so tiny cells may look steeper
    // than the Lipschitz bound allows.
    let slack = 8.0 * f64::EPSILON * (1.0 + x.abs() + rho.abs() + radius);
    let prunable = |c: &Cell, best: f64| {
        let speed = arcs[c.arc].speed_bound().unwrap_or(f64::INFINITY);
        let lower = 0.5 * (c.d0 + c.d1 - speed * (c.s1 - c.s0));
        lower > best * (1.0 + 1e-12) + slack
    };

    let mut evals = 0usize;
    let mut survivors = Vec::new();
    let mut stack: Vec<Cell> = cells.into_iter().rev().collect();
    while let Some(c) = stack.pop() {
        if prunable(&c, best) {
            continue;
        }
        let (lo, hi) = windows[c.arc].expect("cell on windowless arc");
        if c.s1 - c.s0 <= (hi - lo) / FINEST_LEVEL || evals >= EVAL_BUDGET {
            survivors.push(c);
            continue;
        }
        let mid = 0.5 * (c.s0 + c.s1);
        let dm = prob.sq(c.arc, mid).sqrt();
        evals += 1;
        best = best.min(dm);
        stack.push(Cell {
            s0: mid,
            d0: dm,
            ..c
        });
        stack.push(Cell {
            s1: mid,
            d1: dm,
            ..c
        });
    }
    survivors.retain(|c| !prunable(c, best));
    survivors.sort_by(|a, b| a.arc.cmp(&b.arc).then(a.s0.total_cmp(&b.s0)));

    // Contiguous survivors form clusters; each discrete local minimum of the
    // cluster's samples is refined.
    let mut i = 0;
    while i < survivors.len() {
        let mut j = i + 1;
        while j < survivors.len()
            && survivors[j].arc == survivors[i].arc
            && survivors[j].s0 == survivors[j - 1].s1
        {
            j += 1;
        }
        let arc = survivors[i].arc;
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(j - i + 1);
        pts.push((survivors[i].s0, survivors[i].d0));
        for c in &survivors[i..j] {
            pts.push((c.s1, c.d1));
        }
        let (lo, hi) = windows[arc].expect("cluster on windowless arc");
        for k in local_minima(&pts) {
            let a = pts[k.saturating_sub(1)].0;
            let b = pts[(k + 1).min(pts.len() - 1)].0;
            candidates.push(prob.refine(arc, a, b, lo, hi));
        }
        i = j;
    }

    candidates.retain(|c| c.sq.is_finite() && c.y.is_finite() && c.v.is_finite());
    if candidates.is_empty() {
        return Err(Error::SearchFailure(format!(
            "no finite candidate for ({x}, {rho}) within radius {radius}"
        )));
    }
    Ok(candidates)
}

fn scan_uniform(prob: &Problem<'_, '_>, arc: usize, lo: f64, hi: f64, n: usize) -> Vec<Candidate> {
    let n = n.max(3);
    let step = (hi - lo) / (n - 1) as f64;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let s = if k == n - 1 { hi } else { lo + step * k as f64 };
            (s, prob.sq(arc, s))
        })
        .collect();
    local_minima(&pts)
        .into_iter()
        .map(|k| {
            let a = pts[k.saturating_sub(1)].0;
            let b = pts[(k + 1).min(n - 1)].0;
            prob.refine(arc, a, b, lo, hi)
        })
        .collect()
}

/// Indices of samples no larger than their neighbours, keeping one index per
/// plateau.
fn local_minima(pts: &[(f64, f64)]) -> Vec<usize> {
    let n = pts.len();
    let mut out = Vec::new();
    let mut k = 0;
    while k < n {
        let mut e = k;
        while e + 1 < n && pts[e + 1].1 == pts[k].1 {
            e += 1;
        }
        let left_ok = k == 0 || pts[k - 1].1 > pts[k].1;
        let right_ok = e + 1 >= n || pts[e + 1].1 > pts[k].1;
        if left_ok && right_ok && pts[k].1.is_finite() {
            out.push((k + e) / 2);
        }
        k = e + 1;
    }
    out
}
