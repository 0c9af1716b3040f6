//! Fundamental domains for the action of an Anosov mapping class on slopes.
//!
//! An Anosov `θ` acts on the circle of slopes with an attracting and a
//! repelling fixed point `μ₊`, `μ₋` (quadratic irrationals). They cut the
//! circle into two open arcs, each preserved by `θ`. On each arc let `s₀` be
//! the slope of least size; the half-open arc `[s₀, θ·s₀)` that avoids the
//! fixed points meets every `⟨θ⟩`-orbit in that arc exactly once.

use alloc::vec::Vec;

use crate::charvariety::MCGElement;
use crate::farey::{enumerate_slopes, Slope};
use crate::{Error, Result};

/// `s` lies on the closed arc running upward from `a` to `b` (wrapping at `∞`).
fn on_arc(a: Slope, b: Slope, s: Slope) -> bool {
    if a <= b {
        a <= s && s <= b
    } else {
        s >= a || s <= b
    }
}

/// Same test against real points; `f64::INFINITY` stands for `∞`.
fn on_arc_f64(a: f64, b: f64, s: f64) -> bool {
    if a <= b {
        a <= s && s <= b
    } else {
        s >= a || s <= b
    }
}

/// Whether the open upward arc `(a, b)` meets the closed upward arc `[c, d]`.
pub fn open_arc_meets_closed(a: Slope, b: Slope, c: Slope, d: Slope) -> bool {
    let in_open = |s: Slope| s != a && s != b && on_arc(a, b, s);
    if in_open(c) {
        return true;
    }
    // Otherwise [c, d] starts outside (a, b) and enters it only by passing a.
    on_arc(c, d, a) && a != d
}

/// Which side of the fixed points an arc is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The arc between `μ₋` and `μ₊` not containing `∞`.
    Bounded,
    /// The arc through `∞`.
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub side: Side,
    /// Least-size slope of the arc; included.
    pub start: Slope,
    /// `θ·start`; excluded.
    pub end: Slope,
    /// The domain closure is the upward arc from `lo` to `hi`.
    lo: Slope,
    hi: Slope,
}

impl Domain {
    pub fn contains(&self, s: Slope) -> bool {
        s != self.end && on_arc(self.lo, self.hi, s)
    }

    /// Closed upward arc `(lo, hi)` covering the closure of the domain.
    pub fn closure(&self) -> (Slope, Slope) {
        (self.lo, self.hi)
    }
}

/// Repelling and attracting fixed points `(μ₋, μ₊)` with `μ₋ < μ₊`, as reals.
pub fn fixed_points(theta: &MCGElement) -> Result<(f64, f64)> {
    if !theta.is_anosov() {
        return Err(Error::NotAnosov);
    }
    let m = theta.matrix();
    let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
    let disc = num_traits::Float::sqrt((a - d) * (a - d) + 4.0 * b * c);
    let r1 = ((a - d) - disc) / (2.0 * c);
    let r2 = ((a - d) + disc) / (2.0 * c);
    Ok(if r1 < r2 { (r1, r2) } else { (r2, r1) })
}

fn arc_of(mu: (f64, f64), s: Slope) -> Side {
    let t = s.to_f64();
    if t.is_finite() && t > mu.0 && t < mu.1 {
        Side::Bounded
    } else {
        Side::Unbounded
    }
}

fn least_slope_on(mu: (f64, f64), side: Side) -> Slope {
    let mut n = 4;
    loop {
        let mut best: Option<Slope> = None;
        for s in enumerate_slopes(n) {
            if arc_of(mu, s) == side && best.is_none_or(|b| (s.size(), s) < (b.size(), b)) {
                best = Some(s);
            }
        }
        if let Some(b) = best {
            return b;
        }
        n *= 2;
    }
}

/// The two fundamental domains, bounded side first.
pub fn fundamental_domains(theta: &MCGElement) -> Result<[Domain; 2]> {
    let mu = fixed_points(theta)?;
    let mut out = Vec::with_capacity(2);
    for side in [Side::Bounded, Side::Unbounded] {
        let start = least_slope_on(mu, side);
        let end = theta.matrix().act(start)?;
        // Orient so the closed arc avoids both fixed points.
        let (t0, t1) = (start.to_f64(), end.to_f64());
        let (lo, hi) = if on_arc_f64(t0, t1, mu.0) || on_arc_f64(t0, t1, mu.1) { (end, start) } else { (start, end) };
        out.push(Domain { side, start, end, lo, hi });
    }
    Ok([out[0], out[1]])
}

/// Orbit representatives of size at most `max_size` in the given domain,
/// in canonical enumeration order.
pub fn representatives(domain: &Domain, max_size: u64) -> Vec<Slope> {
    enumerate_slopes(max_size).into_iter().filter(|s| domain.contains(*s)).collect()
}
