//! Characters of the one-holed torus and their trace maps.
//!
//! A character is the triple `(x, y, z) = (tr X, tr Y, tr XY)` attached to the
//! base slopes `(0/1, ∞, 1/1)` together with the commutator trace `κ`. The
//! edge relation `z + z′ = xy` extends it to every slope.

mod conjugator;
pub mod exact;
mod fixed;
pub(crate) mod linalg;
mod matrix;
mod mcg;
mod pants;

use alloc::collections::BTreeMap;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::farey::{descent, Slope};
use crate::{Error, Result};

pub use conjugator::{conjugator_for, cusp_ratio, Conjugator};
pub use fixed::{fixed_characters_of, FixedPointOptions};
pub use matrix::{character_from_matrices, half_length, matrices_from_character, HalfLength, Mat2, MatrixRep};
pub use mcg::{apply_lift, mcg_act_on_character, mcg_act_on_slope, Gl2Z, Letter, MCGElement};
pub use pants::pants_holonomy;

/// Relative tolerance for accepting the vertex relation.
pub const VERTEX_TOL: f64 = 1e-10;

/// Anything the edge relation can run over: complex floats, exact complex
/// rationals, jets carrying derivatives.
pub trait TraceRing: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {}

impl<T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>> TraceRing for T {}

/// `x² + y² + z² − xyz − κ − 2`.
pub fn vertex_residual(x: Complex64, y: Complex64, z: Complex64, kappa: Complex64) -> Complex64 {
    x * x + y * y + z * z - x * y * z - kappa - 2.0
}

/// The vertex residual divided by the size of the terms it cancels.
pub fn relative_vertex_residual(x: Complex64, y: Complex64, z: Complex64, kappa: Complex64) -> f64 {
    let scale = [x.norm_sqr(), y.norm_sqr(), z.norm_sqr(), (x * y * z).norm(), kappa.norm()]
        .into_iter()
        .fold(1.0, f64::max);
    vertex_residual(x, y, z, kappa).norm() / scale
}

/// `z′ = xy − z`.
pub fn propagate_edge<T: TraceRing>(x: T, y: T, z: T) -> T {
    x * y - z
}

/// Trace at `s` by running the edge relation down the Farey path from the
/// base values at `(0/1, ∞, 1/1)`.
pub fn trace_via_descent<T: TraceRing>(base: &[T; 3], s: Slope) -> T {
    let mut memo: BTreeMap<Slope, T> = BTreeMap::new();
    memo.insert(Slope::ZERO, base[0].clone());
    memo.insert(Slope::INFINITY, base[1].clone());
    memo.insert(Slope::ONE, base[2].clone());
    for st in descent(s) {
        let v = propagate_edge(memo[&st.x].clone(), memo[&st.y].clone(), memo[&st.opposite].clone());
        memo.insert(st.new, v);
    }
    memo.remove(&s).expect("descent ends at s")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Character {
    kappa: Complex64,
    x: Complex64,
    y: Complex64,
    z: Complex64,
}

impl Character {
    /// Validates the vertex relation to [`VERTEX_TOL`] (relative).
    pub fn new(kappa: Complex64, x: Complex64, y: Complex64, z: Complex64) -> Result<Character> {
        Self::with_tolerance(kappa, x, y, z, VERTEX_TOL)
    }

    pub fn with_tolerance(kappa: Complex64, x: Complex64, y: Complex64, z: Complex64, tol: f64) -> Result<Character> {
        if ![kappa, x, y, z].iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let r = relative_vertex_residual(x, y, z, kappa);
        if r > tol {
            return Err(Error::VertexRelation { residual: vertex_residual(x, y, z, kappa).norm() });
        }
        Ok(Character { kappa, x, y, z })
    }

    /// The character with the given base triple; κ is read off the vertex relation.
    pub fn from_triple(x: Complex64, y: Complex64, z: Complex64) -> Character {
        let kappa = x * x + y * y + z * z - x * y * z - 2.0;
        Character { kappa, x, y, z }
    }

    pub fn from_real_triple(x: f64, y: f64, z: f64) -> Character {
        Self::from_triple(Complex64::new(x, 0.0), Complex64::new(y, 0.0), Complex64::new(z, 0.0))
    }

    pub fn kappa(&self) -> Complex64 {
        self.kappa
    }

    pub(crate) fn with_kappa(mut self, kappa: Complex64) -> Character {
        self.kappa = kappa;
        self
    }

    /// `(x, y, z)` at `(0/1, ∞, 1/1)`.
    pub fn triple(&self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn x(&self) -> Complex64 {
        self.x
    }

    pub fn y(&self) -> Complex64 {
        self.y
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn trace_map(&self) -> TraceMap {
        TraceMap::new(*self)
    }

    /// Largest coordinate difference to another character's base triple.
    pub fn distance(&self, other: &Character) -> f64 {
        let a = self.triple();
        let b = other.triple();
        (0..3).map(|i| (a[i] - b[i]).norm()).fold(0.0, f64::max)
    }
}

/// Memoised trace map `φ` of a character.
///
/// Lookups fill the memo along the Farey path to the requested slope. Every
/// new value closes a vertex `(x, y, new)`; the largest relative vertex
/// residual seen is tracked for auditing drift.
#[derive(Debug, Clone)]
pub struct TraceMap {
    character: Character,
    memo: BTreeMap<Slope, Complex64>,
    max_residual: f64,
}

impl TraceMap {
    pub fn new(c: Character) -> TraceMap {
        let mut memo = BTreeMap::new();
        memo.insert(Slope::ZERO, c.x);
        memo.insert(Slope::INFINITY, c.y);
        memo.insert(Slope::ONE, c.z);
        TraceMap { character: c, memo, max_residual: 0.0 }
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn kappa(&self) -> Complex64 {
        self.character.kappa
    }

    pub fn trace_of(&mut self, s: Slope) -> Complex64 {
        if let Some(v) = self.memo.get(&s) {
            return *v;
        }
        for st in descent(s) {
            if self.memo.contains_key(&st.new) {
                continue;
            }
            let (x, y, o) = (self.memo[&st.x], self.memo[&st.y], self.memo[&st.opposite]);
            let v = propagate_edge(x, y, o);
            let r = relative_vertex_residual(x, y, v, self.character.kappa);
            if r > self.max_residual {
                self.max_residual = r;
            }
            self.memo.insert(st.new, v);
        }
        self.memo[&s]
    }

    /// Memoised value, if already filled.
    pub fn get(&self, s: Slope) -> Option<Complex64> {
        self.memo.get(&s).copied()
    }

    /// Inserts a value computed elsewhere (e.g. by a parallel worker).
    /// Returns false if an existing entry disagrees beyond `tol` (relative).
    pub fn fill(&mut self, s: Slope, v: Complex64, tol: f64) -> bool {
        match self.memo.get(&s) {
            Some(old) => (old - v).norm() <= tol * old.norm().max(1.0),
            None => {
                self.memo.insert(s, v);
                true
            }
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Largest relative vertex residual over every vertex closed so far.
    pub fn max_vertex_residual(&self) -> f64 {
        self.max_residual
    }

    pub fn memo(&self) -> impl Iterator<Item = (&Slope, &Complex64)> {
        self.memo.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexarith::{c, real};
    use crate::farey::enumerate_slopes;

    #[test]
    fn vertex_residual_examples() {
        assert_eq!(vertex_residual(real(3.0), real(3.0), real(3.0), real(-2.0)), real(0.0));
        assert_eq!(vertex_residual(real(2.0), real(2.0), real(2.0), real(2.0)), real(0.0));
        assert_eq!(vertex_residual(real(0.0), real(0.0), real(0.0), real(-2.0)), real(0.0));
    }

    #[test]
    fn propagate_examples() {
        assert_eq!(propagate_edge(real(3.0), real(3.0), real(3.0)), real(6.0));
        let (x, y) = (c(1.5, -0.3), c(-2.0, 4.0));
        assert_eq!(propagate_edge(x, y, real(0.0)), x * y);
        let z = c(0.7, 0.1);
        assert!((propagate_edge(x, y, propagate_edge(x, y, z)) - z).norm() < 1e-15);
    }

    #[test]
    fn markoff_traces() {
        let mut tm = Character::new(real(-2.0), real(3.0), real(3.0), real(3.0)).unwrap().trace_map();
        assert_eq!(tm.trace_of(Slope::ZERO), real(3.0));
        assert_eq!(tm.trace_of(Slope::INFINITY), real(3.0));
        assert_eq!(tm.trace_of(Slope::ONE), real(3.0));
        assert_eq!(tm.trace_of(Slope::MINUS_ONE), real(6.0));
        assert_eq!(tm.trace_of(Slope::new(1, 2).unwrap()), real(6.0));
        assert_eq!(tm.trace_of(Slope::new(2, 1).unwrap()), real(6.0));
        // (3, 3, 6) -> (3, 6, 15): 1/3 sits beyond 1/2 next to 0/1.
        assert_eq!(tm.trace_of(Slope::new(1, 3).unwrap()), real(15.0));
        assert_eq!(tm.trace_of(Slope::new(2, 3).unwrap()), real(15.0));
        // Every trace is 3 times a Markoff number; the oracle set comes from
        // Vieta jumping on a² + b² + c² = 3abc.
        let mut markoff = std::collections::BTreeSet::new();
        let mut stack = std::vec![(1u64, 1u64, 1u64)];
        while let Some((a, b, cc)) = stack.pop() {
            markoff.extend([a, b, cc]);
            for (u, v, w) in [(a, b, cc), (b, cc, a), (a, cc, b)] {
                let n = 3 * u * v - w;
                if n > w.max(u).max(v) && n < 10_000_000 {
                    stack.push((u, v, n));
                }
            }
        }
        for s in enumerate_slopes(9) {
            let t = tm.trace_of(s).re / 3.0;
            assert_eq!(t.fract(), 0.0);
            assert!(markoff.contains(&(t as u64)), "{s}: {t}");
        }
        assert!(tm.max_vertex_residual() < 1e-15);
    }

    #[test]
    fn character_validation() {
        assert!(Character::new(real(0.0), real(3.0), real(3.0), real(3.0)).is_err());
        let c0 = Character::from_triple(c(1.0, 2.0), c(-0.5, 0.3), c(2.0, 1.0));
        assert!(Character::new(c0.kappa(), c0.x(), c0.y(), c0.z()).is_ok());
    }

    #[test]
    fn memo_and_descent_agree() {
        let ch = Character::from_triple(c(2.1, 0.4), c(-1.3, 1.1), c(0.6, -2.2));
        let mut tm = ch.trace_map();
        for s in enumerate_slopes(20) {
            let a = tm.trace_of(s);
            let b = trace_via_descent(&ch.triple(), s);
            assert_eq!(a, b);
        }
    }
}
