//! Exact complex-rational trace maps.
//!
//! Floating inputs are converted exactly (every finite double is a dyadic
//! rational), so integer and rational characters propagate without rounding.

use alloc::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{propagate_edge, Character};
use crate::farey::{descent, Slope};

pub type ExactComplex = Complex<BigRational>;

pub fn exact_from_f64(z: Complex64) -> Option<ExactComplex> {
    Some(Complex::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?))
}

pub fn exact_to_f64(z: &ExactComplex) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

fn int(n: i64) -> ExactComplex {
    Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

/// `x² + y² + z² − xyz − κ − 2`, exactly.
pub fn exact_vertex_residual(x: &ExactComplex, y: &ExactComplex, z: &ExactComplex, kappa: &ExactComplex) -> ExactComplex {
    x * x + y * y + z * z - x * y * z - kappa - int(2)
}

#[derive(Debug, Clone)]
pub struct ExactTraceMap {
    kappa: ExactComplex,
    memo: BTreeMap<Slope, ExactComplex>,
}

impl ExactTraceMap {
    /// κ is recomputed exactly from the base triple.
    pub fn from_character(c: &Character) -> Option<ExactTraceMap> {
        let [x, y, z] = c.triple().map(exact_from_f64);
        let (x, y, z) = (x?, y?, z?);
        let kappa = &x * &x + &y * &y + &z * &z - &x * &y * &z - int(2);
        let mut memo = BTreeMap::new();
        memo.insert(Slope::ZERO, x);
        memo.insert(Slope::INFINITY, y);
        memo.insert(Slope::ONE, z);
        Some(ExactTraceMap { kappa, memo })
    }

    pub fn kappa(&self) -> &ExactComplex {
        &self.kappa
    }

    pub fn trace_of(&mut self, s: Slope) -> ExactComplex {
        if let Some(v) = self.memo.get(&s) {
            return v.clone();
        }
        for st in descent(s) {
            if self.memo.contains_key(&st.new) {
                continue;
            }
            let v = propagate_edge(self.memo[&st.x].clone(), self.memo[&st.y].clone(), self.memo[&st.opposite].clone());
            self.memo.insert(st.new, v);
        }
        self.memo[&s].clone()
    }

    /// Exact vertex residual of every memoised triple reachable as
    /// `(x, y, new)` along the path to `s`; all must vanish.
    pub fn path_residuals_vanish(&mut self, s: Slope) -> bool {
        self.trace_of(s);
        descent(s).iter().all(|st| {
            exact_vertex_residual(&self.memo[&st.x], &self.memo[&st.y], &self.memo[&st.new], &self.kappa).is_zero()
        })
    }
}
