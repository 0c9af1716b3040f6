//! Sums of `tan⁻¹(c / sinh(l/2))` over one Weierstrass class of slopes, for a
//! one-cone or one-holed hyperbolic torus. Each class sums to `π/2`.

use alloc::format;

use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use num_traits::Float;

use super::report::{accumulate, SeriesMode, SumReport, TermOutcome};
use super::series::series_terms;
use super::SlopeClass;
use crate::charvariety::Character;
use crate::complexarith::{LogClass, Modulus};
use crate::{Error, Result};

/// Geometry at the distinguished point: a cone of angle `θ`, or a geodesic
/// boundary of length `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeierstrassKind {
    Cone(f64),
    Boundary(f64),
}

impl WeierstrassKind {
    fn check(self) -> Result<()> {
        match self {
            WeierstrassKind::Cone(t) if (0.0..2.0 * PI).contains(&t) => Ok(()),
            WeierstrassKind::Boundary(l) if l >= 0.0 && l.is_finite() => Ok(()),
            k => Err(Error::InvalidParameter(format!("{k:?}"))),
        }
    }

    /// Numerator `cos(θ/4)` or `cosh(l/4)`.
    pub fn numerator(self) -> f64 {
        match self {
            WeierstrassKind::Cone(t) => Float::cos(t / 4.0),
            WeierstrassKind::Boundary(l) => Float::cosh(l / 4.0),
        }
    }

    /// Commutator trace `−2cos(θ/2)` or `−2cosh(l/2)`.
    pub fn kappa(self) -> f64 {
        match self {
            WeierstrassKind::Cone(t) => -2.0 * Float::cos(t / 2.0),
            WeierstrassKind::Boundary(l) => -2.0 * Float::cosh(l / 2.0),
        }
    }
}

/// The trace `t > 2` with `(t, t, t)` on the level set `κ`, i.e. the largest
/// root of `t³ − 3t² + 2 + κ`.
pub fn symmetric_triple(kappa: f64) -> Result<f64> {
    if !(kappa < 2.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!("κ = {kappa} has no symmetric real triple above 2")));
    }
    let f = |t: f64| t * t * t - 3.0 * t * t + 2.0 + kappa;
    // f(2) = κ − 2 < 0 and f is increasing beyond 2.
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The class sum on the symmetric torus with the given cone angle or
/// boundary length.
pub fn weierstrass_sum(kind: WeierstrassKind, cls: SlopeClass, max_size: u64) -> Result<SumReport> {
    kind.check()?;
    let t = symmetric_triple(kind.kappa())?;
    weierstrass_sum_with(&Character::from_real_triple(t, t, t), kind, cls, max_size)
}

/// The class sum over an arbitrary real character whose κ matches `kind`.
pub fn weierstrass_sum_with(c: &Character, kind: WeierstrassKind, cls: SlopeClass, max_size: u64) -> Result<SumReport> {
    kind.check()?;
    let want = kind.kappa();
    if (c.kappa() - want).norm() > 1e-9 * want.abs().max(1.0) {
        return Err(Error::ModeMismatch(format!("κ = {} does not match {kind:?} (κ = {want})", c.kappa())));
    }
    let num = kind.numerator();
    let terms = series_terms(c, max_size).into_iter().filter(|(s, _)| cls.contains(*s)).map(|(s, tr)| {
        let out = if !(tr.re.is_finite() && tr.im.is_finite()) {
            Ok(TermOutcome::NonFinite)
        } else if tr.im.abs() > 1e-9 * tr.re.abs().max(1.0) || tr.re.abs() <= 2.0 {
            Err(Error::NonRealLength)
        } else {
            // sinh(l/2) = √(tr²/4 − 1)
            let sh = Float::sqrt(tr.re * tr.re / 4.0 - 1.0);
            Ok(TermOutcome::Value(Complex64::new(Float::atan(num / sh), 0.0)))
        };
        (s, out)
    });
    let target = LogClass::new(Complex64::new(FRAC_PI_2, 0.0), Modulus::TwoPiI);
    accumulate(SeriesMode::Weierstrass, target, false, max_size, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_roots() {
        assert!((symmetric_triple(-2.0).unwrap() - 3.0).abs() < 1e-14);
        assert!((symmetric_triple(-18.0).unwrap() - 4.0).abs() < 1e-14);
        let t = symmetric_triple(0.5).unwrap();
        assert!(t > 2.0 && (t * t * t - 3.0 * t * t + 2.5).abs() < 1e-12);
        assert!(symmetric_triple(3.0).is_err());
    }

    #[test]
    fn kind_parameters() {
        assert_eq!(WeierstrassKind::Cone(0.0).kappa(), -2.0);
        assert_eq!(WeierstrassKind::Cone(0.0).numerator(), 1.0);
        let l = 2.0 * 9f64.acosh();
        assert!((WeierstrassKind::Boundary(l).kappa() + 18.0).abs() < 1e-12);
        assert!((WeierstrassKind::Boundary(l).numerator() - 5f64.sqrt()).abs() < 1e-12);
        assert!(WeierstrassKind::Cone(7.0).check().is_err());
        assert!(WeierstrassKind::Boundary(-1.0).check().is_err());
    }

    #[test]
    fn cusp_classes() {
        for cls in SlopeClass::ALL {
            let r = weierstrass_sum(WeierstrassKind::Cone(0.0), cls, 120).unwrap();
            assert!(r.residual < 1e-6, "{cls}: {} {}", r.value, r.residual);
        }
    }

    #[test]
    fn mismatched_kappa() {
        let c = Character::from_real_triple(4.0, 4.0, 4.0);
        let cls = SlopeClass::ALL[0];
        assert!(matches!(weierstrass_sum_with(&c, WeierstrassKind::Cone(0.0), cls, 5), Err(Error::ModeMismatch(_))));
        // Figure-eight character: κ = −2 but loxodromic traces.
        let w = Complex64::new(1.5, 3f64.sqrt() / 2.0);
        let fig8 = Character::from_triple(w, w.conj(), w);
        assert!((fig8.kappa() + 2.0).norm() < 1e-12);
        assert_eq!(weierstrass_sum_with(&fig8, WeierstrassKind::Cone(0.0), cls, 5), Err(Error::NonRealLength));
    }
}
