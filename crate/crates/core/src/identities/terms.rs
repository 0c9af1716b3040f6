//! Per-slope summands and edge weights.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::nu_of;
use crate::charvariety::{half_length, TraceMap};
use crate::complexarith::{log1p, principal_ln, LogClass, Modulus, POLE_THRESHOLD};
use crate::farey::{circular_set, DirectedEdge, FiniteSubtree};
use crate::summation::ComplexSum;
use crate::{Error, Result};

/// `|κ + 2|` below this selects the cusped formulas.
pub const KAPPA_CUSP_TOL: f64 = 1e-14;

/// `log((e^ν + e^l)/(e^{−ν} + e^l))` with `l = 2·half_length(trace)`,
/// evaluated as `log1p(e^ν u) − log1p(e^{−ν} u)` with `u = e^{−l}` so that
/// long curves contribute without cancellation.
pub fn mcshane_term(trace: Complex64, nu: &LogClass) -> Result<Complex64> {
    let h = half_length(trace)?.value();
    let u = (-h * 2.0).exp();
    let ep = nu.value().exp();
    let em = (-nu.value()).exp();
    let den = Complex64::new(1.0, 0.0) + em * u;
    if den.norm() < POLE_THRESHOLD || (Complex64::new(1.0, 0.0) + ep * u).norm() < POLE_THRESHOLD {
        return Err(Error::Pole { what: "e^(±ν) + e^l" });
    }
    Ok(log1p(ep * u) - log1p(em * u))
}

/// `1/(1 + e^l)` with `l = 2·half_length(trace)`.
pub fn cusped_term(trace: Complex64) -> Result<Complex64> {
    let h = half_length(trace)?.value();
    let u = (-h * 2.0).exp();
    let den = Complex64::new(1.0, 0.0) + u;
    if den.norm() < POLE_THRESHOLD {
        return Err(Error::Pole { what: "1 + e^l" });
    }
    Ok(u / den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeWeight {
    pub edge: DirectedEdge,
    pub value: Complex64,
}

/// `ψ(ē)` from the traces `x, y` of the shared pair and `z` of the head
/// region. For `κ = −2` this is `z/(xy)`; otherwise
/// `log((1 + (e^ν − 1) z/(xy)) / (√(1 − (κ+2)/x²)·√(1 − (κ+2)/y²)))`
/// with principal branches.
pub fn psi_values(x: Complex64, y: Complex64, z: Complex64, kappa: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if x.norm() < POLE_THRESHOLD || y.norm() < POLE_THRESHOLD {
        return Err(Error::Pole { what: "x or y in ψ" });
    }
    let r = z / (x * y);
    let k2 = kappa + 2.0;
    if k2.norm() <= KAPPA_CUSP_TOL {
        return Ok(r);
    }
    let nu = nu_of(kappa).value();
    let num = one + (nu.exp() - one) * r;
    let ax = one - k2 / (x * x);
    let ay = one - k2 / (y * y);
    if ax.norm() < POLE_THRESHOLD || ay.norm() < POLE_THRESHOLD {
        return Err(Error::Pole { what: "x² − κ − 2 or y² − κ − 2" });
    }
    if num.norm() < POLE_THRESHOLD {
        return Err(Error::Pole { what: "1 + (e^ν − 1) z/xy" });
    }
    Ok(principal_ln(num / (ax.sqrt() * ay.sqrt())))
}

pub fn psi_edge(tm: &mut TraceMap, e: &DirectedEdge) -> Result<EdgeWeight> {
    let (x, y, z) = (tm.trace_of(e.x()), tm.trace_of(e.y()), tm.trace_of(e.to()));
    Ok(EdgeWeight { edge: *e, value: psi_values(x, y, z, tm.kappa())? })
}

/// The value every circular sum of `ψ` takes: 1 for `κ = −2`, else `ν`.
pub fn psi_target(kappa: Complex64) -> LogClass {
    if (kappa + 2.0).norm() <= KAPPA_CUSP_TOL {
        LogClass::new(Complex64::new(1.0, 0.0), Modulus::TwoPiI)
    } else {
        nu_of(kappa)
    }
}

/// `Σ ψ(ē)` over the circular set of `t`, compensated, in circular-set order.
pub fn circular_psi_sum(tm: &mut TraceMap, t: &FiniteSubtree) -> Result<Complex64> {
    let edges: Vec<DirectedEdge> = circular_set(t)?;
    let mut s = ComplexSum::new();
    for e in &edges {
        s.add(psi_edge(tm, e)?.value);
    }
    Ok(s.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charvariety::Character;
    use crate::complexarith::{acosh_pos, dist_mod, gap_g, real};
    use crate::farey::{FareyTriple, Slope};

    #[test]
    fn mcshane_term_examples() {
        let zero = nu_of(real(-2.0));
        for t in [real(3.0), Complex64::new(-2.5, 1.0), real(40.0)] {
            assert!(mcshane_term(t, &zero).unwrap().norm() < 1e-7);
        }
        let nu = nu_of(real(-18.0));
        let t = real(3.0);
        let h = half_length(t).unwrap().value();
        let g = gap_g(nu.value(), h, h).unwrap();
        assert!(dist_mod(mcshane_term(t, &nu).unwrap(), g, Modulus::TwoPiI) < 1e-12);
        // Long curves contribute nothing; near-parabolic ones contribute ν.
        assert!(mcshane_term(real(1e12), &nu).unwrap().norm() < 1e-20);
        let near = mcshane_term(Complex64::new(-2.0 - 1e-11, 0.0), &nu).unwrap();
        assert!(dist_mod(near, nu.value(), Modulus::TwoPiI) < 1e-5);
        assert!(matches!(mcshane_term(real(1.0), &nu), Err(Error::EllipticTrace { .. })));
    }

    #[test]
    fn cusped_term_examples() {
        let phi2 = ((3.0 + 5f64.sqrt()) / 2.0).powi(2);
        assert!((cusped_term(real(3.0)).unwrap() - real(1.0 / (1.0 + phi2))).norm() < 1e-15);
        assert!((cusped_term(real(3.0)).unwrap().re - 0.127_322_003_7).abs() < 1e-10);
        let e = 17.0 + 12.0 * 2f64.sqrt();
        assert!((cusped_term(real(6.0)).unwrap() - real(1.0 / (1.0 + e))).norm() < 1e-15);
        assert!(cusped_term(real(1e200)).unwrap().norm() < 1e-300);
    }

    #[test]
    fn psi_examples() {
        let c = Character::from_real_triple(3.0, 3.0, 3.0);
        let mut tm = c.trace_map();
        let e = DirectedEdge::new(Slope::ZERO, Slope::INFINITY, Slope::MINUS_ONE, Slope::ONE).unwrap();
        let a = psi_edge(&mut tm, &e).unwrap().value;
        let b = psi_edge(&mut tm, &e.reversed()).unwrap().value;
        assert!((a - real(1.0 / 3.0)).norm() < 1e-15);
        assert!((b - real(2.0 / 3.0)).norm() < 1e-15);
        let s = circular_psi_sum(&mut tm, &FiniteSubtree::single(FareyTriple::base())).unwrap();
        assert!((s - real(1.0)).norm() < 1e-15);
        let c = Character::from_real_triple(4.0, 4.0, 4.0);
        let mut tm = c.trace_map();
        let a = psi_edge(&mut tm, &e).unwrap().value + psi_edge(&mut tm, &e.reversed()).unwrap().value;
        assert!(dist_mod(a, real(9f64.acosh()), Modulus::TwoPiI) < 1e-12);
    }

    #[test]
    fn psi_cusp_limit() {
        // At κ = −2 + ε the general weight is ν·z/(xy) to first order in ν.
        let (x, y) = (Complex64::new(3.0, 0.2), Complex64::new(2.7, -0.4));
        let eps = 1e-6;
        for z in [Complex64::new(3.1, 0.5), Complex64::new(-0.4, 1.2)] {
            // Move z to the nearer root of the vertex relation at κ = −2 + ε.
            let k = real(-2.0 + eps);
            let bq = -(x * y);
            let cq = x * x + y * y - 2.0 - k;
            let disc = (bq * bq - cq * 4.0).sqrt();
            let zz = [(-bq + disc) * 0.5, (-bq - disc) * 0.5].into_iter().min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm())).unwrap();
            let psi = psi_values(x, y, zz, k).unwrap();
            let nu = acosh_pos(-k * 0.5);
            let ratio = psi / nu;
            assert!((ratio - zz / (x * y)).norm() < 1e-2, "{ratio} vs {}", zz / (x * y));
        }
    }
}
