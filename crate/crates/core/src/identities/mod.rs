//! The series: McShane–Bowditch, McShane's cusped identity, the pants
//! identity, edge weights `ψ`, Weierstrass sums and bundle sums.

mod bundle;
mod report;
mod series;
mod terms;
mod weierstrass;

use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::complexarith::{acosh_pos, LogClass, Modulus};
use crate::farey::Slope;
use crate::Error;

pub use bundle::{bundle_sums, bundle_sums_with, orbit_term_spread, BundleOptions, BundleReport, CuspedBundle};
pub use report::{accumulate, Checkpoint, SeriesMode, SumReport, TermOutcome};
pub use series::{evaluate_term, require_bq, series_terms, sum_identity, sum_identity_with, target_for, traces_upto, SumOptions};
pub use terms::{circular_psi_sum, cusped_term, mcshane_term, psi_edge, psi_target, psi_values, EdgeWeight, KAPPA_CUSP_TOL};
pub use weierstrass::{symmetric_triple, weierstrass_sum, weierstrass_sum_with, WeierstrassKind};

/// `ν = cosh⁻¹(−κ/2)` modulo 2πi.
pub fn nu_of(kappa: Complex64) -> LogClass {
    LogClass::new(acosh_pos(-kappa * 0.5), Modulus::TwoPiI)
}

/// Parity class `(p mod 2, q mod 2)` of a slope: `01`, `10` or `11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopeClass {
    p: u8,
    q: u8,
}

impl SlopeClass {
    pub const ALL: [SlopeClass; 3] = [SlopeClass { p: 0, q: 1 }, SlopeClass { p: 1, q: 0 }, SlopeClass { p: 1, q: 1 }];

    pub fn new(p: u8, q: u8) -> Result<SlopeClass, Error> {
        match (p, q) {
            (0, 1) | (1, 0) | (1, 1) => Ok(SlopeClass { p, q }),
            _ => Err(Error::InvalidClass),
        }
    }

    pub fn of(s: Slope) -> SlopeClass {
        let (p, q) = s.parity();
        SlopeClass { p, q }
    }

    pub fn contains(&self, s: Slope) -> bool {
        SlopeClass::of(s) == *self
    }
}

impl fmt::Display for SlopeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.p, self.q)
    }
}

impl FromStr for SlopeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<SlopeClass, Error> {
        match s.trim() {
            "01" => SlopeClass::new(0, 1),
            "10" => SlopeClass::new(1, 0),
            "11" => SlopeClass::new(1, 1),
            _ => Err(Error::InvalidClass),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexarith::{c, real};
    use crate::farey::enumerate_slopes;
    use alloc::string::ToString;
    use core::f64::consts::PI;

    #[test]
    fn nu_examples() {
        assert!(nu_of(real(-2.0)).value().norm() < 1e-7);
        assert!((nu_of(real(-18.0)).value() - real(2.887_270_950_3)).norm() < 1e-9);
        assert!(nu_of(real(2.0)).residual(c(0.0, PI)) < 1e-7);
    }

    #[test]
    fn classes_partition_slopes() {
        for s in enumerate_slopes(30) {
            assert_eq!(SlopeClass::ALL.iter().filter(|k| k.contains(s)).count(), 1);
        }
        assert_eq!("00".parse::<SlopeClass>(), Err(Error::InvalidClass));
        assert_eq!(SlopeClass::new(0, 0), Err(Error::InvalidClass));
        assert_eq!("11".parse::<SlopeClass>().unwrap().to_string(), "11");
        assert!("01".parse::<SlopeClass>().unwrap().contains(Slope::ZERO));
        assert!("10".parse::<SlopeClass>().unwrap().contains(Slope::INFINITY));
    }
}
