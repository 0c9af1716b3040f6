//! Length series over all slopes up to a size bound.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::report::{accumulate, SeriesMode, SumReport, TermOutcome};
use super::terms::{cusped_term, mcshane_term};
use super::nu_of;
use crate::bqcheck::{check_bq, BQVerdict, Variant, DEFAULT_MAX_DEPTH};
use crate::charvariety::Character;
use crate::complexarith::{is_finite, LogClass, Modulus};
use crate::farey::{walk_with_values, Slope};
use crate::{Error, Result};

/// `(slope, φ(slope))` for every slope of size at most `max_size`, in
/// canonical depth-first order.
pub fn traces_upto(c: &Character, max_size: u64) -> Vec<(Slope, Complex64)> {
    let mut out = Vec::new();
    walk_with_values(max_size, c.triple(), |_, x, y, o| x * y - o, |s, v| out.push((s, *v)));
    out
}

/// Same traces, reordered size-major (stable within a size).
pub fn series_terms(c: &Character, max_size: u64) -> Vec<(Slope, Complex64)> {
    let mut v = traces_upto(c, max_size);
    v.sort_by_key(|(s, _)| s.size());
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumOptions {
    pub max_size: u64,
    /// Skip the Bowditch precondition.
    pub force: bool,
    pub bq_depth: usize,
}

impl SumOptions {
    pub fn new(max_size: u64) -> SumOptions {
        SumOptions { max_size, force: false, bq_depth: DEFAULT_MAX_DEPTH }
    }
}

/// Target of a per-slope series for this character.
pub fn target_for(mode: SeriesMode, c: &Character) -> Result<LogClass> {
    let nu = nu_of(c.kappa());
    match mode {
        SeriesMode::Bowditch => Ok(nu),
        SeriesMode::Pants => Ok(LogClass::new(nu.value(), Modulus::PiI)),
        SeriesMode::Cusped => {
            if (c.kappa() + 2.0).norm() > 1e-9 {
                return Err(Error::ModeMismatch(format!("cusped identity needs κ = −2, got {}", c.kappa())));
            }
            Ok(LogClass::new(Complex64::new(0.5, 0.0), Modulus::TwoPiI))
        }
        other => Err(Error::ModeMismatch(format!("{other} is not a per-slope series over all slopes"))),
    }
}

/// The summand of `mode` at a slope with trace `t`.
pub fn evaluate_term(mode: SeriesMode, nu: &LogClass, t: Complex64) -> Result<TermOutcome> {
    if !is_finite(t) {
        return Ok(TermOutcome::NonFinite);
    }
    let v = match mode {
        SeriesMode::Cusped | SeriesMode::BundleCuspedFull | SeriesMode::BundleCuspedHalf => cusped_term(t)?,
        _ => mcshane_term(t, nu)?,
    };
    Ok(TermOutcome::Value(v))
}

/// Checks the extended Bowditch conditions at `depth`, as a precondition.
pub fn require_bq(c: &Character, depth: usize) -> Result<()> {
    match check_bq(c, depth, Variant::Extended) {
        BQVerdict::Accepted(_) => Ok(()),
        v @ (BQVerdict::RejectedInterval { .. } | BQVerdict::RejectedInfinitelyMany { .. }) => {
            Err(Error::BqFailure { rejected: true, detail: format!("{v:?}") })
        }
        v => Err(Error::BqFailure { rejected: false, detail: format!("{v:?}") }),
    }
}

pub fn sum_identity(c: &Character, mode: SeriesMode, max_size: u64) -> Result<SumReport> {
    sum_identity_with(c, mode, &SumOptions::new(max_size))
}

pub fn sum_identity_with(c: &Character, mode: SeriesMode, opts: &SumOptions) -> Result<SumReport> {
    let target = target_for(mode, c)?;
    if !opts.force {
        require_bq(c, opts.bq_depth)?;
    }
    let nu = nu_of(c.kappa());
    let terms = series_terms(c, opts.max_size);
    accumulate(mode, target, false, opts.max_size, terms.into_iter().map(|(s, t)| (s, evaluate_term(mode, &nu, t))))
}
