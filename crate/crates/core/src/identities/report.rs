//! Ordered partial sums with targets and tail diagnostics.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::complexarith::LogClass;
use crate::farey::Slope;
use crate::summation::ComplexSum;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesMode {
    Bowditch,
    Cusped,
    Pants,
    Weierstrass,
    BundleFull,
    BundleHalf,
    BundleCuspedFull,
    BundleCuspedHalf,
}

impl SeriesMode {
    pub fn name(self) -> &'static str {
        match self {
            SeriesMode::Bowditch => "bowditch",
            SeriesMode::Cusped => "cusped",
            SeriesMode::Pants => "pants",
            SeriesMode::Weierstrass => "weierstrass",
            SeriesMode::BundleFull => "bundle-full",
            SeriesMode::BundleHalf => "bundle-half",
            SeriesMode::BundleCuspedFull => "bundle-cusped-full",
            SeriesMode::BundleCuspedHalf => "bundle-cusped-half",
        }
    }
}

impl fmt::Display for SeriesMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Partial sum over every slope of size at most `depth`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub depth: u64,
    pub partial: Complex64,
    pub residual: f64,
    pub terms_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumReport {
    pub mode: SeriesMode,
    pub target: LogClass,
    /// Set when the target is only known up to sign; the residual is then the
    /// better of the two and `sign` records which one won.
    pub signed_target: bool,
    pub sign: i8,
    pub partials: Vec<Checkpoint>,
    pub value: Complex64,
    pub residual: f64,
    pub terms_used: usize,
    /// Largest term modulus in the outermost size shell.
    pub max_tail_term: f64,
    /// Slopes whose trace overflowed; they are counted as zero.
    pub nonfinite_terms: usize,
}

impl SumReport {
    pub fn final_checkpoint(&self) -> Option<&Checkpoint> {
        self.partials.last()
    }

    pub fn meets(&self, tol: f64) -> bool {
        self.residual < tol
    }
}

/// A term that was evaluated, or skipped because the trace overflowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TermOutcome {
    Value(Complex64),
    NonFinite,
}

fn residual_of(target: &LogClass, signed: bool, z: Complex64) -> (f64, i8) {
    let plus = target.residual(z);
    if !signed {
        return (plus, 1);
    }
    let minus = target.neg().residual(z);
    if minus < plus {
        (minus, -1)
    } else {
        (plus, 1)
    }
}

/// Compensated accumulation of `(slope, term)` pairs, which must already be
/// in size-major canonical order. A checkpoint is emitted after each size
/// shell up to `max_size`.
pub fn accumulate<I>(mode: SeriesMode, target: LogClass, signed_target: bool, max_size: u64, items: I) -> Result<SumReport>
where
    I: IntoIterator<Item = (Slope, Result<TermOutcome>)>,
{
    let mut sum = ComplexSum::new();
    let mut partials = Vec::new();
    let mut used = 0usize;
    let mut nonfinite = 0usize;
    let mut shell = 1u64;
    let mut shell_max = 0.0f64;
    let mut tail = 0.0f64;
    let checkpoint = |shell: u64, sum: &ComplexSum, used: usize, partials: &mut Vec<Checkpoint>| {
        let v = sum.value();
        let (r, _) = residual_of(&target, signed_target, v);
        partials.push(Checkpoint { depth: shell, partial: v, residual: r, terms_used: used });
    };
    for (s, term) in items {
        let size = s.size();
        debug_assert!(size >= shell, "terms must be size-major");
        while size > shell {
            checkpoint(shell, &sum, used, &mut partials);
            shell += 1;
            shell_max = 0.0;
        }
        match term? {
            TermOutcome::Value(z) => {
                sum.add(z);
                shell_max = shell_max.max(z.norm());
            }
            TermOutcome::NonFinite => nonfinite += 1,
        }
        used += 1;
        if size == max_size {
            tail = shell_max;
        }
    }
    while shell <= max_size {
        checkpoint(shell, &sum, used, &mut partials);
        shell += 1;
    }
    let value = sum.value();
    let (residual, sign) = residual_of(&target, signed_target, value);
    Ok(SumReport {
        mode,
        target,
        signed_target,
        sign,
        partials,
        value,
        residual,
        terms_used: used,
        max_tail_term: tail,
        nonfinite_terms: nonfinite,
    })
}
