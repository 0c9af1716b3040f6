//! Relative sums for a character fixed by an Anosov mapping class: one term
//! per `⟨θ⟩`-orbit of slopes.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::report::{accumulate, SeriesMode, SumReport};
use super::series::{evaluate_term, series_terms};
use super::{nu_of, KAPPA_CUSP_TOL};
use crate::bqcheck::{check_relative_bq, BQVerdict, DEFAULT_MAX_DEPTH};
use crate::charvariety::{conjugator_for, cusp_ratio, matrices_from_character, Character, MCGElement};
use crate::complexarith::{LogClass, Modulus};
use crate::farey::Slope;
use crate::orbits::fundamental_domains;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BundleOptions {
    pub max_orbit_size: u64,
    pub bq_depth: usize,
    /// Skip the relative Bowditch precondition.
    pub force: bool,
}

impl BundleOptions {
    pub fn new(max_orbit_size: u64) -> BundleOptions {
        BundleOptions { max_orbit_size, bq_depth: DEFAULT_MAX_DEPTH, force: false }
    }
}

/// At `κ = −2` every length term vanishes identically; the cusped terms
/// `1/(1 + e^l)` give a nontrivial pair, with the half sum matching the
/// cusp ratio `λ` of the conjugator up to sign.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspedBundle {
    pub full: SumReport,
    pub half: SumReport,
    pub lambda: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BundleReport {
    /// Sum over representatives of every orbit; target 0.
    pub full: SumReport,
    /// Sum over the bounded-side representatives; target `±l(A)`.
    pub half: SumReport,
    /// Complex translation length of the conjugator.
    pub l_a: LogClass,
    pub cusped: Option<CuspedBundle>,
}

pub fn bundle_sums(c: &Character, theta: &MCGElement, max_orbit_size: u64) -> Result<BundleReport> {
    bundle_sums_with(c, theta, &BundleOptions::new(max_orbit_size))
}

pub fn bundle_sums_with(c: &Character, theta: &MCGElement, opts: &BundleOptions) -> Result<BundleReport> {
    if !opts.force {
        match check_relative_bq(c, theta, opts.bq_depth)? {
            BQVerdict::Accepted(_) => {}
            v => return Err(Error::BqFailure { rejected: v.is_rejected(), detail: format!("relative: {v:?}") }),
        }
    } else if !theta.is_anosov() {
        return Err(Error::NotAnosov);
    }
    let m = matrices_from_character(c)?;
    let conj = conjugator_for(theta, &m)?;
    let [bounded, unbounded] = fundamental_domains(theta)?;

    let max = opts.max_orbit_size;
    let mut half: Vec<(Slope, Complex64)> = Vec::new();
    let mut full: Vec<(Slope, Complex64)> = Vec::new();
    for (s, t) in series_terms(c, max) {
        if bounded.contains(s) {
            half.push((s, t));
            full.push((s, t));
        } else if unbounded.contains(s) {
            full.push((s, t));
        }
    }

    let nu = nu_of(c.kappa());
    let zero = LogClass::new(Complex64::new(0.0, 0.0), Modulus::TwoPiI);
    let run = |mode: SeriesMode, target: LogClass, signed: bool, items: &[(Slope, Complex64)]| -> Result<SumReport> {
        accumulate(mode, target, signed, max, items.iter().map(|&(s, t)| (s, evaluate_term(mode, &nu, t))))
    };
    let full_report = run(SeriesMode::BundleFull, zero, false, &full)?;
    let half_report = run(SeriesMode::BundleHalf, conj.length, true, &half)?;

    let cusped = if (c.kappa() + 2.0).norm() <= KAPPA_CUSP_TOL {
        let lambda = cusp_ratio(&conj.matrix, &m)?;
        let lam = LogClass::new(lambda, Modulus::TwoPiI);
        Some(CuspedBundle {
            full: run(SeriesMode::BundleCuspedFull, zero, false, &full)?,
            half: run(SeriesMode::BundleCuspedHalf, lam, true, &half)?,
            lambda,
        })
    } else {
        None
    };
    Ok(BundleReport { full: full_report, half: half_report, l_a: conj.length, cusped })
}

/// Largest spread of `φ` along the `θ`-orbit of each slope up to `max_size`,
/// relative to `|φ|`.
pub fn orbit_term_spread(c: &Character, theta: &MCGElement, max_size: u64, steps: usize) -> Result<f64> {
    let mut tm = c.trace_map();
    let g = theta.matrix();
    let mut worst = 0.0f64;
    for (s, t) in series_terms(c, max_size) {
        let mut u = s;
        for _ in 0..steps {
            u = g.act(u)?;
            let tu = tm.trace_of(u);
            worst = worst.max((tu - t).norm() / t.norm().max(1.0));
        }
    }
    Ok(worst)
}
