//! Parallel term evaluation with a canonical-order reduction.
//!
//! Terms are computed independently and collected back into size-major
//! canonical order before the compensated accumulation, so the report is
//! bitwise identical for every thread count.

use anyhow::Result;
use lengthseries_core::charvariety::Character;
use lengthseries_core::farey::Slope;
use lengthseries_core::identities::{
    accumulate, evaluate_term, nu_of, require_bq, series_terms, target_for, SeriesMode, SumOptions, SumReport,
    TermOutcome,
};
use lengthseries_core::Complex64;
use rayon::prelude::*;

use crate::cache::TraceCache;

/// Runs `f` on a pool of `jobs` threads, or on the global pool when `None`.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()?.install(f)),
    }
}

pub fn traces(c: &Character, max_size: u64, cache: Option<&TraceCache>) -> Result<Vec<(Slope, Complex64)>> {
    match cache {
        Some(k) => Ok(k.traces(c, max_size)?.0),
        None => Ok(series_terms(c, max_size)),
    }
}

/// `sum_identity_with` with terms evaluated in parallel.
pub fn parallel_sum(
    c: &Character,
    mode: SeriesMode,
    opts: &SumOptions,
    jobs: Option<usize>,
    cache: Option<&TraceCache>,
) -> Result<SumReport> {
    let target = target_for(mode, c)?;
    if !opts.force {
        require_bq(c, opts.bq_depth)?;
    }
    let nu = nu_of(c.kappa());
    let ts = traces(c, opts.max_size, cache)?;
    let terms: Vec<(Slope, lengthseries_core::Result<TermOutcome>)> =
        with_jobs(jobs, || ts.par_iter().map(|&(s, t)| (s, evaluate_term(mode, &nu, t))).collect())?;
    Ok(accumulate(mode, target, false, opts.max_size, terms)?)
}
