use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lengthseries::cache::TraceCache;
use lengthseries::eval::{parallel_sum, traces, with_jobs};
use lengthseries::input::{character_from_parts, pair, parse_complex_arg, parse_triple_arg, read_character_file, CharacterDoc};
use lengthseries::output::{bundle_record, verdict_record, write_json_line, write_reports, Format};
use lengthseries_core::bqcheck::{check_bq_with, check_relative_bq_with, BQVerdict, BqOptions, Variant};
use lengthseries_core::charvariety::{fixed_characters_of, Character, MCGElement};
use lengthseries_core::complexarith::{gap_g, gap_g_log, gap_s, gap_s_log, reduce, Modulus};
use lengthseries_core::identities::{
    bundle_sums_with, weierstrass_sum, weierstrass_sum_with, BundleOptions, SeriesMode, SlopeClass, SumOptions, SumReport,
    WeierstrassKind,
};
use lengthseries_core::orbits::{fixed_points, fundamental_domains, representatives};
use serde_json::json;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_REJECTED: u8 = 2;
const EXIT_UNDETERMINED: u8 = 3;

/// Length series identities for characters of the one-holed torus.
#[derive(Parser, Debug)]
#[command(name = "lengthseries", version)]
struct Cli {
    /// Emit CSV instead of line-delimited JSON where a table is produced.
    #[arg(long, global = true)]
    csv: bool,
    /// Worker threads for term evaluation (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for cached trace lists.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Base traces `x,y,z` at slopes 0/1, ∞, 1/1 (complex, e.g. `3,3+0.5i,2i`).
    #[arg(long, conflicts_with = "matrices")]
    triple: Option<String>,
    /// Commutator trace κ; checked against the triple when both are given.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// JSON character document: a triple or a pair of row-major matrices.
    #[arg(long, value_name = "FILE")]
    matrices: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Bowditch,
    Cusped,
    Pants,
    Weierstrass,
    Bundle,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Closed,
    Extended,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GapKind {
    G,
    S,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModulusArg {
    #[value(name = "2pi")]
    TwoPi,
    #[value(name = "pi")]
    Pi,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Bowditch conditions, or the relative ones with --theta.
    BqCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        #[arg(long, value_enum, default_value_t = VariantArg::Extended)]
        variant: VariantArg,
        /// Anosov word in R, L, r, l for the relative check.
        #[arg(long)]
        theta: Option<String>,
    },
    /// Sum a series and compare with its target.
    Sum {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
        max_size: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Depth for the Bowditch precondition.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        /// Skip the Bowditch precondition.
        #[arg(long)]
        force: bool,
        /// Mapping class for bundle mode.
        #[arg(long)]
        theta: Option<String>,
        /// Weierstrass class `01`, `10` or `11` (default: all three).
        #[arg(long)]
        class: Option<String>,
        /// Cone angle for Weierstrass mode.
        #[arg(long, conflicts_with = "boundary_length")]
        cone_angle: Option<f64>,
        /// Boundary length for Weierstrass mode.
        #[arg(long)]
        boundary_length: Option<f64>,
    },
    /// Fixed points and fundamental domains of an Anosov mapping class.
    Orbit {
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = 8)]
        max_size: u64,
        /// Also solve for characters with this κ fixed by θ.
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<String>,
        #[arg(long, default_value_t = 200)]
        seeds: usize,
    },
    /// List slopes in canonical order, with traces when a character is given.
    Enumerate {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 10)]
        max_size: u64,
    },
    /// Evaluate a gap function and its logarithmic form.
    Gap {
        #[arg(value_enum)]
        kind: GapKind,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
        /// Reduce both values modulo 2πi or πi.
        #[arg(long, value_enum)]
        modulus: Option<ModulusArg>,
    },
}

/// Failures that map to a specific exit status.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn load_character(src: &Source) -> Result<Option<Character>> {
    let kappa = src.kappa.as_deref().map(parse_complex_arg).transpose()?;
    match (&src.triple, &src.matrices) {
        (Some(t), None) => {
            let [x, y, z] = parse_triple_arg(t)?;
            Ok(Some(character_from_parts(x, y, z, kappa)?))
        }
        (None, Some(path)) => {
            let c = read_character_file(path)?;
            if let Some(k) = kappa {
                if (c.kappa() - k).norm() > 1e-8 * k.norm().max(1.0) {
                    bail!("document has κ = {}, but --kappa {k} was given", c.kappa());
                }
            }
            Ok(Some(c))
        }
        (None, None) => Ok(None),
        (Some(_), Some(_)) => bail!("give either --triple or --matrices, not both"),
    }
}

fn require_character(src: &Source) -> Result<Character> {
    load_character(src)?.ok_or_else(|| Exit(EXIT_USAGE, "a character is required: --triple or --matrices".into()).into())
}

fn parse_theta(w: &str) -> Result<MCGElement> {
    Ok(MCGElement::from_word(w)?)
}

fn verdict_exit(v: &BQVerdict) -> u8 {
    match v {
        BQVerdict::Accepted(_) => EXIT_OK,
        BQVerdict::RejectedInterval { .. } | BQVerdict::RejectedInfinitelyMany { .. } => EXIT_REJECTED,
        BQVerdict::Undetermined { .. } => EXIT_UNDETERMINED,
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<u8> {
    let format = if cli.csv { Format::Csv } else { Format::Lines };
    let cache = cli.cache.as_ref().map(TraceCache::new).transpose()?;
    match cli.command {
        Command::BqCheck { source, depth, variant, theta } => {
            let c = require_character(&source)?;
            let variant = match variant {
                VariantArg::Closed => Variant::Closed,
                VariantArg::Extended => Variant::Extended,
            };
            let opts = BqOptions { max_depth: depth as usize, variant, ..BqOptions::default() };
            let (v, stats) = match theta {
                Some(w) => check_relative_bq_with(&c, &parse_theta(&w)?, &BqOptions { variant: Variant::Closed, ..opts })?,
                None => check_bq_with(&c, &opts),
            };
            write_json_line(out, &verdict_record(&v, &stats))?;
            Ok(verdict_exit(&v))
        }
        Command::Sum { source, mode, max_size, tol, depth, force, theta, class, cone_angle, boundary_length } => {
            if !(tol > 0.0) {
                bail!(Exit(EXIT_USAGE, "--tol must be positive".into()));
            }
            let reports = match mode {
                Mode::Bowditch | Mode::Cusped | Mode::Pants => {
                    let c = require_character(&source)?;
                    let m = match mode {
                        Mode::Bowditch => SeriesMode::Bowditch,
                        Mode::Cusped => SeriesMode::Cusped,
                        _ => SeriesMode::Pants,
                    };
                    let opts = SumOptions { max_size, force, bq_depth: depth as usize };
                    vec![parallel_sum(&c, m, &opts, cli.jobs, cache.as_ref())?]
                }
                Mode::Weierstrass => {
                    let c = load_character(&source)?;
                    let kind = weierstrass_kind(cone_angle, boundary_length, c.as_ref())?;
                    let classes = match class {
                        Some(k) => vec![k.parse::<SlopeClass>()?],
                        None => SlopeClass::ALL.to_vec(),
                    };
                    let mut v = Vec::new();
                    for k in classes {
                        v.push(with_jobs(cli.jobs, || match &c {
                            Some(c) => weierstrass_sum_with(c, kind, k, max_size),
                            None => weierstrass_sum(kind, k, max_size),
                        })??);
                    }
                    v
                }
                Mode::Bundle => {
                    let w = theta.ok_or_else(|| Exit(EXIT_USAGE, "bundle mode needs --theta".into()))?;
                    let th = parse_theta(&w)?;
                    let c = match load_character(&source)? {
                        Some(c) => c,
                        None => find_fixed(&source, &th, depth as usize)?,
                    };
                    let opts = BundleOptions { max_orbit_size: max_size, bq_depth: depth as usize, force };
                    let b = bundle_sums_with(&c, &th, &opts)?;
                    if format == Format::Lines {
                        write_json_line(out, &bundle_record(&b))?;
                    }
                    let mut v = vec![b.full, b.half];
                    if let Some(cb) = b.cusped {
                        v.push(cb.full);
                        v.push(cb.half);
                    }
                    v
                }
            };
            let refs: Vec<&SumReport> = reports.iter().collect();
            write_reports(out, &refs, format, tol)?;
            Ok(if reports.iter().all(|r| r.meets(tol)) { EXIT_OK } else { EXIT_UNDETERMINED })
        }
        Command::Orbit { theta, max_size, kappa, seeds } => {
            let th = parse_theta(&theta)?;
            let (m0, m1) = fixed_points(&th)?;
            let doms = fundamental_domains(&th)?;
            let domains: Vec<_> = doms
                .iter()
                .map(|d| {
                    json!({
                        "side": format!("{:?}", d.side).to_lowercase(),
                        "start": d.start.to_string(),
                        "end": d.end.to_string(),
                        "representatives": representatives(d, max_size).iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            write_json_line(out, &json!({"record": "orbit", "theta": th.word_string(), "fixed_points": [m0, m1], "domains": domains}))?;
            if let Some(k) = kappa {
                let k = parse_complex_arg(&k)?;
                for c in fixed_characters_of(&th, k, seeds)? {
                    let v = check_relative_bq_with(&c, &th, &BqOptions { variant: Variant::Closed, ..BqOptions::default() })
                        .map(|(v, _)| v.label())
                        .unwrap_or("Error");
                    write_json_line(out, &json!({"record": "fixed", "character": CharacterDoc::of(&c), "relative_bq": v}))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate { source, max_size } => {
            let c = load_character(&source)?;
            match c {
                Some(c) => {
                    let ts = traces(&c, max_size, cache.as_ref())?;
                    if format == Format::Csv {
                        writeln!(out, "slope,size,trace_re,trace_im")?;
                        for (s, t) in ts {
                            writeln!(out, "{s},{},{:e},{:e}", s.size(), t.re, t.im)?;
                        }
                    } else {
                        for (s, t) in ts {
                            write_json_line(out, &json!({"slope": s.to_string(), "size": s.size(), "trace": pair(t)}))?;
                        }
                    }
                }
                None => {
                    let ss = lengthseries_core::farey::enumerate_slopes(max_size);
                    if format == Format::Csv {
                        writeln!(out, "slope,size")?;
                    }
                    for s in ss {
                        if format == Format::Csv {
                            writeln!(out, "{s},{}", s.size())?;
                        } else {
                            write_json_line(out, &json!({"slope": s.to_string(), "size": s.size()}))?;
                        }
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Gap { kind, x, y, z, modulus } => {
            let (x, y, z) = (parse_complex_arg(&x)?, parse_complex_arg(&y)?, parse_complex_arg(&z)?);
            let (v, l) = match kind {
                GapKind::G => (gap_g(x, y, z)?, gap_g_log(x, y, z)?),
                GapKind::S => (gap_s(x, y, z)?, gap_s_log(x, y, z)?),
            };
            let (v, l) = match modulus {
                None => (v, l),
                Some(m) => {
                    let m = if m == ModulusArg::Pi { Modulus::PiI } else { Modulus::TwoPiI };
                    (reduce(v, m), reduce(l, m))
                }
            };
            write_json_line(out, &json!({"record": "gap", "kind": format!("{kind:?}"), "value": pair(v), "log_form": pair(l)}))?;
            Ok(EXIT_OK)
        }
    }
}

/// Cone angle or boundary length, given directly or read off a real κ.
fn weierstrass_kind(cone: Option<f64>, boundary: Option<f64>, c: Option<&Character>) -> Result<WeierstrassKind> {
    match (cone, boundary, c) {
        (Some(t), _, _) => Ok(WeierstrassKind::Cone(t)),
        (_, Some(l), _) => Ok(WeierstrassKind::Boundary(l)),
        (None, None, Some(c)) => {
            let k = c.kappa();
            if k.im.abs() > 1e-9 {
                bail!("κ = {k} is not real; Weierstrass mode needs a cone or boundary");
            }
            let h = -k.re / 2.0;
            if h >= 1.0 {
                Ok(WeierstrassKind::Boundary(2.0 * h.acosh()))
            } else if h > -1.0 {
                Ok(WeierstrassKind::Cone(2.0 * h.acos()))
            } else {
                bail!("κ = {} > 2 is neither a cone nor a boundary", k.re)
            }
        }
        (None, None, None) => bail!(Exit(EXIT_USAGE, "weierstrass mode needs --cone-angle, --boundary-length or a character".into())),
    }
}

/// A θ-fixed character at the given κ that passes the relative check.
fn find_fixed(src: &Source, theta: &MCGElement, depth: usize) -> Result<Character> {
    let k = src
        .kappa
        .as_deref()
        .map(parse_complex_arg)
        .transpose()?
        .ok_or_else(|| Exit(EXIT_USAGE, "bundle mode needs a character or --kappa".into()))?;
    let opts = BqOptions { max_depth: depth, variant: Variant::Closed, ..BqOptions::default() };
    fixed_characters_of(theta, k, 200)?
        .into_iter()
        .find(|c| check_relative_bq_with(c, theta, &opts).map(|(v, _)| v.is_accepted()).unwrap_or(false))
        .ok_or_else(|| anyhow!("no θ-fixed character with κ = {k} passes the relative check"))
}

fn exit_for(err: &anyhow::Error) -> u8 {
    if let Some(Exit(code, _)) = err.downcast_ref::<Exit>() {
        return *code;
    }
    match err.downcast_ref::<lengthseries_core::Error>() {
        Some(lengthseries_core::Error::BqFailure { rejected: true, .. }) => EXIT_REJECTED,
        Some(lengthseries_core::Error::BqFailure { rejected: false, .. }) => EXIT_UNDETERMINED,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match run(cli, &mut out) {
        Ok(c) => c,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            exit_for(&e)
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
