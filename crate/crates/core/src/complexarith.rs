//! Branch-consistent complex functions.
//!
//! All logarithms are principal (imaginary part in (-π, π]). Lengths are
//! only meaningful modulo 2πi (or πi for the pants identity), so values that
//! live in such quotients are carried as [`LogClass`].

use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result};

pub type ComplexValue = Complex64;

/// Denominators with modulus below this (relative to the size of their
/// summands) are treated as poles.
pub const POLE_THRESHOLD: f64 = 1e-14;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modulus {
    TwoPiI,
    PiI,
}

impl Modulus {
    pub fn period(self) -> f64 {
        match self {
            Modulus::TwoPiI => 2.0 * PI,
            Modulus::PiI => PI,
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modulus::TwoPiI => "2πi",
            Modulus::PiI => "πi",
        })
    }
}

/// Shift the imaginary part into (-P/2, P/2] where P is the period.
pub fn reduce(z: Complex64, modulus: Modulus) -> Complex64 {
    let p = modulus.period();
    let k = Float::ceil(z.im / p - 0.5);
    let mut im = z.im - k * p;
    // Rounding can land a hair outside the half-open window.
    if im <= -p / 2.0 {
        im += p;
    } else if im > p / 2.0 {
        im -= p;
    }
    Complex64::new(z.re, im)
}

/// A complex number modulo 2πi or πi, stored by its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogClass {
    value: Complex64,
    modulus: Modulus,
}

impl LogClass {
    pub fn new(value: Complex64, modulus: Modulus) -> Self {
        LogClass { value: reduce(value, modulus), modulus }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn neg(&self) -> Self {
        LogClass::new(-self.value, self.modulus)
    }

    /// Distance from `z` to this class.
    pub fn residual(&self, z: Complex64) -> f64 {
        reduce(z - self.value, self.modulus).norm()
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.residual(z) < tol
    }
}

impl fmt::Display for LogClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", format_complex(self.value), self.modulus)
    }
}

/// Writes `a+bi` in the form accepted by [`parse_complex`].
pub fn format_complex(z: Complex64) -> FormatComplex {
    FormatComplex(z)
}

pub struct FormatComplex(Complex64);

impl fmt::Display for FormatComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        if z.im.is_sign_negative() {
            write!(f, "{}-{}i", z.re, -z.im)
        } else {
            write!(f, "{}+{}i", z.re, z.im)
        }
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, with optional exponents (`1e-3-2.5e1i`).
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().ok().map(real);
    };
    // Find the sign that separates the real and imaginary parts: the last
    // '+' or '-' that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let imag = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => t.parse::<f64>().ok(),
        }
    };
    match split {
        Some(k) => Some(c(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(c(0.0, imag(body)?)),
    }
}

/// Principal logarithm with the negative real axis mapped to `+πi`, whatever
/// the sign of a zero imaginary part.
pub fn principal_ln(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re, 0.0).ln()
    } else {
        z.ln()
    }
}

/// `log(1 + w)` without cancellation for small `w`.
pub fn log1p(w: Complex64) -> Complex64 {
    let u = Complex64::new(1.0, 0.0) + w;
    let d = u - 1.0;
    if d == Complex64::new(0.0, 0.0) {
        w
    } else {
        principal_ln(u) * (w / d)
    }
}

/// Inverse cosh with nonnegative real part.
///
/// When the real part vanishes the imaginary part is taken in [0, π];
/// otherwise the imaginary part is reduced into (-π, π].
pub fn acosh_pos(z: Complex64) -> Complex64 {
    // 2 log(sqrt((z+1)/2) + sqrt((z-1)/2)) has real part >= 0 for the
    // principal square roots and never squares z.
    let w = ((z + 1.0) * 0.5).sqrt() + ((z - 1.0) * 0.5).sqrt();
    let mut r = w.ln() * 2.0;
    if r.re < 0.0 {
        r = -r;
    }
    if r.re == 0.0 {
        // cosh is even: ±iθ are both preimages.
        let im = reduce(r, Modulus::TwoPiI).im.abs();
        return c(0.0, im);
    }
    reduce(r, Modulus::TwoPiI)
}

/// `½ log((1+z)/(1−z))` with the principal logarithm.
pub fn atanh_principal(z: Complex64) -> Result<Complex64> {
    let one = real(1.0);
    if (one - z).norm() < POLE_THRESHOLD || (one + z).norm() < POLE_THRESHOLD {
        return Err(Error::Pole { what: "1 ∓ z in atanh" });
    }
    Ok(principal_ln((one + z) / (one - z)) * 0.5)
}

fn guarded_div(num: Complex64, a: Complex64, b: Complex64, what: &'static str) -> Result<Complex64> {
    let den = a + b;
    let scale = a.norm().max(b.norm()).max(1.0);
    if !is_finite(den) || den.norm() < POLE_THRESHOLD * scale {
        return Err(Error::Pole { what });
    }
    Ok(num / den)
}

/// `G(x, y, z) = 2 tanh⁻¹(sinh x / (cosh x + e^{y+z}))`.
pub fn gap_g(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    let t = guarded_div(x.sinh(), x.cosh(), (y + z).exp(), "cosh x + e^(y+z)")?;
    Ok(atanh_principal(t)? * 2.0)
}

/// `log((e^x + e^{y+z}) / (e^{−x} + e^{y+z}))`.
pub fn gap_g_log(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    let e = (y + z).exp();
    let num = x.exp() + e;
    let q = guarded_div(num, (-x).exp(), e, "e^-x + e^(y+z)")?;
    if q.norm() < POLE_THRESHOLD {
        return Err(Error::Pole { what: "e^x + e^(y+z)" });
    }
    Ok(principal_ln(q))
}

/// `S(x, y, z) = tanh⁻¹(sinh x sinh y / (cosh z + cosh x cosh y))`.
pub fn gap_s(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    let t = guarded_div(x.sinh() * y.sinh(), z.cosh(), x.cosh() * y.cosh(), "cosh z + cosh x cosh y")?;
    atanh_principal(t)
}

/// `½ log((cosh z + cosh(x+y)) / (cosh z + cosh(x−y)))`.
pub fn gap_s_log(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    let cz = z.cosh();
    let num = cz + (x + y).cosh();
    let q = guarded_div(num, cz, (x - y).cosh(), "cosh z + cosh(x-y)")?;
    if q.norm() < POLE_THRESHOLD {
        return Err(Error::Pole { what: "cosh z + cosh(x+y)" });
    }
    Ok(principal_ln(q) * 0.5)
}

/// True iff the canonical representative of `a − b` is smaller than `tol`.
pub fn eq_mod(a: Complex64, b: Complex64, modulus: Modulus, tol: f64) -> bool {
    reduce(a - b, modulus).norm() < tol
}

/// Distance between `a` and `b` in the quotient by the modulus.
pub fn dist_mod(a: Complex64, b: Complex64, modulus: Modulus) -> f64 {
    reduce(a - b, modulus).norm()
}
