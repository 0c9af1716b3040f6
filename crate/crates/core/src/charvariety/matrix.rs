//! 2×2 complex matrices, Fricke coordinates and half lengths.

use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{relative_vertex_residual, Character, VERTEX_TOL};
use crate::complexarith::{acosh_pos, real};
use crate::{Error, Result};

/// Row-major `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [Complex64; 4]);

impl Mat2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Mat2 {
        Mat2([a, b, c, d])
    }

    pub fn identity() -> Mat2 {
        Mat2([real(1.0), real(0.0), real(0.0), real(1.0)])
    }

    pub fn det(&self) -> Complex64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    /// Inverse via the adjugate.
    pub fn inv(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        let det = self.det();
        Mat2([d / det, -b / det, -c / det, a / det])
    }

    pub fn scale(&self, k: Complex64) -> Mat2 {
        Mat2(self.0.map(|z| z * k))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other * self.inv() * other.inv()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, o: Mat2) -> Mat2 {
        Mat2([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2], self.0[3] - o.0[3]])
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, o: Mat2) -> Mat2 {
        Mat2([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        Mat2(self.0.map(|z| -z))
    }
}

fn det_defect(m: &Mat2) -> f64 {
    (m.det() - 1.0).norm() / (m.max_abs() * m.max_abs()).max(1.0)
}

/// Images `ρ(X), ρ(Y)` of the free generators, both of determinant one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixRep {
    ax: Mat2,
    ay: Mat2,
}

impl MatrixRep {
    /// Checks `det = 1` to 1e-12 (relative to the entry size).
    pub fn new(ax: Mat2, ay: Mat2) -> Result<MatrixRep> {
        let worst = det_defect(&ax).max(det_defect(&ay));
        if !(worst <= 1e-12) {
            return Err(Error::Determinant { residual: worst });
        }
        Ok(MatrixRep { ax, ay })
    }

    pub(crate) fn new_unchecked(ax: Mat2, ay: Mat2) -> MatrixRep {
        MatrixRep { ax, ay }
    }

    pub fn ax(&self) -> Mat2 {
        self.ax
    }

    pub fn ay(&self) -> Mat2 {
        self.ay
    }

    /// `ρ([X, Y]) = XYX⁻¹Y⁻¹`.
    pub fn commutator(&self) -> Mat2 {
        self.ax.commutator(&self.ay)
    }

    /// Conjugates both generators by `g`.
    pub fn conjugate(&self, g: &Mat2) -> MatrixRep {
        let gi = g.inv();
        MatrixRep { ax: *g * self.ax * gi, ay: *g * self.ay * gi }
    }
}

/// `(tr Ax, tr Ay, tr AxAy)` with `κ = tr [Ax, Ay]`.
pub fn character_from_matrices(m: &MatrixRep) -> Result<Character> {
    let m = MatrixRep::new(m.ax, m.ay)?;
    let x = m.ax.trace();
    let y = m.ay.trace();
    let z = (m.ax * m.ay).trace();
    let kappa = m.commutator().trace();
    Character::new(kappa, x, y, z)
}

/// The Fricke normal form `Ax = [[x, 1], [−1, 0]]`, `Ay = [[y, s], [−1/s, 0]]`
/// where `s + 1/s = xy − z`; of the two roots the one of larger modulus is
/// used, with ties going to nonnegative imaginary part.
pub fn matrices_from_character(c: &Character) -> Result<MatrixRep> {
    let [x, y, z] = c.triple();
    let b = x * y - z;
    let disc = (b * b - 4.0).sqrt();
    let r1 = (b + disc) * 0.5;
    let r2 = (b - disc) * 0.5;
    let (n1, n2) = (r1.norm(), r2.norm());
    let s = if (n1 - n2).abs() <= 1e-12 * n1.max(n2) {
        if r1.im >= 0.0 { r1 } else { r2 }
    } else if n1 > n2 {
        r1
    } else {
        r2
    };
    if s.norm() < 1e-300 || !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::DegenerateCharacter);
    }
    let one = real(1.0);
    let zero = real(0.0);
    let ax = Mat2::new(x, one, -one, zero);
    let ay = Mat2::new(y, s, -one / s, zero);
    let m = MatrixRep { ax, ay };
    let zz = (ax * ay).trace();
    let kk = m.commutator().trace();
    let scale = z.norm().max(1.0);
    if (zz - z).norm() > 1e-10 * scale || relative_vertex_residual(x, y, zz, kk) > VERTEX_TOL {
        return Err(Error::DegenerateCharacter);
    }
    Ok(m)
}

/// `l̃/2` with `cosh(l̃/2) = −tr/2` and positive real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLength {
    value: Complex64,
}

impl HalfLength {
    pub fn value(&self) -> Complex64 {
        self.value
    }

    /// The full complex length `2·(l̃/2)`.
    pub fn full(&self) -> Complex64 {
        self.value * 2.0
    }
}

/// True when `t` is (numerically) a real number in [−2, 2].
pub fn is_elliptic_or_parabolic(t: Complex64) -> bool {
    t.im.abs() <= 1e-12 * t.re.abs().max(1.0) && t.re.abs() <= 2.0 + 1e-12
}

pub fn half_length(trace: Complex64) -> Result<HalfLength> {
    if !(trace.re.is_finite() && trace.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if is_elliptic_or_parabolic(trace) {
        return Err(Error::EllipticTrace { re: trace.re, im: trace.im });
    }
    Ok(HalfLength { value: acosh_pos(-trace * 0.5) })
}
