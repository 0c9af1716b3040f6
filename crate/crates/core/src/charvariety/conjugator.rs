//! The element realising a mapping class on a fixed representation.
//!
//! If the character of `ρ` is fixed by `θ` then `ρ ∘ θ̃` is conjugate to `ρ`:
//! `A·ρ(θ̃(β))·A⁻¹ = ρ(β)` for both generators. The conjugator `A` is the
//! one-dimensional nullspace of that linear system, scaled to `det A = 1`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::linalg::nullspace;
use super::matrix::{Mat2, MatrixRep};
use super::mcg::{apply_lift, MCGElement};
use crate::complexarith::{acosh_pos, LogClass, Modulus};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugator {
    pub matrix: Mat2,
    /// `2·cosh⁻¹(−tr A/2)` modulo 2πi.
    pub length: LogClass,
    /// Largest relative defect of the conjugation equations.
    pub residual: f64,
}

fn conjugation_rows(p: &Mat2, q: &Mat2, rows: &mut Vec<Vec<Complex64>>) {
    let zero = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            let mut row = vec![zero; 4];
            for k in 0..2 {
                for l in 0..2 {
                    let mut coef = zero;
                    if i == k {
                        coef += p.0[2 * l + j];
                    }
                    if l == j {
                        coef -= q.0[2 * i + k];
                    }
                    row[2 * k + l] = coef;
                }
            }
            rows.push(row);
        }
    }
}

fn defect(a: &Mat2, p: &Mat2, q: &Mat2) -> f64 {
    (*a * *p - *q * *a).max_abs() / (a.max_abs() * (p.max_abs() + q.max_abs())).max(f64::MIN_POSITIVE)
}

pub fn conjugator_for(theta: &MCGElement, m: &MatrixRep) -> Result<Conjugator> {
    let lifted = apply_lift(theta, m)?;
    let pairs = [(lifted.ax(), m.ax()), (lifted.ay(), m.ay())];
    let mut rows = Vec::with_capacity(8);
    for (p, q) in &pairs {
        conjugation_rows(p, q, &mut rows);
    }
    let (rank, basis, pivots) = nullspace(rows, 4, 1e-9);
    match rank {
        4 => return Err(Error::Inconsistent { residual: pivots.last().copied().unwrap_or(0.0) }),
        3 => {}
        r => return Err(Error::RankDeficient { nullity: 4 - r }),
    }
    let v = &basis[0];
    let a = Mat2([v[0], v[1], v[2], v[3]]);
    let det = a.det();
    if det.norm() < 1e-12 * (a.max_abs() * a.max_abs()) {
        return Err(Error::RankDeficient { nullity: 1 });
    }
    let a = a.scale(Complex64::new(1.0, 0.0) / det.sqrt());
    let residual = pairs.iter().map(|(p, q)| defect(&a, p, q)).fold(0.0, f64::max);
    if residual > 1e-8 {
        return Err(Error::Inconsistent { residual });
    }
    let length = LogClass::new(acosh_pos(-a.trace() * 0.5) * 2.0, Modulus::TwoPiI);
    Ok(Conjugator { matrix: a, length, residual })
}

/// For a parabolic commutator `P` (κ = −2) the conjugator commutes with `P`,
/// so `A/(tr A/2) = I + λ·(P/(tr P/2) − I)`. Returns `λ`, the cusp shape of
/// the bundle up to sign.
pub fn cusp_ratio(a: &Mat2, m: &MatrixRep) -> Result<Complex64> {
    let p = m.commutator();
    let tp = p.trace();
    if (tp + 2.0).norm() > 1e-8 {
        return Err(Error::Inconsistent { residual: (tp + 2.0).norm() });
    }
    let n = p.scale(Complex64::new(2.0, 0.0) / tp) - Mat2::identity();
    let ta = a.trace();
    if ta.norm() < 1e-12 {
        return Err(Error::RankDeficient { nullity: 1 });
    }
    let b = a.scale(Complex64::new(2.0, 0.0) / ta) - Mat2::identity();
    let k = (0..4).max_by(|&i, &j| n.0[i].norm().total_cmp(&n.0[j].norm())).unwrap();
    if n.0[k].norm() < 1e-12 {
        return Err(Error::DegenerateCharacter);
    }
    let lambda = b.0[k] / n.0[k];
    let miss = (b - n.scale(lambda)).max_abs();
    if miss > 1e-7 * b.max_abs().max(1.0) {
        return Err(Error::Inconsistent { residual: miss });
    }
    Ok(lambda)
}
