//! Holonomy of a pair of pants with geodesic boundary.

use num_complex::Complex64;

use super::matrix::{matrices_from_character, MatrixRep};
use super::Character;
use crate::{Error, Result};

/// A rank-two free group representation with `tr a = t1`, `tr b = t2`,
/// `tr ab = t3`. All three traces must be real and strictly below −2, the
/// sign convention under which every half length is real.
pub fn pants_holonomy(t1: Complex64, t2: Complex64, t3: Complex64) -> Result<(MatrixRep, Character)> {
    for t in [t1, t2, t3] {
        if t.im.abs() > 1e-12 * t.re.abs().max(1.0) || !(t.re < -2.0) {
            return Err(Error::NotHyperbolicBoundary);
        }
    }
    let ch = Character::from_triple(t1, t2, t3);
    let m = matrices_from_character(&ch)?;
    Ok((m, ch))
}
