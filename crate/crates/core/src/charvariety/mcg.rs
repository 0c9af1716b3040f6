//! The mapping class group `GL(2, Z)` of the one-holed torus, its action on
//! slopes and characters, and the pinned free-group lifts of its generators.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::matrix::MatrixRep;
use super::{trace_via_descent, Character};
use crate::farey::{canonical_slope, Slope};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gl2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Gl2Z {
    pub const IDENTITY: Gl2Z = Gl2Z { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Gl2Z> {
        let m = Gl2Z { a, b, c, d };
        match m.det_i128() {
            1 | -1 => Ok(m),
            _ => Err(Error::BadWord(alloc::format!("[[{a},{b}],[{c},{d}]] has determinant other than ±1"))),
        }
    }

    fn det_i128(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn det(&self) -> i64 {
        self.det_i128() as i64
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn checked_mul(&self, o: &Gl2Z) -> Result<Gl2Z> {
        let f = |p: i64, q: i64, r: i64, s: i64| {
            p.checked_mul(q).and_then(|u| r.checked_mul(s).and_then(|v| u.checked_add(v))).ok_or(Error::Overflow)
        };
        Ok(Gl2Z {
            a: f(self.a, o.a, self.b, o.c)?,
            b: f(self.a, o.b, self.b, o.d)?,
            c: f(self.c, o.a, self.d, o.c)?,
            d: f(self.c, o.b, self.d, o.d)?,
        })
    }

    pub fn inverse(&self) -> Gl2Z {
        let k = self.det();
        Gl2Z { a: k * self.d, b: -k * self.b, c: -k * self.c, d: k * self.a }
    }

    /// The slope of `(a·p + b·q, c·p + d·q)`.
    pub fn act(&self, s: Slope) -> Result<Slope> {
        let (p, q) = (s.p() as i128, s.q() as i128);
        let u = self.a as i128 * p + self.b as i128 * q;
        let v = self.c as i128 * p + self.d as i128 * q;
        let (u, v) = (i64::try_from(u), i64::try_from(v));
        match (u, v) {
            (Ok(u), Ok(v)) => canonical_slope(u, v),
            _ => Err(Error::Overflow),
        }
    }
}

impl fmt::Display for Gl2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Generators `R = [[1,1],[0,1]]`, `L = [[1,0],[1,1]]` and their inverses
/// (written `r`, `l`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    R,
    L,
    RInv,
    LInv,
}

impl Letter {
    pub fn matrix(self) -> Gl2Z {
        match self {
            Letter::R => Gl2Z { a: 1, b: 1, c: 0, d: 1 },
            Letter::L => Gl2Z { a: 1, b: 0, c: 1, d: 1 },
            Letter::RInv => Gl2Z { a: 1, b: -1, c: 0, d: 1 },
            Letter::LInv => Gl2Z { a: 1, b: 0, c: -1, d: 1 },
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::R => Letter::RInv,
            Letter::L => Letter::LInv,
            Letter::RInv => Letter::R,
            Letter::LInv => Letter::L,
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::R => 'R',
            Letter::L => 'L',
            Letter::RInv => 'r',
            Letter::LInv => 'l',
        }
    }
}

/// A mapping class. When built from a word, the word is kept and determines
/// the free-group lift; `m` is the product of the letter matrices in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MCGElement {
    m: Gl2Z,
    word: Option<Vec<Letter>>,
}

impl MCGElement {
    pub fn identity() -> MCGElement {
        MCGElement { m: Gl2Z::IDENTITY, word: Some(Vec::new()) }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Result<MCGElement> {
        let mut m = Gl2Z::IDENTITY;
        for l in &letters {
            m = m.checked_mul(&l.matrix())?;
        }
        Ok(MCGElement { m, word: Some(letters) })
    }

    /// Parses a word over `R`, `L`, `r` (= R⁻¹), `l` (= L⁻¹). Whitespace,
    /// `.` and `*` are ignored; the empty word and `1` are the identity.
    pub fn from_word(w: &str) -> Result<MCGElement> {
        let mut letters = Vec::new();
        let trimmed = w.trim();
        if trimmed == "1" || trimmed.eq_ignore_ascii_case("id") {
            return Ok(Self::identity());
        }
        for ch in trimmed.chars() {
            letters.push(match ch {
                'R' => Letter::R,
                'L' => Letter::L,
                'r' => Letter::RInv,
                'l' => Letter::LInv,
                ' ' | '.' | '*' => continue,
                _ => return Err(Error::BadWord(w.to_string())),
            });
        }
        Self::from_letters(letters)
    }

    /// A bare matrix without a chosen word (no lift available).
    pub fn from_matrix(m: Gl2Z) -> MCGElement {
        MCGElement { m, word: None }
    }

    pub fn matrix(&self) -> Gl2Z {
        self.m
    }

    pub fn letters(&self) -> Option<&[Letter]> {
        self.word.as_deref()
    }

    pub fn word_string(&self) -> Option<String> {
        self.word.as_ref().map(|w| w.iter().map(|l| l.symbol()).collect())
    }

    pub fn inverse(&self) -> MCGElement {
        MCGElement {
            m: self.m.inverse(),
            word: self.word.as_ref().map(|w| w.iter().rev().map(|l| l.inverse()).collect()),
        }
    }

    pub fn compose(&self, other: &MCGElement) -> Result<MCGElement> {
        let m = self.m.checked_mul(&other.m)?;
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b.iter()).copied().collect()),
            _ => None,
        };
        Ok(MCGElement { m, word })
    }

    /// Orientation preserving with `|tr| > 2`.
    pub fn is_anosov(&self) -> bool {
        self.m.det() == 1 && self.m.trace().abs() > 2
    }
}

impl FromStr for MCGElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<MCGElement> {
        MCGElement::from_word(s)
    }
}

pub fn mcg_act_on_slope(theta: &MCGElement, s: Slope) -> Result<Slope> {
    theta.m.act(s)
}

/// `(θ·φ)(s) = φ(θ⁻¹·s)`: the new base triple is `φ` at `θ⁻¹` of the base slopes.
pub fn mcg_act_on_character(theta: &MCGElement, c: &Character) -> Result<Character> {
    let inv = theta.m.inverse();
    let base = c.triple();
    let mut t = [c.x(); 3];
    for (k, s) in [Slope::ZERO, Slope::INFINITY, Slope::ONE].into_iter().enumerate() {
        t[k] = trace_via_descent(&base, inv.act(s)?);
    }
    // κ is preserved exactly by construction; keep the input value.
    Ok(Character::from_triple(t[0], t[1], t[2]).with_kappa(c.kappa()))
}

/// `ρ ∘ θ̃` for the pinned lifts `R: X ↦ XY`, `L: Y ↦ YX`,
/// `r: X ↦ XY⁻¹`, `l: Y ↦ YX⁻¹`, with `θ̃ = θ̃_{w₁} ∘ … ∘ θ̃_{wₖ}`.
pub fn apply_lift(theta: &MCGElement, m: &MatrixRep) -> Result<MatrixRep> {
    let letters = theta.letters().ok_or_else(|| Error::BadWord("mapping class has no word; lift undefined".to_string()))?;
    let (mut a, mut b) = (m.ax(), m.ay());
    for l in letters {
        match l {
            Letter::R => a = a * b,
            Letter::L => b = b * a,
            Letter::RInv => a = a * b.inv(),
            Letter::LInv => b = b * a.inv(),
        }
    }
    Ok(MatrixRep::new_unchecked(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charvariety::{character_from_matrices, matrices_from_character};
    use crate::complexarith::c;
    use crate::farey::{enumerate_slopes, FareyTriple};

    #[test]
    fn word_matrices() {
        let rl = MCGElement::from_word("RL").unwrap();
        assert_eq!(rl.matrix(), Gl2Z { a: 2, b: 1, c: 1, d: 1 });
        assert!(rl.is_anosov());
        let minus_i = MCGElement::from_word("RlRRlR").unwrap();
        assert_eq!(minus_i.matrix(), Gl2Z { a: -1, b: 0, c: 0, d: -1 });
        assert_eq!(rl.compose(&rl.inverse()).unwrap().matrix(), Gl2Z::IDENTITY);
        assert!(MCGElement::from_word("RxL").is_err());
        assert_eq!(MCGElement::from_word("").unwrap().matrix(), Gl2Z::IDENTITY);
    }

    #[test]
    fn slope_action_examples() {
        let id = MCGElement::identity();
        for t in enumerate_slopes(10) {
            assert_eq!(mcg_act_on_slope(&id, t).unwrap(), t);
        }
        let r = MCGElement::from_word("R").unwrap();
        assert_eq!(mcg_act_on_slope(&r, Slope::INFINITY).unwrap(), Slope::INFINITY);
        assert_eq!(mcg_act_on_slope(&r, Slope::ZERO).unwrap(), Slope::ONE);
    }

    #[test]
    fn slope_action_preserves_adjacency() {
        let theta = MCGElement::from_word("RRlLrL").unwrap();
        let v = FareyTriple::base();
        let mut frontier = std::vec![v];
        for _ in 0..8 {
            let mut next = std::vec::Vec::new();
            for t in &frontier {
                let [a, b, cc] = t.slopes();
                let img: std::vec::Vec<Slope> =
                    [a, b, cc].iter().map(|&u| mcg_act_on_slope(&theta, u).unwrap()).collect();
                assert!(img[0].is_neighbor(img[1]) && img[1].is_neighbor(img[2]) && img[0].is_neighbor(img[2]));
                next.extend(t.neighbors().unwrap());
            }
            frontier = next;
        }
    }

    #[test]
    fn minus_identity_acts_trivially() {
        let ch = Character::from_triple(c(1.2, 0.5), c(-2.0, 0.3), c(0.4, 1.9));
        let minus_i = MCGElement::from_word("RlRRlR").unwrap();
        let out = mcg_act_on_character(&minus_i, &ch).unwrap();
        assert!(out.distance(&ch) < 1e-12);
        assert_eq!(out.kappa(), ch.kappa());
        let out = mcg_act_on_character(&MCGElement::identity(), &ch).unwrap();
        assert_eq!(out, ch);
    }

    #[test]
    fn lift_matches_character_action() {
        let ch = Character::from_triple(c(2.5, 0.5), c(-1.0, 1.3), c(0.4, -0.7));
        let m = matrices_from_character(&ch).unwrap();
        for w in ["R", "L", "r", "l", "RL", "RRlL", "LrRRl"] {
            let theta = MCGElement::from_word(w).unwrap();
            let lifted = character_from_matrices(&apply_lift(&theta, &m).unwrap()).unwrap();
            let acted = mcg_act_on_character(&theta.inverse(), &ch).unwrap();
            assert!(lifted.distance(&acted) < 1e-9, "{w}");
        }
    }

    #[test]
    fn lifts_preserve_the_commutator() {
        let ch = Character::from_triple(c(2.5, 0.5), c(-1.0, 1.3), c(0.4, -0.7));
        let m = matrices_from_character(&ch).unwrap();
        for w in ["R", "L", "r", "l", "RLLr"] {
            let theta = MCGElement::from_word(w).unwrap();
            let lifted = apply_lift(&theta, &m).unwrap();
            assert!((lifted.commutator() - m.commutator()).max_abs() < 1e-10, "{w}");
        }
    }
}
