use alloc::string::String;
use core::fmt;

use crate::farey::Slope;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A denominator came within the pole threshold of zero.
    Pole { what: &'static str },
    /// `(0, 0)` does not name a slope.
    ZeroSlope,
    /// Two slopes were expected to be Farey neighbours.
    NotNeighbors { a: Slope, b: Slope },
    /// Three slopes do not form a valid directed edge or triple.
    InvalidEdge,
    /// Slope arithmetic left the 64-bit range.
    Overflow,
    EmptyTree,
    DisconnectedTree,
    /// A trace lies on the real segment [-2, 2] where no half length exists.
    EllipticTrace { re: f64, im: f64 },
    /// The vertex relation fails by more than the allowed tolerance.
    VertexRelation { residual: f64 },
    Determinant { residual: f64 },
    /// No usable root of the Fricke auxiliary quadratic.
    DegenerateCharacter,
    /// The conjugation system has a nullspace of dimension other than one.
    RankDeficient { nullity: usize },
    /// The conjugation system has no nonzero solution.
    Inconsistent { residual: f64 },
    NotFixed { residual: f64 },
    NotAnosov,
    NotHyperbolicBoundary,
    NonRealLength,
    InvalidClass,
    BadWord(String),
    BadSlope(String),
    /// The Bowditch conditions were rejected, or could not be established.
    BqFailure { rejected: bool, detail: String },
    /// The requested series does not apply to this character.
    ModeMismatch(String),
    /// A numeric parameter lies outside its allowed range.
    InvalidParameter(String),
    NonFinite,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { what } => write!(f, "pole: {what} is within 1e-14 of zero"),
            Error::ZeroSlope => f.write_str("(0, 0) is not a slope"),
            Error::NotNeighbors { a, b } => write!(f, "{a} and {b} are not Farey neighbours"),
            Error::InvalidEdge => f.write_str("slopes do not form a directed edge of the dual tree"),
            Error::Overflow => f.write_str("slope arithmetic overflowed 64 bits"),
            Error::EmptyTree => f.write_str("subtree is empty"),
            Error::DisconnectedTree => f.write_str("subtree is not connected"),
            Error::EllipticTrace { re, im } => {
                write!(f, "trace {re}{im:+}i lies in [-2, 2]; it has no complex length")
            }
            Error::VertexRelation { residual } => {
                write!(f, "vertex relation violated (residual {residual:e})")
            }
            Error::Determinant { residual } => {
                write!(f, "matrix determinant differs from 1 by {residual:e}")
            }
            Error::DegenerateCharacter => {
                f.write_str("no nonzero root of s^2 - (xy - z)s + 1; character is degenerate")
            }
            Error::RankDeficient { nullity } => {
                write!(f, "conjugator is not unique (nullspace dimension {nullity})")
            }
            Error::Inconsistent { residual } => {
                write!(f, "conjugation system inconsistent (residual {residual:e})")
            }
            Error::NotFixed { residual } => {
                write!(f, "character is not fixed by the mapping class (residual {residual:e})")
            }
            Error::NotAnosov => f.write_str("mapping class is not Anosov (|trace| must exceed 2)"),
            Error::NotHyperbolicBoundary => {
                f.write_str("boundary traces must be real and at most -2 (strictly below for a hyperbolic pants)")
            }
            Error::NonRealLength => f.write_str("a length in the series is not real"),
            Error::InvalidClass => f.write_str("parity class must be one of 01, 10, 11"),
            Error::BadWord(w) => write!(f, "cannot parse mapping class word {w:?}"),
            Error::BadSlope(s) => write!(f, "cannot parse slope {s:?}"),
            Error::BqFailure { rejected: true, detail } => write!(f, "Bowditch Q-conditions fail: {detail}"),
            Error::BqFailure { rejected: false, detail } => {
                write!(f, "Bowditch Q-conditions undetermined: {detail}")
            }
            Error::ModeMismatch(why) => write!(f, "mode does not apply: {why}"),
            Error::InvalidParameter(why) => write!(f, "invalid parameter: {why}"),
            Error::NonFinite => f.write_str("non-finite input"),
        }
    }
}

impl core::error::Error for Error {}
