//! Character documents and command-line character sources.
//!
//! A document is JSON in one of two shapes. Complex numbers are `[re, im]`.
//!
//! ```json
//! {"kappa": [-2, 0], "x": [3, 0], "y": [3, 0], "z": [3, 0]}
//! {"a": [[1,0],[1,0],[0,0],[1,0]], "b": [[1,0],[0,0],[1,0],[1,0]]}
//! ```
//!
//! Matrices are row-major.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lengthseries_core::charvariety::{
    character_from_matrices, relative_vertex_residual, Character, Mat2, MatrixRep,
};
use lengthseries_core::complexarith::parse_complex;
use lengthseries_core::Complex64;
use serde::{Deserialize, Serialize};

/// Tolerance for the vertex relation when `κ` is supplied alongside a triple.
pub const INPUT_TOL: f64 = 1e-8;

pub type Pair = [f64; 2];

fn to_c(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDoc {
    #[serde(default)]
    pub kappa: Option<Pair>,
    pub x: Pair,
    pub y: Pair,
    pub z: Pair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatricesDoc {
    pub a: [Pair; 4],
    pub b: [Pair; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharacterDoc {
    Triple(TripleDoc),
    Matrices(MatricesDoc),
}

impl CharacterDoc {
    pub fn of(c: &Character) -> CharacterDoc {
        CharacterDoc::Triple(TripleDoc { kappa: Some(pair(c.kappa())), x: pair(c.x()), y: pair(c.y()), z: pair(c.z()) })
    }
}

/// A triple, checked against `κ` when one is given.
pub fn character_from_parts(x: Complex64, y: Complex64, z: Complex64, kappa: Option<Complex64>) -> Result<Character> {
    for v in [x, y, z] {
        if !(v.re.is_finite() && v.im.is_finite()) {
            bail!("non-finite trace {v}");
        }
    }
    match kappa {
        None => Ok(Character::from_triple(x, y, z)),
        Some(k) => {
            let r = relative_vertex_residual(x, y, z, k);
            if r > INPUT_TOL {
                bail!("triple ({x}, {y}, {z}) is not on the level set κ = {k}: relative residual {r:.3e}");
            }
            Ok(Character::with_tolerance(k, x, y, z, INPUT_TOL)?)
        }
    }
}

pub fn character_from_doc(doc: &CharacterDoc) -> Result<Character> {
    match doc {
        CharacterDoc::Triple(t) => character_from_parts(to_c(t.x), to_c(t.y), to_c(t.z), t.kappa.map(to_c)),
        CharacterDoc::Matrices(m) => {
            let mat = |e: &[Pair; 4]| Mat2([to_c(e[0]), to_c(e[1]), to_c(e[2]), to_c(e[3])]);
            let rep = MatrixRep::new(mat(&m.a), mat(&m.b)).context("matrices must have determinant 1")?;
            Ok(character_from_matrices(&rep)?)
        }
    }
}

/// Parses and validates a JSON character document.
pub fn parse_character_input(text: &str) -> Result<Character> {
    let doc: CharacterDoc = serde_json::from_str(text).context("not a character document")?;
    character_from_doc(&doc)
}

pub fn read_character_file(path: &Path) -> Result<Character> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_character_input(&text).with_context(|| format!("in {}", path.display()))
}

pub fn parse_complex_arg(s: &str) -> Result<Complex64> {
    parse_complex(s).ok_or_else(|| anyhow!("cannot parse complex number {s:?} (expected forms like 3, -2.5+1i, 0.5i)"))
}

/// `"x,y,z"` with each entry a complex number.
pub fn parse_triple_arg(s: &str) -> Result<[Complex64; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("a triple needs three comma-separated traces, got {s:?}");
    }
    Ok([parse_complex_arg(parts[0])?, parse_complex_arg(parts[1])?, parse_complex_arg(parts[2])?])
}
