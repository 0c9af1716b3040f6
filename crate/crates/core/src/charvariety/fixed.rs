//! Characters fixed by a mapping class, found by damped Newton iteration.
//!
//! Unknowns are the base traces `(x, y, z)`. The residual stacks the three
//! fixed-point equations `φ(θ⁻¹·s) − φ(s)` at the base slopes with the vertex
//! relation at the requested κ. Derivatives come from forward-mode jets run
//! through the same edge recursion as the trace map.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::solve;
use super::mcg::MCGElement;
use super::{relative_vertex_residual, trace_via_descent, Character};
use crate::farey::Slope;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Jet {
    v: Complex64,
    d: [Complex64; 3],
}

impl Jet {
    fn var(v: Complex64, k: usize) -> Jet {
        let mut d = [Complex64::new(0.0, 0.0); 3];
        d[k] = Complex64::new(1.0, 0.0);
        Jet { v, d }
    }

    fn constant(v: Complex64) -> Jet {
        Jet { v, d: [Complex64::new(0.0, 0.0); 3] }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d: [self.d[0] + o.d[0], self.d[1] + o.d[1], self.d[2] + o.d[2]] }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d: [self.d[0] - o.d[0], self.d[1] - o.d[1], self.d[2] - o.d[2]] }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let d = [0, 1, 2].map(|k| self.d[k] * o.v + self.v * o.d[k]);
        Jet { v: self.v * o.v, d }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions {
    pub seeds: usize,
    /// Seeds are drawn with `|re|, |im| ≤ box_radius`.
    pub box_radius: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub coalesce_radius: f64,
    pub rng_seed: u64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            seeds: 200,
            box_radius: 5.0,
            max_iterations: 50,
            tolerance: 1e-12,
            coalesce_radius: 1e-6,
            rng_seed: 0x6c65_6e67_7468,
        }
    }
}

struct System {
    targets: [Slope; 3],
    kappa: Complex64,
}

impl System {
    fn eval(&self, p: [Complex64; 3]) -> ([Complex64; 4], [[Complex64; 3]; 4]) {
        let base = [Jet::var(p[0], 0), Jet::var(p[1], 1), Jet::var(p[2], 2)];
        let mut f = [Jet::constant(Complex64::new(0.0, 0.0)); 4];
        for k in 0..3 {
            f[k] = trace_via_descent(&base, self.targets[k]) - base[k];
        }
        let [x, y, z] = base;
        f[3] = x * x + y * y + z * z - x * y * z - Jet::constant(self.kappa + 2.0);
        (f.map(|j| j.v), f.map(|j| j.d))
    }

    fn norm(&self, p: [Complex64; 3]) -> f64 {
        self.eval(p).0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn scale(p: &[Complex64; 3]) -> f64 {
    1.0 + p.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max)
}

/// Levenberg–Marquardt from one seed; returns the converged point.
fn refine(sys: &System, mut p: [Complex64; 3], opts: &FixedPointOptions) -> Option<[Complex64; 3]> {
    let mut mu = 1e-3;
    let (mut f, mut jac) = sys.eval(p);
    let mut fnorm = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for _ in 0..opts.max_iterations {
        if fnorm <= opts.tolerance * scale(&p) {
            return Some(p);
        }
        // Normal equations (JᴴJ + μ·diag) δ = −Jᴴf.
        let mut a = vec![vec![Complex64::new(0.0, 0.0); 3]; 3];
        let mut b = vec![Complex64::new(0.0, 0.0); 3];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] = (0..4).map(|r| jac[r][i].conj() * jac[r][j]).sum();
            }
            b[i] = -(0..4).map(|r| jac[r][i].conj() * f[r]).sum::<Complex64>();
        }
        let diag_max = (0..3).map(|i| a[i][i].re).fold(0.0, f64::max).max(1e-300);
        let mut accepted = false;
        for _ in 0..12 {
            let mut damped = a.clone();
            for (i, row) in damped.iter_mut().enumerate() {
                row[i] += mu * diag_max;
            }
            let Some(step) = solve(damped, b.clone()) else {
                mu *= 10.0;
                continue;
            };
            let trial = [p[0] + step[0], p[1] + step[1], p[2] + step[2]];
            if !trial.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                mu *= 10.0;
                continue;
            }
            let tn = sys.norm(trial);
            if tn < fnorm {
                p = trial;
                (f, jac) = sys.eval(p);
                fnorm = tn;
                mu = (mu / 10.0).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 10.0;
        }
        if !accepted || scale(&p) > 1e16 {
            break;
        }
    }
    (fnorm <= opts.tolerance * scale(&p)).then_some(p)
}

/// Characters with the given κ fixed by `θ`, from `seeds` random starts with
/// the default options otherwise. An empty list means nothing converged.
pub fn fixed_characters_of(theta: &MCGElement, kappa: Complex64, seeds: usize) -> Result<Vec<Character>> {
    let opts = FixedPointOptions { seeds, ..FixedPointOptions::default() };
    fixed_characters_with(theta, kappa, &opts)
}

pub fn fixed_characters_with(theta: &MCGElement, kappa: Complex64, opts: &FixedPointOptions) -> Result<Vec<Character>> {
    let inv = theta.matrix().inverse();
    let targets = [inv.act(Slope::ZERO)?, inv.act(Slope::INFINITY)?, inv.act(Slope::ONE)?];
    let sys = System { targets, kappa };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let r = opts.box_radius;
    let mut found: Vec<Character> = Vec::new();
    for _ in 0..opts.seeds {
        let seed = [0; 3].map(|_: i32| Complex64::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r)));
        let Some(p) = refine(&sys, seed, opts) else { continue };
        let (f, _) = sys.eval(p);
        let s = scale(&p);
        let fixed_res = f[..3].iter().map(|z| z.norm()).fold(0.0, f64::max) / s;
        if fixed_res >= 1e-9 || relative_vertex_residual(p[0], p[1], p[2], kappa) >= 1e-9 {
            continue;
        }
        let Ok(c) = Character::with_tolerance(kappa, p[0], p[1], p[2], 1e-9) else { continue };
        if found.iter().all(|g| g.distance(&c) >= opts.coalesce_radius) {
            found.push(c);
        }
    }
    found.sort_by(|a, b| {
        let key = |c: &Character| c.triple().map(|z| [z.re, z.im]);
        let (ka, kb) = (key(a), key(b));
        ka.iter().flatten().zip(kb.iter().flatten()).map(|(u, v)| u.total_cmp(v)).find(|o| o.is_ne()).unwrap_or(core::cmp::Ordering::Equal)
    });
    Ok(found)
}
