//! Independent oracles shared by the integration tests. Nothing here goes
//! through the crate's trace propagation or matrix code.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use lengthseries_core::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type M = [Complex64; 4];

pub fn mul(a: &M, b: &M) -> M {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

pub fn inv(a: &M) -> M {
    let d = a[0] * a[3] - a[1] * a[2];
    [a[3] / d, -a[1] / d, -a[2] / d, a[0] / d]
}

pub fn tr(a: &M) -> Complex64 {
    a[0] + a[3]
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random matrix of determinant one with entries of moderate size.
pub fn random_sl2(r: &mut StdRng) -> M {
    loop {
        let mut e = || Complex64::new(r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5));
        let (a, b, c) = (e(), e(), e());
        if a.norm() < 0.3 {
            continue;
        }
        // d = (1 + bc)/a
        let d = (Complex64::new(1.0, 0.0) + b * c) / a;
        return [a, b, c, d];
    }
}

/// Lower Christoffel word for `p/q` in letters `X` (slope 0) and `Y` (slope ∞),
/// with `Y⁻¹` for negative `p`.
pub fn christoffel(p: i64, q: i64) -> Vec<char> {
    if q == 0 {
        return vec!['Y'];
    }
    let n = p.abs() + q;
    let yl = if p < 0 { 'y' } else { 'Y' };
    (1..=n)
        .map(|i| if (i * p.abs()).div_euclid(n) > ((i - 1) * p.abs()).div_euclid(n) { yl } else { 'X' })
        .collect()
}

pub fn word_trace(x: &M, y: &M, w: &[char]) -> Complex64 {
    let yi = inv(y);
    let mut acc: M = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    for ch in w {
        let m = match ch {
            'X' => x,
            'Y' => y,
            'y' => &yi,
            _ => unreachable!(),
        };
        acc = mul(&acc, m);
    }
    tr(&acc)
}

/// All Markoff triples `x² + y² + z² = xyz` (scaled by 3) reachable from
/// `(3, 3, 3)` by Vieta jumps with entries at most `bound`.
pub fn markoff_traces(bound: i128) -> BTreeSet<i128> {
    let mut seen = BTreeSet::new();
    let mut out = BTreeSet::new();
    let mut queue = VecDeque::from([[3i128, 3, 3]]);
    while let Some(t) = queue.pop_front() {
        let mut key = t;
        key.sort();
        if !seen.insert(key) {
            continue;
        }
        out.extend(t);
        for i in 0..3 {
            let mut n = t;
            n[i] = t[(i + 1) % 3] * t[(i + 2) % 3] - t[i];
            if n[i] <= bound && n[i] > 0 {
                queue.push_back(n);
            }
        }
    }
    out
}

/// Real roots of `f` by scanning and bisection.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    assert!(f(lo) * f(hi) <= 0.0);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if f(lo) * f(m) <= 0.0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    0.5 * (lo + hi)
}
