//! One line per acceptance criterion. Runs as a plain binary.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use lengthseries_core::bqcheck::{check_bq, check_relative_bq, Variant};
use lengthseries_core::charvariety::{
    conjugator_for, fixed_characters_of, matrices_from_character, mcg_act_on_character, pants_holonomy,
    relative_vertex_residual, Character, MCGElement,
};
use lengthseries_core::complexarith::{acosh_pos, dist_mod, gap_g, gap_s, real, Modulus, I};
use lengthseries_core::farey::{canonical_slope, descent, walk_with_values, DirectedEdge, FareyTriple, FiniteSubtree, Slope};
use lengthseries_core::identities::{
    bundle_sums, circular_psi_sum, cusped_term, psi_edge, psi_target, series_terms, sum_identity, weierstrass_sum,
    SeriesMode, SlopeClass, WeierstrassKind,
};
use lengthseries_core::summation::ComplexSum;
use lengthseries_core::Complex64;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c1() -> Outcome {
    let c = Character::from_real_triple(3.0, 3.0, 3.0);
    let start = Instant::now();
    let r = sum_identity(&c, SeriesMode::Cusped, 60);
    let secs = start.elapsed().as_secs_f64();
    match r {
        Ok(r) => outcome(
            r.residual < 1e-6 && secs < 10.0,
            format!("cusped (3,3,3) size 60: |sum - 1/2| = {:.2e}, {secs:.3}s", r.residual),
        ),
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn c2() -> Outcome {
    let c = Character::from_real_triple(4.0, 4.0, 4.0);
    match sum_identity(&c, SeriesMode::Bowditch, 60) {
        Ok(r) => {
            let d = dist_mod(r.value, real(9f64.acosh()), Modulus::TwoPiI);
            outcome(d < 1e-6 && (c.kappa() + 18.0).norm() < 1e-12, format!("(4,4,4): dist to acosh 9 = {d:.2e}"))
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn level_character(r: &mut StdRng, kappa: f64, base: f64) -> Character {
    let mut e = || Complex64::new(base + r.gen_range(-0.4..0.4), r.gen_range(-0.4..0.4));
    let (x, y) = (e(), e());
    let k = real(kappa);
    let b = x * y;
    let disc = (b * b - (x * x + y * y - k - 2.0) * 4.0).sqrt();
    let (z1, z2) = ((b + disc) * 0.5, (b - disc) * 0.5);
    Character::new(k, x, y, if z1.norm() >= z2.norm() { z1 } else { z2 }).unwrap()
}

fn random_slope(r: &mut StdRng, max: i64) -> Slope {
    loop {
        let (p, q) = (r.gen_range(-max..=max), r.gen_range(1..=max));
        if let Ok(s) = canonical_slope(p, q) {
            if s.p() == p && s.q() == q && s.size() > 2 && gcd(p, q) == 1 {
                return s;
            }
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn c3() -> Outcome {
    let mut r = common::rng(3);
    let mut edge_worst = 0.0f64;
    let mut tree_worst = 0.0f64;
    for (kappa, base) in [(-2.0, 3.0), (-18.0, 4.0)] {
        for _ in 0..500 {
            let c = level_character(&mut r, kappa, base);
            let st = *descent(random_slope(&mut r, 25)).last().unwrap();
            let e = DirectedEdge::new(st.x, st.y, st.opposite, st.new).unwrap();
            let mut tm = c.trace_map();
            let (Ok(a), Ok(b)) = (psi_edge(&mut tm, &e), psi_edge(&mut tm, &e.reversed())) else {
                return outcome(false, format!("pole on edge {e}"));
            };
            edge_worst = edge_worst.max(psi_target(c.kappa()).residual(a.value + b.value));
        }
        for _ in 0..50 {
            let c = level_character(&mut r, kappa, base);
            let mut t = FiniteSubtree::single(FareyTriple::base());
            for _ in 0..r.gen_range(0..25) {
                let vs: Vec<FareyTriple> = t.vertices().copied().collect();
                let (w, _) = vs[r.gen_range(0..vs.len())].across(r.gen_range(0..3)).unwrap();
                t.grow(w).unwrap();
            }
            match circular_psi_sum(&mut c.trace_map(), &t) {
                Ok(s) => tree_worst = tree_worst.max(psi_target(c.kappa()).residual(s)),
                Err(e) => return outcome(false, format!("error: {e}")),
            }
        }
    }
    outcome(
        edge_worst < 1e-10 && tree_worst < 1e-9,
        format!("1000 edges worst {edge_worst:.2e}; 100 subtrees worst {tree_worst:.2e}"),
    )
}

fn c4() -> Outcome {
    let mut total = 0.0;
    let mut worst = 0.0f64;
    for cls in SlopeClass::ALL {
        match weierstrass_sum(WeierstrassKind::Cone(0.0), cls, 120) {
            Ok(r) => {
                worst = worst.max(r.residual);
                total += r.value.re;
            }
            Err(e) => return outcome(false, format!("error: {e}")),
        }
    }
    let dt = (total - 1.5 * PI).abs();
    outcome(worst < 1e-6 && dt < 3e-6, format!("class residual worst {worst:.2e}; |total - 3π/2| = {dt:.2e}"))
}

fn c5() -> Outcome {
    let (_, c) = match pants_holonomy(real(-3.0), real(-3.0), real(-3.0)) {
        Ok(p) => p,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    match sum_identity(&c, SeriesMode::Pants, 60) {
        Ok(r) => {
            let d = dist_mod(r.value, acosh_pos(real(-26.0)), Modulus::PiI);
            outcome(d < 1e-6 && (c.kappa() - 52.0).norm() < 1e-9, format!("κ = {:.6}: dist mod πi = {d:.2e}", c.kappa().re))
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn c6() -> Outcome {
    let rl = MCGElement::from_word("RL").unwrap();
    let found = match fixed_characters_of(&rl, real(-2.0), 200) {
        Ok(f) => f,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let Some(c) = found.iter().find(|c| check_relative_bq(c, &rl, 64).map(|v| v.is_accepted()).unwrap_or(false)) else {
        return outcome(false, format!("no relatively accepted fixed character among {}", found.len()));
    };
    let la = match matrices_from_character(c).and_then(|m| conjugator_for(&rl, &m)) {
        Ok(a) => a.length,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    match bundle_sums(c, &rl, 150) {
        Ok(r) => {
            let half = la.residual(r.half.value).min(la.neg().residual(r.half.value));
            outcome(
                r.full.residual < 1e-5 && half < 1e-5,
                format!("full residual {:.2e}; half vs ±l(A) = ±{} residual {half:.2e}", r.full.residual, la.value()),
            )
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn c7() -> Outcome {
    let rows = [
        (Character::from_real_triple(3.0, 3.0, 3.0), "Accepted"),
        (Character::from_real_triple(2.0, 2.0, 2.0), "Rejected"),
        (Character::from_real_triple(0.0, 3.0, 3.0), "RejectedInterval"),
        (Character::from_real_triple(5.0, 0.0, 1.0), "RejectedInterval"),
        (Character::from_real_triple(2.5, -1.0, 0.0), "RejectedInterval"),
    ];
    let mut pass = true;
    let mut labels = Vec::new();
    for (c, want) in &rows {
        let a = check_bq(c, 64, Variant::Extended);
        let b = check_bq(c, 128, Variant::Extended);
        let ok = match *want {
            "Rejected" => a.is_rejected(),
            w => a.label() == w,
        } && a.label() == b.label();
        pass &= ok;
        labels.push(a.label());
    }
    outcome(pass, format!("verdicts {labels:?}, stable at depth 128"))
}

fn c8() -> Outcome {
    let mut r = common::rng(8);
    let mut vertex = 0.0f64;
    let mut path = 0.0f64;
    let mut lift = 0.0f64;
    let words = ["RL", "RRl", "LrL", "rlRR", "lLLr"];
    for _ in 0..100 {
        let mut e = || Complex64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let (x, y, z) = (e(), e(), e());
        let c = Character::from_triple(x, y, z);
        let k = c.kappa();
        walk_with_values(12, c.triple(), |_, a, b, o| {
            let n = a * b - o;
            vertex = vertex.max(relative_vertex_residual(*a, *b, n, k));
            n
        }, |_, _| {});
        let theta = MCGElement::from_word(words.choose(&mut r).unwrap()).unwrap();
        let moved = mcg_act_on_character(&theta, &c).unwrap();
        let s = random_slope(&mut r, 6);
        let direct = c.trace_map().trace_of(theta.inverse().matrix().act(s).unwrap());
        let via = moved.trace_map().trace_of(s);
        path = path.max((direct - via).norm() / direct.norm().max(1.0));
        let pi = I * PI;
        if let (Ok(a), Ok(b)) = (gap_g(x, y, z), gap_g(x, y + pi, z + pi)) {
            if a.norm() < 1e6 {
                lift = lift.max(dist_mod(a, b, Modulus::TwoPiI) / a.norm().max(1.0));
            }
        }
        if let (Ok(a), Ok(b)) = (gap_s(x, y, z), gap_s(x + pi, y + pi, z)) {
            if a.norm() < 1e6 {
                lift = lift.max(dist_mod(a, b, Modulus::PiI) / a.norm().max(1.0));
            }
        }
    }
    let c = Character::from_real_triple(3.0, 3.0, 3.0);
    let mut terms: Vec<Complex64> = series_terms(&c, 60).into_iter().map(|(_, t)| cusped_term(t).unwrap()).collect();
    let mut reorder = 0.0f64;
    for _ in 0..10 {
        terms.shuffle(&mut r);
        let s: Complex64 = terms.iter().copied().collect::<ComplexSum>().value();
        reorder = reorder.max((s - 0.5).norm());
    }
    outcome(
        vertex < 1e-9 && path < 1e-9 && lift < 1e-12 && reorder < 2e-6,
        format!("vertex {vertex:.1e}, path {path:.1e}, lift {lift:.1e}, shuffled sums {reorder:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("modular torus McShane identity", c1),
        ("boundary torus identity", c2),
        ("exact edge-weight identities", c3),
        ("Weierstrass identity", c4),
        ("pair-of-pants identity", c5),
        ("bundle identities", c6),
        ("BQ verdict table", c7),
        ("property suites", c8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("criterion {}: {} [{name}] {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
