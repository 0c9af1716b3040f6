//! Slopes, the Farey triangulation and its dual trivalent tree.
//!
//! A slope `p/q` is a vector `(p, q)` up to sign; `∞ = 1/0`. Two slopes are
//! Farey neighbours when `|p₁q₂ − p₂q₁| = 1`. Regions of the dual tree are
//! slopes, vertices are triples of mutual neighbours, and edges are
//! neighbouring pairs. All slope arithmetic is checked; leaving the 64-bit
//! range is reported as [`Error::Overflow`].

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The reduced, sign-normalised slope through `(p, q)`.
pub fn canonical_slope(p: i64, q: i64) -> Result<Slope> {
    if p == 0 && q == 0 {
        return Err(Error::ZeroSlope);
    }
    let g = gcd(p.unsigned_abs(), q.unsigned_abs());
    // g >= 1; p/g and q/g fit unless the value is i64::MIN with g = 1.
    let (mut p, mut q) = if g == 1 {
        (p, q)
    } else {
        let g = i64::try_from(g).map_err(|_| Error::Overflow)?;
        (p / g, q / g)
    };
    if q < 0 || (q == 0 && p < 0) {
        p = p.checked_neg().ok_or(Error::Overflow)?;
        q = q.checked_neg().ok_or(Error::Overflow)?;
    }
    Ok(Slope { p, q })
}

fn vec_combine(a: Slope, b: Slope, sign: i64) -> Result<Slope> {
    let p = b.p.checked_mul(sign).and_then(|bp| a.p.checked_add(bp)).ok_or(Error::Overflow)?;
    let q = b.q.checked_mul(sign).and_then(|bq| a.q.checked_add(bq)).ok_or(Error::Overflow)?;
    canonical_slope(p, q)
}

impl Slope {
    pub const ZERO: Slope = Slope { p: 0, q: 1 };
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };
    pub const ONE: Slope = Slope { p: 1, q: 1 };
    pub const MINUS_ONE: Slope = Slope { p: -1, q: 1 };

    pub fn new(p: i64, q: i64) -> Result<Slope> {
        canonical_slope(p, q)
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }

    pub fn is_infinity(self) -> bool {
        self.q == 0
    }

    /// Combinatorial length `|p| + q`; equals the cyclically reduced word
    /// length of the curve in the standard generators.
    pub fn size(self) -> u64 {
        self.p.unsigned_abs() + self.q.unsigned_abs()
    }

    /// `(p mod 2, q mod 2)`; never `(0, 0)`.
    pub fn parity(self) -> (u8, u8) {
        ((self.p.rem_euclid(2)) as u8, (self.q.rem_euclid(2)) as u8)
    }

    pub fn det(self, other: Slope) -> i128 {
        self.p as i128 * other.q as i128 - other.p as i128 * self.q as i128
    }

    pub fn is_neighbor(self, other: Slope) -> bool {
        self.det(other).abs() == 1
    }

    pub fn to_f64(self) -> f64 {
        if self.q == 0 {
            f64::INFINITY
        } else {
            self.p as f64 / self.q as f64
        }
    }
}

/// Numerical order on the extended line with `∞` largest.
impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.q == 0, other.q == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128)),
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            f.write_str("inf")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slope> {
        let t = s.trim();
        if matches!(t, "inf" | "∞" | "infinity" | "Inf") {
            return Ok(Slope::INFINITY);
        }
        let bad = || Error::BadSlope(s.to_string());
        match t.split_once('/') {
            Some((p, q)) => {
                let p = p.trim().parse::<i64>().map_err(|_| bad())?;
                let q = q.trim().parse::<i64>().map_err(|_| bad())?;
                canonical_slope(p, q)
            }
            None => canonical_slope(t.parse::<i64>().map_err(|_| bad())?, 1),
        }
    }
}

/// The `n`-th neighbour of `x` counted from `y`: the slope of `y + n·x`.
pub fn neighbor_sequence(x: Slope, y: Slope, n: i64) -> Result<Slope> {
    if !x.is_neighbor(y) {
        return Err(Error::NotNeighbors { a: x, b: y });
    }
    vec_combine(y, x, n)
}

/// Given neighbours `x, y` and one common neighbour `z`, the other one.
pub fn other_common_neighbor(x: Slope, y: Slope, z: Slope) -> Result<Slope> {
    if !x.is_neighbor(y) {
        return Err(Error::NotNeighbors { a: x, b: y });
    }
    let sum = vec_combine(x, y, 1)?;
    let diff = vec_combine(x, y, -1)?;
    if sum == z {
        Ok(diff)
    } else if diff == z {
        Ok(sum)
    } else {
        Err(Error::InvalidEdge)
    }
}

/// `s` lies on the closed arc running upward (through increasing values,
/// wrapping at `∞`) from `a` to `b`.
fn on_arc(a: Slope, b: Slope, s: Slope) -> bool {
    if a <= b {
        a <= s && s <= b
    } else {
        s >= a || s <= b
    }
}

/// `s` lies on the closed arc between `a` and `b` that avoids `exclude`.
pub fn between(a: Slope, b: Slope, exclude: Slope, s: Slope) -> bool {
    if on_arc(a, b, exclude) {
        on_arc(b, a, s)
    } else {
        on_arc(a, b, s)
    }
}

/// A vertex of the dual tree: three mutually neighbouring slopes, stored sorted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FareyTriple([Slope; 3]);

impl FareyTriple {
    pub fn new(a: Slope, b: Slope, c: Slope) -> Result<FareyTriple> {
        for (u, v) in [(a, b), (b, c), (a, c)] {
            if !u.is_neighbor(v) {
                return Err(Error::NotNeighbors { a: u, b: v });
            }
        }
        let mut s = [a, b, c];
        s.sort();
        Ok(FareyTriple(s))
    }

    /// `(0/1, 1/1, ∞)`.
    pub fn base() -> FareyTriple {
        FareyTriple([Slope::ZERO, Slope::ONE, Slope::INFINITY])
    }

    pub fn slopes(&self) -> [Slope; 3] {
        self.0
    }

    pub fn contains(&self, s: Slope) -> bool {
        self.0.contains(&s)
    }

    /// The neighbouring vertex across the pair opposite `self.slopes()[i]`,
    /// with the edge directed from that neighbour into `self`.
    pub fn across(&self, i: usize) -> Result<(FareyTriple, DirectedEdge)> {
        let z = self.0[i];
        let (x, y) = (self.0[(i + 1) % 3], self.0[(i + 2) % 3]);
        let w = other_common_neighbor(x, y, z)?;
        Ok((FareyTriple::new(x, y, w)?, DirectedEdge::new(x, y, w, z)?))
    }

    pub fn neighbors(&self) -> Result<[FareyTriple; 3]> {
        Ok([self.across(0)?.0, self.across(1)?.0, self.across(2)?.0])
    }
}

impl fmt::Display for FareyTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// An edge `(X, Y; Z → Z′)` of the dual tree: the pair `X, Y` is shared by
/// the vertices `(X, Y, Z)` and `(X, Y, Z′)`, and the edge points from the
/// first to the second. `x < y` is enforced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DirectedEdge {
    x: Slope,
    y: Slope,
    from: Slope,
    to: Slope,
}

impl DirectedEdge {
    pub fn new(x: Slope, y: Slope, from: Slope, to: Slope) -> Result<DirectedEdge> {
        if other_common_neighbor(x, y, from)? != to {
            return Err(Error::InvalidEdge);
        }
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        Ok(DirectedEdge { x, y, from, to })
    }

    pub fn x(&self) -> Slope {
        self.x
    }

    pub fn y(&self) -> Slope {
        self.y
    }

    pub fn from(&self) -> Slope {
        self.from
    }

    pub fn to(&self) -> Slope {
        self.to
    }

    pub fn reversed(&self) -> DirectedEdge {
        DirectedEdge { x: self.x, y: self.y, from: self.to, to: self.from }
    }

    pub fn from_vertex(&self) -> FareyTriple {
        FareyTriple::new(self.x, self.y, self.from).expect("edge endpoints are neighbours")
    }

    pub fn to_vertex(&self) -> FareyTriple {
        FareyTriple::new(self.x, self.y, self.to).expect("edge endpoints are neighbours")
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {} -> {})", self.x, self.y, self.from, self.to)
    }
}

/// The two edges leaving the head vertex of `e`, both pointing away from it.
pub fn expand_edge(e: &DirectedEdge) -> Result<(DirectedEdge, DirectedEdge)> {
    let (x, y, z) = (e.x, e.y, e.to);
    let w1 = other_common_neighbor(x, z, y)?;
    let w2 = other_common_neighbor(y, z, x)?;
    Ok((DirectedEdge::new(x, z, y, w1)?, DirectedEdge::new(y, z, x, w2)?))
}

/// Whether `s` lies in the closed interval between `x` and `y` that contains
/// the tail region `from`.
pub fn tail_contains(e: &DirectedEdge, s: Slope) -> bool {
    between(e.x, e.y, e.to, s)
}

/// A nonempty connected set of dual-tree vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSubtree {
    vertices: BTreeSet<FareyTriple>,
}

impl FiniteSubtree {
    pub fn single(v: FareyTriple) -> FiniteSubtree {
        FiniteSubtree { vertices: [v].into_iter().collect() }
    }

    pub fn from_vertices<I: IntoIterator<Item = FareyTriple>>(vs: I) -> Result<FiniteSubtree> {
        let vertices: BTreeSet<FareyTriple> = vs.into_iter().collect();
        let Some(&first) = vertices.iter().next() else {
            return Err(Error::EmptyTree);
        };
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([first]);
        seen.insert(first);
        while let Some(v) = queue.pop_front() {
            for w in v.neighbors()? {
                if vertices.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        if seen.len() != vertices.len() {
            return Err(Error::DisconnectedTree);
        }
        Ok(FiniteSubtree { vertices })
    }

    /// Adds a vertex adjacent to the current tree.
    pub fn grow(&mut self, v: FareyTriple) -> Result<()> {
        if self.vertices.contains(&v) {
            return Ok(());
        }
        if !v.neighbors()?.iter().any(|w| self.vertices.contains(w)) {
            return Err(Error::DisconnectedTree);
        }
        self.vertices.insert(v);
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = &FareyTriple> {
        self.vertices.iter()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: &FareyTriple) -> bool {
        self.vertices.contains(v)
    }
}

/// Edges adjacent to `t` and directed into it.
pub fn circular_set(t: &FiniteSubtree) -> Result<Vec<DirectedEdge>> {
    if t.is_empty() {
        return Err(Error::EmptyTree);
    }
    let mut out = Vec::new();
    for v in t.vertices() {
        for i in 0..3 {
            let (w, e) = v.across(i)?;
            if !t.contains(&w) {
                out.push(e);
            }
        }
    }
    Ok(out)
}

/// One step of the canonical walk: `new` is the other common neighbour of
/// `x, y` opposite `opposite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeStep {
    pub x: Slope,
    pub y: Slope,
    pub opposite: Slope,
    pub new: Slope,
}

const BASE: [Slope; 3] = [Slope::ZERO, Slope::INFINITY, Slope::ONE];

/// The three edges of the base vertex, each pointing out of it, in walk order.
fn base_frontier() -> [(Slope, Slope, Slope); 3] {
    [
        (Slope::ZERO, Slope::ONE, Slope::INFINITY),
        (Slope::ONE, Slope::INFINITY, Slope::ZERO),
        (Slope::ZERO, Slope::INFINITY, Slope::ONE),
    ]
}

/// Depth-first (Stern–Brocot) walk over all slopes of size at most
/// `max_size`, carrying a value per slope. `base` holds the values at
/// `0/1, ∞, 1/1`; `step` produces the value of `new` from those of
/// `x, y, opposite`. Every slope is visited exactly once.
pub fn walk_with_values<T: Clone>(
    max_size: u64,
    base: [T; 3],
    mut step: impl FnMut(&TreeStep, &T, &T, &T) -> T,
    mut visit: impl FnMut(Slope, &T),
) {
    for (s, v) in BASE.iter().zip(base.iter()) {
        if s.size() <= max_size {
            visit(*s, v);
        }
    }
    let value_of = |s: Slope| base[BASE.iter().position(|b| *b == s).unwrap()].clone();
    let mut stack: Vec<(Slope, Slope, Slope, T, T, T)> = base_frontier()
        .iter()
        .rev()
        .map(|&(x, y, o)| (x, y, o, value_of(x), value_of(y), value_of(o)))
        .collect();
    while let Some((x, y, o, tx, ty, to)) = stack.pop() {
        // Sizes here never exceed 2·max_size, far inside i64.
        let new = other_common_neighbor(x, y, o).expect("walk stays within range");
        if new.size() > max_size {
            continue;
        }
        let st = TreeStep { x, y, opposite: o, new };
        let tn = step(&st, &tx, &ty, &to);
        visit(new, &tn);
        stack.push((new, y, x, tn.clone(), ty.clone(), tx.clone()));
        stack.push((x, new, y, tx, tn, ty));
    }
}

/// All slopes with `|p| + q ≤ max_size` in canonical depth-first order.
pub fn enumerate_slopes(max_size: u64) -> Vec<Slope> {
    let mut out = Vec::new();
    walk_with_values(max_size, [(), (), ()], |_, _, _, _| (), |s, _| out.push(s));
    out
}

/// The steps leading from the base vertex to the region `s`, in order.
/// Empty for the base slopes.
pub fn descent(s: Slope) -> Vec<TreeStep> {
    let mut path = Vec::new();
    if BASE.contains(&s) {
        return path;
    }
    let (mut x, mut y, mut o) = base_frontier()
        .into_iter()
        .find(|&(x, y, o)| between(x, y, o, s))
        .expect("the three base arcs cover the circle");
    loop {
        let new = other_common_neighbor(x, y, o).expect("descent parents are smaller than s");
        path.push(TreeStep { x, y, opposite: o, new });
        if new == s {
            return path;
        }
        if between(x, new, y, s) {
            o = y;
            y = new;
        } else {
            o = x;
            x = new;
        }
    }
}

/// Sort key placing slopes by size, then by canonical walk position.
pub fn size_major_order(slopes: &[Slope]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..slopes.len()).collect();
    idx.sort_by_key(|&i| (slopes[i].size(), i));
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn s(p: i64, q: i64) -> Slope {
        canonical_slope(p, q).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(s(2, 4), s(1, 2));
        assert_eq!(s(-3, -6), s(1, 2));
        assert_eq!(s(5, 0), Slope::INFINITY);
        assert_eq!(s(-5, 0), Slope::INFINITY);
        assert_eq!(s(3, -4), Slope::new(-3, 4).unwrap());
        assert_eq!(canonical_slope(0, 0), Err(Error::ZeroSlope));
        assert_eq!(canonical_slope(i64::MIN, -1), Err(Error::Overflow));
    }

    #[test]
    fn parse_and_print() {
        for t in ["0/1", "inf", "-3/7", "12/5"] {
            assert_eq!(t.parse::<Slope>().unwrap().to_string(), t);
        }
        assert_eq!("4".parse::<Slope>().unwrap(), s(4, 1));
        assert_eq!("∞".parse::<Slope>().unwrap(), Slope::INFINITY);
        assert_eq!("2/-4".parse::<Slope>().unwrap(), s(-1, 2));
        assert!("x/2".parse::<Slope>().is_err());
    }

    #[test]
    fn neighbor_sequence_examples() {
        for n in -5..=5 {
            assert_eq!(neighbor_sequence(Slope::INFINITY, Slope::ZERO, n).unwrap(), s(n, 1));
            let t = neighbor_sequence(Slope::ZERO, Slope::INFINITY, n).unwrap();
            assert!(t.is_neighbor(Slope::ZERO));
        }
        assert_eq!(neighbor_sequence(Slope::ZERO, Slope::INFINITY, 3).unwrap(), s(1, 3));
        // Fan around 0/1 built by mediant bookkeeping: each new region is the
        // other common neighbour of 0/1 and the current one.
        let (mut prev, mut cur) = (Slope::MINUS_ONE, Slope::INFINITY);
        for n in 1..10 {
            let next = other_common_neighbor(Slope::ZERO, cur, prev).unwrap();
            assert_eq!(next, neighbor_sequence(Slope::ZERO, Slope::INFINITY, n).unwrap());
            (prev, cur) = (cur, next);
        }
        assert!(neighbor_sequence(s(1, 2), s(2, 1), 1).is_err());
    }

    #[test]
    fn expand_edge_example() {
        let e = DirectedEdge::new(Slope::ZERO, Slope::INFINITY, Slope::ONE, Slope::MINUS_ONE).unwrap();
        let (a, b) = expand_edge(&e).unwrap();
        assert_eq!((a.x(), a.y()), (Slope::MINUS_ONE, Slope::ZERO));
        assert_eq!((a.from(), a.to()), (Slope::INFINITY, s(-1, 2)));
        assert_eq!((b.x(), b.y()), (Slope::MINUS_ONE, Slope::INFINITY));
        assert_eq!((b.from(), b.to()), (Slope::ZERO, s(-2, 1)));
    }

    #[test]
    fn expansion_is_a_binary_tree() {
        let e = DirectedEdge::new(Slope::ZERO, Slope::INFINITY, Slope::ONE, Slope::MINUS_ONE).unwrap();
        let mut level = std::vec![e];
        let mut seen: HashSet<Slope> = [Slope::ZERO, Slope::INFINITY, Slope::ONE, Slope::MINUS_ONE].into();
        for d in 1..=12 {
            let mut next = std::vec::Vec::new();
            for e in &level {
                let (a, b) = expand_edge(e).unwrap();
                for f in [a, b] {
                    assert!(f.x().is_neighbor(f.y()));
                    assert!(seen.insert(f.to()), "slope {} revisited", f.to());
                    next.push(f);
                }
            }
            assert_eq!(next.len(), 1 << d);
            level = next;
        }
    }

    #[test]
    fn tail_examples() {
        let e = DirectedEdge::new(Slope::ZERO, Slope::INFINITY, Slope::ONE, Slope::MINUS_ONE).unwrap();
        assert!(tail_contains(&e, s(1, 2)));
        assert!(!tail_contains(&e, s(-1, 2)));
        let slopes = enumerate_slopes(14);
        for f in [e, DirectedEdge::new(s(1, 3), s(1, 2), s(2, 5), s(0, 1)).unwrap()] {
            let r = f.reversed();
            for &t in &slopes {
                let a = tail_contains(&f, t);
                let b = tail_contains(&r, t);
                assert!(a || b);
                assert_eq!(a && b, t == f.x() || t == f.y(), "{f} {t}");
            }
        }
    }

    #[test]
    fn circular_set_sizes() {
        let v = FareyTriple::base();
        let c = circular_set(&FiniteSubtree::single(v)).unwrap();
        assert_eq!(c.len(), 3);
        for e in &c {
            assert!(v.contains(e.to()));
        }
        let (w, _) = v.across(0).unwrap();
        let t = FiniteSubtree::from_vertices([v, w]).unwrap();
        assert_eq!(circular_set(&t).unwrap().len(), 4);
        let far = FareyTriple::new(s(1, 3), s(1, 2), s(2, 5)).unwrap();
        assert_eq!(FiniteSubtree::from_vertices([v, far]), Err(Error::DisconnectedTree));
        assert_eq!(FiniteSubtree::from_vertices(std::vec::Vec::new()), Err(Error::EmptyTree));
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate_slopes(1), std::vec![Slope::ZERO, Slope::INFINITY]);
        let two: HashSet<Slope> = enumerate_slopes(2).into_iter().collect();
        assert_eq!(two, [Slope::ZERO, Slope::INFINITY, Slope::ONE, Slope::MINUS_ONE].into());
    }

    #[test]
    fn enumerate_matches_gcd_sieve() {
        for n in [1u64, 2, 5, 10, 37, 60] {
            let mut count = 1; // ∞
            for q in 1..=n as i64 {
                for p in -(n as i64)..=(n as i64) {
                    if p.unsigned_abs() + q as u64 <= n && gcd(p.unsigned_abs(), q as u64) == 1 {
                        count += 1;
                    }
                }
            }
            let e = enumerate_slopes(n);
            let uniq: HashSet<Slope> = e.iter().copied().collect();
            assert_eq!(e.len(), count, "size {n}");
            assert_eq!(uniq.len(), count);
        }
    }

    #[test]
    fn descent_reaches_target_through_valid_steps() {
        for t in enumerate_slopes(25) {
            let path = descent(t);
            if [Slope::ZERO, Slope::ONE, Slope::INFINITY].contains(&t) {
                assert!(path.is_empty());
                continue;
            }
            assert_eq!(path.last().unwrap().new, t);
            for st in &path {
                assert!(st.x.is_neighbor(st.y));
                assert_eq!(other_common_neighbor(st.x, st.y, st.opposite).unwrap(), st.new);
            }
        }
    }

    #[test]
    fn order_is_numeric_with_infinity_last() {
        let mut v = std::vec![Slope::INFINITY, s(1, 2), s(-3, 1), Slope::ZERO, s(1, 3)];
        v.sort();
        assert_eq!(v, std::vec![s(-3, 1), Slope::ZERO, s(1, 3), s(1, 2), Slope::INFINITY]);
    }
}
