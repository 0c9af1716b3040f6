//! Bounded search for the Bowditch Q-conditions.
//!
//! Orient each edge of the dual tree toward the smaller of its two end
//! regions. Starting from the base vertex the search walks outward; a branch
//! is closed as soon as its edge passes an escape test, which certifies that
//! every region beyond it has trace of modulus above 2 and growing. If all
//! branches close, the explored vertices form a finite subtree whose
//! circular edges all point inward, which is the certificate.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::charvariety::{mcg_act_on_character, Character, MCGElement, TraceMap};
use crate::complexarith::acosh_pos;
use crate::farey::{expand_edge, DirectedEdge, FareyTriple, FiniteSubtree, Slope};
use crate::orbits::{fundamental_domains, open_arc_meets_closed, Domain};
use crate::{Error, Result};

/// Default depth bound.
pub const DEFAULT_MAX_DEPTH: usize = 64;
/// Default cap on explored vertices.
pub const DEFAULT_MAX_NODES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Traces must avoid the closed segment [−2, 2].
    Closed,
    /// Traces must avoid the open segment (−2, 2).
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flow {
    /// Points toward the vertex whose third region has the smaller |φ|.
    pub edge: DirectedEdge,
    pub tie: bool,
}

/// The flow on the tree edge underlying `e`. Ties point to the vertex whose
/// third slope is canonically smaller.
pub fn flow_direction(tm: &mut TraceMap, e: &DirectedEdge) -> Flow {
    let a = tm.trace_of(e.from()).norm();
    let b = tm.trace_of(e.to()).norm();
    let tie = a == b;
    let toward_to = if tie { e.to() < e.from() } else { b < a };
    Flow { edge: if toward_to { *e } else { e.reversed() }, tie }
}

/// Flows on every edge incident to a set of vertices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlowAssignment {
    pub flows: Vec<Flow>,
}

impl FlowAssignment {
    pub fn around(tm: &mut TraceMap, t: &FiniteSubtree) -> Result<FlowAssignment> {
        let mut seen = BTreeSet::new();
        let mut flows = Vec::new();
        for v in t.vertices() {
            for i in 0..3 {
                let (_, e) = v.across(i)?;
                if seen.insert((e.x(), e.y())) {
                    flows.push(flow_direction(tm, &e));
                }
            }
        }
        Ok(FlowAssignment { flows })
    }

    pub fn ties(&self) -> usize {
        self.flows.iter().filter(|f| f.tie).count()
    }
}

/// `|x|, |y| > 2` and `|z′| ≥ |z|` for `e = (X, Y; Z → Z′)`. Every region of
/// the tail on the `Z′` side other than `X, Y` then has trace modulus at
/// least `min(|x|, |y|, |z′|) > 2`, and the condition propagates to both
/// edges beyond `e`.
pub fn escape_values(x: Complex64, y: Complex64, z: Complex64, zp: Complex64) -> bool {
    x.norm() > 2.0 && y.norm() > 2.0 && zp.norm() >= z.norm()
}

pub fn escape_criterion(tm: &mut TraceMap, e: &DirectedEdge) -> bool {
    let (x, y) = (tm.trace_of(e.x()), tm.trace_of(e.y()));
    let (z, zp) = (tm.trace_of(e.from()), tm.trace_of(e.to()));
    escape_values(x, y, z, zp)
}

/// Escape along the fan of a small region. With `|x| ≤ 2`, `x ∉ [−2, 2]`,
/// the neighbours of `X` satisfy `yₙ₊₁ = x·yₙ − yₙ₋₁`, whose ratios
/// `rₙ = yₙ₊₁/yₙ` iterate `r ↦ x − 1/r`. Let `λ` be the root of
/// `λ + 1/λ = x` with `|λ| > 1`. The disc of radius
/// `δ = (|λ| − 1/|λ|)/2` about `λ` is mapped into itself and lies outside
/// the closed unit disc, so once `|y| > 2` and `z′/y` is in it, the fan
/// grows geometrically past `Y` and every side branch escapes in the sense
/// of [`escape_values`]. The roles of `X` and `Y` may be swapped.
pub fn fan_escape_values(x: Complex64, y: Complex64, zp: Complex64) -> bool {
    let one_side = |small: Complex64, big: Complex64| -> bool {
        if small.norm() > 2.0 || big.norm() <= 2.0 {
            return false;
        }
        if small.im.abs() <= 1e-12 * small.re.abs().max(1.0) && small.re.abs() <= 2.0 {
            return false;
        }
        // λ = e^{acosh(x/2)}; Re acosh > 0 gives |λ| > 1.
        let lam = acosh_pos(small * 0.5).exp();
        let m = lam.norm();
        if m <= 1.0 {
            return false;
        }
        let delta = 0.5 * (m - 1.0 / m);
        (zp / big - lam).norm() < delta
    };
    one_side(x, y) || one_side(y, x)
}

pub fn fan_escape_criterion(tm: &mut TraceMap, e: &DirectedEdge) -> bool {
    let (x, y, zp) = (tm.trace_of(e.x()), tm.trace_of(e.y()), tm.trace_of(e.to()));
    fan_escape_values(x, y, zp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EscapeKind {
    Standard,
    Fan,
}

/// A circular edge of the certificate together with the outward edge whose
/// escape test closes the branch beyond it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    /// Points into the certificate subtree.
    pub circular: DirectedEdge,
    pub kind: EscapeKind,
    /// `|x|, |y|, |z|, |z′|` for the outward edge `(X, Y; Z → Z′)`.
    pub moduli: [f64; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub subtree: FiniteSubtree,
    pub witnesses: Vec<Witness>,
    /// Relative search only: outward edges whose whole tail misses both
    /// fundamental domains.
    pub pruned: Vec<DirectedEdge>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BQVerdict {
    Accepted(Certificate),
    RejectedInterval { slope: Slope, trace: Complex64 },
    RejectedInfinitelyMany { count: usize, bound: usize },
    Undetermined { depth_reached: usize, reason: String },
}

impl BQVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, BQVerdict::Accepted(_))
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self, BQVerdict::RejectedInterval { .. } | BQVerdict::RejectedInfinitelyMany { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            BQVerdict::Accepted(_) => "Accepted",
            BQVerdict::RejectedInterval { .. } => "RejectedInterval",
            BQVerdict::RejectedInfinitelyMany { .. } => "RejectedInfinitelyMany",
            BQVerdict::Undetermined { .. } => "Undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BqOptions {
    pub max_depth: usize,
    pub max_nodes: usize,
    pub variant: Variant,
}

impl Default for BqOptions {
    fn default() -> Self {
        BqOptions { max_depth: DEFAULT_MAX_DEPTH, max_nodes: DEFAULT_MAX_NODES, variant: Variant::Extended }
    }
}

fn in_segment(t: Complex64, variant: Variant) -> bool {
    let real = t.im.abs() <= 1e-12 * t.re.abs().max(1.0);
    real && match variant {
        Variant::Closed => t.re.abs() <= 2.0,
        Variant::Extended => t.re.abs() < 2.0,
    }
}

/// Search statistics useful for auditing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchStats {
    pub vertices: usize,
    pub small_regions: usize,
    pub max_depth_reached: usize,
    /// Vertices with two or more outward flows but all three moduli above 2;
    /// must stay zero.
    pub guard_violations: usize,
}

struct Frame {
    edge: DirectedEdge,
    vals: [Complex64; 4],
    depth: usize,
}

fn search(c: &Character, opts: &BqOptions, domains: Option<&[Domain; 2]>) -> (BQVerdict, SearchStats) {
    let mut stats = SearchStats::default();
    let bound = 3 * opts.max_depth.max(DEFAULT_MAX_DEPTH);
    let [x0, y0, z0] = c.triple();
    let base_vals = [(Slope::ZERO, x0), (Slope::INFINITY, y0), (Slope::ONE, z0)];
    let relevant = |s: Slope| domains.is_none_or(|d| d.iter().any(|d| d.contains(s)));
    let mut small = BTreeSet::new();
    for (s, t) in base_vals {
        if in_segment(t, opts.variant) {
            return (BQVerdict::RejectedInterval { slope: s, trace: t }, stats);
        }
        if t.norm() <= 2.0 && relevant(s) {
            small.insert(s);
        }
    }
    stats.small_regions = small.len();
    let base = FareyTriple::base();
    let mut vertices = alloc::vec![base];
    let mut witnesses = Vec::new();
    let mut pruned = Vec::new();
    let mut undetermined = false;
    let val = |s: Slope| base_vals.iter().find(|(b, _)| *b == s).unwrap().1;
    let mut stack: Vec<Frame> = Vec::new();
    for i in (0..3).rev() {
        let (_, into) = base.across(i).expect("base neighbours exist");
        let e = into.reversed();
        let zp = val(e.x()) * val(e.y()) - val(e.from());
        stack.push(Frame { edge: e, vals: [val(e.x()), val(e.y()), val(e.from()), zp], depth: 1 });
    }
    guard(&mut stats, [x0, y0, z0], [y0 * z0 - x0, x0 * z0 - y0, x0 * y0 - z0]);
    while let Some(Frame { edge: e, vals: [x, y, z, zp], depth }) = stack.pop() {
        stats.max_depth_reached = stats.max_depth_reached.max(depth);
        if let Some(d) = domains {
            // Regions strictly beyond e lie in the open arc between X and Y
            // on the side of Z′.
            let (a, b) = if on_upward(e.x(), e.y(), e.to()) { (e.x(), e.y()) } else { (e.y(), e.x()) };
            if !d.iter().any(|d| {
                let (lo, hi) = d.closure();
                open_arc_meets_closed(a, b, lo, hi)
            }) {
                pruned.push(e);
                continue;
            }
        }
        if in_segment(zp, opts.variant) {
            return (BQVerdict::RejectedInterval { slope: e.to(), trace: zp }, stats);
        }
        if zp.norm() <= 2.0 && relevant(e.to()) {
            small.insert(e.to());
            stats.small_regions = small.len();
            if small.len() > bound {
                return (BQVerdict::RejectedInfinitelyMany { count: small.len(), bound }, stats);
            }
        }
        let tie_free = zp.norm() != z.norm();
        let kind = if escape_values(x, y, z, zp) && tie_free {
            Some(EscapeKind::Standard)
        } else if fan_escape_values(x, y, zp) {
            Some(EscapeKind::Fan)
        } else {
            None
        };
        if let Some(kind) = kind {
            witnesses.push(Witness { circular: e.reversed(), kind, moduli: [x.norm(), y.norm(), z.norm(), zp.norm()] });
            continue;
        }
        if depth >= opts.max_depth || vertices.len() >= opts.max_nodes {
            undetermined = true;
            witnesses.push(Witness { circular: e.reversed(), kind: EscapeKind::Standard, moduli: [f64::NAN; 4] });
            continue;
        }
        let head = e.to_vertex();
        vertices.push(head);
        stats.vertices = vertices.len();
        let (e1, e2) = match expand_edge(&e) {
            Ok(p) => p,
            Err(err) => {
                return (
                    BQVerdict::Undetermined { depth_reached: depth, reason: alloc::format!("{err}") },
                    stats,
                )
            }
        };
        // e1 = (X, Z′; Y → W1), e2 = (Y, Z′; X → W2).
        let w1 = x * zp - y;
        let w2 = y * zp - x;
        guard(&mut stats, [x, y, zp], [w2, w1, z]);
        let frame = |f: DirectedEdge, w: Complex64, far: Complex64, near_x: Complex64| {
            // Order the stored pair to match the edge's normalised (x, y).
            let (a, b) = if f.x() == e.to() { (zp, near_x) } else { (near_x, zp) };
            Frame { edge: f, vals: [a, b, far, w], depth: depth + 1 }
        };
        stack.push(frame(e2, w2, x, y));
        stack.push(frame(e1, w1, y, x));
    }
    stats.vertices = vertices.len();
    if undetermined {
        let reason = if vertices.len() >= opts.max_nodes { "node budget exhausted" } else { "depth bound reached" };
        return (BQVerdict::Undetermined { depth_reached: stats.max_depth_reached, reason: reason.into() }, stats);
    }
    let subtree = FiniteSubtree::from_vertices(vertices).expect("search explores a connected subtree");
    (BQVerdict::Accepted(Certificate { subtree, witnesses, pruned }), stats)
}

fn on_upward(a: Slope, b: Slope, s: Slope) -> bool {
    if a <= b {
        a <= s && s <= b
    } else {
        s >= a || s <= b
    }
}

/// Vertex `(a, b, c)` with neighbours' third values `opp[i]` across the pair
/// opposite `vals[i]`: the flow across that pair leaves the vertex when
/// `|opp[i]| ≤ |vals[i]|`.
fn guard(stats: &mut SearchStats, vals: [Complex64; 3], opp: [Complex64; 3]) {
    let outward = (0..3).filter(|&i| opp[i].norm() <= vals[i].norm()).count();
    let min = vals.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if outward >= 2 && min > 2.0 + 1e-12 {
        stats.guard_violations += 1;
    }
}

pub fn check_bq(c: &Character, max_depth: usize, variant: Variant) -> BQVerdict {
    check_bq_with(c, &BqOptions { max_depth, variant, ..BqOptions::default() }).0
}

pub fn check_bq_with(c: &Character, opts: &BqOptions) -> (BQVerdict, SearchStats) {
    search(c, opts, None)
}

/// Relative conditions for a `θ`-fixed character: the search only follows
/// branches that reach a fundamental domain of `⟨θ⟩`, and counts small
/// regions among orbit representatives.
pub fn check_relative_bq(c: &Character, theta: &MCGElement, max_depth: usize) -> Result<BQVerdict> {
    let opts = BqOptions { max_depth, variant: Variant::Closed, ..BqOptions::default() };
    Ok(check_relative_bq_with(c, theta, &opts)?.0)
}

pub fn check_relative_bq_with(c: &Character, theta: &MCGElement, opts: &BqOptions) -> Result<(BQVerdict, SearchStats)> {
    if !theta.is_anosov() {
        return Err(Error::NotAnosov);
    }
    let moved = mcg_act_on_character(theta, c)?;
    let scale = c.triple().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let residual = moved.distance(c) / scale;
    if residual > 1e-8 {
        return Err(Error::NotFixed { residual });
    }
    let domains = fundamental_domains(theta)?;
    Ok(search(c, opts, Some(&domains)))
}

/// Fitted lower Fibonacci growth rate: the least `log⁺|φ(s)| / (|p| + q)`
/// over slopes of size at most `max_size` that are not regions of the
/// certificate subtree. Positive for accepted characters.
pub fn fibonacci_growth_rate(tm: &mut TraceMap, cert: &Certificate, max_size: u64) -> f64 {
    let inside: BTreeSet<Slope> = cert.subtree.vertices().flat_map(|v| v.slopes()).collect();
    let mut k = f64::INFINITY;
    for s in crate::farey::enumerate_slopes(max_size) {
        if inside.contains(&s) {
            continue;
        }
        let l = num_traits::Float::ln(tm.trace_of(s).norm()).max(0.0);
        k = k.min(l / s.size() as f64);
    }
    k
}

/// Slopes within `max_depth` tree steps of the base with `|φ| ≤ k`, plus
/// whether they span a connected subgraph of the Farey graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SublevelSet {
    pub slopes: BTreeSet<Slope>,
    pub connected: bool,
    pub truncated: bool,
}

/// Branches whose escape test holds with `min(|x|, |y|, |z′|) > k` contain
/// nothing at or below `k` and are skipped.
pub fn sublevel_set(tm: &mut TraceMap, k: f64, max_depth: usize) -> SublevelSet {
    let mut slopes = BTreeSet::new();
    for s in [Slope::ZERO, Slope::INFINITY, Slope::ONE] {
        if tm.trace_of(s).norm() <= k {
            slopes.insert(s);
        }
    }
    let base = FareyTriple::base();
    let mut stack: Vec<(DirectedEdge, usize)> =
        (0..3).map(|i| (base.across(i).expect("base neighbours exist").1.reversed(), 1)).collect();
    let mut truncated = false;
    while let Some((e, depth)) = stack.pop() {
        let (x, y, z, zp) = (tm.trace_of(e.x()), tm.trace_of(e.y()), tm.trace_of(e.from()), tm.trace_of(e.to()));
        if zp.norm() <= k {
            slopes.insert(e.to());
        }
        if escape_values(x, y, z, zp) && x.norm().min(y.norm()).min(zp.norm()) > k {
            continue;
        }
        if depth >= max_depth {
            truncated = true;
            continue;
        }
        if let Ok((a, b)) = expand_edge(&e) {
            stack.push((b, depth + 1));
            stack.push((a, depth + 1));
        }
    }
    let connected = farey_connected(&slopes);
    SublevelSet { slopes, connected, truncated }
}

fn farey_connected(set: &BTreeSet<Slope>) -> bool {
    let v: Vec<Slope> = set.iter().copied().collect();
    if v.is_empty() {
        return true;
    }
    let mut seen = alloc::vec![false; v.len()];
    let mut queue = alloc::vec![0];
    seen[0] = true;
    while let Some(i) = queue.pop() {
        for j in 0..v.len() {
            if !seen[j] && v[i].is_neighbor(v[j]) {
                seen[j] = true;
                queue.push(j);
            }
        }
    }
    seen.iter().all(|&b| b)
}
