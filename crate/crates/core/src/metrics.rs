//! Packing numbers, the density constant, and derived packing profiles.
//!
//! The closed ball `B(x, r)` of a semimetric graph contains `x` and every
//! vertex at finite distance at most `r` from it. `PackNum(B, sep)` is the
//! largest subset of the ball whose members are pairwise at distance
//! strictly greater than `sep` (absent pairs, being infinitely far, never
//! conflict). All packing numbers here are exact: they are maximum
//! independent sets of the "conflict" graph on the ball, solved by branch
//! and bound. Balls larger than a configurable cap are a hard error rather
//! than a silent approximation.
//!
//! The density constant `mu` is the largest `PackNum(B(x, r), r/2)` over
//! all centers and radii; its base-2 logarithm `dens` measures intrinsic
//! dimension, and `pstar(eta)` — the largest `PackNum(B(x, r), eta * r)` —
//! bounds how many components margin-based separation can see inside one
//! ball. Radii only need to be scanned at the distinct distances present:
//! between two consecutive distance values the ball is unchanged while the
//! separation grows, so the packing number cannot increase.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::graphcore::SemimetricGraph;
use crate::rational::Rat;
use crate::Node;

/// Default cap on ball size for the exact packing solver.
pub const DEFAULT_BALL_CAP: usize = 40;

/// Error raised by packing computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricsError {
    /// A ball exceeded the exact-solve size cap.
    BallTooLarge {
        center: Node,
        ball_size: usize,
        cap: usize,
    },
    /// A radius or separation parameter is outside its domain.
    InvalidParameter { what: &'static str },
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::BallTooLarge {
                center,
                ball_size,
                cap,
            } => write!(
                f,
                "ball around node {center} has {ball_size} points, over the exact-solve cap {cap}"
            ),
            MetricsError::InvalidParameter { what } => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl std::error::Error for MetricsError {}

/// Exact packing number of the closed ball `B(center, radius)` at the given
/// separation, using the default ball cap.
pub fn packing_number(
    g: &SemimetricGraph,
    center: Node,
    radius: &Rat,
    sep: &Rat,
) -> Result<usize, MetricsError> {
    packing_number_with_cap(g, center, radius, sep, DEFAULT_BALL_CAP)
}

/// Exact packing number with an explicit ball-size cap.
///
/// The result is exact whenever it is produced; the cap only limits how
/// large a ball the solver will accept before erroring.
pub fn packing_number_with_cap(
    g: &SemimetricGraph,
    center: Node,
    radius: &Rat,
    sep: &Rat,
    cap: usize,
) -> Result<usize, MetricsError> {
    if radius.is_negative() {
        return Err(MetricsError::InvalidParameter {
            what: "radius must be >= 0",
        });
    }
    if sep.is_negative() {
        return Err(MetricsError::InvalidParameter {
            what: "separation must be >= 0",
        });
    }
    let ball = ball_members(g, center, radius);
    if ball.len() > cap {
        return Err(MetricsError::BallTooLarge {
            center,
            ball_size: ball.len(),
            cap,
        });
    }
    Ok(max_packing(g, &ball, sep))
}

/// Closed-ball membership: `center` plus every vertex at distance `<= radius`.
fn ball_members(g: &SemimetricGraph, center: Node, radius: &Rat) -> Vec<Node> {
    let mut ball = vec![center];
    for (nb, w) in g.weighted_neighbors(center) {
        if w <= radius {
            ball.push(nb);
        }
    }
    ball.sort_unstable();
    ball
}

/// Maximum subset of `points` at pairwise distance strictly greater than
/// `sep`: a maximum clique of the compatibility graph (distance above `sep`
/// or absent), by branch and bound with a greedy-coloring bound. Exact and
/// deterministic.
fn max_packing(g: &SemimetricGraph, points: &[Node], sep: &Rat) -> usize {
    let b = points.len();
    if b <= 1 {
        return b;
    }
    let words = b.div_ceil(64);
    let mut compat = vec![vec![0u64; words]; b];
    for i in 0..b {
        for j in (i + 1)..b {
            let coexist = match g.distance(points[i], points[j]) {
                Some(d) => d > sep,
                None => true, // infinitely far apart: never conflicts
            };
            if coexist {
                compat[i][j / 64] |= 1 << (j % 64);
                compat[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut cand = vec![u64::MAX; words];
    if !b.is_multiple_of(64) {
        cand[words - 1] = (1u64 << (b % 64)) - 1;
    }
    let mut best = 0;
    clique_branch(&compat, cand, 0, &mut best);
    best
}

fn count_bits(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

/// Branch-and-bound maximum clique on a bitset adjacency matrix.
///
/// Each level greedy-colors the candidates (color classes are independent
/// sets, so any clique holds at most one vertex per class) and branches in
/// descending color order: a vertex of color `c` can only extend `current`
/// to `current + c`, which prunes the rest of the level the moment that
/// stops beating `best`.
fn clique_branch(compat: &[Vec<u64>], mut cand: Vec<u64>, current: usize, best: &mut usize) {
    if count_bits(&cand) == 0 {
        *best = (*best).max(current);
        return;
    }
    // Greedy coloring; `order` lists candidates by ascending color.
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut uncolored = cand.clone();
    let mut color = 0usize;
    while count_bits(&uncolored) > 0 {
        color += 1;
        let mut avail = uncolored.clone();
        loop {
            let Some(word_idx) = avail.iter().position(|&w| w != 0) else {
                break;
            };
            let bit = avail[word_idx].trailing_zeros() as usize;
            let v = word_idx * 64 + bit;
            avail[word_idx] &= !(1 << bit);
            uncolored[word_idx] &= !(1 << bit);
            order.push((v, color));
            // Neighbors of `v` can't share its class.
            for (w, a) in avail.iter_mut().zip(&compat[v]) {
                *w &= !a;
            }
        }
    }
    for &(v, c) in order.iter().rev() {
        if current + c <= *best {
            return; // every remaining vertex has an equal or smaller bound
        }
        let mut included: Vec<u64> = cand.iter().zip(&compat[v]).map(|(w, a)| w & a).collect();
        included[v / 64] &= !(1 << (v % 64));
        clique_branch(compat, included, current + 1, best);
        cand[v / 64] &= !(1 << (v % 64));
    }
}

/// Density summary of a semimetric graph: the constant `mu`, its logarithm,
/// and a cache of `pstar` values.
///
/// Holds a borrow of the graph it was computed from, so cached `pstar`
/// values can never be mixed across graphs.
#[derive(Debug)]
pub struct PackingProfile<'a> {
    g: &'a SemimetricGraph,
    cap: usize,
    mu: usize,
    pstar_cache: RefCell<BTreeMap<Rat, usize>>,
}

impl<'a> PackingProfile<'a> {
    /// Computes the density constant with the default ball cap.
    pub fn compute(g: &'a SemimetricGraph) -> Result<Self, MetricsError> {
        Self::compute_with_cap(g, DEFAULT_BALL_CAP)
    }

    /// Computes the density constant with an explicit ball cap.
    pub fn compute_with_cap(g: &'a SemimetricGraph, cap: usize) -> Result<Self, MetricsError> {
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        let mu = scan_packings(g, cap, |r| r * &half)?;
        Ok(PackingProfile {
            g,
            cap,
            mu,
            pstar_cache: RefCell::new(BTreeMap::new()),
        })
    }

    /// The density constant: the largest half-radius packing of any ball.
    pub fn mu(&self) -> usize {
        self.mu
    }

    /// `log2(mu)`, as a float for reporting only; all bound checks stay in
    /// exact arithmetic.
    pub fn dens(&self) -> f64 {
        (self.mu as f64).log2()
    }

    /// Largest `PackNum(B(x, r), eta * r)` over all balls, cached per `eta`.
    pub fn pstar(&self, eta: &Rat) -> Result<usize, MetricsError> {
        if let Some(&hit) = self.pstar_cache.borrow().get(eta) {
            return Ok(hit);
        }
        let value = pstar_with_cap(self.g, eta, self.cap)?;
        self.pstar_cache.borrow_mut().insert(eta.clone(), value);
        Ok(value)
    }
}

/// Largest `PackNum(B(x, r), eta * r)` over all centers and radii, with the
/// default ball cap.
pub fn pstar(g: &SemimetricGraph, eta: &Rat) -> Result<usize, MetricsError> {
    pstar_with_cap(g, eta, DEFAULT_BALL_CAP)
}

/// As [`pstar`] with an explicit ball cap.
///
/// `eta` must be positive. Values above 1 are permitted (they arise when
/// checking a measured call against the ball that actually enclosed its
/// input); the scan is identical.
pub fn pstar_with_cap(g: &SemimetricGraph, eta: &Rat, cap: usize) -> Result<usize, MetricsError> {
    if !eta.is_positive() {
        return Err(MetricsError::InvalidParameter {
            what: "eta must be > 0",
        });
    }
    scan_packings(g, cap, |r| r * eta)
}

/// Max packing over all balls, with separation given as a function of the
/// radius.
///
/// For a fixed center the ball only changes at the distances out of that
/// center, and between changes the separation grows while the ball stays
/// put, so the per-center maximum is attained at one of those distances.
/// Scanning each center's own distance values therefore finds the same
/// maximum as scanning every distinct distance in the graph, at a fraction
/// of the cost. A zero-radius ball is the center alone and packs 1.
fn scan_packings(
    g: &SemimetricGraph,
    cap: usize,
    sep_of: impl Fn(&Rat) -> Rat,
) -> Result<usize, MetricsError> {
    if g.n() == 0 {
        return Ok(0);
    }
    let mut best = 1usize;
    for x in 0..g.n() {
        let mut radii: Vec<Rat> = g.weighted_neighbors(x).map(|(_, w)| w.clone()).collect();
        radii.sort();
        radii.dedup();
        for r in &radii {
            let ball = ball_members(g, x, r);
            if ball.len() > cap {
                return Err(MetricsError::BallTooLarge {
                    center: x,
                    ball_size: ball.len(),
                    cap,
                });
            }
            // The ball can't beat the incumbent, so skip the exact solve.
            if ball.len() <= best {
                continue;
            }
            let sep = sep_of(r);
            best = best.max(max_packing(g, &ball, &sep));
        }
    }
    Ok(best)
}

/// Certifies `pstar_value <= ceil((2 / eta) ^ dens)` in exact arithmetic,
/// where `dens = log2(mu)`.
///
/// When the exponentials are rational the comparison is exact. Otherwise the
/// right-hand side is bracketed by dyadic rational exponents evaluated as
/// exact integer powers, refined up to 16 fractional bits; a bound that
/// cannot be certified within that slack reports `false` (never a false
/// positive).
pub fn density_bound_holds(pstar_value: usize, mu: usize, eta: &Rat) -> bool {
    assert!(mu >= 1, "density constant is at least 1");
    assert!(eta.is_positive(), "eta must be > 0");
    // base = 2 / eta; claim: pstar_value <= ceil(base ^ log2(mu)).
    let base = Rat::new(BigInt::from(2), BigInt::one()) / eta;
    if base < Rat::one() {
        // eta > 2: the exponent base drops below 1 and the bound degenerates;
        // only a packing of 1 can satisfy it (mu >= 1 keeps rhs >= ... <= 1).
        return pstar_value <= 1;
    }
    if mu == 1 {
        // dens = 0: rhs is exactly 1.
        return pstar_value <= 1;
    }
    if let Some(j) = exact_log2(&base) {
        // rhs = 2^(j * log2 mu) = mu^j, exactly.
        let rhs = BigInt::from(mu).pow(j);
        return BigInt::from(pstar_value) <= rhs;
    }
    // pstar_value <= ceil(rhs) iff pstar_value - 1 < rhs. We certify the
    // strict inequality via a dyadic lower bound t/2^k <= log2(base):
    // (pstar_value - 1)^(2^k) < mu^t implies pstar_value - 1 < mu^(t/2^k)
    // <= base^dens = rhs.
    let lhs = BigInt::from(pstar_value - 1);
    if lhs <= BigInt::one() {
        return true; // rhs = base^dens >= 1 since base >= 1
    }
    for bits in [4u32, 8, 12, 16] {
        let t = dyadic_floor_log2(&base, bits);
        if cross_power_lt(&lhs, bits, &BigInt::from(mu), t) {
            return true;
        }
    }
    false
}

/// `log2(x)` when `x` is an exact power of two (integer result), else `None`.
fn exact_log2(x: &Rat) -> Option<u32> {
    if !x.denom().is_one() {
        return None;
    }
    let n = x.numer();
    if n.is_zero() || n.is_negative() {
        return None;
    }
    let bits = n.bits();
    let mut probe = BigInt::one();
    probe <<= (bits - 1) as usize;
    if &probe == n {
        Some((bits - 1) as u32)
    } else {
        None
    }
}

/// Largest `t` with `2^t <= base^(2^bits)`, i.e. a dyadic floor of
/// `2^bits * log2(base)` for `base >= 1`.
fn dyadic_floor_log2(base: &Rat, bits: u32) -> u64 {
    // base^(2^bits) by repeated squaring of the rational.
    let mut p = base.numer().clone();
    let mut q = base.denom().clone();
    for _ in 0..bits {
        p = &p * &p;
        q = &q * &q;
    }
    // floor(log2(p / q)) with p >= q >= 1.
    let (pb, qb) = (p.bits(), q.bits());
    let mut t = pb - qb;
    // 2^t <= p/q iff q << t <= p; adjust the one-off.
    let shifted = &q << t as usize;
    if shifted > p {
        t -= 1;
    } else {
        // Maybe t+1 still fits.
        let shifted = &q << (t + 1) as usize;
        if shifted <= p {
            t += 1;
        }
    }
    t
}

/// Exact test `a^(2^bits) < b^t` without materializing absurd powers
/// blindly: both sides stay within a few hundred kilobits for the inputs
/// this crate produces, so direct big-integer powers are fine.
fn cross_power_lt(a: &BigInt, bits: u32, b: &BigInt, t: u64) -> bool {
    // a^(2^bits) by repeated squaring.
    let mut lhs = a.clone();
    for _ in 0..bits {
        lhs = &lhs * &lhs;
        // Early exit: compare bit lengths against the rhs bound to avoid
        // squaring gigantic numbers when the outcome is already forced.
        if lhs.bits() > t * b.bits() + 64 {
            return false;
        }
    }
    let rhs = b.pow(t.try_into().unwrap_or(u32::MAX));
    lhs < rhs
}
