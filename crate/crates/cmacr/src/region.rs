//! Three-dimensional rate-region algebra.
//!
//! Two representations cover everything the channel models need:
//!
//! * [`LinearRateRegion`] — a conjunction of half-spaces `sum_{j in mask} R_j
//!   <= bound` intersected with the nonnegative orthant. Used for regions
//!   evaluated at a *fixed* input distribution or power split, where the
//!   polymatroid structure is exact.
//! * [`PointCloudRegion`] — a finite set of certified achievable points with
//!   provenance strings. Used for unions over input distributions, where no
//!   finite half-space description exists.
//!
//! Exact polytope vertex enumeration is deliberately out of scope: subset
//! checks sample frontier points along deterministic ray directions, and
//! corner extraction uses greedy coordinate allocation, which is exact for
//! the polymatroid-shaped regions produced by this crate.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack used by membership and dominance checks.
pub const CONTAINS_TOL: f64 = 1e-9;

/// Absolute tolerance of [`PointCloudRegion::max_symmetric_rate`].
pub const SYM_RATE_TOL: f64 = 1e-6;

/// Default number of sweep directions in [`PointCloudRegion::frontier_slice`].
pub const DEFAULT_FRONTIER_DIRECTIONS: usize = 181;

/// A nonnegative rate point `(R1, R2, R3)` in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTriple {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl RateTriple {
    /// Builds a rate point. Components must be finite and nonnegative;
    /// values within `1e-9` below zero are clamped to zero to absorb
    /// floating-point jitter from upstream arithmetic.
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        for (name, v) in [("r1", r1), ("r2", r2), ("r3", r3)] {
            if !v.is_finite() || v < -CONTAINS_TOL {
                return Err(Error::InvalidParameter(format!("rate {name} = {v} is not a nonnegative finite value")));
            }
        }
        Ok(RateTriple { r1: r1.max(0.0), r2: r2.max(0.0), r3: r3.max(0.0) })
    }

    /// The origin.
    pub fn zero() -> Self {
        RateTriple { r1: 0.0, r2: 0.0, r3: 0.0 }
    }

    /// Component by 1-based rate index.
    pub fn get(&self, j: u8) -> f64 {
        match j {
            1 => self.r1,
            2 => self.r2,
            3 => self.r3,
            _ => panic!("rate index {j} out of range 1..=3"),
        }
    }

    /// Componentwise `self >= other - tol`.
    pub fn dominates(&self, other: &RateTriple, tol: f64) -> bool {
        self.r1 >= other.r1 - tol && self.r2 >= other.r2 - tol && self.r3 >= other.r3 - tol
    }

    pub(crate) fn lex_key(&self) -> [u64; 3] {
        // Nonnegative finite floats order correctly by their IEEE bit patterns.
        [self.r1.to_bits(), self.r2.to_bits(), self.r3.to_bits()]
    }
}

/// A nonempty subset of the rate indices `{1, 2, 3}`, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RateMask(u8);

impl RateMask {
    pub const R1: RateMask = RateMask(0b001);
    pub const R2: RateMask = RateMask(0b010);
    pub const R3: RateMask = RateMask(0b100);
    pub const R12: RateMask = RateMask(0b011);
    pub const R13: RateMask = RateMask(0b101);
    pub const R23: RateMask = RateMask(0b110);
    pub const R123: RateMask = RateMask(0b111);

    /// Builds a mask from 1-based rate indices; duplicates collapse.
    pub fn from_rates(rates: &[u8]) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidParameter("a rate mask cannot be empty".into()));
        }
        let mut bits = 0u8;
        for &r in rates {
            if !(1..=3).contains(&r) {
                return Err(Error::InvalidParameter(format!("rate index {r} out of range 1..=3")));
            }
            bits |= 1 << (r - 1);
        }
        Ok(RateMask(bits))
    }

    /// The 1-based rate indices in ascending order.
    pub fn rates(&self) -> Vec<u8> {
        (1..=3).filter(|&j| self.contains_rate(j)).collect()
    }

    /// Whether rate `j` participates in the sum.
    pub fn contains_rate(&self, j: u8) -> bool {
        j >= 1 && j <= 3 && self.0 & (1 << (j - 1)) != 0
    }

    /// `sum_{j in mask} t_j`.
    pub fn dot(&self, t: &RateTriple) -> f64 {
        let mut s = 0.0;
        for j in self.rates() {
            s += t.get(j);
        }
        s
    }

    /// Number of participating rates.
    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for RateMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let idx: Vec<String> = self.rates().iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", idx.join(","))
    }
}

/// One half-space `sum_{j in mask} R_j <= bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub mask: RateMask,
    pub bound: f64,
}

impl Constraint {
    pub fn new(mask: RateMask, bound: f64) -> Self {
        Constraint { mask, bound }
    }
}

/// A polyhedral rate region: intersection of half-space constraints with the
/// nonnegative orthant, in canonical form (constraints sorted by mask, one
/// constraint per mask, duplicates merged by minimum).
///
/// Negative bounds are representable and make the region empty; an explicit
/// empty marker ([`LinearRateRegion::empty`]) exists for regions that are
/// empty by construction rather than by arithmetic (for example a
/// compress-and-forward evaluation whose quantization constraint cannot be
/// met at any positive relay rate).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRateRegion {
    constraints: Vec<Constraint>,
    marked_empty: bool,
}

#[derive(Serialize, Deserialize)]
struct ConstraintJson {
    mask: Vec<u8>,
    bound: f64,
}

#[derive(Serialize, Deserialize)]
struct RegionJson {
    constraints: Vec<ConstraintJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    empty: bool,
}

impl LinearRateRegion {
    /// Builds a region in canonical form. Bounds must be finite (negative is
    /// allowed and yields an empty region); duplicate masks merge by minimum.
    pub fn new(constraints: Vec<Constraint>) -> Result<Self> {
        let mut merged: BTreeMap<RateMask, f64> = BTreeMap::new();
        for c in constraints {
            if !c.bound.is_finite() {
                return Err(Error::InvalidParameter(format!("bound for mask {} is not finite: {}", c.mask, c.bound)));
            }
            merged
                .entry(c.mask)
                .and_modify(|b| *b = b.min(c.bound))
                .or_insert(c.bound);
        }
        Ok(LinearRateRegion {
            constraints: merged.into_iter().map(|(mask, bound)| Constraint { mask, bound }).collect(),
            marked_empty: false,
        })
    }

    /// The explicitly-empty region.
    pub fn empty() -> Self {
        LinearRateRegion { constraints: Vec::new(), marked_empty: true }
    }

    /// Constraints in canonical order.
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// The bound stored for `mask`, if that mask is constrained.
    pub fn bound_for(&self, mask: RateMask) -> Option<f64> {
        self.constraints.iter().find(|c| c.mask == mask).map(|c| c.bound)
    }

    /// Whether this region was constructed as explicitly empty.
    pub fn is_marked_empty(&self) -> bool {
        self.marked_empty
    }

    /// True when the region contains no nonnegative point: either marked
    /// empty, or some constraint bound is below zero beyond tolerance.
    pub fn is_empty(&self) -> bool {
        self.marked_empty || self.constraints.iter().any(|c| c.bound < -CONTAINS_TOL)
    }

    /// Membership with [`CONTAINS_TOL`] slack on every constraint.
    pub fn contains(&self, t: &RateTriple) -> bool {
        !self.marked_empty && self.constraints.iter().all(|c| c.mask.dot(t) <= c.bound + CONTAINS_TOL)
    }

    /// Intersection: the union of the constraint sets, duplicate masks merged
    /// by minimum. Intersecting with a marked-empty region is marked empty.
    pub fn intersect(&self, other: &LinearRateRegion) -> LinearRateRegion {
        if self.marked_empty || other.marked_empty {
            return LinearRateRegion::empty();
        }
        let mut all = self.constraints.clone();
        all.extend_from_slice(&other.constraints);
        LinearRateRegion::new(all).expect("canonical regions only hold finite bounds")
    }

    /// Greedy corner points: for each of the six orderings of the rates,
    /// maximize each rate in turn subject to every constraint given the
    /// rates already fixed. For the polymatroid-shaped regions built by this
    /// crate these corners, together with time sharing, span the region.
    ///
    /// Rates that appear in no constraint are left at zero. Empty regions
    /// yield no corners.
    pub fn greedy_corners(&self) -> Vec<RateTriple> {
        if self.is_empty() || self.constraints.is_empty() {
            return Vec::new();
        }
        const PERMS: [[u8; 3]; 6] =
            [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];
        let mut corners: Vec<RateTriple> = Vec::new();
        for perm in PERMS {
            let mut r = [0.0f64; 3];
            for &j in &perm {
                let mut avail = f64::INFINITY;
                for c in &self.constraints {
                    if c.mask.contains_rate(j) {
                        let used: f64 = c.mask.rates().iter().filter(|&&k| k != j).map(|&k| r[(k - 1) as usize]).sum();
                        avail = avail.min(c.bound - used);
                    }
                }
                if avail.is_finite() {
                    r[(j - 1) as usize] = avail.max(0.0);
                }
            }
            let t = RateTriple { r1: r[0], r2: r[1], r3: r[2] };
            if !corners.iter().any(|c| c == &t) {
                corners.push(t);
            }
        }
        corners
    }

    /// Serializes as `{"constraints": [{"mask": [..], "bound": ..}, ..]}`,
    /// plus `"empty": true` for marked-empty regions.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&RegionJson {
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintJson { mask: c.mask.rates(), bound: c.bound })
                .collect(),
            empty: self.marked_empty,
        })
        .expect("region serialization cannot fail")
    }

    /// Parses the external JSON form with full validation.
    pub fn from_json(s: &str) -> Result<LinearRateRegion> {
        let raw: RegionJson = serde_json::from_str(s)?;
        let mut constraints = Vec::with_capacity(raw.constraints.len());
        for c in raw.constraints {
            constraints.push(Constraint { mask: RateMask::from_rates(&c.mask)?, bound: c.bound });
        }
        let mut region = LinearRateRegion::new(constraints)?;
        region.marked_empty = raw.empty;
        Ok(region)
    }
}

/// One certified achievable point together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct CloudPoint {
    pub rate: RateTriple,
    /// Human-readable description of the input (power split, distribution
    /// hash, ...) that certifies the point.
    pub provenance: String,
}

impl CloudPoint {
    pub fn new(rate: RateTriple, provenance: impl Into<String>) -> Self {
        CloudPoint { rate, provenance: provenance.into() }
    }
}

/// A frontier sample: the point of a cloud maximizing `cos(theta) R1 +
/// sin(theta) R2` at a fixed `R3` slice.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontierPoint {
    pub theta: f64,
    pub rate: RateTriple,
    pub provenance: String,
}

/// A rate region represented by finitely many certified achievable points,
/// closed downward (every point dominated by a member is considered inside).
#[derive(Debug, Clone, Default)]
pub struct PointCloudRegion {
    points: Vec<CloudPoint>,
}

impl PointCloudRegion {
    pub fn from_points(points: Vec<CloudPoint>) -> Self {
        PointCloudRegion { points }
    }

    pub fn points(&self) -> &[CloudPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Membership: some stored point dominates `t` componentwise within
    /// [`CONTAINS_TOL`].
    pub fn contains(&self, t: &RateTriple) -> bool {
        self.points.iter().any(|p| p.rate.dominates(t, CONTAINS_TOL))
    }

    /// Removes every point exactly dominated by another; among identical
    /// rate points the one with the lexicographically smallest provenance
    /// survives. Output is sorted descending by `(r1, r2, r3)`, which is the
    /// canonical cloud order. Pruning is lossless for membership, frontier
    /// and symmetric-rate queries because those only see dominating points.
    pub fn pareto_pruned(&self) -> PointCloudRegion {
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&i, &j| {
            let (a, b) = (&self.points[i], &self.points[j]);
            b.rate
                .lex_key()
                .cmp(&a.rate.lex_key())
                .then_with(|| a.provenance.cmp(&b.provenance))
        });
        let mut kept: Vec<CloudPoint> = Vec::new();
        'next: for i in idx {
            let cand = &self.points[i];
            for k in &kept {
                if k.rate.dominates(&cand.rate, 0.0) {
                    continue 'next;
                }
            }
            kept.push(cand.clone());
        }
        PointCloudRegion { points: kept }
    }

    /// [`Self::frontier_slice_with`] at the default direction count.
    pub fn frontier_slice(&self, r3: f64) -> Result<Vec<FrontierPoint>> {
        self.frontier_slice_with(r3, DEFAULT_FRONTIER_DIRECTIONS)
    }

    /// Sweeps `directions` angles `theta_k = (pi/2) k / (directions - 1)`
    /// over `[0, pi/2]` and reports, for each, the stored point with
    /// `rate.r3 >= r3 - tol` maximizing `cos(theta) R1 + sin(theta) R2`.
    /// Ties go to the lexicographically larger `(r1, r2, r3)`. The output is
    /// sorted by `theta` (one row per direction, repeats included) so the
    /// two endpoints are the axis intercepts.
    pub fn frontier_slice_with(&self, r3: f64, directions: usize) -> Result<Vec<FrontierPoint>> {
        if directions < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 directions, got {directions}")));
        }
        if !r3.is_finite() || r3 < 0.0 {
            return Err(Error::InvalidParameter(format!("slice height r3 = {r3} must be finite and nonnegative")));
        }
        let eligible: Vec<&CloudPoint> =
            self.points.iter().filter(|p| p.rate.r3 >= r3 - CONTAINS_TOL).collect();
        if eligible.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "no cloud points at or above the R3 = {r3} slice"
            )));
        }
        let mut out = Vec::with_capacity(directions);
        for k in 0..directions {
            let theta = FRAC_PI_2 * k as f64 / (directions - 1) as f64;
            let (c, s) = (theta.cos(), theta.sin());
            let mut best = eligible[0];
            let mut best_val = c * best.rate.r1 + s * best.rate.r2;
            for p in &eligible[1..] {
                let v = c * p.rate.r1 + s * p.rate.r2;
                if v > best_val || (v == best_val && p.rate.lex_key() > best.rate.lex_key()) {
                    best = p;
                    best_val = v;
                }
            }
            out.push(FrontierPoint { theta, rate: best.rate, provenance: best.provenance.clone() });
        }
        Ok(out)
    }

    /// The largest `R` such that `(R, R)` lies under the time-sharing hull of
    /// the stored points projected to `(R1, R2)`, within [`SYM_RATE_TOL`].
    /// Time sharing between two stored points is allowed (segments), which is
    /// exact for the convex regions these clouds approximate. Empty clouds
    /// give 0.
    pub fn max_symmetric_rate(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        // 2-D Pareto projection.
        let mut pts: Vec<(f64, f64)> = self.points.iter().map(|p| (p.rate.r1, p.rate.r2)).collect();
        pts.sort_by(|a, b| b.partial_cmp(a).expect("rates are finite"));
        let mut front: Vec<(f64, f64)> = Vec::new();
        let mut best_y = f64::NEG_INFINITY;
        for p in pts {
            if p.1 > best_y {
                front.push(p);
                best_y = p.1;
            }
        }
        let feasible = |r: f64| -> bool {
            let mut left: Vec<(f64, f64)> = Vec::new();
            let mut right: Vec<(f64, f64)> = Vec::new();
            for &p in &front {
                if p.0.min(p.1) >= r {
                    return true;
                }
                if p.0 >= r && p.1 < r {
                    left.push(p);
                } else if p.1 >= r && p.0 < r {
                    right.push(p);
                }
            }
            for p in &left {
                for q in &right {
                    let den = (p.0 - p.1) + (q.1 - q.0);
                    let s = (p.0 - p.1) / den;
                    let val = p.0 + s * (q.0 - p.0);
                    if val >= r - 1e-12 {
                        return true;
                    }
                }
            }
            false
        };
        let mut lo = front.iter().map(|p| p.0.min(p.1)).fold(0.0, f64::max);
        let mut hi = front.iter().map(|p| 0.5 * (p.0 + p.1)).fold(lo, f64::max);
        if hi - lo <= SYM_RATE_TOL {
            return 0.5 * (lo + hi);
        }
        while hi - lo > 0.1 * SYM_RATE_TOL {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Borrowed view over either region representation, for generic operations.
#[derive(Clone, Copy)]
pub enum RegionRef<'a> {
    Linear(&'a LinearRateRegion),
    Cloud(&'a PointCloudRegion),
}

impl RegionRef<'_> {
    fn contains(&self, t: &RateTriple) -> bool {
        match self {
            RegionRef::Linear(r) => r.contains(t),
            RegionRef::Cloud(c) => c.contains(t),
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            RegionRef::Linear(r) => r.is_empty(),
            RegionRef::Cloud(c) => c.is_empty(),
        }
    }
}

/// Tests whether region `a` is contained in region `b`, by checking frontier
/// points of `a` for membership in `b` with [`CONTAINS_TOL`] slack.
///
/// * Cloud `a`: every stored point is tested — exact for the downward
///   closure.
/// * Linear `a`: `samples` deterministic ray directions through the
///   nonnegative octant are intersected with `a`'s frontier by bisection and
///   the resulting boundary points tested. The seven mask directions are
///   always included. This is a sampling test: it can only certify
///   containment up to the sampled directions, which suffices for the
///   polymatroid regions produced here.
///
/// Errors when `samples` is zero.
pub fn region_subset(a: RegionRef<'_>, b: RegionRef<'_>, samples: usize) -> Result<bool> {
    if samples == 0 {
        return Err(Error::InvalidParameter("region_subset needs at least one sample direction".into()));
    }
    if a.is_empty() {
        return Ok(true);
    }
    if b.is_empty() {
        return Ok(false);
    }
    match a {
        RegionRef::Cloud(c) => Ok(c.points().iter().all(|p| b.contains(&p.rate))),
        RegionRef::Linear(lin) => {
            for d in sample_directions(samples) {
                let p = ray_frontier(lin, d);
                if !b.contains(&p) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Deterministic unit directions in the nonnegative octant: the seven mask
/// directions first, then a Fibonacci lattice filling out the rest.
fn sample_directions(samples: usize) -> Vec<[f64; 3]> {
    const S3: f64 = 0.577_350_269_189_625_8; // 1/sqrt(3)
    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;
    let mut dirs = vec![
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [S2, S2, 0.0],
        [S2, 0.0, S2],
        [0.0, S2, S2],
        [S3, S3, S3],
    ];
    dirs.truncate(samples);
    let extra = samples.saturating_sub(dirs.len());
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    for i in 0..extra {
        let z = (i as f64 + 0.5) / extra as f64;
        let rho = (1.0 - z * z).sqrt();
        let ang = FRAC_PI_2 * ((i as f64 + 1.0) * GOLDEN).fract();
        dirs.push([rho * ang.cos(), rho * ang.sin(), z]);
    }
    dirs
}

/// Last point along `t * d` still inside `lin`, to high precision. For
/// directions along which the region is unbounded, a far point at radius
/// about `1e9` is returned instead.
fn ray_frontier(lin: &LinearRateRegion, d: [f64; 3]) -> RateTriple {
    let at = |t: f64| RateTriple { r1: t * d[0], r2: t * d[1], r3: t * d[2] };
    let mut hi = 1.0;
    while lin.contains(&at(hi)) {
        hi *= 2.0;
        if hi > 1e9 {
            return at(hi);
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if lin.contains(&at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(lo)
}

fn csv_field(provenance: &str) -> String {
    provenance.replace([',', '\n', '\r'], ";")
}

/// Writes frontier samples as CSV with header `theta,r1,r2,r3,provenance`.
pub fn write_frontier_csv<W: Write>(points: &[FrontierPoint], w: &mut W) -> Result<()> {
    writeln!(w, "theta,r1,r2,r3,provenance")?;
    for p in points {
        writeln!(w, "{},{},{},{},{}", p.theta, p.rate.r1, p.rate.r2, p.rate.r3, csv_field(&p.provenance))?;
    }
    Ok(())
}

/// Writes a point cloud as CSV with the same header as frontier output; the
/// `theta` column is empty because cloud points are not tied to a direction.
pub fn write_cloud_csv<W: Write>(cloud: &PointCloudRegion, w: &mut W) -> Result<()> {
    writeln!(w, "theta,r1,r2,r3,provenance")?;
    for p in cloud.points() {
        writeln!(w, ",{},{},{},{}", p.rate.r1, p.rate.r2, p.rate.r3, csv_field(&p.provenance))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(r1: f64, r2: f64, r3: f64) -> RateTriple {
        RateTriple::new(r1, r2, r3).unwrap()
    }

    fn mask(rates: &[u8]) -> RateMask {
        RateMask::from_rates(rates).unwrap()
    }

    #[test]
    fn rate_triple_validation() {
        assert!(RateTriple::new(0.1, f64::NAN, 0.0).is_err());
        assert!(RateTriple::new(-0.5, 0.0, 0.0).is_err());
        // Tiny negative jitter clamps to zero.
        let t = RateTriple::new(-1e-12, 1.0, 2.0).unwrap();
        assert_eq!(t.r1, 0.0);
        assert_eq!(t.get(2), 1.0);
    }

    #[test]
    fn mask_basics() {
        assert!(RateMask::from_rates(&[]).is_err());
        assert!(RateMask::from_rates(&[4]).is_err());
        assert_eq!(mask(&[1, 3]), RateMask::R13);
        assert_eq!(mask(&[3, 1, 3]).rates(), vec![1, 3]);
        assert_eq!(RateMask::R123.dot(&tri(1.0, 2.0, 4.0)), 7.0);
        assert_eq!(format!("{}", RateMask::R13), "{1,3}");
    }

    #[test]
    fn linear_region_canonicalization_and_membership() {
        let r = LinearRateRegion::new(vec![
            Constraint::new(RateMask::R12, 3.0),
            Constraint::new(RateMask::R1, 1.0),
            Constraint::new(RateMask::R1, 2.0), // duplicate mask merges by min
        ])
        .unwrap();
        assert_eq!(r.constraints().len(), 2);
        assert_eq!(r.bound_for(RateMask::R1), Some(1.0));
        assert!(r.contains(&tri(1.0, 2.0, 5.0))); // r3 unconstrained here
        assert!(!r.contains(&tri(1.5, 0.0, 0.0)));
        assert!(!r.is_empty());

        assert!(LinearRateRegion::new(vec![Constraint::new(RateMask::R1, f64::NAN)]).is_err());
    }

    #[test]
    fn negative_bound_means_empty() {
        let r = LinearRateRegion::new(vec![Constraint::new(RateMask::R2, -0.5)]).unwrap();
        assert!(r.is_empty());
        assert!(!r.contains(&RateTriple::zero()));
        let marked = LinearRateRegion::empty();
        assert!(marked.is_empty() && marked.is_marked_empty());
        assert!(!marked.contains(&RateTriple::zero()));
    }

    #[test]
    fn intersect_unions_constraints() {
        let a = LinearRateRegion::new(vec![
            Constraint::new(RateMask::R1, 1.0),
            Constraint::new(RateMask::R12, 3.0),
        ])
        .unwrap();
        let b = LinearRateRegion::new(vec![Constraint::new(RateMask::R2, 1.0)]).unwrap();
        let i = a.intersect(&b);
        assert_eq!(i.constraints().len(), 3);
        assert!(i.contains(&tri(1.0, 1.0, 0.0)));
        assert!(!i.contains(&tri(1.0, 1.1, 0.0)));
        assert!(a.intersect(&LinearRateRegion::empty()).is_marked_empty());
    }

    #[test]
    fn greedy_corners_of_a_pentagon() {
        // R1 <= 1, R2 <= 1, R1 + R2 <= 1.5, R3 <= 0.5: corners must include
        // the two doglegs (1, 0.5) and (0.5, 1) at both R3 levels.
        let r = LinearRateRegion::new(vec![
            Constraint::new(RateMask::R1, 1.0),
            Constraint::new(RateMask::R2, 1.0),
            Constraint::new(RateMask::R12, 1.5),
            Constraint::new(RateMask::R3, 0.5),
        ])
        .unwrap();
        let corners = r.greedy_corners();
        assert!(corners.iter().any(|c| (c.r1 - 1.0).abs() < 1e-12 && (c.r2 - 0.5).abs() < 1e-12 && (c.r3 - 0.5).abs() < 1e-12));
        assert!(corners.iter().any(|c| (c.r1 - 0.5).abs() < 1e-12 && (c.r2 - 1.0).abs() < 1e-12));
        for c in &corners {
            assert!(r.contains(c), "corner {c:?} escaped its region");
        }
        assert!(LinearRateRegion::empty().greedy_corners().is_empty());
    }

    #[test]
    fn region_json_roundtrip() {
        let r = LinearRateRegion::new(vec![
            Constraint::new(RateMask::R13, 1.25),
            Constraint::new(RateMask::R123, 2.0),
        ])
        .unwrap();
        let s = r.to_json();
        assert!(s.contains("\"mask\":[1,3]"));
        let back = LinearRateRegion::from_json(&s).unwrap();
        assert_eq!(back, r);

        let e = LinearRateRegion::empty();
        let back = LinearRateRegion::from_json(&e.to_json()).unwrap();
        assert!(back.is_marked_empty());

        assert!(LinearRateRegion::from_json("{\"constraints\":[{\"mask\":[9],\"bound\":1}]}").is_err());
    }

    #[test]
    fn cloud_membership_and_prune() {
        let cloud = PointCloudRegion::from_points(vec![
            CloudPoint::new(tri(1.0, 0.2, 0.0), "a"),
            CloudPoint::new(tri(0.5, 0.1, 0.0), "dominated"),
            CloudPoint::new(tri(0.2, 1.0, 0.0), "b"),
        ]);
        assert!(cloud.contains(&tri(0.9, 0.2, 0.0)));
        assert!(!cloud.contains(&tri(0.9, 0.3, 0.0)));
        let pruned = cloud.pareto_pruned();
        assert_eq!(pruned.len(), 2);
        assert!(pruned.points().iter().all(|p| p.provenance != "dominated"));
        // Identical rates: lexicographically smallest provenance survives.
        let dup = PointCloudRegion::from_points(vec![
            CloudPoint::new(tri(1.0, 1.0, 0.0), "zz"),
            CloudPoint::new(tri(1.0, 1.0, 0.0), "aa"),
        ])
        .pareto_pruned();
        assert_eq!(dup.len(), 1);
        assert_eq!(dup.points()[0].provenance, "aa");
    }

    #[test]
    fn frontier_slice_endpoints_and_sorting() {
        let cloud = PointCloudRegion::from_points(vec![
            CloudPoint::new(tri(2.0, 0.0, 0.0), "x-axis"),
            CloudPoint::new(tri(0.0, 1.0, 0.0), "y-axis"),
            CloudPoint::new(tri(1.2, 0.8, 0.0), "mid"),
        ]);
        let f = cloud.frontier_slice_with(0.0, 5).unwrap();
        assert_eq!(f.len(), 5);
        assert!(f.windows(2).all(|w| w[0].theta <= w[1].theta));
        assert_eq!(f[0].provenance, "x-axis"); // theta = 0 maximizes R1
        assert_eq!(f[4].provenance, "y-axis"); // theta = pi/2 maximizes R2
        assert!((f[0].theta - 0.0).abs() < 1e-15);
        assert!((f[4].theta - FRAC_PI_2).abs() < 1e-15);

        assert!(cloud.frontier_slice_with(0.0, 1).is_err());
        assert!(cloud.frontier_slice_with(0.5, 181).is_err()); // nothing above slice
        assert!(PointCloudRegion::default().frontier_slice(0.0).is_err());
    }

    #[test]
    fn symmetric_rate_single_point_and_time_share() {
        let one = PointCloudRegion::from_points(vec![CloudPoint::new(tri(1.0, 1.0, 0.0), "p")]);
        assert!((one.max_symmetric_rate() - 1.0).abs() < SYM_RATE_TOL);
        // Time sharing between (2,0) and (0,2) reaches (1,1).
        let ts = PointCloudRegion::from_points(vec![
            CloudPoint::new(tri(2.0, 0.0, 0.0), "a"),
            CloudPoint::new(tri(0.0, 2.0, 0.0), "b"),
        ]);
        assert!((ts.max_symmetric_rate() - 1.0).abs() < SYM_RATE_TOL);
        assert_eq!(PointCloudRegion::default().max_symmetric_rate(), 0.0);
        // Asymmetric segment: (3,0)-(0,1) crosses the diagonal at 0.75.
        let seg = PointCloudRegion::from_points(vec![
            CloudPoint::new(tri(3.0, 0.0, 0.0), "a"),
            CloudPoint::new(tri(0.0, 1.0, 0.0), "b"),
        ]);
        assert!((seg.max_symmetric_rate() - 0.75).abs() < SYM_RATE_TOL);
    }

    #[test]
    fn subset_checks_both_representations() {
        let small = LinearRateRegion::new(vec![
            Constraint::new(RateMask::R1, 1.0),
            Constraint::new(RateMask::R2, 1.0),
            Constraint::new(RateMask::R3, 1.0),
        ])
        .unwrap();
        let big = LinearRateRegion::new(vec![
            Constraint::new(RateMask::R1, 2.0),
            Constraint::new(RateMask::R2, 2.0),
            Constraint::new(RateMask::R3, 2.0),
        ])
        .unwrap();
        assert!(region_subset(RegionRef::Linear(&small), RegionRef::Linear(&big), 64).unwrap());
        assert!(!region_subset(RegionRef::Linear(&big), RegionRef::Linear(&small), 64).unwrap());

        let cloud = PointCloudRegion::from_points(vec![CloudPoint::new(tri(0.5, 0.5, 0.5), "c")]);
        assert!(region_subset(RegionRef::Cloud(&cloud), RegionRef::Linear(&small), 8).unwrap());
        assert!(region_subset(RegionRef::Cloud(&cloud), RegionRef::Cloud(&cloud), 8).unwrap());
        assert!(!region_subset(RegionRef::Linear(&small), RegionRef::Cloud(&cloud), 64).unwrap());

        assert!(region_subset(RegionRef::Linear(&small), RegionRef::Linear(&big), 0).is_err());
        // Empty regions are subsets of everything and supersets of nothing nonempty.
        let e = LinearRateRegion::empty();
        assert!(region_subset(RegionRef::Linear(&e), RegionRef::Linear(&small), 8).unwrap());
        assert!(!region_subset(RegionRef::Linear(&small), RegionRef::Linear(&e), 8).unwrap());
    }

    #[test]
    fn csv_writers_produce_stable_bytes() {
        let f = vec![FrontierPoint { theta: 0.0, rate: tri(1.5, 0.25, 0.0), provenance: "a1=0.5, a2=0.5".into() }];
        let mut buf = Vec::new();
        write_frontier_csv(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "theta,r1,r2,r3,provenance\n0,1.5,0.25,0,a1=0.5; a2=0.5\n");

        let cloud = PointCloudRegion::from_points(vec![CloudPoint::new(tri(0.5, 0.5, 0.0), "p")]);
        let mut buf = Vec::new();
        write_cloud_csv(&cloud, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "theta,r1,r2,r3,provenance\n,0.5,0.5,0,p\n");
    }
}
