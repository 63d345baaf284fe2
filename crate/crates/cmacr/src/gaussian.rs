//! Closed-form rate regions for the Gaussian cMACr.
//!
//! Channel model (unit noise variance everywhere):
//!
//! ```text
//! Y1 = X1 + eta * X3 + Z1        (receiver 1)
//! Y2 = X2 + eta * X3 + Z2        (receiver 2)
//! Y3 = gamma * (X1 + X2) + Z3    (relay)
//! ```
//!
//! with average power constraints `P1, P2, P3` and `R3 = 0` (the relay helps
//! but carries no message of its own in this model). Three region families
//! are provided at a fixed power split — decode-and-forward
//! ([`df_region_at`]), compress-and-forward with Gaussian quantization
//! ([`cf_region_at`]), and the cut-set style outer bound
//! ([`outer_region_at`]) — together with cloud builders that optimize over
//! splits ([`df_cloud`], [`cf_cloud`], [`outer_bound_region`]), the
//! symmetric-rate sweep used for strategy comparison, and the single-source
//! multicast relay capacity.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::infomeasure::capacity_clamped;
use crate::region::{CloudPoint, Constraint, LinearRateRegion, PointCloudRegion, RateMask, RateTriple};

/// Converts a dB power value to linear scale: `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// The Gaussian cMACr: powers and gains in linear scale, unit noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianChannel {
    p1: f64,
    p2: f64,
    p3: f64,
    gamma: f64,
    eta: f64,
}

impl GaussianChannel {
    /// Builds a channel from linear powers and amplitude gains; every field
    /// must be finite and nonnegative.
    pub fn new(p1: f64, p2: f64, p3: f64, gamma: f64, eta: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("p3", p3), ("gamma", gamma), ("eta", eta)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "GaussianChannel field {name} = {v} must be finite and >= 0"
                )));
            }
        }
        Ok(GaussianChannel { p1, p2, p3, gamma, eta })
    }

    /// Convenience constructor from squared gains, the form used in the
    /// experiment configuration (`gamma_sq`, `eta_sq`).
    pub fn from_squared_gains(p1: f64, p2: f64, p3: f64, gamma_sq: f64, eta_sq: f64) -> Result<Self> {
        if !gamma_sq.is_finite() || gamma_sq < 0.0 || !eta_sq.is_finite() || eta_sq < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "squared gains must be finite and >= 0, got gamma_sq = {gamma_sq}, eta_sq = {eta_sq}"
            )));
        }
        GaussianChannel::new(p1, p2, p3, gamma_sq.sqrt(), eta_sq.sqrt())
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p3(&self) -> f64 {
        self.p3
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The same channel with the two source indices exchanged.
    pub fn swap_users(&self) -> GaussianChannel {
        GaussianChannel { p1: self.p2, p2: self.p1, p3: self.p3, gamma: self.gamma, eta: self.eta }
    }
}

/// Decode-and-forward power split `(a1, a2, a3p, a3pp)`.
///
/// `a1`, `a2` are the fractions of source power committed to coherent
/// cooperation with the relay; `a3p`, `a3pp` the fractions of relay power
/// spent cooperating with source 1 and source 2 respectively, with
/// `a3p + a3pp <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfSplit {
    a1: f64,
    a2: f64,
    a3p: f64,
    a3pp: f64,
}

impl DfSplit {
    pub fn new(a1: f64, a2: f64, a3p: f64, a3pp: f64) -> Result<Self> {
        for (name, v) in [("a1", a1), ("a2", a2), ("a3p", a3p), ("a3pp", a3pp)] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("DfSplit field {name} = {v} must lie in [0, 1]")));
            }
        }
        if a3p + a3pp > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "relay split a3p + a3pp = {} exceeds 1",
                a3p + a3pp
            )));
        }
        Ok(DfSplit { a1, a2, a3p, a3pp })
    }

    /// The all-zero split: no coherent cooperation anywhere.
    pub fn no_cooperation() -> Self {
        DfSplit { a1: 0.0, a2: 0.0, a3p: 0.0, a3pp: 0.0 }
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn a3p(&self) -> f64 {
        self.a3p
    }

    pub fn a3pp(&self) -> f64 {
        self.a3pp
    }

    /// The split evaluating the mirrored channel: users swapped means
    /// `a1 <-> a2` and `a3p <-> a3pp`.
    pub fn swap_users(&self) -> DfSplit {
        DfSplit { a1: self.a2, a2: self.a1, a3p: self.a3pp, a3pp: self.a3p }
    }
}

/// Compress-and-forward power fractions `(a1, a2)`, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfSplit {
    a1: f64,
    a2: f64,
}

impl CfSplit {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        for (name, v) in [("a1", a1), ("a2", a2)] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("CfSplit field {name} = {v} must lie in [0, 1]")));
            }
        }
        Ok(CfSplit { a1, a2 })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }
}

/// Which split weights enter the second decode-and-forward sum-rate term.
///
/// The second term pairs receiver 2's signal with the relay power fraction
/// `a3pp`. [`SumSecondTerm::SymmetricWeights`] (the default) weights it with
/// source 2's cooperation fraction `a2`, making the term the exact mirror
/// image of the first; [`SumSecondTerm::CrossWeights`] weights it with
/// source 1's fraction `a1` instead. The symmetric form is what user-swap
/// symmetry of the per-user constraints forces, and is used everywhere
/// unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumSecondTerm {
    #[default]
    SymmetricWeights,
    CrossWeights,
}

/// The five capacity terms behind the DF and outer-bound regions at a fixed
/// split: per-user bounds `b1`, `b2` and the three sum-rate alternatives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DfTerms {
    pub b1: f64,
    pub b2: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

pub(crate) fn df_terms(ch: &GaussianChannel, s: &DfSplit, variant: SumSecondTerm) -> Result<DfTerms> {
    let (p1, p2, p3) = (ch.p1, ch.p2, ch.p3);
    let g2 = ch.gamma * ch.gamma;
    let e2 = ch.eta * ch.eta;

    // Fraction of source power left for the relay-decoded fresh message:
    // 1 - a_i a3' / (1 - a_j a3''); the denominator can only vanish when the
    // numerator does (the split constraint forces it), in which case the
    // whole correction term is zero.
    let frac = |num: f64, den: f64, who: &str| -> Result<f64> {
        if num <= 0.0 {
            Ok(1.0)
        } else if den <= 1e-12 {
            Err(Error::InvalidParameter(format!(
                "degenerate cooperation denominator for {who}: numerator {num} with denominator {den}"
            )))
        } else {
            Ok((1.0 - num / den).max(0.0))
        }
    };
    let f1 = frac(s.a1 * s.a3p, 1.0 - s.a2 * s.a3pp, "R1")?;
    let f2 = frac(s.a2 * s.a3pp, 1.0 - s.a1 * s.a3p, "R2")?;

    let b1 = capacity_clamped(g2 * p1 * f1).min(capacity_clamped(p1 + e2 * p3 * (1.0 - s.a3pp)));
    let b2 = capacity_clamped(g2 * p2 * f2).min(capacity_clamped(p2 + e2 * p3 * (1.0 - s.a3p)));

    let t1 = capacity_clamped(p1 + e2 * p3 + 2.0 * ch.eta * (s.a1 * s.a3p * p1 * p3).sqrt());
    let w2 = match variant {
        SumSecondTerm::SymmetricWeights => s.a2,
        SumSecondTerm::CrossWeights => s.a1,
    };
    let t2 = capacity_clamped(p2 + e2 * p3 + 2.0 * ch.eta * (w2 * s.a3pp * p2 * p3).sqrt());
    let t3 = if p1 + p2 <= 0.0 {
        0.0
    } else {
        let coherent = ((s.a1 * s.a3p * p1).sqrt() + (s.a2 * s.a3pp * p2).sqrt()).powi(2);
        capacity_clamped(g2 * (p1 + p2) * (1.0 - coherent / (p1 + p2)).max(0.0))
    };
    Ok(DfTerms { b1, b2, t1, t2, t3 })
}

fn pentagon_region(b1: f64, b2: f64, b12: f64) -> LinearRateRegion {
    LinearRateRegion::new(vec![
        Constraint::new(RateMask::R1, b1),
        Constraint::new(RateMask::R2, b2),
        Constraint::new(RateMask::R12, b12),
    ])
    .expect("capacity bounds are finite")
}

/// Decode-and-forward region at a fixed split, with the symmetric sum-rate
/// weighting. Constraints: `R1 <= b1`, `R2 <= b2`, `R1 + R2 <= min(t1, t2,
/// t3)` where `t3` is the source-to-relay sum constraint.
pub fn df_region_at(ch: &GaussianChannel, s: &DfSplit) -> Result<LinearRateRegion> {
    df_region_at_with(ch, s, SumSecondTerm::default())
}

/// [`df_region_at`] with an explicit choice of sum-rate weighting.
pub fn df_region_at_with(ch: &GaussianChannel, s: &DfSplit, variant: SumSecondTerm) -> Result<LinearRateRegion> {
    let t = df_terms(ch, s, variant)?;
    Ok(pentagon_region(t.b1, t.b2, t.t1.min(t.t2).min(t.t3)))
}

/// Outer bound at a fixed split: identical to [`df_region_at`] except the
/// source-to-relay sum-rate term `t3` is dropped from the min.
pub fn outer_region_at(ch: &GaussianChannel, s: &DfSplit) -> Result<LinearRateRegion> {
    let t = df_terms(ch, s, SumSecondTerm::default())?;
    Ok(pentagon_region(t.b1, t.b2, t.t1.min(t.t2)))
}

/// Compress-and-forward quantization terms at a fixed split.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CfTerms {
    pub nq: f64,
    pub b1: f64,
    pub b2: f64,
    pub sum: f64,
}

pub(crate) fn cf_terms(ch: &GaussianChannel, s: &CfSplit) -> Result<CfTerms> {
    let g2 = ch.gamma * ch.gamma;
    let e2 = ch.eta * ch.eta;
    if e2 == 0.0 || ch.p3 == 0.0 {
        return Err(Error::InvalidParameter(
            "compress-and-forward needs a usable relay broadcast path (eta > 0 and p3 > 0)".into(),
        ));
    }
    let a1p1 = s.a1 * ch.p1;
    let a2p2 = s.a2 * ch.p2;
    let pbar = a1p1.min(a2p2);
    let nq = (1.0 + g2 * (a1p1 * a2p2 + a1p1 + a2p2) + pbar) / (e2 * ch.p3);
    let b1 = capacity_clamped(g2 * a1p1 / (1.0 + nq));
    let b2 = capacity_clamped(g2 * a2p2 / (1.0 + nq));
    let sum = capacity_clamped(pbar) + capacity_clamped(g2 * (a1p1 + a2p2) / (1.0 + nq));
    Ok(CfTerms { nq, b1, b2, sum })
}

/// Compress-and-forward region at a fixed split (Gaussian quantization at
/// quantization noise `N_q`). Errors when the relay broadcast path is absent
/// (`eta = 0` or `p3 = 0`), since the scheme is undefined there.
pub fn cf_region_at(ch: &GaussianChannel, s: &CfSplit) -> Result<LinearRateRegion> {
    let t = cf_terms(ch, s)?;
    Ok(pentagon_region(t.b1, t.b2, t.sum))
}

/// Options controlling cloud construction.
#[derive(Debug, Clone, Copy)]
pub struct CloudOptions {
    /// Run coordinate-descent refinement around the Pareto-best grid splits.
    pub refine: bool,
    /// How many times the descent step is halved from `grid_step`.
    pub refine_halvings: usize,
    /// Number of frontier directions that seed refinement.
    pub direction_bins: usize,
}

impl Default for CloudOptions {
    fn default() -> Self {
        CloudOptions { refine: true, refine_halvings: 6, direction_bins: 181 }
    }
}

/// DF achievable cloud: pentagon corners of [`df_region_at`] over the split
/// grid, refined by coordinate descent, Pareto-pruned. `R3` is zero for
/// every point.
pub fn df_cloud(ch: &GaussianChannel, grid_step: f64) -> Result<PointCloudRegion> {
    df_cloud_with(ch, grid_step, &CloudOptions::default())
}

/// [`df_cloud`] with explicit options.
pub fn df_cloud_with(ch: &GaussianChannel, grid_step: f64, opts: &CloudOptions) -> Result<PointCloudRegion> {
    build_split_cloud(DF_COORDS, grid_step, opts, "df", df_validity, |c| {
        let s = DfSplit { a1: c[0], a2: c[1], a3p: c[2], a3pp: c[3] };
        df_terms(ch, &s, SumSecondTerm::default())
            .ok()
            .map(|t| (t.b1, t.b2, t.t1.min(t.t2).min(t.t3)))
    })
}

/// Outer-bound cloud: like [`df_cloud`] but each pentagon drops the
/// source-to-relay sum term, i.e. uses [`outer_region_at`].
pub fn outer_bound_region(ch: &GaussianChannel, grid_step: f64) -> Result<PointCloudRegion> {
    outer_bound_region_with(ch, grid_step, &CloudOptions::default())
}

/// [`outer_bound_region`] with explicit options.
pub fn outer_bound_region_with(
    ch: &GaussianChannel,
    grid_step: f64,
    opts: &CloudOptions,
) -> Result<PointCloudRegion> {
    build_split_cloud(DF_COORDS, grid_step, opts, "outer", df_validity, |c| {
        let s = DfSplit { a1: c[0], a2: c[1], a3p: c[2], a3pp: c[3] };
        df_terms(ch, &s, SumSecondTerm::default()).ok().map(|t| (t.b1, t.b2, t.t1.min(t.t2)))
    })
}

/// CF achievable cloud over the `(a1, a2)` grid. Errors when the relay
/// broadcast path is absent, like [`cf_region_at`].
pub fn cf_cloud(ch: &GaussianChannel, grid_step: f64) -> Result<PointCloudRegion> {
    cf_cloud_with(ch, grid_step, &CloudOptions::default())
}

/// [`cf_cloud`] with explicit options.
pub fn cf_cloud_with(ch: &GaussianChannel, grid_step: f64, opts: &CloudOptions) -> Result<PointCloudRegion> {
    // Surface the eta/p3 error once, up front.
    cf_terms(ch, &CfSplit { a1: 0.0, a2: 0.0 })?;
    build_split_cloud(CF_COORDS, grid_step, opts, "cf", |_| true, |c| {
        cf_terms(ch, &CfSplit { a1: c[0], a2: c[1] }).ok().map(|t| (t.b1, t.b2, t.sum))
    })
}

const DF_COORDS: &[&str] = &["a1", "a2", "a3p", "a3pp"];
const CF_COORDS: &[&str] = &["a1", "a2"];

fn df_validity(c: &[f64]) -> bool {
    c[2] + c[3] <= 1.0 + 1e-12
}

/// Grid values `0, step, 2 step, ..., 1` (the endpoint always included).
fn grid_values(step: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut i = 0u32;
    loop {
        let x = f64::from(i) * step;
        if x >= 1.0 - 1e-12 {
            break;
        }
        v.push(x);
        i += 1;
    }
    v.push(1.0);
    v
}

/// 2-D Pareto staircase keyed on the bit pattern of `r1` (nonnegative floats
/// order correctly by bits), each entry remembering the split that produced
/// it.
struct Staircase {
    map: BTreeMap<u64, (f64, usize)>,
    splits: Vec<Vec<f64>>,
}

impl Staircase {
    fn new() -> Self {
        Staircase { map: BTreeMap::new(), splits: Vec::new() }
    }

    fn insert(&mut self, r1: f64, r2: f64, coords: &[f64]) {
        let key = r1.to_bits();
        // The first entry at or beyond this r1 carries the largest r2 among
        // entries with r1' >= r1; it dominates the candidate or nothing does.
        if let Some((_, &(r2e, _))) = self.map.range(key..).next() {
            if r2e >= r2 {
                return;
            }
        }
        // Remove now-dominated entries with r1' <= r1 and r2' <= r2.
        let doomed: Vec<u64> = self
            .map
            .range(..=key)
            .rev()
            .take_while(|(_, &(r2e, _))| r2e <= r2)
            .map(|(&k, _)| k)
            .collect();
        for k in doomed {
            self.map.remove(&k);
        }
        self.splits.push(coords.to_vec());
        self.map.insert(key, (r2, self.splits.len() - 1));
    }
}

/// Support value of a pentagon `R1 <= b1, R2 <= b2, R1 + R2 <= b12` in the
/// direction `(c, s)`, via its corner points.
fn pentagon_support(b: (f64, f64, f64), c: f64, s: f64) -> f64 {
    pentagon_corners(b).iter().map(|p| c * p.0 + s * p.1).fold(f64::NEG_INFINITY, f64::max)
}

/// Corner points of the 2-D pentagon (nonnegative orthant intersection).
fn pentagon_corners(b: (f64, f64, f64)) -> Vec<(f64, f64)> {
    let (b1, b2, b12) = (b.0.max(0.0), b.1.max(0.0), b.2.max(0.0));
    let r1m = b1.min(b12);
    let r2m = b2.min(b12);
    let mut pts = vec![(r1m, 0.0), (0.0, r2m)];
    if b1 + b2 <= b12 {
        pts.push((b1, b2));
    } else {
        pts.push((r1m, (b12 - r1m).max(0.0)));
        pts.push(((b12 - r2m).max(0.0), r2m));
    }
    pts
}

/// All nonzero moves in `{-1, 0, +1}^dim`, in a fixed deterministic order.
fn descent_moves(dim: usize) -> Vec<Vec<i8>> {
    let n = 3usize.pow(dim as u32);
    let mut moves = Vec::with_capacity(n - 1);
    for code in 0..n {
        let mut m = Vec::with_capacity(dim);
        let mut c = code;
        for _ in 0..dim {
            m.push((c % 3) as i8 - 1);
            c /= 3;
        }
        if m.iter().any(|&x| x != 0) {
            moves.push(m);
        }
    }
    moves
}

/// Shared cloud builder: exhaustive split grid into a Pareto staircase, then
/// optional coordinate-descent refinement of the best split per frontier
/// direction. `eval` returns the pentagon bounds `(b1, b2, b12)` for a
/// coordinate vector, or `None` to skip it.
fn build_split_cloud<V, E>(
    coord_names: &[&str],
    grid_step: f64,
    opts: &CloudOptions,
    tag: &str,
    valid: V,
    eval: E,
) -> Result<PointCloudRegion>
where
    V: Fn(&[f64]) -> bool,
    E: Fn(&[f64]) -> Option<(f64, f64, f64)>,
{
    if !grid_step.is_finite() || grid_step <= 0.0 || grid_step > 0.5 {
        return Err(Error::InvalidParameter(format!("grid_step = {grid_step} must lie in (0, 0.5]")));
    }
    if opts.direction_bins < 2 {
        return Err(Error::InvalidParameter("direction_bins must be at least 2".into()));
    }
    let dim = coord_names.len();
    let grid = grid_values(grid_step);
    let mut stairs = Staircase::new();

    // Exhaustive grid pass.
    let mut idx = vec![0usize; dim];
    let mut coords = vec![0.0f64; dim];
    'grid: loop {
        for (i, &gi) in idx.iter().enumerate() {
            coords[i] = grid[gi];
        }
        if valid(&coords) {
            if let Some(b) = eval(&coords) {
                for (r1, r2) in pentagon_corners(b) {
                    stairs.insert(r1, r2, &coords);
                }
            }
        }
        // Odometer.
        let mut ax = dim;
        loop {
            if ax == 0 {
                break 'grid;
            }
            ax -= 1;
            idx[ax] += 1;
            if idx[ax] < grid.len() {
                break;
            }
            idx[ax] = 0;
        }
    }

    if opts.refine {
        // Seed one descent per occupied frontier direction bin with the
        // stored split whose pentagon has the best support there.
        let bins = opts.direction_bins;
        let mut seeds: Vec<Option<(f64, Vec<f64>)>> = vec![None; bins];
        for (&key, &(r2, split)) in &stairs.map {
            let r1 = f64::from_bits(key);
            if r1 == 0.0 && r2 == 0.0 {
                continue;
            }
            let theta = r2.atan2(r1);
            let b = ((theta / FRAC_PI_2) * (bins - 1) as f64).round() as usize;
            let b = b.min(bins - 1);
            let (c, s) = (bin_angle(b, bins).cos(), bin_angle(b, bins).sin());
            let val = c * r1 + s * r2;
            let better = match &seeds[b] {
                None => true,
                Some((v, _)) => val > *v,
            };
            if better {
                seeds[b] = Some((val, stairs.splits[split].clone()));
            }
        }
        let moves = descent_moves(dim);
        for (b, seed) in seeds.iter().enumerate() {
            let Some((_, start)) = seed else { continue };
            let ang = bin_angle(b, bins);
            let (c, s) = (ang.cos(), ang.sin());
            let objective = |pt: &[f64]| -> Option<f64> {
                if !valid(pt) {
                    return None;
                }
                eval(pt).map(|bb| pentagon_support(bb, c, s))
            };
            let mut cur = start.clone();
            let mut cur_val = match objective(&cur) {
                Some(v) => v,
                None => continue,
            };
            for level in 0..=opts.refine_halvings {
                let step = grid_step / 2f64.powi(level as i32);
                for _round in 0..200 {
                    let mut improved = false;
                    for mv in &moves {
                        let mut cand = cur.clone();
                        for (x, &m) in cand.iter_mut().zip(mv) {
                            *x = (*x + step * f64::from(m)).clamp(0.0, 1.0);
                        }
                        if let Some(v) = objective(&cand) {
                            if v > cur_val + 1e-15 {
                                cur = cand;
                                cur_val = v;
                                improved = true;
                                break;
                            }
                        }
                    }
                    if !improved {
                        break;
                    }
                }
            }
            if let Some(bb) = eval(&cur) {
                for (r1, r2) in pentagon_corners(bb) {
                    stairs.insert(r1, r2, &cur);
                }
            }
        }
    }

    // The staircase is already Pareto-maximal; reversing gives the canonical
    // descending-lexicographic cloud order.
    let mut points = Vec::with_capacity(stairs.map.len());
    for (&key, &(r2, split)) in stairs.map.iter().rev() {
        let r1 = f64::from_bits(key);
        let coords = &stairs.splits[split];
        let mut prov = String::from(tag);
        for (name, v) in coord_names.iter().zip(coords) {
            prov.push_str(&format!(";{name}={v:.9}"));
        }
        points.push(CloudPoint::new(RateTriple::new(r1, r2, 0.0)?, prov));
    }
    Ok(PointCloudRegion::from_points(points))
}

fn bin_angle(b: usize, bins: usize) -> f64 {
    FRAC_PI_2 * b as f64 / (bins - 1) as f64
}

/// Relaying strategy selector for sweeps and experiment drivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Df,
    Cf,
    Outer,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Df, Strategy::Cf, Strategy::Outer];
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Df => "df",
            Strategy::Cf => "cf",
            Strategy::Outer => "outer",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "df" => Ok(Strategy::Df),
            "cf" => Ok(Strategy::Cf),
            "outer" => Ok(Strategy::Outer),
            other => Err(Error::InvalidParameter(format!(
                "unknown strategy '{other}' (expected df, cf or outer)"
            ))),
        }
    }
}

/// Builds the strategy's cloud for a channel.
pub fn strategy_cloud(ch: &GaussianChannel, strategy: Strategy, grid_step: f64) -> Result<PointCloudRegion> {
    match strategy {
        Strategy::Df => df_cloud(ch, grid_step),
        Strategy::Cf => cf_cloud(ch, grid_step),
        Strategy::Outer => outer_bound_region(ch, grid_step),
    }
}

/// Maximum symmetric rate versus power: for each dB value in
/// `p_values_db`, sets `P1 = P2 = P3 = 10^(p/10)` on a channel with the
/// template's gains, builds the strategy's cloud at `grid_step`, and reports
/// `(p_db, max_symmetric_rate)`. Output order follows the input order; the
/// per-power computations run in parallel.
pub fn symmetric_rate_sweep(
    template: &GaussianChannel,
    p_values_db: &[f64],
    strategy: Strategy,
    grid_step: f64,
) -> Result<Vec<(f64, f64)>> {
    p_values_db
        .par_iter()
        .map(|&pdb| {
            let p = db_to_linear(pdb);
            let ch = GaussianChannel::new(p, p, p, template.gamma, template.eta)?;
            let cloud = strategy_cloud(&ch, strategy, grid_step)?;
            Ok((pdb, cloud.max_symmetric_rate()))
        })
        .collect()
}

/// Writes sweep rows as CSV with header `p_db,strategy,rate`.
pub fn write_sweep_csv<W: Write>(rows: &[(f64, Strategy, f64)], w: &mut W) -> Result<()> {
    writeln!(w, "p_db,strategy,rate")?;
    for (p, strat, rate) in rows {
        writeln!(w, "{p},{strat},{rate}")?;
    }
    Ok(())
}

/// Amplitude gains of the single-source multicast relay channel: source to
/// relay, source to receiver 1, relay to receiver 1, relay to receiver 2.
/// (The relay's link to receiver 2 is the only path to that receiver.)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MulticastGains {
    pub source_relay: f64,
    pub source_rx1: f64,
    pub relay_rx1: f64,
    pub relay_rx2: f64,
}

/// Result of the multicast relay capacity optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MulticastSolution {
    pub capacity: f64,
    pub rho: f64,
}

/// Capacity of the Gaussian multicast relay channel where DF meets the
/// cut-set bound: maximizes over the source-relay correlation `rho` in
/// `[0, 1]` the minimum of the source-to-relay, coherent-combining and
/// relay-to-receiver-2 cut values.
pub fn multicast_relay_capacity(p1: f64, p3: f64, gains: &MulticastGains) -> Result<MulticastSolution> {
    for (name, v) in [
        ("p1", p1),
        ("p3", p3),
        ("source_relay", gains.source_relay),
        ("source_rx1", gains.source_rx1),
        ("relay_rx1", gains.relay_rx1),
        ("relay_rx2", gains.relay_rx2),
    ] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "multicast parameter {name} = {v} must be finite and >= 0"
            )));
        }
    }
    let objective = |rho: f64| -> f64 {
        let t1 = capacity_clamped(gains.source_relay.powi(2) * p1 * (1.0 - rho * rho));
        let t2 = capacity_clamped(
            gains.source_rx1.powi(2) * p1
                + gains.relay_rx1.powi(2) * p3
                + 2.0 * gains.source_rx1 * gains.relay_rx1 * rho * (p1 * p3).sqrt(),
        );
        let t3 = capacity_clamped(gains.relay_rx2.powi(2) * p3);
        t1.min(t2).min(t3)
    };
    // Golden-section search; the objective is a min of monotone capacity
    // terms in rho, hence quasi-concave on [0, 1].
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let (mut fc, mut fd) = (objective(c), objective(d));
    while b - a > 1e-8 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = objective(d);
        }
    }
    let mut best = MulticastSolution { capacity: objective(0.0), rho: 0.0 };
    for rho in [0.5 * (a + b), 1.0] {
        let v = objective(rho);
        if v > best.capacity + 1e-15 {
            best = MulticastSolution { capacity: v, rho };
        }
    }
    Ok(best)
}
