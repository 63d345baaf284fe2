//! Runtime invariant suite.
//!
//! [`run_suite`] re-checks the library's structural guarantees — subset
//! relations between achievable regions and outer bounds, symmetry,
//! monotonicity, determinism, serialization fidelity — on randomized draws
//! and returns a machine-readable [`VerifyReport`]. The suite is
//! deterministic for a fixed seed.
//!
//! To demonstrate that the checks have teeth, a [`Fault`] can be injected:
//! the suite then evaluates a deliberately broken variant and must report
//! the corresponding failure (with a counterexample) instead of passing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dmc::{
    assemble_joint, df_region_dmc, outer_bound_dmc, sample_cooperative, search_region, DmcChannel,
    RegionKind,
};
use crate::error::{Error, Result};
use crate::gaussian::{
    cf_cloud_with, cf_terms, df_cloud_with, df_region_at, df_terms, multicast_relay_capacity,
    outer_bound_region_with, outer_region_at, CfSplit, CloudOptions, DfSplit, GaussianChannel,
    MulticastGains, SumSecondTerm,
};
use crate::infomeasure::JointPmf;
use crate::region::{Constraint, LinearRateRegion, RateMask};

/// A deliberately injected defect, used to prove the suite detects it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Replace the decode-and-forward sum-rate bound `min(t1, t2, t3)` by
    /// `max(t1, t2, t3)`, inflating the region past the outer bound.
    InflateDfSumRate,
}

/// Configuration for [`run_suite`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Seed for every randomized draw in the suite.
    pub seed: u64,
    /// Number of randomized draws per subset/equality check.
    pub draws: usize,
    /// Split-grid step for the Gaussian cloud constructions.
    pub grid_step: f64,
    /// Optional injected defect (see [`Fault`]).
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 7, draws: 8, grid_step: 0.2, fault: None }
    }
}

/// Outcome of one named invariant check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// What was checked, plus the counterexample when it failed.
    pub detail: String,
}

/// Machine-readable result of the whole suite.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    /// True iff every check passed.
    pub passed: bool,
    pub seed: u64,
    pub draws: usize,
    /// Name of the injected fault, when one was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub injected_fault: Option<String>,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

fn sample_channel<R: Rng>(rng: &mut R) -> GaussianChannel {
    // Powers uniform in [-10, 10] dB; gains log-uniform in [0.25, 8].
    let db = |rng: &mut R| -10.0 + 20.0 * rng.gen::<f64>();
    let gain = |rng: &mut R| 0.25 * 32f64.powf(rng.gen::<f64>());
    GaussianChannel::from_squared_gains(
        crate::gaussian::db_to_linear(db(rng)),
        crate::gaussian::db_to_linear(db(rng)),
        crate::gaussian::db_to_linear(db(rng)),
        gain(rng),
        gain(rng),
    )
    .expect("sampled parameters are in range")
}

fn sample_split<R: Rng>(rng: &mut R) -> DfSplit {
    let v: f64 = rng.gen();
    let w: f64 = rng.gen();
    DfSplit::new(rng.gen(), rng.gen(), v * w, v * (1.0 - w)).expect("sampled split is valid")
}

/// DF pentagon at a fixed split, optionally mutated per the injected fault.
fn df_region_possibly_faulty(
    ch: &GaussianChannel,
    s: &DfSplit,
    fault: Option<Fault>,
) -> Result<LinearRateRegion> {
    match fault {
        None => df_region_at(ch, s),
        Some(Fault::InflateDfSumRate) => {
            let t = df_terms(ch, s, SumSecondTerm::default())?;
            LinearRateRegion::new(vec![
                Constraint::new(RateMask::R1, t.b1),
                Constraint::new(RateMask::R2, t.b2),
                Constraint::new(RateMask::R12, t.t1.max(t.t2).max(t.t3)),
            ])
        }
    }
}

fn check(name: &str, outcome: std::result::Result<String, String>) -> CheckOutcome {
    match outcome {
        Ok(detail) => CheckOutcome { name: name.into(), passed: true, detail },
        Err(detail) => CheckOutcome { name: name.into(), passed: false, detail },
    }
}

fn stream(seed: u64, n: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n);
    rng
}

fn fmt_split(s: &DfSplit) -> String {
    format!("(a1={}, a2={}, a3'={}, a3''={})", s.a1(), s.a2(), s.a3p(), s.a3pp())
}

fn fmt_channel(ch: &GaussianChannel) -> String {
    format!(
        "(P1={:.4}, P2={:.4}, P3={:.4}, gamma^2={:.4}, eta^2={:.4})",
        ch.p1(),
        ch.p2(),
        ch.p3(),
        ch.gamma() * ch.gamma(),
        ch.eta() * ch.eta()
    )
}

/// Per-split subset: every DF pentagon corner lies inside the outer-bound
/// pentagon at the same split. This is where [`Fault::InflateDfSumRate`]
/// bites.
fn check_df_within_outer_per_split(opts: &VerifyOptions) -> CheckOutcome {
    let mut rng = stream(opts.seed, 11);
    let mut run = || -> std::result::Result<String, String> {
        for draw in 0..opts.draws {
            let ch = sample_channel(&mut rng);
            let s = sample_split(&mut rng);
            let df = df_region_possibly_faulty(&ch, &s, opts.fault).map_err(|e| e.to_string())?;
            let outer = outer_region_at(&ch, &s).map_err(|e| e.to_string())?;
            for corner in df.greedy_corners() {
                if !outer.contains(&corner) {
                    return Err(format!(
                        "draw {draw}: DF corner (r1={}, r2={}) escapes the outer bound at split {} on channel {}",
                        corner.r1,
                        corner.r2,
                        fmt_split(&s),
                        fmt_channel(&ch)
                    ));
                }
            }
        }
        Ok(format!("{} random (channel, split) draws: all DF corners inside the outer bound", opts.draws))
    };
    check("gaussian-df-within-outer-per-split", run())
}

/// Whole-region subset: the CF cloud lies inside the refined outer-bound
/// cloud on randomized channels (parameters in the documented safe range).
fn check_cf_within_outer(opts: &VerifyOptions) -> CheckOutcome {
    let mut rng = stream(opts.seed, 12);
    let coarse = CloudOptions { refine: false, ..CloudOptions::default() };
    let refined = CloudOptions { refine_halvings: 12, ..CloudOptions::default() };
    let draws = opts.draws.min(6).max(1);
    let mut run = || -> std::result::Result<String, String> {
        for draw in 0..draws {
            let ch = sample_channel(&mut rng);
            let cf = cf_cloud_with(&ch, opts.grid_step, &coarse).map_err(|e| e.to_string())?;
            let outer =
                outer_bound_region_with(&ch, opts.grid_step, &refined).map_err(|e| e.to_string())?;
            for p in cf.points() {
                if !outer.contains(&p.rate) {
                    return Err(format!(
                        "draw {draw}: CF point (r1={}, r2={}) [{}] escapes the outer bound on channel {}",
                        p.rate.r1,
                        p.rate.r2,
                        p.provenance,
                        fmt_channel(&ch)
                    ));
                }
            }
        }
        Ok(format!("{draws} random channels: every CF cloud point inside the refined outer-bound cloud"))
    };
    check("gaussian-cf-within-outer", run())
}

/// The compress-and-forward quantization noise `N_q` shrinks as the relay
/// broadcast path strengthens, and satisfies its defining identity.
fn check_cf_quantization_noise() -> CheckOutcome {
    let run = || -> std::result::Result<String, String> {
        let split = CfSplit::new(1.0, 1.0).map_err(|e| e.to_string())?;
        let mut last = f64::INFINITY;
        for eta_sq in [1.0, 2.0, 4.0, 8.0] {
            let ch = GaussianChannel::from_squared_gains(3.0, 3.0, 3.0, 1.0, eta_sq)
                .map_err(|e| e.to_string())?;
            let t = cf_terms(&ch, &split).map_err(|e| e.to_string())?;
            // Defining identity: N_q * eta^2 P3 = 1 + gamma^2(P1 P2 + P1 + P2) + min(P1, P2).
            let expect = 1.0 + 1.0 * (3.0 * 3.0 + 3.0 + 3.0) + 3.0;
            if (t.nq * eta_sq * 3.0 - expect).abs() > 1e-12 {
                return Err(format!(
                    "N_q identity violated at eta^2 = {eta_sq}: {} vs {}",
                    t.nq * eta_sq * 3.0,
                    expect
                ));
            }
            if t.nq >= last {
                return Err(format!("N_q failed to shrink at eta^2 = {eta_sq}: {} >= {last}", t.nq));
            }
            last = t.nq;
        }
        Ok("N_q satisfies its defining identity and shrinks as the broadcast path strengthens".into())
    };
    check("gaussian-cf-quantization-noise", run())
}

/// Relabeling users 1 <-> 2 mirrors the DF pentagon exactly (bitwise).
fn check_swap_symmetry(opts: &VerifyOptions) -> CheckOutcome {
    let mut rng = stream(opts.seed, 13);
    let mut run = || -> std::result::Result<String, String> {
        for draw in 0..opts.draws {
            let ch = sample_channel(&mut rng);
            let s = sample_split(&mut rng);
            let a = df_region_at(&ch, &s).map_err(|e| e.to_string())?;
            let b = df_region_at(&ch.swap_users(), &s.swap_users()).map_err(|e| e.to_string())?;
            let pairs = [
                (RateMask::R1, RateMask::R2),
                (RateMask::R2, RateMask::R1),
                (RateMask::R12, RateMask::R12),
            ];
            for (ma, mb) in pairs {
                let x = a.bound_for(ma).expect("pentagon has all three bounds");
                let y = b.bound_for(mb).expect("pentagon has all three bounds");
                if x.to_bits() != y.to_bits() {
                    return Err(format!(
                        "draw {draw}: bound {ma} = {x} vs swapped {mb} = {y} at split {} on channel {}",
                        fmt_split(&s),
                        fmt_channel(&ch)
                    ));
                }
            }
        }
        Ok(format!("{} draws: user relabeling mirrors every DF bound bitwise", opts.draws))
    };
    check("gaussian-swap-symmetry", run())
}

/// Symmetric rates of DF/CF/outer clouds are nondecreasing in the common
/// transmit power.
fn check_power_monotonicity(opts: &VerifyOptions) -> CheckOutcome {
    let coarse = CloudOptions { refine: false, ..CloudOptions::default() };
    let run = || -> std::result::Result<String, String> {
        let mut last = [f64::NEG_INFINITY; 3];
        for p_db in [0.0, 5.0, 10.0] {
            let p = crate::gaussian::db_to_linear(p_db);
            let ch = GaussianChannel::from_squared_gains(p, p, p, 1.0, 10.0).map_err(|e| e.to_string())?;
            let rates = [
                df_cloud_with(&ch, opts.grid_step, &coarse).map_err(|e| e.to_string())?.max_symmetric_rate(),
                cf_cloud_with(&ch, opts.grid_step, &coarse).map_err(|e| e.to_string())?.max_symmetric_rate(),
                outer_bound_region_with(&ch, opts.grid_step, &coarse)
                    .map_err(|e| e.to_string())?
                    .max_symmetric_rate(),
            ];
            for (k, label) in ["df", "cf", "outer"].iter().enumerate() {
                if rates[k] + 1e-9 < last[k] {
                    return Err(format!(
                        "{label} symmetric rate dropped from {} to {} when power rose to {p_db} dB",
                        last[k], rates[k]
                    ));
                }
            }
            last = rates;
        }
        Ok("df/cf/outer symmetric rates nondecreasing over 0/5/10 dB".into())
    };
    check("gaussian-power-monotonicity", run())
}

/// The reported multicast relay capacity is consistent: it equals its own
/// objective at the reported correlation and is not beaten on a dense grid.
fn check_multicast_consistency(opts: &VerifyOptions) -> CheckOutcome {
    let mut rng = stream(opts.seed, 14);
    let mut run = || -> std::result::Result<String, String> {
        for draw in 0..opts.draws {
            let p1 = 0.5 + 4.0 * rng.gen::<f64>();
            let p3 = 0.5 + 4.0 * rng.gen::<f64>();
            let gains = MulticastGains {
                source_relay: 0.5 + 2.0 * rng.gen::<f64>(),
                source_rx1: 0.5 + 2.0 * rng.gen::<f64>(),
                relay_rx1: 0.5 + 2.0 * rng.gen::<f64>(),
                relay_rx2: 0.5 + 2.0 * rng.gen::<f64>(),
            };
            let sol = multicast_relay_capacity(p1, p3, &gains).map_err(|e| e.to_string())?;
            let obj = |rho: f64| -> f64 {
                let t1 = 0.5 * (1.0 + gains.source_relay.powi(2) * p1 * (1.0 - rho * rho)).log2();
                let t2 = 0.5
                    * (1.0
                        + gains.source_rx1.powi(2) * p1
                        + gains.relay_rx1.powi(2) * p3
                        + 2.0 * gains.source_rx1 * gains.relay_rx1 * rho * (p1 * p3).sqrt())
                    .log2();
                let t3 = 0.5 * (1.0 + gains.relay_rx2.powi(2) * p3).log2();
                t1.min(t2).min(t3)
            };
            if (sol.capacity - obj(sol.rho)).abs() > 1e-9 {
                return Err(format!(
                    "draw {draw}: reported capacity {} != objective {} at rho {}",
                    sol.capacity,
                    obj(sol.rho),
                    sol.rho
                ));
            }
            for k in 0..=100 {
                let rho = k as f64 / 100.0;
                if obj(rho) > sol.capacity + 1e-6 {
                    return Err(format!(
                        "draw {draw}: grid rho {rho} beats reported capacity {} by {}",
                        sol.capacity,
                        obj(rho) - sol.capacity
                    ));
                }
            }
        }
        Ok(format!("{} draws: multicast capacity consistent and grid-optimal", opts.draws))
    };
    check("gaussian-multicast-consistency", run())
}

/// Joint pmf JSON round-trips are lossless (bit-exact probabilities).
fn check_pmf_json_roundtrip(opts: &VerifyOptions) -> CheckOutcome {
    let mut rng = stream(opts.seed, 15);
    let mut run = || -> std::result::Result<String, String> {
        for draw in 0..opts.draws {
            let cards = vec![2, 3, 2];
            let n: usize = cards.iter().product();
            let mut probs: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let sum: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|x| *x /= sum);
            let j = JointPmf::new(vec!["a", "b", "c"], cards, probs).map_err(|e| e.to_string())?;
            let back = JointPmf::from_json(&j.to_json()).map_err(|e| e.to_string())?;
            let diff = j.max_abs_diff(&back).map_err(|e| e.to_string())?;
            if diff != 0.0 {
                return Err(format!("draw {draw}: JSON round-trip changed a probability by {diff}"));
            }
        }
        Ok(format!("{} random pmfs: JSON round-trip bit-exact", opts.draws))
    };
    check("pmf-json-roundtrip", run())
}

fn bsc(bit_in: usize, bit_out: usize, d: f64) -> f64 {
    if bit_in == bit_out {
        1.0 - d
    } else {
        d
    }
}

fn markov_test_channel() -> DmcChannel {
    DmcChannel::from_fn([2, 2, 2], [2, 2, 2], |x, y| {
        bsc(x[0] ^ x[2], y[0], 0.1) * bsc(x[1] ^ x[2], y[1], 0.2) * bsc(x[0] ^ x[1], y[2], 0.05)
    })
    .expect("fixture channel is valid")
}

fn orthogonal_test_channel() -> DmcChannel {
    DmcChannel::from_fn([2, 2, 2], [2, 2, 4], |x, y| {
        let (y31, y32) = (y[2] / 2, y[2] % 2);
        bsc(x[0] ^ x[2], y[0], 0.1)
            * bsc(x[1] ^ x[2], y[1], 0.15)
            * bsc(x[0] ^ x[2], y31, 0.05)
            * bsc(x[1] ^ x[2], y32, 0.08)
    })
    .expect("fixture channel is valid")
}

/// On a channel with the no-cross-link Markov structure, the DF region and
/// the outer bound agree on every shared constraint; only the relay
/// sum-decoding constraint separates them.
fn check_dmc_shared_masks(opts: &VerifyOptions) -> CheckOutcome {
    let ch = markov_test_channel();
    let mut rng = stream(opts.seed, 16);
    let mut run = || -> std::result::Result<String, String> {
        for draw in 0..opts.draws {
            let inp = sample_cooperative(&mut rng, &ch, 2, 2, 2);
            let joint = assemble_joint(&ch, &inp).map_err(|e| e.to_string())?;
            let df = df_region_dmc(&joint).map_err(|e| e.to_string())?;
            let outer = outer_bound_dmc(&joint).map_err(|e| e.to_string())?;
            for c in outer.constraints() {
                let d = df.bound_for(c.mask).ok_or_else(|| format!("DF lost mask {}", c.mask))?;
                if (d - c.bound).abs() > 1e-9 {
                    return Err(format!(
                        "draw {draw}: mask {} differs: DF {} vs outer {}",
                        c.mask, d, c.bound
                    ));
                }
            }
        }
        Ok(format!("{} random inputs: DF and outer agree on all shared masks within 1e-9", opts.draws))
    };
    check("dmc-df-outer-shared-masks", run())
}

/// On an orthogonal-relay channel the DF region *equals* the outer bound.
fn check_dmc_orthogonal_equality(opts: &VerifyOptions) -> CheckOutcome {
    let ch = orthogonal_test_channel();
    let mut rng = stream(opts.seed, 17);
    let mut run = || -> std::result::Result<String, String> {
        for draw in 0..opts.draws {
            let inp = sample_cooperative(&mut rng, &ch, 2, 2, 2);
            let joint = assemble_joint(&ch, &inp).map_err(|e| e.to_string())?;
            let df = df_region_dmc(&joint).map_err(|e| e.to_string())?;
            let outer = outer_bound_dmc(&joint).map_err(|e| e.to_string())?;
            for corner in outer.greedy_corners() {
                if !df.contains(&corner) {
                    return Err(format!(
                        "draw {draw}: outer corner (r1={}, r2={}, r3={}) escapes DF",
                        corner.r1, corner.r2, corner.r3
                    ));
                }
            }
            for corner in df.greedy_corners() {
                if !outer.contains(&corner) {
                    return Err(format!(
                        "draw {draw}: DF corner (r1={}, r2={}, r3={}) escapes the outer bound",
                        corner.r1, corner.r2, corner.r3
                    ));
                }
            }
        }
        Ok(format!("{} random inputs: DF corners == outer corners on the orthogonal-relay channel", opts.draws))
    };
    check("dmc-orthogonal-df-equals-outer", run())
}

/// The outer-bound evaluator must reject channels violating the Markov
/// structure it assumes.
fn check_dmc_markov_rejection(opts: &VerifyOptions) -> CheckOutcome {
    let cross_talk = DmcChannel::from_fn([2, 2, 2], [2, 2, 2], |x, y| {
        bsc(x[0] ^ x[1], y[0], 0.1) * bsc(x[1] ^ x[2], y[1], 0.1) * bsc(x[0], y[2], 0.1)
    })
    .expect("fixture channel is valid");
    let mut rng = stream(opts.seed, 18);
    let inp = sample_cooperative(&mut rng, &cross_talk, 2, 2, 2);
    let run = || -> std::result::Result<String, String> {
        let joint = assemble_joint(&cross_talk, &inp).map_err(|e| e.to_string())?;
        match outer_bound_dmc(&joint) {
            Err(Error::Factorization(msg)) => {
                Ok(format!("cross-talk channel rejected as required: {msg}"))
            }
            Err(other) => Err(format!("rejected with the wrong error kind: {other}")),
            Ok(_) => Err("outer bound accepted a channel violating its Markov assumptions".into()),
        }
    };
    check("dmc-markov-rejection", run())
}

/// Identical inputs (seeds, budgets, thread counts) produce bitwise
/// identical region clouds.
fn check_determinism(opts: &VerifyOptions) -> CheckOutcome {
    let run = || -> std::result::Result<String, String> {
        let ch = markov_test_channel();
        let a = search_region(&ch, RegionKind::DecodeForward, 32, opts.seed).map_err(|e| e.to_string())?;
        let b = search_region(&ch, RegionKind::DecodeForward, 32, opts.seed).map_err(|e| e.to_string())?;
        if a.len() != b.len() {
            return Err(format!("search produced {} then {} points", a.len(), b.len()));
        }
        for (p, q) in a.points().iter().zip(b.points()) {
            if p.rate.lex_key() != q.rate.lex_key() || p.provenance != q.provenance {
                return Err(format!(
                    "search points diverged: ({}, {}, {}) [{}] vs ({}, {}, {}) [{}]",
                    p.rate.r1, p.rate.r2, p.rate.r3, p.provenance,
                    q.rate.r1, q.rate.r2, q.rate.r3, q.provenance
                ));
            }
        }
        let gch = GaussianChannel::from_squared_gains(3.0, 3.0, 3.0, 1.0, 10.0).map_err(|e| e.to_string())?;
        let ca = df_cloud_with(&gch, 0.25, &CloudOptions::default()).map_err(|e| e.to_string())?;
        let cb = df_cloud_with(&gch, 0.25, &CloudOptions::default()).map_err(|e| e.to_string())?;
        if ca.len() != cb.len()
            || ca
                .points()
                .iter()
                .zip(cb.points())
                .any(|(p, q)| p.rate.lex_key() != q.rate.lex_key() || p.provenance != q.provenance)
        {
            return Err("Gaussian cloud construction is not reproducible".into());
        }
        Ok("DMC search and Gaussian cloud construction bitwise reproducible".into())
    };
    check("determinism", run())
}

/// Every frontier point belongs to the cloud it was sliced from.
fn check_frontier_membership(opts: &VerifyOptions) -> CheckOutcome {
    let run = || -> std::result::Result<String, String> {
        let ch = GaussianChannel::from_squared_gains(3.0, 3.0, 3.0, 1.0, 10.0).map_err(|e| e.to_string())?;
        let cloud = df_cloud_with(&ch, opts.grid_step, &CloudOptions::default()).map_err(|e| e.to_string())?;
        let frontier = cloud.frontier_slice(0.0).map_err(|e| e.to_string())?;
        for f in &frontier {
            if !cloud.contains(&f.rate) {
                return Err(format!(
                    "frontier point (theta={}, r1={}, r2={}) not contained in its own cloud",
                    f.theta, f.rate.r1, f.rate.r2
                ));
            }
        }
        Ok(format!("{} frontier points all contained in their own cloud", frontier.len()))
    };
    check("frontier-membership", run())
}

/// Runs every invariant check and collects the outcomes.
pub fn run_suite(opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.draws == 0 {
        return Err(Error::InvalidParameter("verify suite needs at least one draw".into()));
    }
    if !(opts.grid_step > 0.0 && opts.grid_step <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "grid step {} outside (0, 0.5]",
            opts.grid_step
        )));
    }
    let checks = vec![
        check_df_within_outer_per_split(opts),
        check_cf_within_outer(opts),
        check_cf_quantization_noise(),
        check_swap_symmetry(opts),
        check_power_monotonicity(opts),
        check_multicast_consistency(opts),
        check_pmf_json_roundtrip(opts),
        check_dmc_shared_masks(opts),
        check_dmc_orthogonal_equality(opts),
        check_dmc_markov_rejection(opts),
        check_determinism(opts),
        check_frontier_membership(opts),
    ];
    Ok(VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        seed: opts.seed,
        draws: opts.draws,
        injected_fault: opts.fault.map(|f| format!("{f:?}")),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = run_suite(&VerifyOptions::default()).unwrap();
        for c in &report.checks {
            assert!(c.passed, "check {} failed: {}", c.name, c.detail);
        }
        assert!(report.passed);
        assert_eq!(report.checks.len(), 12);
        assert!(report.injected_fault.is_none());
    }

    #[test]
    fn injected_fault_is_caught_with_counterexample() {
        let opts = VerifyOptions { fault: Some(Fault::InflateDfSumRate), ..VerifyOptions::default() };
        let report = run_suite(&opts).unwrap();
        assert!(!report.passed);
        let broken = report
            .checks
            .iter()
            .find(|c| c.name == "gaussian-df-within-outer-per-split")
            .expect("check exists");
        assert!(!broken.passed);
        assert!(broken.detail.contains("escapes the outer bound"), "detail: {}", broken.detail);
        // Only the targeted check trips.
        for c in &report.checks {
            if c.name != broken.name {
                assert!(c.passed, "unrelated check {} failed: {}", c.name, c.detail);
            }
        }
        assert_eq!(report.injected_fault.as_deref(), Some("InflateDfSumRate"));
    }

    #[test]
    fn report_serializes_and_is_deterministic() {
        let a = run_suite(&VerifyOptions::default()).unwrap().to_json_pretty();
        let b = run_suite(&VerifyOptions::default()).unwrap().to_json_pretty();
        assert_eq!(a, b);
        assert!(a.contains("\"passed\": true"));
        assert!(a.contains("dmc-markov-rejection"));
    }

    #[test]
    fn suite_rejects_bad_options() {
        assert!(run_suite(&VerifyOptions { draws: 0, ..VerifyOptions::default() }).is_err());
        assert!(run_suite(&VerifyOptions { grid_step: 0.9, ..VerifyOptions::default() }).is_err());
    }
}
