//! Single-letter rate regions for the discrete memoryless cMACr and its
//! cognitive-relay special cases.
//!
//! All regions are evaluated at a *fixed* joint distribution over the
//! variables below; the union over input distributions is explored by
//! [`search_region`]. Joint distributions are [`JointPmf`]s over (subsets
//! of) the canonical variable labels:
//!
//! * `q` — time-sharing variable,
//! * `u1`, `u2` — auxiliary cooperation variables,
//! * `x1`, `x2`, `x3` — source 1, source 2 and relay channel inputs,
//! * `y` — the single output of a MAC model, or `y1`, `y2`, `y3` — the two
//!   receiver outputs and the relay observation of the full cMACr,
//! * `yh` — the quantized relay observation of compress-and-forward.
//!
//! Every builder validates that its joint factorizes the way the coding
//! theorem requires (via conditional-independence identities, tolerance
//! [`FACTOR_TOL`]) before computing bounds. Builders ignore variables beyond
//! the ones they need, so one fully-assembled joint can feed several region
//! evaluations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infomeasure::JointPmf;
use crate::region::{CloudPoint, Constraint, LinearRateRegion, PointCloudRegion, RateMask, RateTriple};

pub const VAR_Q: &str = "q";
pub const VAR_U1: &str = "u1";
pub const VAR_U2: &str = "u2";
pub const VAR_X1: &str = "x1";
pub const VAR_X2: &str = "x2";
pub const VAR_X3: &str = "x3";
pub const VAR_Y: &str = "y";
pub const VAR_Y1: &str = "y1";
pub const VAR_Y2: &str = "y2";
pub const VAR_Y3: &str = "y3";
pub const VAR_YH: &str = "yh";

/// Tolerance on the conditional-MI identities used to verify input
/// factorizations and channel memorylessness.
pub const FACTOR_TOL: f64 = 1e-9;

/// A discrete memoryless cMACr channel law `p(y1, y2, y3 | x1, x2, x3)`,
/// stored as a dense row-major tensor over `(x1, x2, x3, y1, y2, y3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DmcChannel {
    card_x: [usize; 3],
    card_y: [usize; 3],
    trans: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DmcChannelJson {
    card_x: Vec<usize>,
    card_y: Vec<usize>,
    trans: Vec<f64>,
}

impl DmcChannel {
    /// Builds a channel, checking shapes and per-input normalization.
    pub fn new(card_x: [usize; 3], card_y: [usize; 3], trans: Vec<f64>) -> Result<Self> {
        if card_x.iter().chain(&card_y).any(|&c| c == 0) {
            return Err(Error::ShapeMismatch("every alphabet must have at least one symbol".into()));
        }
        let nx: usize = card_x.iter().product();
        let ny: usize = card_y.iter().product();
        if trans.len() != nx * ny {
            return Err(Error::ShapeMismatch(format!(
                "expected {} transition entries for cards {card_x:?} x {card_y:?}, got {}",
                nx * ny,
                trans.len()
            )));
        }
        for (row_idx, row) in trans.chunks(ny).enumerate() {
            let mut sum = 0.0;
            for &p in row {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::NotNormalized(format!("transition probability {p} is not in [0, 1]")));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::NotNormalized(format!(
                    "transition row {row_idx} sums to {sum}, not 1"
                )));
            }
        }
        Ok(DmcChannel { card_x, card_y, trans })
    }

    /// Builds a channel from a closure `p(y | x)` evaluated on every cell.
    pub fn from_fn<F>(card_x: [usize; 3], card_y: [usize; 3], f: F) -> Result<Self>
    where
        F: Fn([usize; 3], [usize; 3]) -> f64,
    {
        let mut trans = Vec::with_capacity(
            card_x.iter().product::<usize>() * card_y.iter().product::<usize>(),
        );
        for x1 in 0..card_x[0] {
            for x2 in 0..card_x[1] {
                for x3 in 0..card_x[2] {
                    for y1 in 0..card_y[0] {
                        for y2 in 0..card_y[1] {
                            for y3 in 0..card_y[2] {
                                trans.push(f([x1, x2, x3], [y1, y2, y3]));
                            }
                        }
                    }
                }
            }
        }
        DmcChannel::new(card_x, card_y, trans)
    }

    pub fn card_x(&self) -> [usize; 3] {
        self.card_x
    }

    pub fn card_y(&self) -> [usize; 3] {
        self.card_y
    }

    /// `p(y1, y2, y3 | x1, x2, x3)` for one cell.
    pub fn prob(&self, x: [usize; 3], y: [usize; 3]) -> f64 {
        let ny = self.card_y;
        let xi = (x[0] * self.card_x[1] + x[1]) * self.card_x[2] + x[2];
        let yi = (y[0] * ny[1] + y[1]) * ny[2] + y[2];
        self.trans[xi * ny.iter().product::<usize>() + yi]
    }

    /// The marginal law of one receiver: `p(y_r | x1, x2, x3)` laid out
    /// row-major over `(x1, x2, x3, y_r)`. `receiver` is 1-based (1..=3).
    pub fn receiver_marginal(&self, receiver: u8) -> Result<Vec<f64>> {
        if !(1..=3).contains(&receiver) {
            return Err(Error::InvalidParameter(format!("receiver index {receiver} out of range 1..=3")));
        }
        let r = (receiver - 1) as usize;
        let nx: usize = self.card_x.iter().product();
        let mut out = vec![0.0; nx * self.card_y[r]];
        for x1 in 0..self.card_x[0] {
            for x2 in 0..self.card_x[1] {
                for x3 in 0..self.card_x[2] {
                    let xi = (x1 * self.card_x[1] + x2) * self.card_x[2] + x3;
                    for y1 in 0..self.card_y[0] {
                        for y2 in 0..self.card_y[1] {
                            for y3 in 0..self.card_y[2] {
                                let yr = [y1, y2, y3][r];
                                out[xi * self.card_y[r] + yr] += self.prob([x1, x2, x3], [y1, y2, y3]);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Serializes as `{"card_x": [..], "card_y": [..], "trans": [..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&DmcChannelJson {
            card_x: self.card_x.to_vec(),
            card_y: self.card_y.to_vec(),
            trans: self.trans.clone(),
        })
        .expect("channel serialization cannot fail")
    }

    /// Parses the external JSON form with full validation.
    pub fn from_json(s: &str) -> Result<DmcChannel> {
        let raw: DmcChannelJson = serde_json::from_str(s)?;
        let to3 = |v: &[usize], what: &str| -> Result<[usize; 3]> {
            v.try_into()
                .map_err(|_| Error::ShapeMismatch(format!("{what} must list exactly 3 cardinalities")))
        };
        DmcChannel::new(to3(&raw.card_x, "card_x")?, to3(&raw.card_y, "card_y")?, raw.trans)
    }
}

/// Whether the channel satisfies the no-cross-link Markov conditions
/// `Y1 - (X1, X3) - X2` and `Y2 - (X2, X3) - X1` for every input
/// distribution, i.e. `p(y1 | x1, x2, x3)` does not depend on `x2` and
/// `p(y2 | x1, x2, x3)` does not depend on `x1` (within `1e-9`).
pub fn verify_markov(ch: &DmcChannel) -> bool {
    let m1 = ch.receiver_marginal(1).expect("receiver 1 exists");
    let m2 = ch.receiver_marginal(2).expect("receiver 2 exists");
    let [cx1, cx2, cx3] = ch.card_x;
    let xi = |x1: usize, x2: usize, x3: usize| (x1 * cx2 + x2) * cx3 + x3;
    for x1 in 0..cx1 {
        for x3 in 0..cx3 {
            for x2 in 1..cx2 {
                for y1 in 0..ch.card_y[0] {
                    let a = m1[xi(x1, x2, x3) * ch.card_y[0] + y1];
                    let b = m1[xi(x1, 0, x3) * ch.card_y[0] + y1];
                    if (a - b).abs() > 1e-9 {
                        return false;
                    }
                }
            }
        }
    }
    for x2 in 0..cx2 {
        for x3 in 0..cx3 {
            for x1 in 1..cx1 {
                for y2 in 0..ch.card_y[1] {
                    let a = m2[xi(x1, x2, x3) * ch.card_y[1] + y2];
                    let b = m2[xi(0, x2, x3) * ch.card_y[1] + y2];
                    if (a - b).abs() > 1e-9 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Whether the relay observation splits into orthogonal components
/// `Y3 = (Y31, Y32)` with `Y31` depending only on `(X1, X3)` and `Y32` only
/// on `(X2, X3)`. The split is given by cardinalities with
/// `card_y31 * card_y32 == card_y3`, `y3 = y31 * card_y32 + y32`.
/// Errors when the cardinalities do not factor the relay alphabet.
pub fn verify_orthogonal_relay(ch: &DmcChannel, card_y31: usize, card_y32: usize) -> Result<bool> {
    if card_y31 == 0 || card_y32 == 0 || card_y31 * card_y32 != ch.card_y[2] {
        return Err(Error::ShapeMismatch(format!(
            "split {card_y31} x {card_y32} does not factor the relay alphabet of size {}",
            ch.card_y[2]
        )));
    }
    let m3 = ch.receiver_marginal(3)?;
    let [cx1, cx2, cx3] = ch.card_x;
    let cy3 = ch.card_y[2];
    let xi = |x1: usize, x2: usize, x3: usize| (x1 * cx2 + x2) * cx3 + x3;
    let comp = |xflat: usize, y31: usize, y32: usize| m3[xflat * cy3 + y31 * card_y32 + y32];
    // p(y31 | x) must not depend on x2; p(y32 | x) must not depend on x1.
    for x1 in 0..cx1 {
        for x3 in 0..cx3 {
            for y31 in 0..card_y31 {
                let reference: f64 = (0..card_y32).map(|y32| comp(xi(x1, 0, x3), y31, y32)).sum();
                for x2 in 1..cx2 {
                    let p: f64 = (0..card_y32).map(|y32| comp(xi(x1, x2, x3), y31, y32)).sum();
                    if (p - reference).abs() > 1e-9 {
                        return Ok(false);
                    }
                }
            }
        }
    }
    for x2 in 0..cx2 {
        for x3 in 0..cx3 {
            for y32 in 0..card_y32 {
                let reference: f64 = (0..card_y31).map(|y31| comp(xi(0, x2, x3), y31, y32)).sum();
                for x1 in 1..cx1 {
                    let p: f64 = (0..card_y31).map(|y31| comp(xi(x1, x2, x3), y31, y32)).sum();
                    if (p - reference).abs() > 1e-9 {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// An input distribution in the factorized form
/// `p(q) p(x1, u1 | q) p(x2, u2 | q) p(x3 | u1, u2, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizedInput {
    pub(crate) card_q: usize,
    pub(crate) card_u1: usize,
    pub(crate) card_u2: usize,
    pub(crate) card_x1: usize,
    pub(crate) card_x2: usize,
    pub(crate) card_x3: usize,
    /// `p(q)`, length `card_q`.
    pub(crate) p_q: Vec<f64>,
    /// `p(x1, u1 | q)`, row-major over `(q, x1, u1)`.
    pub(crate) p_x1u1: Vec<f64>,
    /// `p(x2, u2 | q)`, row-major over `(q, x2, u2)`.
    pub(crate) p_x2u2: Vec<f64>,
    /// `p(x3 | u1, u2, q)`, row-major over `(q, u1, u2, x3)`.
    pub(crate) p_x3: Vec<f64>,
}

fn check_simplex_slices(name: &str, v: &[f64], slice_len: usize, slices: usize) -> Result<()> {
    if v.len() != slice_len * slices {
        return Err(Error::ShapeMismatch(format!(
            "{name} must have {slices} x {slice_len} entries, got {}",
            v.len()
        )));
    }
    for (i, s) in v.chunks(slice_len).enumerate() {
        let mut sum = 0.0;
        for &p in s {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::NotNormalized(format!("{name} slice {i} holds invalid probability {p}")));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(format!("{name} slice {i} sums to {sum}, not 1")));
        }
    }
    Ok(())
}

impl FactorizedInput {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        card_q: usize,
        card_u1: usize,
        card_u2: usize,
        card_x1: usize,
        card_x2: usize,
        card_x3: usize,
        p_q: Vec<f64>,
        p_x1u1: Vec<f64>,
        p_x2u2: Vec<f64>,
        p_x3: Vec<f64>,
    ) -> Result<Self> {
        for (name, c) in [
            ("card_q", card_q),
            ("card_u1", card_u1),
            ("card_u2", card_u2),
            ("card_x1", card_x1),
            ("card_x2", card_x2),
            ("card_x3", card_x3),
        ] {
            if c == 0 {
                return Err(Error::ShapeMismatch(format!("{name} must be at least 1")));
            }
        }
        check_simplex_slices("p_q", &p_q, card_q, 1)?;
        check_simplex_slices("p_x1u1", &p_x1u1, card_x1 * card_u1, card_q)?;
        check_simplex_slices("p_x2u2", &p_x2u2, card_x2 * card_u2, card_q)?;
        check_simplex_slices("p_x3", &p_x3, card_x3, card_q * card_u1 * card_u2)?;
        Ok(FactorizedInput { card_q, card_u1, card_u2, card_x1, card_x2, card_x3, p_q, p_x1u1, p_x2u2, p_x3 })
    }

    /// Input with trivial time sharing and auxiliaries: independent uniform
    /// sources. Handy as a baseline in tests and examples.
    pub fn uniform(card_x1: usize, card_x2: usize, card_x3: usize) -> Result<Self> {
        FactorizedInput::new(
            1,
            1,
            1,
            card_x1,
            card_x2,
            card_x3,
            vec![1.0],
            vec![1.0 / card_x1 as f64; card_x1],
            vec![1.0 / card_x2 as f64; card_x2],
            vec![1.0 / card_x3 as f64; card_x3],
        )
    }

    fn weight(&self, q: usize, u1: usize, u2: usize, x1: usize, x2: usize, x3: usize) -> f64 {
        self.p_q[q]
            * self.p_x1u1[(q * self.card_x1 + x1) * self.card_u1 + u1]
            * self.p_x2u2[(q * self.card_x2 + x2) * self.card_u2 + u2]
            * self.p_x3[((q * self.card_u1 + u1) * self.card_u2 + u2) * self.card_x3 + x3]
    }
}

/// A quantizer `p(yh | q, x3, y3)` for compress-and-forward.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantizer {
    pub(crate) card_q: usize,
    pub(crate) card_x3: usize,
    pub(crate) card_y3: usize,
    pub(crate) card_yh: usize,
    /// Row-major over `(q, x3, y3, yh)`.
    pub(crate) probs: Vec<f64>,
}

impl Quantizer {
    pub fn new(card_q: usize, card_x3: usize, card_y3: usize, card_yh: usize, probs: Vec<f64>) -> Result<Self> {
        if card_q == 0 || card_x3 == 0 || card_y3 == 0 || card_yh == 0 {
            return Err(Error::ShapeMismatch("quantizer alphabets must be nonempty".into()));
        }
        check_simplex_slices("quantizer", &probs, card_yh, card_q * card_x3 * card_y3)?;
        Ok(Quantizer { card_q, card_x3, card_y3, card_yh, probs })
    }

    /// The trivial quantizer: `yh` is a single constant symbol.
    pub fn constant(card_q: usize, card_x3: usize, card_y3: usize) -> Self {
        Quantizer {
            card_q,
            card_x3,
            card_y3,
            card_yh: 1,
            probs: vec![1.0; card_q * card_x3 * card_y3],
        }
    }

    fn prob(&self, q: usize, x3: usize, y3: usize, yh: usize) -> f64 {
        self.probs[((q * self.card_x3 + x3) * self.card_y3 + y3) * self.card_yh + yh]
    }
}

fn check_input_matches_channel(ch: &DmcChannel, inp: &FactorizedInput) -> Result<()> {
    if [inp.card_x1, inp.card_x2, inp.card_x3] != ch.card_x {
        return Err(Error::ShapeMismatch(format!(
            "input alphabet sizes ({}, {}, {}) do not match the channel's {:?}",
            inp.card_x1, inp.card_x2, inp.card_x3, ch.card_x
        )));
    }
    Ok(())
}

/// Assembles the full joint `p(q, u1, u2, x1, x2, x3, y1, y2, y3)` from a
/// factorized input and the channel law.
pub fn assemble_joint(ch: &DmcChannel, inp: &FactorizedInput) -> Result<JointPmf> {
    check_input_matches_channel(ch, inp)?;
    let cards = vec![
        inp.card_q,
        inp.card_u1,
        inp.card_u2,
        inp.card_x1,
        inp.card_x2,
        inp.card_x3,
        ch.card_y[0],
        ch.card_y[1],
        ch.card_y[2],
    ];
    let labels = vec![VAR_Q, VAR_U1, VAR_U2, VAR_X1, VAR_X2, VAR_X3, VAR_Y1, VAR_Y2, VAR_Y3];
    let ny: usize = ch.card_y.iter().product();
    let mut probs = vec![0.0; cards.iter().product()];
    let mut base = 0usize;
    for q in 0..inp.card_q {
        for u1 in 0..inp.card_u1 {
            for u2 in 0..inp.card_u2 {
                for x1 in 0..inp.card_x1 {
                    for x2 in 0..inp.card_x2 {
                        for x3 in 0..inp.card_x3 {
                            let w = inp.weight(q, u1, u2, x1, x2, x3);
                            if w > 0.0 {
                                let xi = (x1 * ch.card_x[1] + x2) * ch.card_x[2] + x3;
                                let row = &ch.trans[xi * ny..(xi + 1) * ny];
                                for (yi, &t) in row.iter().enumerate() {
                                    probs[base + yi] = w * t;
                                }
                            }
                            base += ny;
                        }
                    }
                }
            }
        }
    }
    JointPmf::new(labels, cards, probs)
}

/// Assembles the MAC view of one receiver: the joint over
/// `(q, u1, u2, x1, x2, x3, y)` where `y` is receiver `receiver`'s output
/// (1-based; 3 selects the relay observation).
pub fn assemble_mac_joint(ch: &DmcChannel, inp: &FactorizedInput, receiver: u8) -> Result<JointPmf> {
    let yvar = match receiver {
        1 => VAR_Y1,
        2 => VAR_Y2,
        3 => VAR_Y3,
        other => {
            return Err(Error::InvalidParameter(format!("receiver index {other} out of range 1..=3")));
        }
    };
    let full = assemble_joint(ch, inp)?;
    full.marginalize(&[VAR_Q, VAR_U1, VAR_U2, VAR_X1, VAR_X2, VAR_X3, yvar])?.rename_var(yvar, VAR_Y)
}

/// Assembles the compress-and-forward joint
/// `p(q, x1, x2, x3, y1, y2, y3, yh)`. The input must carry trivial
/// (cardinality-1) auxiliaries, since the CF coding theorem uses none.
pub fn assemble_cf_joint(ch: &DmcChannel, inp: &FactorizedInput, quantizer: &Quantizer) -> Result<JointPmf> {
    check_input_matches_channel(ch, inp)?;
    if inp.card_u1 != 1 || inp.card_u2 != 1 {
        return Err(Error::ShapeMismatch(
            "compress-and-forward uses no auxiliary cooperation variables; pass cardinality-1 u1/u2".into(),
        ));
    }
    if quantizer.card_q != inp.card_q || quantizer.card_x3 != inp.card_x3 || quantizer.card_y3 != ch.card_y[2]
    {
        return Err(Error::ShapeMismatch(format!(
            "quantizer shape (q={}, x3={}, y3={}) does not match input/channel (q={}, x3={}, y3={})",
            quantizer.card_q, quantizer.card_x3, quantizer.card_y3, inp.card_q, inp.card_x3, ch.card_y[2]
        )));
    }
    let cards = vec![
        inp.card_q,
        inp.card_x1,
        inp.card_x2,
        inp.card_x3,
        ch.card_y[0],
        ch.card_y[1],
        ch.card_y[2],
        quantizer.card_yh,
    ];
    let labels = vec![VAR_Q, VAR_X1, VAR_X2, VAR_X3, VAR_Y1, VAR_Y2, VAR_Y3, VAR_YH];
    let mut probs = vec![0.0; cards.iter().product()];
    let mut idx = 0usize;
    for q in 0..inp.card_q {
        for x1 in 0..inp.card_x1 {
            for x2 in 0..inp.card_x2 {
                for x3 in 0..inp.card_x3 {
                    let w = inp.weight(q, 0, 0, x1, x2, x3);
                    for y1 in 0..ch.card_y[0] {
                        for y2 in 0..ch.card_y[1] {
                            for y3 in 0..ch.card_y[2] {
                                let t = w * ch.prob([x1, x2, x3], [y1, y2, y3]);
                                for yh in 0..quantizer.card_yh {
                                    probs[idx] = t * quantizer.prob(q, x3, y3, yh);
                                    idx += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    JointPmf::new(labels, cards, probs)
}

fn require_vars(j: &JointPmf, vars: &[&str]) -> Result<()> {
    for v in vars {
        j.card_of(v)?;
    }
    Ok(())
}

fn check_ci(j: &JointPmf, a: &[&str], b: &[&str], g: &[&str], what: &str) -> Result<()> {
    let mi = j.conditional_mi(a, b, g)?;
    if mi > FACTOR_TOL {
        return Err(Error::Factorization(format!(
            "{what}: I({} ; {} | {}) = {mi:.3e} is not zero",
            a.join(","),
            b.join(","),
            g.join(",")
        )));
    }
    Ok(())
}

/// Verifies the cooperative input factorization
/// `p(q) p(x1, u1 | q) p(x2, u2 | q) p(x3 | u1, u2, q)`.
fn check_cooperative_factorization(j: &JointPmf) -> Result<()> {
    check_ci(j, &[VAR_X1, VAR_U1], &[VAR_X2, VAR_U2], &[VAR_Q], "input factorization")?;
    check_ci(j, &[VAR_X3], &[VAR_X1, VAR_X2], &[VAR_U1, VAR_U2, VAR_Q], "relay input factorization")
}

/// Verifies that the listed outputs depend on the inputs only:
/// `I(outputs ; q, u1, u2 | x1, x2, x3) = 0` (for whichever of q/u1/u2 are
/// present in the joint).
fn check_memoryless(j: &JointPmf, outputs: &[&str]) -> Result<()> {
    let extras: Vec<&str> = [VAR_Q, VAR_U1, VAR_U2]
        .into_iter()
        .filter(|v| j.card_of(v).is_ok())
        .collect();
    if extras.is_empty() {
        return Ok(());
    }
    check_ci(j, outputs, &extras, &[VAR_X1, VAR_X2, VAR_X3], "channel memorylessness")
}

fn region_of(rows: Vec<(RateMask, f64)>) -> LinearRateRegion {
    LinearRateRegion::new(rows.into_iter().map(|(m, b)| Constraint::new(m, b)).collect())
        .expect("mutual informations are finite")
}

/// Capacity region of the MAC with a (fully) cognitive relay, evaluated at
/// one joint over `(q, u1, u2, x1, x2, x3, y)`.
pub fn cognitive_mac_region(joint: &JointPmf) -> Result<LinearRateRegion> {
    require_vars(joint, &[VAR_Q, VAR_U1, VAR_U2, VAR_X1, VAR_X2, VAR_X3, VAR_Y])?;
    check_cooperative_factorization(joint)?;
    check_memoryless(joint, &[VAR_Y])?;
    let mi = |a: &[&str], g: &[&str]| joint.conditional_mi(a, &[VAR_Y], g);
    Ok(region_of(vec![
        (RateMask::R3, mi(&[VAR_X3], &[VAR_X1, VAR_X2, VAR_U1, VAR_U2, VAR_Q])?),
        (RateMask::R13, mi(&[VAR_X1, VAR_X3], &[VAR_X2, VAR_U2, VAR_Q])?),
        (RateMask::R23, mi(&[VAR_X2, VAR_X3], &[VAR_X1, VAR_U1, VAR_Q])?),
        (RateMask::R123, mi(&[VAR_X1, VAR_X2, VAR_X3], &[VAR_Q])?),
    ]))
}

/// Capacity region of the *compound* MAC with a cognitive relay: the
/// intersection of the per-receiver cognitive-MAC regions, evaluated at one
/// joint over `(q, u1, u2, x1, x2, x3, y1, y2)`.
pub fn compound_cognitive_region(joint: &JointPmf) -> Result<LinearRateRegion> {
    require_vars(joint, &[VAR_Q, VAR_U1, VAR_U2, VAR_X1, VAR_X2, VAR_X3, VAR_Y1, VAR_Y2])?;
    check_cooperative_factorization(joint)?;
    check_memoryless(joint, &[VAR_Y1, VAR_Y2])?;
    let per_receiver = |y: &str| -> Result<LinearRateRegion> {
        let mi = |a: &[&str], g: &[&str]| joint.conditional_mi(a, &[y], g);
        Ok(region_of(vec![
            (RateMask::R3, mi(&[VAR_X3], &[VAR_X1, VAR_X2, VAR_U1, VAR_U2, VAR_Q])?),
            (RateMask::R13, mi(&[VAR_X1, VAR_X3], &[VAR_X2, VAR_U2, VAR_Q])?),
            (RateMask::R23, mi(&[VAR_X2, VAR_X3], &[VAR_X1, VAR_U1, VAR_Q])?),
            (RateMask::R123, mi(&[VAR_X1, VAR_X2, VAR_X3], &[VAR_Q])?),
        ]))
    };
    Ok(per_receiver(VAR_Y1)?.intersect(&per_receiver(VAR_Y2)?))
}

/// Capacity region of the MAC with a *partially* cognitive relay (informed
/// of message 1 only), evaluated at one joint over `(q, x1, x2, x3, y)` with
/// the factorization `p(q) p(x2 | q) p(x1, x3 | q)`.
pub fn partial_cognitive_region(joint: &JointPmf) -> Result<LinearRateRegion> {
    require_vars(joint, &[VAR_Q, VAR_X1, VAR_X2, VAR_X3, VAR_Y])?;
    check_ci(joint, &[VAR_X2], &[VAR_X1, VAR_X3], &[VAR_Q], "partial-cognition factorization")?;
    check_memoryless(joint, &[VAR_Y])?;
    let mi = |a: &[&str], g: &[&str]| joint.conditional_mi(a, &[VAR_Y], g);
    Ok(region_of(vec![
        (RateMask::R2, mi(&[VAR_X2], &[VAR_X1, VAR_X3, VAR_Q])?),
        (RateMask::R3, mi(&[VAR_X3], &[VAR_X1, VAR_X2, VAR_Q])?),
        (RateMask::R13, mi(&[VAR_X1, VAR_X3], &[VAR_X2, VAR_Q])?),
        (RateMask::R23, mi(&[VAR_X2, VAR_X3], &[VAR_X1, VAR_Q])?),
        (RateMask::R123, mi(&[VAR_X1, VAR_X2, VAR_X3], &[VAR_Q])?),
    ]))
}

/// Finite-capacity cognition links from the sources to the relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkCapacities {
    pub c1: f64,
    pub c2: f64,
}

impl LinkCapacities {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !c1.is_finite() || c1 < 0.0 || !c2.is_finite() || c2 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "link capacities must be finite and >= 0, got ({c1}, {c2})"
            )));
        }
        Ok(LinkCapacities { c1, c2 })
    }
}

/// Capacity region of the MAC with a cognitive relay connected to the
/// sources through finite-capacity links `C1`, `C2`, evaluated at one joint
/// over `(q, u1, u2, x1, x2, x3, y)`.
pub fn limited_link_region(joint: &JointPmf, links: &LinkCapacities) -> Result<LinearRateRegion> {
    LinkCapacities::new(links.c1, links.c2)?;
    require_vars(joint, &[VAR_Q, VAR_U1, VAR_U2, VAR_X1, VAR_X2, VAR_X3, VAR_Y])?;
    check_cooperative_factorization(joint)?;
    check_memoryless(joint, &[VAR_Y])?;
    let (c1, c2) = (links.c1, links.c2);
    let mi = |a: &[&str], g: &[&str]| joint.conditional_mi(a, &[VAR_Y], g);
    let all = [VAR_X1, VAR_X2, VAR_X3];
    Ok(region_of(vec![
        (RateMask::R1, mi(&[VAR_X1], &[VAR_X2, VAR_X3, VAR_U1, VAR_U2, VAR_Q])? + c1),
        (RateMask::R2, mi(&[VAR_X2], &[VAR_X1, VAR_X3, VAR_U1, VAR_U2, VAR_Q])? + c2),
        (RateMask::R3, mi(&[VAR_X3], &[VAR_X1, VAR_X2, VAR_U1, VAR_U2, VAR_Q])?),
        (RateMask::R12, mi(&[VAR_X1, VAR_X2], &[VAR_X3, VAR_U1, VAR_U2, VAR_Q])? + c1 + c2),
        (
            RateMask::R13,
            (mi(&[VAR_X1, VAR_X3], &[VAR_X2, VAR_U1, VAR_U2, VAR_Q])? + c1)
                .min(mi(&[VAR_X1, VAR_X3], &[VAR_X2, VAR_U2, VAR_Q])?),
        ),
        (
            RateMask::R23,
            (mi(&[VAR_X2, VAR_X3], &[VAR_X1, VAR_U1, VAR_U2, VAR_Q])? + c2)
                .min(mi(&[VAR_X2, VAR_X3], &[VAR_X1, VAR_U1, VAR_Q])?),
        ),
        (
            RateMask::R123,
            (mi(&all, &[VAR_U1, VAR_Q])? + c1)
                .min(mi(&all, &[VAR_U2, VAR_Q])? + c2)
                .min(mi(&all, &[VAR_Q])?)
                .min(mi(&all, &[VAR_U1, VAR_U2, VAR_Q])? + c1 + c2),
        ),
    ]))
}

/// Decode-and-forward achievable region of the full cMACr, evaluated at one
/// joint over `(q, u1, u2, x1, x2, x3, y1, y2, y3)`. The relay decodes both
/// source messages (constraints against `y3`), then the delivery constraints
/// mirror the compound cognitive-MAC region at both receivers.
pub fn df_region_dmc(joint: &JointPmf) -> Result<LinearRateRegion> {
    require_vars(joint, &[VAR_Q, VAR_U1, VAR_U2, VAR_X1, VAR_X2, VAR_X3, VAR_Y1, VAR_Y2, VAR_Y3])?;
    check_cooperative_factorization(joint)?;
    check_memoryless(joint, &[VAR_Y1, VAR_Y2, VAR_Y3])?;
    let mi = |a: &[&str], y: &str, g: &[&str]| joint.conditional_mi(a, &[y], g);
    let both = |a: &[&str], g: &[&str]| -> Result<f64> {
        Ok(mi(a, VAR_Y1, g)?.min(mi(a, VAR_Y2, g)?))
    };
    Ok(region_of(vec![
        (RateMask::R1, mi(&[VAR_X1], VAR_Y3, &[VAR_U1, VAR_X2, VAR_X3, VAR_Q])?),
        (RateMask::R2, mi(&[VAR_X2], VAR_Y3, &[VAR_U2, VAR_X1, VAR_X3, VAR_Q])?),
        (RateMask::R12, mi(&[VAR_X1, VAR_X2], VAR_Y3, &[VAR_U1, VAR_U2, VAR_X3, VAR_Q])?),
        (RateMask::R3, both(&[VAR_X3], &[VAR_X1, VAR_X2, VAR_U1, VAR_U2, VAR_Q])?),
        (RateMask::R13, both(&[VAR_X1, VAR_X3], &[VAR_X2, VAR_U2, VAR_Q])?),
        (RateMask::R23, both(&[VAR_X2, VAR_X3], &[VAR_X1, VAR_U1, VAR_Q])?),
        (RateMask::R123, both(&[VAR_X1, VAR_X2, VAR_X3], &[VAR_Q])?),
    ]))
}

/// Compress-and-forward achievable region of the full cMACr, evaluated at
/// one joint over `(q, x1, x2, x3, y1, y2, y3, yh)` with independent inputs
/// given `q` and a quantizer `p(yh | x3, y3, q)`.
///
/// When the relay cannot even support the quantization overhead at
/// `R3 = 0` (some receiver has `I(X3; Yi | Q) < I(Y3; YH | X3, Yi, Q)`), the
/// evaluation is infeasible and the explicit empty region is returned.
pub fn cf_region_dmc(joint: &JointPmf) -> Result<LinearRateRegion> {
    require_vars(joint, &[VAR_Q, VAR_X1, VAR_X2, VAR_X3, VAR_Y1, VAR_Y2, VAR_Y3, VAR_YH])?;
    check_ci(joint, &[VAR_X1], &[VAR_X2], &[VAR_Q], "CF input factorization")?;
    check_ci(joint, &[VAR_X3], &[VAR_X1, VAR_X2], &[VAR_Q], "CF relay input factorization")?;
    check_memoryless(joint, &[VAR_Y1, VAR_Y2, VAR_Y3])?;
    check_ci(
        joint,
        &[VAR_YH],
        &[VAR_X1, VAR_X2, VAR_Y1, VAR_Y2],
        &[VAR_X3, VAR_Y3, VAR_Q],
        "quantizer factorization",
    )?;
    let mi = |a: &[&str], b: &[&str], g: &[&str]| joint.conditional_mi(a, b, g);
    // Relay rate left after paying the Wyner-Ziv quantization cost at each
    // receiver.
    let mut r3 = f64::INFINITY;
    for y in [VAR_Y1, VAR_Y2] {
        let budget = mi(&[VAR_X3], &[y], &[VAR_Q])?;
        let cost = mi(&[VAR_Y3], &[VAR_YH], &[VAR_X3, y, VAR_Q])?;
        r3 = r3.min(budget - cost);
    }
    if r3 < -FACTOR_TOL {
        return Ok(LinearRateRegion::empty());
    }
    let both = |a: &[&str], g: &[&str]| -> Result<f64> {
        let v1 = mi(a, &[VAR_Y1, VAR_YH], g)?;
        let v2 = mi(a, &[VAR_Y2, VAR_YH], g)?;
        Ok(v1.min(v2))
    };
    Ok(region_of(vec![
        (RateMask::R1, both(&[VAR_X1], &[VAR_X2, VAR_X3, VAR_Q])?),
        (RateMask::R2, both(&[VAR_X2], &[VAR_X1, VAR_X3, VAR_Q])?),
        (RateMask::R12, both(&[VAR_X1, VAR_X2], &[VAR_X3, VAR_Q])?),
        (RateMask::R3, r3.max(0.0)),
    ]))
}

/// Outer bound on the cMACr capacity region under the no-cross-link Markov
/// conditions, evaluated at one joint over
/// `(q, u1, u2, x1, x2, x3, y1, y2, y3)`. Errors when the joint violates
/// those Markov conditions.
pub fn outer_bound_dmc(joint: &JointPmf) -> Result<LinearRateRegion> {
    require_vars(joint, &[VAR_Q, VAR_U1, VAR_U2, VAR_X1, VAR_X2, VAR_X3, VAR_Y1, VAR_Y2, VAR_Y3])?;
    check_cooperative_factorization(joint)?;
    check_memoryless(joint, &[VAR_Y1, VAR_Y2, VAR_Y3])?;
    check_ci(joint, &[VAR_Y1], &[VAR_X2], &[VAR_X1, VAR_X3], "no-cross-link condition at receiver 1")?;
    check_ci(joint, &[VAR_Y2], &[VAR_X1], &[VAR_X2, VAR_X3], "no-cross-link condition at receiver 2")?;
    let mi = |a: &[&str], y: &str, g: &[&str]| joint.conditional_mi(a, &[y], g);
    Ok(region_of(vec![
        (RateMask::R1, mi(&[VAR_X1], VAR_Y3, &[VAR_U1, VAR_X2, VAR_X3, VAR_Q])?),
        (RateMask::R2, mi(&[VAR_X2], VAR_Y3, &[VAR_U2, VAR_X1, VAR_X3, VAR_Q])?),
        (
            RateMask::R3,
            mi(&[VAR_X3], VAR_Y1, &[VAR_X1, VAR_X2, VAR_U1, VAR_U2, VAR_Q])?
                .min(mi(&[VAR_X3], VAR_Y2, &[VAR_X1, VAR_X2, VAR_U1, VAR_U2, VAR_Q])?),
        ),
        (
            RateMask::R13,
            mi(&[VAR_X1, VAR_X3], VAR_Y1, &[VAR_U2, VAR_Q])?
                .min(mi(&[VAR_X3], VAR_Y2, &[VAR_X2, VAR_U2, VAR_Q])?),
        ),
        (
            RateMask::R23,
            mi(&[VAR_X3], VAR_Y1, &[VAR_X1, VAR_U1, VAR_Q])?
                .min(mi(&[VAR_X2, VAR_X3], VAR_Y2, &[VAR_U1, VAR_Q])?),
        ),
        (
            RateMask::R123,
            mi(&[VAR_X1, VAR_X3], VAR_Y1, &[VAR_Q])?.min(mi(&[VAR_X2, VAR_X3], VAR_Y2, &[VAR_Q])?),
        ),
    ]))
}

/// Which region family a randomized input search optimizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionKind {
    /// MAC with a fully cognitive relay (single receiver: receiver 1).
    CognitiveMac,
    /// Compound MAC with a cognitive relay (receivers 1 and 2).
    CompoundCognitive,
    /// MAC with a relay informed of message 1 only (receiver 1).
    PartialCognitive,
    /// MAC with finite-capacity cognition links (receiver 1).
    LimitedLink(LinkCapacities),
    /// Full cMACr with decode-and-forward relaying.
    DecodeForward,
    /// Full cMACr with compress-and-forward relaying.
    CompressForward,
    /// Outer bound (requires the no-cross-link Markov channel).
    OuterBound,
}

impl std::fmt::Display for RegionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl RegionKind {
    fn tag(&self) -> &'static str {
        match self {
            RegionKind::CognitiveMac => "cogmac",
            RegionKind::CompoundCognitive => "compound",
            RegionKind::PartialCognitive => "partial",
            RegionKind::LimitedLink(_) => "limlink",
            RegionKind::DecodeForward => "df",
            RegionKind::CompressForward => "cf",
            RegionKind::OuterBound => "outer",
        }
    }
}

/// Alphabet sizes for the searched auxiliary variables and the number of
/// local refinement rounds.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub card_q: usize,
    pub card_u1: usize,
    pub card_u2: usize,
    pub card_yhat: usize,
    pub refine_rounds: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { card_q: 2, card_u1: 2, card_u2: 2, card_yhat: 2, refine_rounds: 3 }
    }
}

/// One sampled input: whatever free distribution the region kind optimizes.
#[derive(Debug, Clone)]
enum SearchSample {
    /// Cooperative factorized input (Props. with auxiliaries; CF carries a
    /// quantizer besides, with trivial auxiliaries).
    Cooperative(FactorizedInput),
    Cf(FactorizedInput, Quantizer),
    /// Partial cognition: `p(q)`, `p(x2 | q)`, `p(x1, x3 | q)`.
    Partial { card_q: usize, card_x1: usize, card_x2: usize, card_x3: usize, p_q: Vec<f64>, p_x2: Vec<f64>, p_x13: Vec<f64> },
}

fn sample_simplex<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    // Dirichlet(1, ..., 1) via normalized exponentials.
    let mut v: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let sum: f64 = v.iter().sum();
    if sum <= 0.0 {
        return vec![1.0 / n as f64; n];
    }
    v.iter_mut().for_each(|x| *x /= sum);
    v
}

fn sample_slices<R: Rng>(rng: &mut R, slice_len: usize, slices: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(slice_len * slices);
    for _ in 0..slices {
        out.extend(sample_simplex(rng, slice_len));
    }
    out
}

pub(crate) fn sample_cooperative<R: Rng>(rng: &mut R, ch: &DmcChannel, cq: usize, cu1: usize, cu2: usize) -> FactorizedInput {
    let [cx1, cx2, cx3] = ch.card_x();
    FactorizedInput {
        card_q: cq,
        card_u1: cu1,
        card_u2: cu2,
        card_x1: cx1,
        card_x2: cx2,
        card_x3: cx3,
        p_q: sample_simplex(rng, cq),
        p_x1u1: sample_slices(rng, cx1 * cu1, cq),
        p_x2u2: sample_slices(rng, cx2 * cu2, cq),
        p_x3: sample_slices(rng, cx3, cq * cu1 * cu2),
    }
}

fn sample_for_kind<R: Rng>(rng: &mut R, ch: &DmcChannel, kind: RegionKind, opts: &SearchOptions) -> SearchSample {
    let [cx1, cx2, cx3] = ch.card_x();
    match kind {
        RegionKind::PartialCognitive => SearchSample::Partial {
            card_q: opts.card_q,
            card_x1: cx1,
            card_x2: cx2,
            card_x3: cx3,
            p_q: sample_simplex(rng, opts.card_q),
            p_x2: sample_slices(rng, cx2, opts.card_q),
            p_x13: sample_slices(rng, cx1 * cx3, opts.card_q),
        },
        RegionKind::CompressForward => {
            let inp = sample_cooperative(rng, ch, opts.card_q, 1, 1);
            let qz = Quantizer {
                card_q: opts.card_q,
                card_x3: cx3,
                card_y3: ch.card_y()[2],
                card_yh: opts.card_yhat,
                probs: sample_slices(rng, opts.card_yhat, opts.card_q * cx3 * ch.card_y()[2]),
            };
            SearchSample::Cf(inp, qz)
        }
        _ => SearchSample::Cooperative(sample_cooperative(rng, ch, opts.card_q, opts.card_u1, opts.card_u2)),
    }
}

/// Mixes every distribution slice of the sample toward fresh Dirichlet noise
/// with weight `eps`, preserving the factorized structure.
fn perturb_sample<R: Rng>(s: &SearchSample, rng: &mut R, eps: f64) -> SearchSample {
    let mix = |v: &[f64], slice_len: usize, rng: &mut R| -> Vec<f64> {
        let mut out = Vec::with_capacity(v.len());
        for s in v.chunks(slice_len) {
            let noise = sample_simplex(rng, slice_len);
            let mut mixed: Vec<f64> = s.iter().zip(&noise).map(|(a, b)| (1.0 - eps) * a + eps * b).collect();
            let sum: f64 = mixed.iter().sum();
            mixed.iter_mut().for_each(|x| *x /= sum);
            out.extend(mixed);
        }
        out
    };
    match s {
        SearchSample::Cooperative(f) => SearchSample::Cooperative(FactorizedInput {
            p_q: mix(&f.p_q, f.card_q, rng),
            p_x1u1: mix(&f.p_x1u1, f.card_x1 * f.card_u1, rng),
            p_x2u2: mix(&f.p_x2u2, f.card_x2 * f.card_u2, rng),
            p_x3: mix(&f.p_x3, f.card_x3, rng),
            ..f.clone()
        }),
        SearchSample::Cf(f, qz) => SearchSample::Cf(
            FactorizedInput {
                p_q: mix(&f.p_q, f.card_q, rng),
                p_x1u1: mix(&f.p_x1u1, f.card_x1, rng),
                p_x2u2: mix(&f.p_x2u2, f.card_x2, rng),
                p_x3: mix(&f.p_x3, f.card_x3, rng),
                ..f.clone()
            },
            Quantizer { probs: mix(&qz.probs, qz.card_yh, rng), ..qz.clone() },
        ),
        SearchSample::Partial { card_q, card_x1, card_x2, card_x3, p_q, p_x2, p_x13 } => SearchSample::Partial {
            card_q: *card_q,
            card_x1: *card_x1,
            card_x2: *card_x2,
            card_x3: *card_x3,
            p_q: mix(p_q, *card_q, rng),
            p_x2: mix(p_x2, *card_x2, rng),
            p_x13: mix(p_x13, *card_x1 * *card_x3, rng),
        },
    }
}

fn fnv1a64(bytes: impl Iterator<Item = u8>) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn sample_hash(kind: RegionKind, s: &SearchSample) -> u64 {
    let mut bytes: Vec<u8> = vec![match kind {
        RegionKind::CognitiveMac => 1,
        RegionKind::CompoundCognitive => 2,
        RegionKind::PartialCognitive => 3,
        RegionKind::LimitedLink(_) => 4,
        RegionKind::DecodeForward => 5,
        RegionKind::CompressForward => 6,
        RegionKind::OuterBound => 7,
    }];
    let mut push_f64s = |v: &[f64]| {
        for x in v {
            bytes.extend_from_slice(&x.to_bits().to_le_bytes());
        }
    };
    match s {
        SearchSample::Cooperative(f) => {
            push_f64s(&f.p_q);
            push_f64s(&f.p_x1u1);
            push_f64s(&f.p_x2u2);
            push_f64s(&f.p_x3);
        }
        SearchSample::Cf(f, qz) => {
            push_f64s(&f.p_q);
            push_f64s(&f.p_x1u1);
            push_f64s(&f.p_x2u2);
            push_f64s(&f.p_x3);
            push_f64s(&qz.probs);
        }
        SearchSample::Partial { p_q, p_x2, p_x13, .. } => {
            push_f64s(p_q);
            push_f64s(p_x2);
            push_f64s(p_x13);
        }
    }
    fnv1a64(bytes.into_iter())
}

fn assemble_partial_joint(
    ch: &DmcChannel,
    card_q: usize,
    p_q: &[f64],
    p_x2: &[f64],
    p_x13: &[f64],
) -> Result<JointPmf> {
    let [cx1, cx2, cx3] = ch.card_x();
    let marg = ch.receiver_marginal(1)?;
    let cy = ch.card_y()[0];
    let cards = vec![card_q, cx1, cx2, cx3, cy];
    let mut probs = vec![0.0; cards.iter().product()];
    let mut idx = 0usize;
    for q in 0..card_q {
        for x1 in 0..cx1 {
            for x2 in 0..cx2 {
                for x3 in 0..cx3 {
                    let w = p_q[q] * p_x2[q * cx2 + x2] * p_x13[(q * cx1 + x1) * cx3 + x3];
                    let xi = (x1 * cx2 + x2) * cx3 + x3;
                    for y in 0..cy {
                        probs[idx] = w * marg[xi * cy + y];
                        idx += 1;
                    }
                }
            }
        }
    }
    JointPmf::new(vec![VAR_Q, VAR_X1, VAR_X2, VAR_X3, VAR_Y], cards, probs)
}

fn eval_sample(ch: &DmcChannel, kind: RegionKind, s: &SearchSample) -> Result<LinearRateRegion> {
    match (kind, s) {
        (RegionKind::CognitiveMac, SearchSample::Cooperative(f)) => {
            cognitive_mac_region(&assemble_mac_joint(ch, f, 1)?)
        }
        (RegionKind::LimitedLink(links), SearchSample::Cooperative(f)) => {
            limited_link_region(&assemble_mac_joint(ch, f, 1)?, &links)
        }
        (RegionKind::CompoundCognitive, SearchSample::Cooperative(f)) => {
            let joint = assemble_joint(ch, f)?
                .marginalize(&[VAR_Q, VAR_U1, VAR_U2, VAR_X1, VAR_X2, VAR_X3, VAR_Y1, VAR_Y2])?;
            compound_cognitive_region(&joint)
        }
        (RegionKind::DecodeForward, SearchSample::Cooperative(f)) => df_region_dmc(&assemble_joint(ch, f)?),
        (RegionKind::OuterBound, SearchSample::Cooperative(f)) => outer_bound_dmc(&assemble_joint(ch, f)?),
        (RegionKind::CompressForward, SearchSample::Cf(f, qz)) => {
            cf_region_dmc(&assemble_cf_joint(ch, f, qz)?)
        }
        (RegionKind::PartialCognitive, SearchSample::Partial { card_q, p_q, p_x2, p_x13, .. }) => {
            partial_cognitive_region(&assemble_partial_joint(ch, *card_q, p_q, p_x2, p_x13)?)
        }
        _ => Err(Error::InvalidParameter("search sample does not match the region kind".into())),
    }
}

/// [`search_region_with`] at the default [`SearchOptions`].
pub fn search_region(ch: &DmcChannel, kind: RegionKind, budget: usize, seed: u64) -> Result<PointCloudRegion> {
    search_region_with(ch, kind, budget, seed, &SearchOptions::default())
}

/// Randomized search for achievable rate points of `kind` on channel `ch`:
/// draws `budget` factorized inputs from per-slice flat Dirichlet
/// distributions, evaluates the region at each, and collects the greedy
/// corner points; then `refine_rounds` rounds of local perturbation improve
/// the best input per rate direction. Points carry a provenance string
/// `"<kind>#<hash>"` identifying the generating input.
///
/// Deterministic for a fixed `(budget, seed, opts)` regardless of thread
/// count: sampling is split over 16 fixed RNG streams merged in order.
pub fn search_region_with(
    ch: &DmcChannel,
    kind: RegionKind,
    budget: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<PointCloudRegion> {
    if budget == 0 {
        return Err(Error::InvalidParameter("search budget must be at least 1".into()));
    }
    if opts.card_q == 0 || opts.card_u1 == 0 || opts.card_u2 == 0 || opts.card_yhat == 0 {
        return Err(Error::InvalidParameter("search alphabet sizes must be at least 1".into()));
    }
    if kind == RegionKind::OuterBound && !verify_markov(ch) {
        return Err(Error::InvalidParameter(
            "the outer bound applies only to channels satisfying the no-cross-link Markov conditions".into(),
        ));
    }
    const CHUNKS: usize = 16;
    let counts: Vec<usize> =
        (0..CHUNKS).map(|c| budget / CHUNKS + usize::from(c < budget % CHUNKS)).collect();
    let chunks: Vec<Result<Vec<(Vec<RateTriple>, String, SearchSample)>>> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1 + c as u64);
            let mut out = Vec::with_capacity(counts[c]);
            for _ in 0..counts[c] {
                let s = sample_for_kind(&mut rng, ch, kind, opts);
                let region = eval_sample(ch, kind, &s)?;
                let prov = format!("{}#{:016x}", kind.tag(), sample_hash(kind, &s));
                out.push((region.greedy_corners(), prov, s));
            }
            Ok(out)
        })
        .collect();
    let mut entries: Vec<(Vec<RateTriple>, String, SearchSample)> = Vec::with_capacity(budget);
    for chunk in chunks {
        entries.extend(chunk?);
    }

    // Local refinement: per rate direction, hill-climb from the currently
    // best sample by mixing toward fresh noise with shrinking weight.
    let dirs = [
        RateMask::R1,
        RateMask::R2,
        RateMask::R3,
        RateMask::R12,
        RateMask::R13,
        RateMask::R23,
        RateMask::R123,
    ];
    let proposals = (budget / 64).max(1);
    for round in 0..opts.refine_rounds {
        let eps = 0.3 / 2f64.powi(round as i32);
        for (k, dir) in dirs.iter().enumerate() {
            let mut best_val = f64::NEG_INFINITY;
            let mut best_idx = None;
            for (i, (corners, _, _)) in entries.iter().enumerate() {
                for c in corners {
                    let v = dir.dot(c);
                    if v > best_val {
                        best_val = v;
                        best_idx = Some(i);
                    }
                }
            }
            let Some(best_idx) = best_idx else { continue };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(101 + (round * dirs.len() + k) as u64);
            let mut seed_sample = entries[best_idx].2.clone();
            let mut seed_val = best_val;
            for _ in 0..proposals {
                let cand = perturb_sample(&seed_sample, &mut rng, eps);
                let region = eval_sample(ch, kind, &cand)?;
                let corners = region.greedy_corners();
                if corners.is_empty() {
                    continue;
                }
                let v = corners.iter().map(|c| dir.dot(c)).fold(f64::NEG_INFINITY, f64::max);
                let prov = format!("{}#{:016x}", kind.tag(), sample_hash(kind, &cand));
                let adopt = v > seed_val;
                entries.push((corners, prov, cand));
                if adopt {
                    seed_val = v;
                    seed_sample = entries.last().expect("just pushed").2.clone();
                }
            }
        }
    }

    let mut points = Vec::new();
    for (corners, prov, _) in &entries {
        for c in corners {
            points.push(CloudPoint::new(*c, prov.clone()));
        }
    }
    Ok(PointCloudRegion::from_points(points).pareto_pruned())
}
