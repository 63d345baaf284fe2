//! Exact information measures over small dense joint pmfs, plus the Gaussian
//! capacity function.
//!
//! Everything here is exact summation over a dense tensor — no sampling, no
//! estimation. Alphabets are expected to stay tiny (a handful of values per
//! axis), so an explicit row-major tensor is both the simplest and the
//! fastest representation.
//!
//! All logarithms are base 2; entropies and mutual informations are in bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used when checking that probabilities sum to one.
pub const NORM_TOL: f64 = 1e-12;

/// Gaussian capacity function `C(x) = 1/2 * log2(1 + x)` in bits per use.
///
/// Errors when `x` is negative, NaN or infinite.
pub fn capacity_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "capacity_fn requires finite x >= 0, got {x}"
        )));
    }
    Ok(0.5 * (1.0 + x).log2())
}

/// Capacity function for arguments that are analytically nonnegative but may
/// dip a hair below zero from floating-point cancellation.
pub(crate) fn capacity_clamped(x: f64) -> f64 {
    debug_assert!(x > -1e-9, "capacity argument {x} is negative beyond rounding");
    0.5 * (1.0 + x.max(0.0)).log2()
}

/// A dense joint probability mass function over named discrete variables.
///
/// The tensor is stored row-major in the order of `labels`. Variables are
/// addressed by label everywhere; axis order is an internal detail except
/// that [`JointPmf::marginalize`] preserves the relative order of the kept
/// axes.
#[derive(Debug, Clone)]
pub struct JointPmf {
    labels: Vec<String>,
    cards: Vec<usize>,
    probs: Vec<f64>,
}

/// Serialized form: `{"vars": [...], "cards": [...], "probs": [...]}`.
#[derive(Serialize, Deserialize)]
struct PmfJson {
    vars: Vec<String>,
    cards: Vec<usize>,
    probs: Vec<f64>,
}

fn strides_of(cards: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * cards[i + 1];
    }
    s
}

impl JointPmf {
    /// Builds a joint pmf, validating shape and normalization.
    ///
    /// Requirements: at least one variable, unique labels, every cardinality
    /// at least 1, `probs.len()` equal to the product of cardinalities, all
    /// entries nonnegative and summing to 1 within [`NORM_TOL`]. A vector
    /// that fails normalization is rejected, never renormalized.
    pub fn new<S: Into<String>>(labels: Vec<S>, cards: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::ShapeMismatch("a joint pmf needs at least one variable".into()));
        }
        if labels.len() != cards.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels but {} cardinalities",
                labels.len(),
                cards.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::UnknownVariable(format!("duplicate variable label '{l}'")));
            }
        }
        if cards.iter().any(|&c| c == 0) {
            return Err(Error::ShapeMismatch("every cardinality must be at least 1".into()));
        }
        let len: usize = cards.iter().product();
        if probs.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "expected {len} probabilities for cards {cards:?}, got {}",
                probs.len()
            )));
        }
        let mut sum = 0.0;
        for &p in &probs {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::NotNormalized(format!("probability entry {p} is not in [0, 1]")));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(JointPmf { labels, cards, probs })
    }

    /// Variable labels in axis order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Cardinalities in axis order.
    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    /// The dense probability tensor, row-major in axis order.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Cardinality of a single named variable.
    pub fn card_of(&self, var: &str) -> Result<usize> {
        let ax = self
            .labels
            .iter()
            .position(|l| l == var)
            .ok_or_else(|| Error::UnknownVariable(var.into()))?;
        Ok(self.cards[ax])
    }

    /// Resolves labels to axis indices; errors on unknown or repeated labels.
    fn resolve(&self, vars: &[&str]) -> Result<Vec<usize>> {
        let mut axes = Vec::with_capacity(vars.len());
        for v in vars {
            let ax = self
                .labels
                .iter()
                .position(|l| l == v)
                .ok_or_else(|| Error::UnknownVariable((*v).into()))?;
            if axes.contains(&ax) {
                return Err(Error::UnknownVariable(format!("variable '{v}' listed twice")));
            }
            axes.push(ax);
        }
        Ok(axes)
    }

    /// Marginal over `keep`, dropping every other axis. Kept axes retain
    /// their original relative order regardless of the order in `keep`.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointPmf> {
        if keep.is_empty() {
            return Err(Error::ShapeMismatch("marginalize needs at least one kept variable".into()));
        }
        let mut axes = self.resolve(keep)?;
        axes.sort_unstable();
        Ok(self.marginalize_axes(&axes))
    }

    /// Internal marginal over ascending axis indices (assumed valid).
    fn marginalize_axes(&self, axes: &[usize]) -> JointPmf {
        let out_cards: Vec<usize> = axes.iter().map(|&a| self.cards[a]).collect();
        let out_labels: Vec<String> = axes.iter().map(|&a| self.labels[a].clone()).collect();
        let in_strides = strides_of(&self.cards);
        let out_strides = strides_of(&out_cards);
        let mut out = vec![0.0; out_cards.iter().product()];
        for (flat, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut oi = 0;
            for (k, &ax) in axes.iter().enumerate() {
                oi += (flat / in_strides[ax]) % self.cards[ax] * out_strides[k];
            }
            out[oi] += p;
        }
        JointPmf { labels: out_labels, cards: out_cards, probs: out }
    }

    /// Renames a variable; the new label must not collide with an existing one.
    pub fn rename_var(&self, old: &str, new: &str) -> Result<JointPmf> {
        let ax = self
            .labels
            .iter()
            .position(|l| l == old)
            .ok_or_else(|| Error::UnknownVariable(old.into()))?;
        if self.labels.iter().any(|l| l == new) {
            return Err(Error::UnknownVariable(format!("label '{new}' already present")));
        }
        let mut labels = self.labels.clone();
        labels[ax] = new.into();
        Ok(JointPmf { labels, cards: self.cards.clone(), probs: self.probs.clone() })
    }

    /// Joint entropy `H(vars)` in bits. An empty list yields 0.
    pub fn entropy(&self, vars: &[&str]) -> Result<f64> {
        if vars.is_empty() {
            return Ok(0.0);
        }
        let mut axes = self.resolve(vars)?;
        axes.sort_unstable();
        let m = self.marginalize_axes(&axes);
        let mut h = 0.0;
        for &p in &m.probs {
            if p > 0.0 {
                h -= p * p.log2();
            }
        }
        Ok(h.max(0.0))
    }

    /// Conditional entropy `H(a | given) = H(a, given) - H(given)`.
    pub fn conditional_entropy(&self, a: &[&str], given: &[&str]) -> Result<f64> {
        if a.is_empty() {
            return Err(Error::ShapeMismatch("conditional_entropy needs a nonempty target".into()));
        }
        let mut all: Vec<&str> = a.to_vec();
        for g in given {
            if a.contains(g) {
                return Err(Error::UnknownVariable(format!(
                    "variable '{g}' appears on both sides of the conditioning bar"
                )));
            }
            all.push(g);
        }
        let joint = self.entropy(&all)?;
        let cond = self.entropy(given)?;
        Ok((joint - cond).max(0.0))
    }

    /// Conditional mutual information `I(a ; b | given)` in bits.
    ///
    /// The three variable sets must be nonempty (`a`, `b`) and pairwise
    /// disjoint. Computed by exact summation of
    /// `sum p(a,b,g) log2[ p(a,b|g) / (p(a|g) p(b|g)) ]` over cells with
    /// positive joint mass.
    pub fn conditional_mi(&self, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::ShapeMismatch("conditional_mi needs nonempty variable sets".into()));
        }
        // Disjointness across the three groups.
        for (set1, set2, what) in [(a, b, "a/b"), (a, given, "a/given"), (b, given, "b/given")] {
            for v in set1 {
                if set2.contains(v) {
                    return Err(Error::UnknownVariable(format!(
                        "variable '{v}' appears in both {what} groups"
                    )));
                }
            }
        }
        let a_axes = self.resolve(a)?;
        let b_axes = self.resolve(b)?;
        let g_axes = self.resolve(given)?;

        // Reduce to just the involved axes, in original order.
        let mut union: Vec<usize> = a_axes.iter().chain(&b_axes).chain(&g_axes).copied().collect();
        union.sort_unstable();
        let r = self.marginalize_axes(&union);

        // Classify the reduced axes and lay out the three sub-marginals.
        #[derive(Clone, Copy, PartialEq)]
        enum Grp {
            A,
            B,
            G,
        }
        let grp: Vec<Grp> = union
            .iter()
            .map(|ax| {
                if a_axes.contains(ax) {
                    Grp::A
                } else if b_axes.contains(ax) {
                    Grp::B
                } else {
                    Grp::G
                }
            })
            .collect();

        // Strides for the (a,g), (b,g) and (g) marginals over reduced axes.
        let sub_strides = |want: &dyn Fn(Grp) -> bool| -> (Vec<usize>, usize) {
            let mut strides = vec![0usize; r.cards.len()];
            let mut size = 1usize;
            for i in (0..r.cards.len()).rev() {
                if want(grp[i]) {
                    strides[i] = size;
                    size *= r.cards[i];
                }
            }
            (strides, size)
        };
        let (ag_str, ag_len) = sub_strides(&|g| g != Grp::B);
        let (bg_str, bg_len) = sub_strides(&|g| g != Grp::A);
        let (g_str, g_len) = sub_strides(&|g| g == Grp::G);

        let mut p_ag = vec![0.0; ag_len];
        let mut p_bg = vec![0.0; bg_len];
        let mut p_g = vec![0.0; g_len];

        let n_axes = r.cards.len();
        let mut coord = vec![0usize; n_axes];
        let mut idx = (0usize, 0usize, 0usize); // (ag, bg, g) running indices
        for &m in &r.probs {
            if m > 0.0 {
                p_ag[idx.0] += m;
                p_bg[idx.1] += m;
                p_g[idx.2] += m;
            }
            // Odometer increment, updating the three flat indices in step.
            for ax in (0..n_axes).rev() {
                coord[ax] += 1;
                idx.0 += ag_str[ax];
                idx.1 += bg_str[ax];
                idx.2 += g_str[ax];
                if coord[ax] < r.cards[ax] {
                    break;
                }
                coord[ax] = 0;
                idx.0 -= ag_str[ax] * r.cards[ax];
                idx.1 -= bg_str[ax] * r.cards[ax];
                idx.2 -= g_str[ax] * r.cards[ax];
            }
        }

        coord.iter_mut().for_each(|c| *c = 0);
        idx = (0, 0, 0);
        let mut mi = 0.0;
        for &m in &r.probs {
            if m > 0.0 {
                // p(a,b|g) / (p(a|g) p(b|g)) == m * p(g) / (p(a,g) p(b,g)).
                mi += m * (m * p_g[idx.2] / (p_ag[idx.0] * p_bg[idx.1])).log2();
            }
            for ax in (0..n_axes).rev() {
                coord[ax] += 1;
                idx.0 += ag_str[ax];
                idx.1 += bg_str[ax];
                idx.2 += g_str[ax];
                if coord[ax] < r.cards[ax] {
                    break;
                }
                coord[ax] = 0;
                idx.0 -= ag_str[ax] * r.cards[ax];
                idx.1 -= bg_str[ax] * r.cards[ax];
                idx.2 -= g_str[ax] * r.cards[ax];
            }
        }
        debug_assert!(mi > -1e-9, "conditional MI {mi} negative beyond rounding");
        Ok(mi.max(0.0))
    }

    /// Maximum absolute cell difference against another pmf with identical
    /// labels and cardinalities (axis order must match).
    pub(crate) fn max_abs_diff(&self, other: &JointPmf) -> Result<f64> {
        if self.labels != other.labels || self.cards != other.cards {
            return Err(Error::ShapeMismatch("pmfs differ in variables or cardinalities".into()));
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max))
    }

    /// Serializes to the external JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PmfJson {
            vars: self.labels.clone(),
            cards: self.cards.clone(),
            probs: self.probs.clone(),
        })
        .expect("pmf serialization cannot fail")
    }

    /// Parses the external JSON form, applying the same validation as
    /// [`JointPmf::new`].
    pub fn from_json(s: &str) -> Result<JointPmf> {
        let raw: PmfJson = serde_json::from_str(s)?;
        JointPmf::new(raw.vars, raw.cards, raw.probs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(x: f64, y: f64) -> bool {
        (x - y).abs() < 1e-9
    }

    #[test]
    fn capacity_known_points() {
        assert_eq!(capacity_fn(0.0).unwrap(), 0.0);
        assert!(bits(capacity_fn(1.0).unwrap(), 0.5));
        assert!(bits(capacity_fn(3.0).unwrap(), 1.0));
    }

    #[test]
    fn capacity_rejects_bad_domain() {
        assert!(capacity_fn(-0.1).is_err());
        assert!(capacity_fn(f64::NAN).is_err());
        assert!(capacity_fn(f64::INFINITY).is_err());
    }

    #[test]
    fn pmf_validation() {
        // Wrong length.
        assert!(JointPmf::new(vec!["x"], vec![2], vec![1.0]).is_err());
        // Not normalized.
        assert!(JointPmf::new(vec!["x"], vec![2], vec![0.6, 0.5]).is_err());
        // Negative entry.
        assert!(JointPmf::new(vec!["x"], vec![2], vec![1.1, -0.1]).is_err());
        // Duplicate label.
        assert!(JointPmf::new(vec!["x", "x"], vec![2, 2], vec![0.25; 4]).is_err());
        // Zero cardinality.
        assert!(JointPmf::new(vec!["x"], vec![0], vec![]).is_err());
        // Valid.
        assert!(JointPmf::new(vec!["x", "y"], vec![2, 2], vec![0.25; 4]).is_ok());
    }

    #[test]
    fn marginalize_uniform() {
        let j = JointPmf::new(vec!["x", "y"], vec![2, 3], vec![1.0 / 6.0; 6]).unwrap();
        let m = j.marginalize(&["x"]).unwrap();
        assert_eq!(m.cards(), &[2]);
        assert!(bits(m.probs()[0], 0.5));
        assert!(j.marginalize(&["z"]).is_err());
        assert!(j.marginalize(&[]).is_err());
        // Kept axes keep original order even when requested reversed.
        let all = j.marginalize(&["y", "x"]).unwrap();
        assert_eq!(all.labels(), &["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn entropy_uniform_and_deterministic() {
        let j = JointPmf::new(vec!["x", "y"], vec![4, 2], vec![0.125; 8]).unwrap();
        assert!(bits(j.entropy(&["x"]).unwrap(), 2.0));
        assert!(bits(j.entropy(&["x", "y"]).unwrap(), 3.0));
        assert!(bits(j.conditional_entropy(&["y"], &["x"]).unwrap(), 1.0));
        // Copy channel: H(Y|X) = 0.
        let copy = JointPmf::new(vec!["x", "y"], vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(bits(copy.conditional_entropy(&["y"], &["x"]).unwrap(), 0.0));
        assert!(bits(copy.entropy(&[]).unwrap(), 0.0));
    }

    #[test]
    fn mi_of_copy_and_independent() {
        let copy = JointPmf::new(vec!["x", "y"], vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(bits(copy.conditional_mi(&["x"], &["y"], &[]).unwrap(), 1.0));
        let indep = JointPmf::new(vec!["x", "y"], vec![2, 2], vec![0.25; 4]).unwrap();
        assert!(bits(indep.conditional_mi(&["x"], &["y"], &[]).unwrap(), 0.0));
    }

    #[test]
    fn mi_rejects_overlap_and_unknowns() {
        let j = JointPmf::new(vec!["x", "y", "z"], vec![2, 2, 2], vec![0.125; 8]).unwrap();
        assert!(j.conditional_mi(&["x"], &["x"], &[]).is_err());
        assert!(j.conditional_mi(&["x"], &["y"], &["x"]).is_err());
        assert!(j.conditional_mi(&["x"], &["w"], &[]).is_err());
        assert!(j.conditional_mi(&[], &["y"], &[]).is_err());
    }

    #[test]
    fn bsc_mutual_information_matches_analytic_value() {
        // X uniform through a binary symmetric channel with crossover 0.11.
        let d = 0.11;
        let j = JointPmf::new(
            vec!["x", "y"],
            vec![2, 2],
            vec![0.5 * (1.0 - d), 0.5 * d, 0.5 * d, 0.5 * (1.0 - d)],
        )
        .unwrap();
        let mi = j.conditional_mi(&["x"], &["y"], &[]).unwrap();
        // Independent closed form: 1 - h2(delta).
        let h2 = -d * d.log2() - (1.0 - d) * (1.0 - d).log2();
        assert!((mi - (1.0 - h2)).abs() < 1e-12);
        // Frozen reference value.
        assert!((mi - 0.500084041835472).abs() < 1e-9);
    }

    #[test]
    fn conditional_mi_with_conditioning() {
        // Z = X XOR Y with X,Y independent uniform: I(X;Z)=0 but I(X;Z|Y)=1.
        let mut probs = vec![0.0; 8];
        for x in 0..2usize {
            for y in 0..2usize {
                let z = x ^ y;
                probs[x * 4 + y * 2 + z] = 0.25;
            }
        }
        let j = JointPmf::new(vec!["x", "y", "z"], vec![2, 2, 2], probs).unwrap();
        assert!(bits(j.conditional_mi(&["x"], &["z"], &[]).unwrap(), 0.0));
        assert!(bits(j.conditional_mi(&["x"], &["z"], &["y"]).unwrap(), 1.0));
        // Chain rule cross-check: I(X;YZ) = I(X;Y) + I(X;Z|Y).
        let lhs = j.conditional_mi(&["x"], &["y", "z"], &[]).unwrap();
        let rhs = j.conditional_mi(&["x"], &["y"], &[]).unwrap()
            + j.conditional_mi(&["x"], &["z"], &["y"]).unwrap();
        assert!(bits(lhs, rhs));
    }

    #[test]
    fn rename_and_json_roundtrip() {
        let j = JointPmf::new(vec!["x", "y"], vec![2, 2], vec![0.25; 4]).unwrap();
        let r = j.rename_var("x", "u").unwrap();
        assert_eq!(r.labels(), &["u".to_string(), "y".to_string()]);
        assert!(j.rename_var("x", "y").is_err());
        assert!(j.rename_var("w", "v").is_err());

        let s = j.to_json();
        let back = JointPmf::from_json(&s).unwrap();
        assert_eq!(back.labels(), j.labels());
        assert_eq!(back.cards(), j.cards());
        assert!(back.max_abs_diff(&j).unwrap() < 1e-15);
        // Bad JSON payloads are rejected with validation, not panics.
        assert!(JointPmf::from_json("{\"vars\":[\"x\"],\"cards\":[2],\"probs\":[0.7,0.4]}").is_err());
    }
}
