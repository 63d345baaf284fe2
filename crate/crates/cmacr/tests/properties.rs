//! Property-based tests for the public API: information measures, region
//! algebra, Gaussian evaluators, and serialization.

use cmacr::gaussian::{
    db_to_linear, cf_region_at, df_region_at, outer_region_at, CfSplit, DfSplit, GaussianChannel,
};
use cmacr::infomeasure::JointPmf;
use cmacr::region::{Constraint, LinearRateRegion, RateMask, RateTriple};
use proptest::prelude::*;

/// Weights for a small pmf over three axes of cards (2, 3, 2); kept away
/// from zero so normalization is well conditioned.
fn pmf_weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3..1.0f64, 12)
}

fn normalized(weights: Vec<f64>) -> JointPmf {
    let sum: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / sum).collect();
    JointPmf::new(vec!["a", "b", "c"], vec![2, 3, 2], probs).expect("normalized pmf is valid")
}

fn arb_channel() -> impl Strategy<Value = GaussianChannel> {
    (0.05..50.0f64, 0.05..50.0f64, 0.05..50.0f64, 0.05..20.0f64, 0.05..20.0f64).prop_map(
        |(p1, p2, p3, g2, e2)| {
            GaussianChannel::from_squared_gains(p1, p2, p3, g2, e2).expect("parameters in range")
        },
    )
}

fn arb_split() -> impl Strategy<Value = DfSplit> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64)
        .prop_map(|(a1, a2, v, w)| DfSplit::new(a1, a2, v * w, v * (1.0 - w)).expect("valid split"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conditional_mi_nonnegative_and_symmetric(weights in pmf_weights()) {
        let j = normalized(weights);
        let ab = j.conditional_mi(&["a"], &["b"], &["c"]).unwrap();
        let ba = j.conditional_mi(&["b"], &["a"], &["c"]).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() < 1e-9);
    }

    #[test]
    fn entropy_chain_rule(weights in pmf_weights()) {
        let j = normalized(weights);
        let joint = j.entropy(&["a", "b"]).unwrap();
        let split = j.entropy(&["b"]).unwrap() + j.conditional_entropy(&["a"], &["b"]).unwrap();
        prop_assert!((joint - split).abs() < 1e-9);
    }

    #[test]
    fn mi_bounded_by_entropy(weights in pmf_weights()) {
        let j = normalized(weights);
        let mi = j.conditional_mi(&["a"], &["b", "c"], &[]).unwrap();
        let h = j.entropy(&["a"]).unwrap();
        prop_assert!(mi <= h + 1e-9);
    }

    #[test]
    fn pmf_json_roundtrip_bit_exact(weights in pmf_weights()) {
        let j = normalized(weights);
        let back = JointPmf::from_json(&j.to_json()).unwrap();
        prop_assert_eq!(j.probs(), back.probs());
        prop_assert_eq!(j.labels(), back.labels());
    }

    #[test]
    fn marginalization_preserves_entropy_of_kept_vars(weights in pmf_weights()) {
        let j = normalized(weights);
        let m = j.marginalize(&["a", "c"]).unwrap();
        let h_full = j.entropy(&["a", "c"]).unwrap();
        let h_marg = m.entropy(&["a", "c"]).unwrap();
        prop_assert!((h_full - h_marg).abs() < 1e-9);
    }

    #[test]
    fn df_region_inside_outer_bound(ch in arb_channel(), s in arb_split()) {
        let df = df_region_at(&ch, &s).unwrap();
        let outer = outer_region_at(&ch, &s).unwrap();
        for corner in df.greedy_corners() {
            prop_assert!(outer.contains(&corner), "corner {corner:?} escapes");
        }
    }

    #[test]
    fn df_bounds_swap_under_user_relabel(ch in arb_channel(), s in arb_split()) {
        let a = df_region_at(&ch, &s).unwrap();
        let b = df_region_at(&ch.swap_users(), &s.swap_users()).unwrap();
        prop_assert_eq!(a.bound_for(RateMask::R1).unwrap().to_bits(),
                        b.bound_for(RateMask::R2).unwrap().to_bits());
        prop_assert_eq!(a.bound_for(RateMask::R12).unwrap().to_bits(),
                        b.bound_for(RateMask::R12).unwrap().to_bits());
    }

    #[test]
    fn cf_region_corners_nonnegative_and_contained(ch in arb_channel(), a1 in 0.0..=1.0f64, a2 in 0.0..=1.0f64) {
        let s = CfSplit::new(a1, a2).unwrap();
        let r = cf_region_at(&ch, &s).unwrap();
        for corner in r.greedy_corners() {
            prop_assert!(corner.r1 >= 0.0 && corner.r2 >= 0.0);
            prop_assert!(r.contains(&corner));
        }
    }

    #[test]
    fn greedy_corners_always_feasible(b1 in 0.0..3.0f64, b2 in 0.0..3.0f64, b12 in 0.0..5.0f64, b3 in 0.0..2.0f64) {
        let region = LinearRateRegion::new(vec![
            Constraint::new(RateMask::R1, b1),
            Constraint::new(RateMask::R2, b2),
            Constraint::new(RateMask::R12, b12),
            Constraint::new(RateMask::R3, b3),
        ]).unwrap();
        for corner in region.greedy_corners() {
            prop_assert!(region.contains(&corner), "corner {corner:?} infeasible");
        }
    }

    #[test]
    fn intersection_is_exact_meet(b in 0.0..3.0f64, c in 0.0..3.0f64, r1 in 0.0..3.0f64, r2 in 0.0..3.0f64) {
        let x = LinearRateRegion::new(vec![
            Constraint::new(RateMask::R1, b),
            Constraint::new(RateMask::R12, b + 0.5),
        ]).unwrap();
        let y = LinearRateRegion::new(vec![
            Constraint::new(RateMask::R2, c),
            Constraint::new(RateMask::R12, c + 0.7),
        ]).unwrap();
        let meet = x.intersect(&y);
        let t = RateTriple::new(r1, r2, 0.0).unwrap();
        prop_assert_eq!(meet.contains(&t), x.contains(&t) && y.contains(&t));
    }

    #[test]
    fn region_json_roundtrip(b1 in 0.0..4.0f64, b12 in 0.0..6.0f64) {
        let region = LinearRateRegion::new(vec![
            Constraint::new(RateMask::R1, b1),
            Constraint::new(RateMask::R12, b12),
        ]).unwrap();
        let back = LinearRateRegion::from_json(&region.to_json()).unwrap();
        prop_assert_eq!(back.bound_for(RateMask::R1).unwrap().to_bits(), b1.to_bits());
        prop_assert_eq!(back.bound_for(RateMask::R12).unwrap().to_bits(), b12.to_bits());
    }

    #[test]
    fn db_conversion_monotone(a in -30.0..30.0f64, d in 0.01..10.0f64) {
        prop_assert!(db_to_linear(a + d) > db_to_linear(a));
    }

    #[test]
    fn rate_mask_roundtrip(bits in 1u8..8) {
        let mask = RateMask::from_rates(&{
            let mut v = Vec::new();
            for j in 1..=3 {
                if bits & (1 << (j - 1)) != 0 {
                    v.push(j);
                }
            }
            v
        }).unwrap();
        let back = RateMask::from_rates(&mask.rates()).unwrap();
        prop_assert_eq!(mask, back);
    }
}
