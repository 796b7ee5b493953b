//! Randomized properties of the public API.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use padic_char::dist_algebra::epsilon_r;
use padic_char::formal_characters::{smooth_trace, smooth_trace_standard_closed, Covering};
use padic_char::padic_core::{
    fmt_rational, parse_rational, residue_split, vp, PContext, Valuation,
};
use padic_char::principal_series::{
    iwahori_action_matrix, sl2_action_matrix, sl2_partial_closed_form, sl2_trace, theta_sl2,
    theta_sl2_smooth, weyl_char_sl2, RootDatum, SL2Config, Side,
};
use padic_char::pro_p_groups::{change_basis, p_elementary_divisors, random_unimodular, PLattice};

type Q = BigRational;

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7)]
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    (-500i64..=500, 1i64..=500)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

/// A rational `p`-adic unit for the given prime.
fn unit(p: u64) -> impl Strategy<Value = Q> {
    (-200i64..=200, 1i64..=200)
        .prop_filter("unit", move |(n, d)| {
            *n != 0 && n % p as i64 != 0 && d % p as i64 != 0
        })
        .prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn finite(v: Valuation) -> i64 {
    v.finite().expect("nonzero")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_is_additive(p in prime(), x in nonzero_rational(), y in nonzero_rational()) {
        prop_assert_eq!(finite(vp(&(&x * &y), p)), finite(vp(&x, p)) + finite(vp(&y, p)));
    }

    #[test]
    fn valuation_of_sum_is_at_least_min(p in prime(), x in nonzero_rational(), y in nonzero_rational()) {
        let s = &x + &y;
        if !s.is_zero() {
            prop_assert!(finite(vp(&s, p)) >= finite(vp(&x, p)).min(finite(vp(&y, p))));
        }
    }

    #[test]
    fn rational_text_round_trips(x in nonzero_rational()) {
        prop_assert_eq!(parse_rational(&fmt_rational(&x)).unwrap(), x);
    }

    #[test]
    fn residue_split_reassembles(p in prime(), n in -1000i64..1000, d in 1i64..50, h in 0u32..5) {
        prop_assume!(d % p as i64 != 0);
        let c = Q::new(n.into(), d.into());
        let (r, q) = residue_split(&c, p, h).unwrap();
        prop_assert_eq!(Q::from_integer(r.clone()) + &q, c);
        prop_assert!(r >= BigInt::zero() && r < BigInt::from(p).pow(h));
        if !q.is_zero() {
            prop_assert!(finite(vp(&q, p)) >= i64::from(h));
        }
    }

    #[test]
    fn smooth_trace_matches_closed_form(s in unit(3), h in 0u32..5) {
        prop_assert_eq!(
            smooth_trace(3, h, &s, Covering::Standard).unwrap(),
            smooth_trace_standard_closed(3, h, &s)
        );
    }

    #[test]
    fn epsilon_scales_under_pth_roots(p in prime(), n in 1i64..40, d in 1i64..40) {
        prop_assume!(n <= d);
        let ctx = PContext::new(p).unwrap();
        let q = Q::new(n.into(), d.into());
        let (_, e) = epsilon_r(&q, ctx).unwrap();
        let (_, e_root) = epsilon_r(&(q / Q::from_integer(p.into())), ctx).unwrap();
        prop_assert_eq!(e_root, e * BigInt::from(p));
    }

    #[test]
    fn elementary_divisors_ignore_bases(seed in any::<u64>(), e1 in 0i64..4, e2 in 0i64..4, e3 in 0i64..4) {
        let p = 3u64;
        let diag = |d: [i64; 3]| {
            PLattice::new(p, (0..3).map(|j| (0..3).map(|i| if i == j { d[j] } else { 0 }).collect()).collect(), None).unwrap()
        };
        let pw = |e: i64| 3i64.pow(e as u32);
        let lam = diag([1, 1, 1]);
        let sub = diag([pw(e1), 2 * pw(e2), pw(e3)]);
        let mut expect = vec![e1 as u32, e2 as u32, e3 as u32];
        expect.sort();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u1 = random_unimodular(3, &mut rng, 10);
        let u2 = random_unimodular(3, &mut rng, 10);
        let d = p_elementary_divisors(&change_basis(&lam, &u1), &change_basis(&sub, &u2)).unwrap();
        prop_assert_eq!(d.0, expect);
    }

    #[test]
    fn alternating_sum_identities_hold(p in prop_oneof![Just(3u64), Just(5), Just(7)], a in unit(7), c in -4i64..=0) {
        prop_assume!(vp(&a, p) == Valuation::Finite(0));
        prop_assume!(a != Q::one() && a != -Q::one());
        let smooth = theta_sl2_smooth(p, &a, &Q::one()).unwrap();
        let th = |c: i64| theta_sl2(p, &a, c).unwrap();
        prop_assert_eq!(th(2) - th(0) + &smooth, Q::zero());
        prop_assert_eq!(th(2 - c) - th(c), smooth * weyl_char_sl2(&a, c).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sl2_action_is_multiplicative(s in unit(3), t in unit(3), c in -2i64..=2, minus in any::<bool>()) {
        let cfg = SL2Config::new(3, c, 1, 1, 0, 3).unwrap();
        let side = if minus { Side::Minus } else { Side::Plus };
        let lhs = sl2_action_matrix(&s, &cfg, side).unwrap()
            .mul(&sl2_action_matrix(&t, &cfg, side).unwrap()).unwrap();
        prop_assert_eq!(lhs, sl2_action_matrix(&(&s * &t), &cfg, side).unwrap());
    }

    #[test]
    fn sl2_traces_match_partial_forms(a in unit(5), c in -2i64..=2, h in 0u32..3, e in 0u32..2) {
        prop_assume!(a != Q::one() && a != -Q::one());
        let cfg = SL2Config::new(5, c, h, h, e, 3).unwrap();
        for side in [Side::Plus, Side::Minus] {
            prop_assert_eq!(
                sl2_trace(&a, &cfg, side).unwrap(),
                sl2_partial_closed_form(&a, &cfg, side).unwrap()
            );
        }
    }

    #[test]
    fn iwahori_action_is_multiplicative(s in (unit(3), unit(3)), t in (unit(3), unit(3))) {
        let rd = RootDatum {
            p: 3,
            torus_rank: 2,
            roots: vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            chi_w: vec![1, -1],
            levels: vec![1, 1, 1],
            k: 2,
        };
        let s = vec![s.0, s.1];
        let t = vec![t.0, t.1];
        let st: Vec<Q> = s.iter().zip(&t).map(|(x, y)| x * y).collect();
        let lhs = iwahori_action_matrix(&s, &rd).unwrap()
            .mul(&iwahori_action_matrix(&t, &rd).unwrap()).unwrap();
        prop_assert_eq!(lhs, iwahori_action_matrix(&st, &rd).unwrap());
    }
}
