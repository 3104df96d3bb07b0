use std::collections::BTreeSet;

use proptest::prelude::*;

use htforge::certificate::Certificate;
use htforge::countable::{HAction, PartialPerm};
use htforge::driver::{synthesize, SynthConfig};
use htforge::geometry::{
    four_point_condition, member_y, member_y_by_cosets, member_ybar, member_ybar_by_cosets, word_distance,
};
use htforge::{FactorSpec, FreeProduct, Letter, Side, Word};

fn product(g: &str, h: &str) -> FreeProduct {
    FreeProduct::new(FactorSpec::parse(Side::G, g).unwrap(), FactorSpec::parse(Side::H, h).unwrap())
}

fn products() -> Vec<FreeProduct> {
    vec![product("c2", "c3"), product("z", "z"), product("c3", "c4")]
}

/// Raw letters, not necessarily reduced, in reading order.
fn letters() -> impl Strategy<Value = Vec<(bool, i64)>> {
    prop::collection::vec((any::<bool>(), -4i64..=4), 0..10)
}

fn word(fp: &FreeProduct, raw: &[(bool, i64)]) -> Word {
    fp.reduce(
        raw.iter().map(|&(g, c)| Letter::new(if g { Side::G } else { Side::H }, c)).map(|l| fp.letter(l.side, l.code)),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_laws(p in 0usize..3, a in letters(), b in letters(), c in letters()) {
        let fp = &products()[p];
        let (u, v, w) = (word(fp, &a), word(fp, &b), word(fp, &c));
        prop_assert!(fp.is_normal_form(&u));
        prop_assert_eq!(fp.multiply(&fp.multiply(&u, &v), &w), fp.multiply(&u, &fp.multiply(&v, &w)));
        prop_assert_eq!(fp.inverse(&fp.inverse(&u)), u.clone());
        prop_assert!(fp.multiply(&u, &fp.inverse(&u)).is_identity());
        prop_assert_eq!(fp.multiply(&u, &Word::identity()), u.clone());
        prop_assert!(fp.multiply(&u, &v).len() <= u.len() + v.len());
        prop_assert_eq!(fp.inverse(&fp.multiply(&u, &v)), fp.multiply(&fp.inverse(&v), &fp.inverse(&u)));
    }

    #[test]
    fn reading_order_is_multiplication(p in 0usize..3, a in letters(), b in letters()) {
        let fp = &products()[p];
        let whole: Vec<(bool, i64)> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(word(fp, &whole), fp.multiply(&word(fp, &a), &word(fp, &b)));
    }

    #[test]
    fn base_action_is_left_multiplication(p in 0usize..3, a in letters(), b in letters(), c in letters()) {
        let fp = &products()[p];
        let act = HAction::base(fp.clone());
        let (u, v, x) = (word(fp, &a), word(fp, &b), word(fp, &c));
        prop_assert_eq!(act.eval_word(&u, &x), fp.multiply(&u, &x));
        prop_assert_eq!(act.eval_word(&fp.multiply(&u, &v), &x), act.eval_word(&u, &act.eval_word(&v, &x)));
    }

    #[test]
    fn metric_is_a_tree_metric(a in letters(), b in letters(), c in letters(), d in letters()) {
        let fp = product("c2", "c3");
        let (u, v, w, x) = (word(&fp, &a), word(&fp, &b), word(&fp, &c), word(&fp, &d));
        prop_assert_eq!(word_distance(&fp, &u, &v), word_distance(&fp, &v, &u));
        prop_assert!(word_distance(&fp, &u, &w) <= word_distance(&fp, &u, &v) + word_distance(&fp, &v, &w));
        prop_assert!(four_point_condition(&fp, [&u, &v, &w, &x]));
        // Right invariance.
        prop_assert_eq!(word_distance(&fp, &fp.multiply(&u, &x), &fp.multiply(&v, &x)), word_distance(&fp, &u, &v));
    }

    #[test]
    fn ybar_membership_agrees_with_cosets(p in 0usize..3, a in letters()) {
        let fp = &products()[p];
        let u = word(fp, &a);
        prop_assert_eq!(member_ybar(&u), member_ybar_by_cosets(&u));
        prop_assert_eq!(member_y(&u), member_y_by_cosets(&u));
    }

    #[test]
    fn partial_perm_completion_is_a_bijection(pairs in prop::collection::btree_map(-20i64..20, -20i64..20, 0..12)) {
        let mut sigma = PartialPerm::new();
        let mut used = BTreeSet::new();
        for (a, b) in pairs {
            if used.insert(b) {
                sigma.insert(a, b).unwrap();
            }
        }
        prop_assert!(sigma.is_consistent());
        for x in -40i64..40 {
            prop_assert_eq!(sigma.completion_inv(&sigma.completion(&x)), x);
        }
    }
}

#[test]
fn certificates_roundtrip_and_are_deterministic() {
    let cfg = SynthConfig { k_max: 2, word_len_max: 3, window: 3, ..SynthConfig::default() };
    for (g, h) in [("c2", "c3"), ("z", "z"), ("c3", "c2")] {
        let gs = FactorSpec::parse(Side::G, g).unwrap();
        let hs = FactorSpec::parse(Side::H, h).unwrap();
        let a = synthesize(&gs, &hs, &cfg).unwrap();
        let b = synthesize(&gs, &hs, &cfg).unwrap();
        let text = a.to_text();
        assert_eq!(text, b.to_text(), "{g}*{h} is not deterministic");
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.report.satisfied, back.report.requirements);
    }
}
