use std::collections::BTreeMap;

use mmsym_core::catalog::catalog;
use mmsym_core::grammar::parse_polynomial;
use mmsym_core::prover::{enumerate_multisets, gamma_table, verify_theorem, Rule, TypeMultiset};
use mmsym_core::Polynomial;

/// Coefficients of Π_i 1/(1 - x^{l_i}) summed over degrees 1..=n.
fn generating_function_count(n: usize) -> usize {
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for f in catalog().families() {
        for d in f.length..=n {
            ways[d] += ways[d - f.length];
        }
    }
    ways[1..].iter().sum()
}

fn p(s: &str) -> Polynomial {
    parse_polynomial(s).unwrap()
}

#[test]
fn enumeration_matches_generating_function() {
    for n in [1, 2, 5, 12, 18, 23] {
        assert_eq!(enumerate_multisets(n).len(), generating_function_count(n), "n = {n}");
    }
}

#[test]
fn small_enumerations() {
    let show = |n| enumerate_multisets(n).iter().map(|m| m.to_string()).collect::<Vec<_>>();
    assert_eq!(show(1), ["{7}"]);
    assert_eq!(show(2), ["{7}", "{6}", "{7,7}"]);
}

#[test]
fn enumeration_order_is_by_length_then_lex() {
    let all = enumerate_multisets(23);
    for pair in all.windows(2) {
        let key = |m: &TypeMultiset| (m.total_length(), m.ids().to_vec());
        assert!(key(&pair[0]) < key(&pair[1]));
    }
}

/// γ9..γ12 cells computed by summing each tensor's coefficients over the
/// S3×S3 classes of 12,23,31 / 12,23,13 / 12,32,13 / 12,31,23 in an
/// independent sympy script.
const ORACLE_TABLE: [(u8, [&str; 4]); 4] = [
    (24, ["6*a^2*d", "2*a^2*d+4*a*b*d", "2*b^2*d+4*a*b*d", "6*b^2*d"]),
    (
        29,
        ["6*i*a^2*d", "2*i*a^2*d+4*i*a*b*d", "2*i*b^2*d+4*i*a*b*d", "6*i*b^2*d"],
    ),
    (32, ["6*a^2*d", "-2*a^2*d+4*a*b*d", "2*b^2*d-4*a*b*d", "-6*b^2*d"]),
    (
        38,
        ["6*i*a^2*d", "-2*i*a^2*d+4*i*a*b*d", "2*i*b^2*d-4*i*a*b*d", "-6*i*b^2*d"],
    ),
];

#[test]
fn gamma_table_matches_the_class_sum_oracle() {
    let g = gamma_table().unwrap();
    for (id, cells) in ORACLE_TABLE {
        for (k, cell) in cells.iter().enumerate() {
            assert_eq!(g[&id].get(9 + k), &p(cell), "family {id}, g{}", 9 + k);
        }
    }
    for i in 9..=12 {
        assert_eq!(g[&9].get(i), &p("4*b^3"));
    }
}

#[test]
fn setting_b_to_zero_leaves_g10_a_third_of_g9_up_to_sign() {
    use mmsym_core::{Cyclotomic, Letter, Var};
    let g = gamma_table().unwrap();
    let b0 = BTreeMap::from([(Var::param(0, Letter::B), Cyclotomic::zero())]);
    for (id, sign) in [(24u8, 1), (29, 1), (32, -1), (38, -1)] {
        let g10 = g[&id].get(10).substitute(&b0);
        let third = g[&id].get(9).scale_rational(&mmsym_core::arith::rational(sign, 3));
        assert_eq!(g10, third, "family {id}");
    }
}

#[test]
fn reducible_and_final_supports() {
    let g = gamma_table().unwrap();
    for id in [42u8, 4] {
        assert!(g[&id].support().iter().all(|i| [1, 2, 6].contains(i)), "family {id}");
    }
    assert!((9..=12).all(|i| g[&27].get(i).is_zero()));
    assert!(g[&35].get(3).is_zero());
    assert!(g[&6].get(3).is_zero());
    assert_eq!(g[&19].get(3), g[&19].get(5));
    assert!(g[&44].get(3).is_zero() && g[&44].get(5).is_zero());
}

#[test]
fn full_verification_at_23() {
    let report = verify_theorem(23).unwrap();
    assert!(report.verified(), "survivors: {:?}", report.survivors);
    assert_eq!(report.multiset_count, generating_function_count(23));
    assert_eq!(
        report.summary_line(),
        format!(
            "VERIFIED: 0 survivors of {} multisets at max length 23",
            report.multiset_count
        )
    );
    let rule_of = |ids: &str| {
        let m = TypeMultiset::parse(ids).unwrap();
        report.certificates.iter().find(|c| c.multiset == m).unwrap().rule
    };
    assert_eq!(rule_of("24,9,7"), Rule::DiagonalOrGammaTable);
    assert_eq!(rule_of("9,9,9,9,5,6,7"), Rule::Gamma3Eq5);
    assert_eq!(rule_of("16,5"), Rule::ReducibleTypes);
    let counts: BTreeMap<Rule, usize> = report.rule_counts();
    assert!(counts.values().all(|&n| n > 0), "{counts:?}");
}

#[test]
fn certificates_are_monotone_in_the_length_bound() {
    let small = verify_theorem(12).unwrap();
    let large = verify_theorem(23).unwrap();
    for c in &small.certificates {
        assert!(large.certificates.contains(c), "{}", c.multiset);
    }
}

#[test]
fn lengths_beyond_23_are_rejected() {
    assert!(verify_theorem(24).is_err());
    assert!(verify_theorem(0).is_err());
}

mod spot_check {
    use mmsym_core::catalog::family;
    use mmsym_core::prover::{enumerate_multisets, gamma_of_t, instantiated_gamma};
    use mmsym_core::Cyclotomic;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        // A certified multiset can never reproduce p(T), whatever the parameters.
        #[test]
        fn random_instances_miss_the_target(pick in 0usize..14623, seed in prop::collection::vec(-4i64..=4, 64)) {
            let all = enumerate_multisets(23);
            let m = &all[pick % all.len()];
            let mut vals = seed.into_iter().cycle();
            let params: Vec<Vec<Cyclotomic>> = m
                .ids()
                .iter()
                .map(|&id| (0..family(id).unwrap().param_count()).map(|_| Cyclotomic::from_int(vals.next().unwrap())).collect())
                .collect();
            prop_assert_ne!(instantiated_gamma(m, &params).unwrap(), gamma_of_t(), "{}", m);
        }
    }
}
