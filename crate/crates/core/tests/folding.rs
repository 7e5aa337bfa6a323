use std::collections::BTreeSet;

use adlv_core::folding::{choice_points, fold_all, fold_dag, fold_limit, fold_naive, fold_standard};
use adlv_core::gallery::{smg, ClassKind, ConjugacyRep, GalleryType, LabelDag};
use adlv_core::{root_system, AffineElement, Kind, RootSystem};
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = Kind> {
    prop::sample::select(Kind::ALL.to_vec())
}

fn labels_for(rs: &RootSystem, raw: &[u8]) -> Vec<u8> {
    raw.iter().map(|c| c % (rs.rank() as u8 + 1)).collect()
}

#[test]
fn back_and_forth_folds_two_ways() {
    for k in Kind::ALL {
        let rs = root_system(k);
        for c in 0..=rs.rank() {
            let t = GalleryType::new(AffineElement::IDENTITY, vec![c as u8, c as u8]);
            assert_eq!(choice_points(rs, &t), vec![1]);
            let got = fold_all(rs, &t);
            assert_eq!(got, BTreeSet::from([AffineElement::IDENTITY, rs.generator(c)]));
        }
    }
}

#[test]
fn naive_refuses_long_types() {
    let rs = root_system(Kind::A2);
    let t = GalleryType::new(AffineElement::IDENTITY, vec![0; 17]);
    assert!(fold_naive(rs, &t).is_err());
}

#[test]
fn fold_limit_checks_its_window() {
    let rs = root_system(Kind::A2);
    let b = ConjugacyRep::new(rs, &[3, -1, -2]).unwrap();
    assert!(fold_limit(rs, ClassKind::I1, 1, 0, &b, 10, 0, None).is_err());
    assert!(fold_limit(rs, ClassKind::I1, 1, 0, &b, 3, 4, None).is_err());
}

#[test]
fn smg_types_fold_to_their_target() {
    for k in Kind::ALL {
        let rs = root_system(k);
        for e in rs.alcoves_within(6) {
            let t = smg(rs, &e);
            assert!(choice_points(rs, &t).is_empty());
            assert_eq!(fold_all(rs, &t), BTreeSet::from([e]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn memoized_matches_naive(k in kind_strategy(),
                              start in prop::collection::vec(0u8..3, 0..8),
                              raw in prop::collection::vec(0u8..3, 0..=12)) {
        let rs = root_system(k);
        let s: Vec<usize> = labels_for(rs, &start).into_iter().map(usize::from).collect();
        let t = GalleryType::new(rs.word_product(&s), labels_for(rs, &raw));
        let fast = fold_all(rs, &t);
        prop_assert_eq!(&fast, &fold_naive(rs, &t).unwrap());
        // the unfolded gallery is always one of the results
        prop_assert!(fast.contains(&fold_standard(rs, &t)));
    }

    #[test]
    fn radius_cut_is_a_restriction(k in kind_strategy(),
                                   raw in prop::collection::vec(0u8..3, 0..=14),
                                   radius in 0usize..8) {
        let rs = root_system(k);
        let t = GalleryType::new(AffineElement::IDENTITY, labels_for(rs, &raw));
        let all = fold_all(rs, &t);
        let cut = fold_dag(rs, &LabelDag::path(&t), Some(radius));
        let expect: BTreeSet<_> = all.into_iter().filter(|g| rs.length(g) <= radius).collect();
        prop_assert_eq!(cut, expect);
    }

    #[test]
    fn results_within_reach(k in kind_strategy(), raw in prop::collection::vec(0u8..3, 0..=14)) {
        let rs = root_system(k);
        let t = GalleryType::new(AffineElement::IDENTITY, labels_for(rs, &raw));
        let end = fold_standard(rs, &t);
        prop_assert_eq!(end, rs.word_product(&t.labels.iter().map(|&c| c as usize).collect::<Vec<_>>()));
        for g in fold_all(rs, &t) {
            prop_assert!(rs.length(&g) <= t.len());
        }
    }
}

#[test]
fn radius_applies_to_empty_types() {
    let rs = root_system(Kind::A2);
    let g = rs.word_product(&[0, 1, 2, 0]);
    let t = GalleryType::new(g, vec![]);
    assert!(fold_dag(rs, &LabelDag::path(&t), Some(3)).is_empty());
    assert_eq!(fold_dag(rs, &LabelDag::path(&t), Some(4)), BTreeSet::from([g]));
}
