use std::collections::BTreeSet;

use adlv_core::chamber_set::is_symmetric;
use adlv_core::gallery::ConjugacyRep;
use adlv_core::solver::sl2_solution;
use adlv_core::subset::{
    appendage_certify, appendage_seeds, certified_subset, closure_expand, is_norm_zero, kr_seed,
    replay, rule_images, Provenance, ProvenanceMap,
};
use adlv_core::{root_system, AffineElement, Budgets, ChamberSet, Kind, RootSystem, SetKind, Window};

/// Fixed point of the length rules by rescanning the whole window until
/// nothing changes. No worklist, no provenance.
fn scan_closure(rs: &RootSystem, seed: &BTreeSet<AffineElement>, radius: usize) -> BTreeSet<AffineElement> {
    let window = rs.alcoves_within(radius);
    let mut set: BTreeSet<AffineElement> = seed.iter().filter(|g| rs.length(g) <= radius).copied().collect();
    loop {
        let mut grew = false;
        for w in &window {
            if set.contains(w) {
                continue;
            }
            let lw = rs.length(w);
            let mut hit = false;
            for s in 0..=rs.rank() {
                let g = rs.generator(s);
                // w = s·v with ℓ(v) < ℓ(w) and ℓ(v·s) > ℓ(v)
                let v = rs.compose(&g, w);
                if rs.length(&v) < lw && rs.length(&rs.compose(&v, &g)) < rs.length(&v) && set.contains(&v) {
                    hit = true;
                }
                let v = rs.compose(w, &g);
                if rs.length(&v) < lw && rs.length(&rs.compose(&g, &v)) < rs.length(&v) && set.contains(&v) {
                    hit = true;
                }
                let v = rs.compose(&rs.compose(&g, w), &g);
                if rs.length(&v) == lw && set.contains(&v) {
                    hit = true;
                }
            }
            for op in rs.symmetry_ops() {
                // the symmetries are involutions or come in inverse pairs
                for op2 in rs.symmetry_ops() {
                    let v = rs.symmetry_apply(&op2, w).unwrap();
                    if set.contains(&v) && rs.symmetry_apply(&op, &v).unwrap() == *w {
                        hit = true;
                    }
                }
            }
            if hit {
                set.insert(*w);
                grew = true;
            }
        }
        if !grew {
            return set;
        }
    }
}

fn subset_of(rs: &RootSystem, seed: &BTreeSet<AffineElement>, radius: usize) -> BTreeSet<AffineElement> {
    let b = ConjugacyRep::identity(rs.kind());
    let mut s = ChamberSet::new(rs, b, SetKind::Subset, Window::new(radius, Budgets::default()));
    s.chambers = seed.clone();
    closure_expand(rs, &s, &ProvenanceMap::new(), radius, None).set.chambers
}

#[test]
fn worklist_closure_matches_rescan() {
    for k in [Kind::A1, Kind::A2, Kind::C2, Kind::G2] {
        let rs = root_system(k);
        let b = ConjugacyRep::identity(k);
        let seed = kr_seed(rs, &b, 6).unwrap().chambers;
        assert_eq!(subset_of(rs, &seed, 6), scan_closure(rs, &seed, 6), "{k}");
        // an arbitrary seed too
        let odd: BTreeSet<_> = rs.alcoves_within(3).into_iter().filter(|g| rs.length(g) == 3).take(2).collect();
        assert_eq!(subset_of(rs, &odd, 6), scan_closure(rs, &odd, 6), "{k}");
    }
}

#[test]
fn closure_is_idempotent_and_monotone() {
    for k in [Kind::A2, Kind::C2] {
        let rs = root_system(k);
        let b = ConjugacyRep::identity(k);
        let seed = kr_seed(rs, &b, 6).unwrap().chambers;
        let once = subset_of(rs, &seed, 6);
        assert_eq!(subset_of(rs, &once, 6), once);
        let small: BTreeSet<_> = seed.iter().take(seed.len() / 2).copied().collect();
        assert!(subset_of(rs, &small, 6).is_subset(&once));
        assert!(seed.is_subset(&once));
    }
}

#[test]
fn every_derivation_replays() {
    let rs = root_system(Kind::A2);
    let b = ConjugacyRep::identity(Kind::A2);
    let mut seed = ChamberSet::new(rs, b, SetKind::Subset, Window::new(6, Budgets::default()));
    seed.chambers.insert(rs.word_product(&[0, 1]));
    let cert = closure_expand(rs, &seed, &ProvenanceMap::new(), 6, None);
    assert!(cert.converged);
    assert!(cert.set.len() > seed.len());
    for g in &cert.set.chambers {
        let chain = replay(rs, &cert.provenance, g).unwrap();
        assert_eq!(chain.last(), Some(g));
        assert_eq!(cert.provenance[&chain[0]], Provenance::External);
    }
    // a forged step is caught
    let mut forged = cert.provenance.clone();
    let victim = *forged.iter().find(|(_, p)| p.parent().is_some()).unwrap().0;
    forged.insert(victim, Provenance::Conjugation { from: AffineElement::IDENTITY, s: 0 });
    assert!(replay(rs, &forged, &victim).is_err());
}

#[test]
fn rule_images_respect_lengths() {
    for k in Kind::ALL {
        let rs = root_system(k);
        for w in rs.alcoves_within(4) {
            for (h, p) in rule_images(rs, &w, 6) {
                assert!(rs.length(&h) <= 6);
                match p {
                    Provenance::LengthOne { .. } => assert_eq!(rs.length(&h), rs.length(&w) + 1),
                    Provenance::Conjugation { .. } | Provenance::Symmetry { .. } => {
                        assert_eq!(rs.length(&h), rs.length(&w))
                    }
                    other => panic!("unexpected rule {other:?}"),
                }
            }
        }
    }
}

fn a2_element(rs: &RootSystem, s: &str) -> AffineElement {
    rs.parse_element(s).unwrap()
}

#[test]
fn appendage_examples() {
    let rs = root_system(Kind::A2);
    let r2 = rs.finite_from_name("r2").unwrap();
    let tb = AffineElement::new([3, -1, -2], r2);
    let got: Vec<Option<AffineElement>> = (0..3).map(|c| appendage_certify(rs, &tb, c).unwrap()).collect();
    assert_eq!(
        got,
        vec![
            Some(a2_element(rs, "t[3,-2,-1]·w4")),
            Some(a2_element(rs, "t[-1,3,-2]·w1")),
            Some(a2_element(rs, "t[3,-2,-1]·w4")),
        ]
    );
    for c in 0..3 {
        assert_eq!(appendage_certify(rs, &AffineElement::IDENTITY, c).unwrap(), None);
    }
    // only norm-zero elements are accepted
    assert!(appendage_certify(rs, &AffineElement::new([1, 0, -1], 0), 0).is_err());
}

#[test]
fn appendages_add_nothing_beyond_the_seed_closure() {
    for k in [Kind::A1, Kind::A2, Kind::C2] {
        let rs = root_system(k);
        let b = ConjugacyRep::identity(k);
        let closed = subset_of(rs, &kr_seed(rs, &b, 6).unwrap().chambers, 6);
        let app = appendage_seeds(rs, 6).unwrap();
        assert!(!app.is_empty());
        for g in app.keys() {
            assert!(closed.contains(g), "{k} {}", rs.format_element(g));
        }
    }
}

#[test]
fn kr_seed_lemmas() {
    let radius = 8;
    // A2: every t_λ·r and t_λ·r²
    let a2 = root_system(Kind::A2);
    let seed = kr_seed(a2, &ConjugacyRep::identity(Kind::A2), radius).unwrap();
    for w in ["r", "r2"] {
        let u = a2.finite_from_name(w).unwrap();
        for a in -4..=4i64 {
            for c in -4..=4i64 {
                let g = AffineElement::new([a, c, -a - c], u);
                assert!(is_norm_zero(a2, &g));
                assert_eq!(seed.contains(&g), a2.length(&g) <= radius);
            }
        }
    }
    // C2: t_λ·rⁱ for i = 1, 2, 3
    let c2 = root_system(Kind::C2);
    let seed = kr_seed(c2, &ConjugacyRep::identity(Kind::C2), radius).unwrap();
    for w in ["r", "r2", "r3"] {
        let u = c2.finite_from_name(w).unwrap();
        for a in -4..=4i64 {
            for c in -4..=4i64 {
                let g = AffineElement::new([a, c, 0], u);
                assert!(is_norm_zero(c2, &g));
                assert_eq!(seed.contains(&g), c2.length(&g) <= radius);
            }
        }
    }
    // G2: ε^s δ^t rⁿ for |s|, |t| ≤ 3 and 1 ≤ n ≤ 5
    let g2 = root_system(Kind::G2);
    let seed = kr_seed(g2, &ConjugacyRep::identity(Kind::G2), 14).unwrap();
    for n in 1..=5 {
        let u = g2.finite_from_name(&format!("r{n}")).unwrap();
        for s in -3..=3i64 {
            for t in -3..=3i64 {
                // ε and δ are the unit coordinate translations
                let g = AffineElement::new([s, t, 0], u);
                assert!(is_norm_zero(g2, &g), "n={n} s={s} t={t}");
                assert_eq!(seed.contains(&g), g2.length(&g) <= 14);
            }
        }
    }
    // translations themselves are never seeds, except the identity
    for g in &seed.chambers {
        assert!(g.finite != 0 || *g == AffineElement::IDENTITY);
    }
}

#[test]
fn subsets_are_symmetric_and_sound_in_rank_one() {
    for k in [Kind::A1, Kind::A2, Kind::C2] {
        let rs = root_system(k);
        let cert = certified_subset(rs, &ConjugacyRep::identity(k), 6, Budgets::default(), false).unwrap();
        assert!(is_symmetric(rs, &cert.set.chambers), "{k}");
    }
    let rs = root_system(Kind::A1);
    for s in 0..=3i64 {
        let b = ConjugacyRep::new(rs, &[s]).unwrap();
        let cert = certified_subset(rs, &b, 10, Budgets::default(), false).unwrap();
        let sol = sl2_solution(s as u64);
        for g in &cert.set.chambers {
            assert!(sol.contains(rs.a1_index(g)), "s={s} {}", rs.format_element(g));
        }
    }
}

#[test]
fn seed_only_skips_the_closure() {
    let rs = root_system(Kind::A2);
    let b = ConjugacyRep::new(rs, &[3, -1, -2]).unwrap();
    let cert = certified_subset(rs, &b, 8, Budgets::default(), true).unwrap();
    let conj: BTreeSet<_> = b.w_conjugates(rs).into_iter().filter(|g| rs.length(g) <= 8).collect();
    assert_eq!(cert.set.chambers, conj);
    assert!(cert.set.window.flags.contains(&"partial".to_string()));
    assert!(kr_seed(rs, &b, 8).is_err());
}
