//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Runs as its own harness so the report is printed under `cargo test`.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use adlv_core::folding::{fold_all, fold_limit, fold_standard};
use adlv_core::gallery::{
    class_family, class_target, minimal_galleries, omega_tail, ClassKind, ClassParams,
    ConjugacyRep, GalleryType,
};
use adlv_core::serialize::{chamber_set_document, to_json};
use adlv_core::solver::{assemble, gl2_variants, sl2_inverse, solve, Gl2Variant, Verdict};
use adlv_core::subset::{closure_expand, kr_seed, Provenance, ProvenanceMap};
use adlv_core::superset::{fold_left_infinite, superset_classes, superset_complete, Method};
use adlv_core::{root_system, AffineElement, Budgets, ChamberSet, Kind, RootSystem, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn a1() -> &'static RootSystem {
    root_system(Kind::A1)
}

fn rep(rs: &RootSystem, exps: &[i64]) -> ConjugacyRep {
    ConjugacyRep::new(rs, exps).expect("valid representative")
}

fn names(rs: &RootSystem, set: &BTreeSet<AffineElement>) -> String {
    let v: Vec<String> = set.iter().map(|g| rs.format_element(g)).collect();
    v.join(" ")
}

/// Reference folding with no bound and no caching.
fn naive(rs: &RootSystem, t: &GalleryType) -> BTreeSet<AffineElement> {
    fn go(rs: &RootSystem, labels: &[u8], d: AffineElement, out: &mut BTreeSet<AffineElement>) {
        let Some((&c, rest)) = labels.split_first() else {
            out.insert(d);
            return;
        };
        let c = c as usize;
        go(rs, rest, rs.adjacent(&d, c), out);
        // folding is allowed when C_M is on the far side of the wall
        let wall = rs.facet_wall(&d, c);
        let here = rs.wall_value(&wall, &rs.barycenter(&d)).signum();
        let base = rs.wall_value(&wall, &rs.base_barycenter()).signum();
        if here != base {
            go(rs, rest, d, out);
        }
    }
    let mut out = BTreeSet::new();
    go(rs, &t.labels, t.start, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Rank one

fn criterion_1() -> Outcome {
    let rs = a1();
    let t = Instant::now();
    let mut bad = Vec::new();
    for s in 0..=4i64 {
        let vm = solve(rs, &rep(rs, &[s]), 12, Budgets::default(), Method::Classes, false).unwrap();
        if !vm.unknown().is_empty() {
            bad.push(format!("s={s}: {} unknown", vm.unknown().len()));
        }
        // the closed forms, written out
        let expected = |i: i64| -> bool {
            let (a, d) = (i.abs(), 2 * s);
            if s == 0 {
                i == 0 || a % 2 == 1
            } else {
                a == d || (a > d && (a - d) % 2 == 1)
            }
        };
        for i in -12..=12 {
            let got = vm.verdict(&rs.a1_alcove(i)) == Some(Verdict::Nonempty);
            if got != expected(i) {
                bad.push(format!("s={s} i={i}"));
            }
        }
    }
    let el = t.elapsed();
    outcome(
        bad.is_empty() && el < Duration::from_secs(1),
        format!("s = 0..4, |i| <= 12, mismatches {:?}, {:.2?}", bad, el),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    // the "i even" and "i odd" tables, rows 0..=9
    let table: [&[u64]; 10] = [
        &[0],
        &[0],
        &[1],
        &[0, 1],
        &[2],
        &[0, 1, 2],
        &[3],
        &[0, 1, 2, 3],
        &[4],
        &[0, 1, 2, 3, 4],
    ];
    let mut bad = Vec::new();
    for (i, row) in table.iter().enumerate() {
        let want: BTreeSet<u64> = row.iter().copied().collect();
        if sl2_inverse(i as i64) != want {
            bad.push(i);
        }
    }
    let el = t.elapsed();
    outcome(
        bad.is_empty() && el < Duration::from_secs(1),
        format!("rows 0..9, e.g. 7 -> {:?}, bad rows {:?}", sl2_inverse(7), bad),
    )
}

fn criterion_3() -> Outcome {
    let rs = a1();
    let t = Instant::now();
    let even: BTreeSet<i64> = (-12..=12).filter(|i| i % 2 == 0).collect();
    let mut bad = Vec::new();
    for alpha in [-3, -1, 1, 3, 5] {
        let ev = gl2_variants(Gl2Variant::Antidiagonal { alpha }, 12, false).unwrap();
        let got: BTreeSet<i64> = ev.nonempty.iter().map(|g| rs.a1_index(g)).collect();
        if got != even || ev.det_component != alpha || !ev.unknown.is_empty() {
            bad.push(alpha);
        }
    }
    let el = t.elapsed();
    outcome(
        bad.is_empty() && el < Duration::from_secs(1),
        format!("alpha in -3..5 odd, bad {:?}", bad),
    )
}

// ---------------------------------------------------------------------------
// Rank two runs. Criteria 4 to 7 are computed once per thread count and
// their serialized output compared for criterion 13.

struct Runs {
    /// (superset, closure of the seed) for SL3 and Sp4 at radius 6.
    exact: Vec<(Kind, ChamberSet, ChamberSet, Duration)>,
    /// (b, classes, complete) at radius 5.
    sufficiency: Vec<(Vec<i64>, ChamberSet, ChamberSet, Duration)>,
    /// (p, w, q-limit, omega folding, limit stable) at radius 10.
    half_infinite: Vec<(usize, u8, BTreeSet<AffineElement>, BTreeSet<AffineElement>, bool)>,
    bytes: String,
}

fn seed_closure(rs: &RootSystem, radius: usize) -> ChamberSet {
    let b = ConjugacyRep::identity(rs.kind());
    let seed = kr_seed(rs, &b, radius).unwrap();
    let prov: ProvenanceMap = seed.chambers.iter().map(|g| (*g, Provenance::NormZero)).collect();
    closure_expand(rs, &seed, &prov, radius, None).set
}

fn half_infinite_pairs(rs: &RootSystem, radius: usize) -> Vec<(usize, u8, BTreeSet<AffineElement>, BTreeSet<AffineElement>, bool)> {
    let b = rep(rs, &[3, -1, -2]);
    let f = rs.flip().unwrap();
    let mut out = Vec::new();
    for w in [0, f] {
        for p in [1, 3, 5] {
            let lim = fold_limit(rs, ClassKind::I1, p, w, &b, 60, 6, Some(radius)).unwrap();
            let tail = omega_tail(rs, ClassKind::I1, p, w, &b, 40).unwrap();
            let omega = fold_left_infinite(rs, &tail, Some(radius));
            out.push((p, w, lim.chambers, omega, lim.stable));
        }
    }
    out
}

fn compute_runs() -> Runs {
    let mut bytes = String::new();
    let mut exact = Vec::new();
    for k in [Kind::A2, Kind::C2] {
        let rs = root_system(k);
        let t = Instant::now();
        let sup = superset_classes(rs, &ConjugacyRep::identity(k), 6, Budgets::default()).unwrap();
        let sub = seed_closure(rs, 6);
        let el = t.elapsed();
        bytes += &to_json(&chamber_set_document(rs, &sup));
        bytes += &to_json(&chamber_set_document(rs, &sub));
        exact.push((k, sup, sub, el));
    }
    let a2 = root_system(Kind::A2);
    let mut sufficiency = Vec::new();
    for e in [vec![0, 0, 0], vec![3, -1, -2]] {
        let b = rep(a2, &e);
        let t = Instant::now();
        let classes = superset_classes(a2, &b, 5, Budgets::default()).unwrap();
        let complete = superset_complete(a2, &b, 5, Budgets::default()).unwrap();
        let el = t.elapsed();
        bytes += &to_json(&chamber_set_document(a2, &classes));
        bytes += &to_json(&chamber_set_document(a2, &complete));
        sufficiency.push((e, classes, complete, el));
    }
    let half_infinite = half_infinite_pairs(a2, 10);
    for (p, w, lim, omega, stable) in &half_infinite {
        bytes += &format!("{p} {w} {stable}\n{}\n{}\n", names(a2, lim), names(a2, omega));
    }
    Runs {
        exact,
        sufficiency,
        half_infinite,
        bytes,
    }
}

fn exactness(runs: &Runs, kind: Kind, limit: Duration, extra: Option<Outcome>) -> Outcome {
    let (_, sup, sub, el) = runs.exact.iter().find(|r| r.0 == kind).unwrap();
    let rs = root_system(kind);
    let vm = assemble(rs, sup, sub, &ProvenanceMap::new());
    let unknown = vm.as_ref().map(|v| v.unknown().len()).unwrap_or(usize::MAX);
    let mut pass = sup.chambers == sub.chambers && unknown == 0 && *el <= limit;
    let mut detail = format!(
        "radius 6: superset {} = closure {}, unknown {}, truncated {}, {:.2?}",
        sup.len(),
        sub.len(),
        unknown,
        sup.window.truncated,
        el
    );
    if let Some(x) = extra {
        pass &= x.pass;
        detail += &format!("; {}", x.detail);
    }
    outcome(pass, detail)
}

fn criterion_4(runs: &Runs) -> Outcome {
    exactness(runs, Kind::A2, Duration::from_secs(300), None)
}

fn criterion_5(runs: &Runs) -> Outcome {
    // With the default q budget some C2 q-limits are cut short (their q
    // values come in steps of 6); rerun with a larger budget to show the
    // set is already complete.
    let rs = root_system(Kind::C2);
    let budgets = Budgets { q_max: 60, ..Budgets::default() };
    let sup = superset_classes(rs, &ConjugacyRep::identity(Kind::C2), 6, budgets).unwrap();
    let sub = &runs.exact.iter().find(|r| r.0 == Kind::C2).unwrap().2;
    let extra = outcome(
        !sup.window.truncated && sup.chambers == sub.chambers,
        format!("q_max 60: superset {} truncated {}", sup.len(), sup.window.truncated),
    );
    exactness(runs, Kind::C2, Duration::from_secs(600), Some(extra))
}

fn criterion_6(runs: &Runs) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (e, classes, complete, el) in &runs.sufficiency {
        pass &= classes.chambers == complete.chambers && *el <= Duration::from_secs(900);
        parts.push(format!("b={e:?}: {} = {} ({:.2?})", classes.len(), complete.len(), el));
    }
    // At radius 5 the set for b = (3,-1,-2) is empty; radius 12 has content.
    let a2 = root_system(Kind::A2);
    let b = rep(a2, &[3, -1, -2]);
    let budgets = Budgets { dep_budget: 16, ..Budgets::default() };
    let classes = superset_classes(a2, &b, 12, budgets).unwrap();
    let complete = superset_complete(a2, &b, 12, budgets).unwrap();
    pass &= classes.chambers == complete.chambers && !classes.is_empty();
    parts.push(format!("radius 12 b=[3, -1, -2]: {} = {}", classes.len(), complete.len()));
    outcome(pass, parts.join(", "))
}

fn agree(pairs: &[(usize, u8, BTreeSet<AffineElement>, BTreeSet<AffineElement>, bool)]) -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, w, lim, omega, stable) in pairs {
        pass &= lim == omega && *stable;
        parts.push(format!("p{p}w{w}:{}/{}", lim.len(), omega.len()));
    }
    (pass, parts.join(" "))
}

fn criterion_7(runs: &Runs) -> Outcome {
    let (p10, d10) = agree(&runs.half_infinite);
    // radius 10 sees no chambers for these classes; radius 18 does
    let pairs18 = half_infinite_pairs(root_system(Kind::A2), 18);
    let (p18, d18) = agree(&pairs18);
    let nonempty = pairs18.iter().all(|x| !x.2.is_empty());
    outcome(p10 && p18 && nonempty, format!("radius 10 [{d10}], radius 18 [{d18}]"))
}

// ---------------------------------------------------------------------------
// Folding and Coxeter combinatorics

fn class_composites(kind: Kind) -> Vec<GalleryType> {
    let rs = root_system(kind);
    let bs = match kind {
        Kind::A1 => vec![vec![0], vec![1]],
        Kind::A2 => vec![vec![0, 0, 0], vec![3, -1, -2]],
        Kind::C2 => vec![vec![0, 0], vec![1, 0]],
        Kind::G2 => return Vec::new(),
    };
    let mut out = Vec::new();
    for e in bs {
        let b = rep(rs, &e);
        for (class, ps) in [(ClassKind::I1, vec![1, 3]), (ClassKind::I2, vec![0])] {
            for p in ps {
                for q in 0..=4 {
                    for w in rs.finite_elements() {
                        let params = ClassParams { class, p, q, w };
                        if class_target(rs, &params).is_err() {
                            continue;
                        }
                        out.extend(class_family(rs, &params, &b).unwrap().paths(1 << 16).unwrap());
                    }
                }
            }
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    let mut composites = 0;
    for k in Kind::ALL {
        let rs = root_system(k);
        let n = rs.rank() + 1;
        for _ in 0..200 {
            let start: Vec<usize> = (0..rng.gen_range(0..8)).map(|_| rng.gen_range(0..n)).collect();
            let labels: Vec<u8> = (0..rng.gen_range(0..=12)).map(|_| rng.gen_range(0..n) as u8).collect();
            let g = GalleryType::new(rs.word_product(&start), labels);
            if fold_all(rs, &g) != naive(rs, &g) {
                bad.push(format!("{k} {:?}", g.labels));
            }
        }
        for g in class_composites(k) {
            composites += 1;
            if fold_all(rs, &g) != naive(rs, &g) {
                bad.push(format!("{k} composite {:?}", g.labels));
            }
        }
    }
    let el = t.elapsed();
    outcome(
        bad.is_empty() && el < Duration::from_secs(30),
        format!("800 random types, {composites} class composites, mismatches {}, {:.2?}", bad.len(), el),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = 0;
    for k in Kind::ALL {
        let rs = root_system(k);
        let n = rs.rank() + 1;
        for _ in 0..500 {
            let word: Vec<usize> = (0..rng.gen_range(0..=20)).map(|_| rng.gen_range(0..n)).collect();
            let g = rs.word_product(&word);
            let t = GalleryType::from_word(AffineElement::IDENTITY, &word);
            if fold_standard(rs, &t) != g {
                bad += 1;
            }
            let reduced = GalleryType::from_word(AffineElement::IDENTITY, &rs.reduced_word(&g));
            if fold_all(rs, &reduced) != BTreeSet::from([g]) {
                bad += 1;
            }
            if rs.length(&g) <= 6 {
                let all = minimal_galleries(rs, &AffineElement::IDENTITY, &g).unwrap();
                let pick = &all[rng.gen_range(0..all.len())];
                if fold_all(rs, pick) != BTreeSet::from([g]) {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("500 words per system, failures {bad}"))
}

// ---------------------------------------------------------------------------
// Symmetry, conjugates and seeds

/// Image of an alcove under a symmetry, through its barycenter.
fn moved(rs: &RootSystem, op: &adlv_core::symmetry::SymmetryOp, g: &AffineElement) -> AffineElement {
    rs.alcove_containing(&rs.symmetry_point(op, &rs.barycenter(g)))
}

fn fixed(rs: &RootSystem, set: &BTreeSet<AffineElement>) -> bool {
    rs.symmetry_ops()
        .iter()
        .all(|op| set.iter().all(|g| set.contains(&moved(rs, op, g))))
}

fn criterion_10(runs: &Runs) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut check = |kind: Kind, what: String, set: &BTreeSet<AffineElement>| {
        checked += 1;
        if !fixed(root_system(kind), set) {
            bad.push(what);
        }
    };
    for (k, sup, sub, _) in &runs.exact {
        check(*k, format!("{k} superset"), &sup.chambers);
        check(*k, format!("{k} subset"), &sub.chambers);
    }
    for (e, a, c, _) in &runs.sufficiency {
        check(Kind::A2, format!("{e:?} classes"), &a.chambers);
        check(Kind::A2, format!("{e:?} complete"), &c.chambers);
    }
    let a2 = root_system(Kind::A2);
    for e in [[1, 0, -1], [2, 0, -2], [3, -1, -2]] {
        let vm = solve(a2, &rep(a2, &e), 10, Budgets::default(), Method::Classes, false).unwrap();
        check(Kind::A2, format!("{e:?} nonempty"), &vm.nonempty());
        check(Kind::A2, format!("{e:?} unknown"), &vm.unknown());
    }
    let c2 = root_system(Kind::C2);
    for e in [[1, 0], [1, 1]] {
        let vm = solve(c2, &rep(c2, &e), 8, Budgets::default(), Method::Classes, false).unwrap();
        check(Kind::C2, format!("C2 {e:?}"), &vm.nonempty());
    }
    for s in 0..=4 {
        let vm = solve(a1(), &rep(a1(), &[s]), 12, Budgets::default(), Method::Classes, false).unwrap();
        check(Kind::A1, format!("A1 s={s}"), &vm.nonempty());
    }
    outcome(bad.is_empty(), format!("{checked} sets, not fixed: {bad:?}"))
}

fn criterion_11() -> Outcome {
    let cases: Vec<(Kind, Vec<i64>)> = vec![
        (Kind::A1, vec![0]),
        (Kind::A1, vec![1]),
        (Kind::A1, vec![3]),
        (Kind::A2, vec![0, 0, 0]),
        (Kind::A2, vec![1, 0, -1]),
        (Kind::A2, vec![2, 0, -2]),
        (Kind::A2, vec![3, -1, -2]),
        (Kind::C2, vec![0, 0]),
        (Kind::C2, vec![1, 0]),
        (Kind::C2, vec![1, 1]),
    ];
    let mut bad = Vec::new();
    let mut n = 0;
    for (k, e) in cases {
        let rs = root_system(k);
        let b = rep(rs, &e);
        // w⁻¹ t_λ w = t_{w⁻¹λ}
        let conj: BTreeSet<AffineElement> = rs
            .finite_elements()
            .map(|w| AffineElement::new(rs.finite_apply(rs.finite_inverse(w), &b.lambda), 0))
            .collect();
        let radius = conj.iter().map(|g| rs.length(g)).max().unwrap();
        let sup = superset_classes(rs, &b, radius, Budgets::default()).unwrap();
        for g in &conj {
            n += 1;
            if !sup.contains(g) {
                bad.push(format!("{k} {e:?} {}", rs.format_element(g)));
            }
        }
    }
    outcome(bad.is_empty(), format!("{n} conjugates, missing {bad:?}"))
}

/// `λ + u(λ) + … + u^{d-1}(λ)` with `d` the order of `u`.
fn norm(rs: &RootSystem, g: &AffineElement) -> Vector {
    let mut acc = [0i64; 3];
    let mut cur = g.lambda();
    let mut power = g.finite;
    loop {
        for i in 0..3 {
            acc[i] += cur[i];
        }
        cur = rs.finite_apply(g.finite, &cur);
        if power == 0 {
            return acc;
        }
        power = rs.finite_mul(power, g.finite);
    }
}

fn criterion_12() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut n = 0;
    let mut lemma = |kind: Kind, rots: &[&str], grid: &dyn Fn(i64, i64) -> Vector| {
        let rs = root_system(kind);
        let elems: Vec<AffineElement> = rots
            .iter()
            .flat_map(|r| {
                let u = rs.finite_from_name(r).unwrap();
                (-3..=3i64).flat_map(move |s| (-3..=3i64).map(move |t| (s, t, u)))
            })
            .map(|(s, t, u)| AffineElement::new(grid(s, t), u))
            .collect();
        let radius = elems.iter().map(|g| rs.length(g)).max().unwrap();
        let seed = kr_seed(rs, &ConjugacyRep::identity(kind), radius).unwrap();
        for g in elems {
            n += 1;
            if norm(rs, &g) != [0, 0, 0] || !seed.contains(&g) {
                bad.push(format!("{kind} {}", rs.format_element(&g)));
            }
        }
    };
    lemma(Kind::A2, &["r", "r2"], &|s, t| [s, t, -s - t]);
    lemma(Kind::C2, &["r", "r2", "r3"], &|s, t| [s, t, 0]);
    // ε and δ are the unit coordinate translations
    lemma(Kind::G2, &["r", "r2", "r3", "r4", "r5"], &|s, t| [s, t, 0]);
    let el = t.elapsed();
    outcome(
        bad.is_empty() && el < Duration::from_secs(10),
        format!("{n} elements, failures {bad:?}, {:.2?}", el),
    )
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn main() -> ExitCode {
    // Let `cargo test -- --list` and filters pass through harmlessly.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let mut results: BTreeMap<usize, (&str, Outcome)> = BTreeMap::new();
    results.insert(1, ("SL2 closed forms", criterion_1()));
    results.insert(2, ("SL2 inverse tables", criterion_2()));
    results.insert(3, ("GL2 antidiagonal class", criterion_3()));

    let runs8 = in_pool(8, compute_runs);
    let runs4 = in_pool(4, compute_runs);
    let runs1 = in_pool(1, compute_runs);

    results.insert(4, ("SL3 b = 1 exactness", criterion_4(&runs8)));
    results.insert(5, ("Sp4 b = 1 exactness", criterion_5(&runs8)));
    results.insert(6, ("class sufficiency", criterion_6(&runs8)));
    results.insert(7, ("half-infinite agreement", criterion_7(&runs8)));
    results.insert(8, ("folding oracle", criterion_8()));
    results.insert(9, ("Coxeter/gallery correspondence", criterion_9()));
    results.insert(10, ("symmetry", criterion_10(&runs8)));
    results.insert(11, ("W-conjugate containment", criterion_11()));
    results.insert(12, ("KR seeds", criterion_12()));
    let same = runs1.bytes == runs4.bytes && runs4.bytes == runs8.bytes;
    results.insert(
        13,
        (
            "determinism",
            outcome(same, format!("{} bytes at 1, 4, 8 threads, identical {same}", runs8.bytes.len())),
        ),
    );

    let mut failed = 0;
    for (n, (name, o)) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {tag}  {name}: {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
