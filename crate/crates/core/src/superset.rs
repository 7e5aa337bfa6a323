//! The superset S₁: folding results of composite galleries, either through
//! the two parametrized classes or by enumerating every type-edge pair up
//! to a budget.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chamber_set::{symmetry_closure, Budgets, ChamberSet, SetKind, Window};
use crate::error::{Error, Result};
use crate::folding::{fold_dag, fold_limit};
use crate::gallery::{
    class_defined, composite_family, locate, omega_tail, smg, turning_index, valid_q_values,
    ClassKind, ConjugacyRep, GalleryType, Location,
};
use crate::weyl::{AffineElement, Kind, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Classes,
    Complete,
    HalfInf,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classes" => Ok(Method::Classes),
            "complete" => Ok(Method::Complete),
            "halfinf" => Ok(Method::HalfInf),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

fn check_kind(rs: &RootSystem, b: &ConjugacyRep) -> Result<()> {
    if b.kind != rs.kind() {
        return Err(Error::KindMismatch {
            expected: rs.kind(),
            found: b.kind,
        });
    }
    Ok(())
}

/// Every `(class, p, w)` combination the class method folds.
fn class_tasks(rs: &RootSystem, p_max: usize) -> Vec<(ClassKind, usize, u8)> {
    let mut tasks = Vec::new();
    for w in rs.finite_elements() {
        if class_defined(rs.kind(), ClassKind::I1) {
            for p in (1..=p_max).step_by(2) {
                tasks.push((ClassKind::I1, p, w));
            }
        }
        if class_defined(rs.kind(), ClassKind::I2) {
            tasks.push((ClassKind::I2, 0, w));
        }
    }
    tasks
}

fn finish(rs: &RootSystem, mut set: ChamberSet, found: BTreeSet<AffineElement>) -> ChamberSet {
    set.chambers = found;
    for g in set.b.w_conjugates(rs) {
        set.chambers.insert(g);
    }
    symmetry_closure(rs, &mut set.chambers);
    set.truncate(rs);
    set
}

/// Union over both classes, odd `p ≤ p_max` and all finite `w` of the
/// q-limits, closed under the symmetries and cut to `radius`. G2 has no
/// classes and falls back to the complete enumeration, flagged.
pub fn superset_classes(
    rs: &RootSystem,
    b: &ConjugacyRep,
    radius: usize,
    budgets: Budgets,
) -> Result<ChamberSet> {
    check_kind(rs, b)?;
    if rs.kind() == Kind::G2 {
        let mut set = superset_complete(rs, b, radius, budgets)?;
        set.window.flag("fallback-complete");
        return Ok(set);
    }
    let window = budgets.stability_window.clamp(1, budgets.q_max.max(1));
    let results: Vec<(BTreeSet<AffineElement>, bool)> = class_tasks(rs, budgets.p_max)
        .into_par_iter()
        .map(|(class, p, w)| {
            if valid_q_values(rs, class, p, w, budgets.q_max).is_empty() {
                return Ok((BTreeSet::new(), true));
            }
            let lim = fold_limit(rs, class, p, w, b, budgets.q_max.max(1), window, Some(radius))?;
            Ok((lim.chambers, lim.stable))
        })
        .collect::<Result<_>>()?;
    let mut found = BTreeSet::new();
    let mut truncated = false;
    for (set, stable) in results {
        found.extend(set);
        truncated |= !stable;
    }
    let mut out = ChamberSet::new(rs, *b, SetKind::Superset, Window::new(radius, budgets));
    out.window.truncated = truncated;
    Ok(finish(rs, out, found))
}

/// Departure indices worth folding for a target: everything before the
/// turning edge (all of them on corridors and for unclassified kinds).
pub fn departures(rs: &RootSystem, target: &AffineElement, t: &GalleryType) -> Vec<usize> {
    match locate(rs, target) {
        Location::Base => Vec::new(),
        Location::Region(_) => {
            let turn = turning_index(rs, t).unwrap_or(t.len());
            (0..turn.min(t.len())).collect()
        }
        _ => (0..t.len()).collect(),
    }
}

/// Union of the folding results of every type-edge pair whose SMG target
/// has length at most `dep_budget`.
pub fn superset_complete(
    rs: &RootSystem,
    b: &ConjugacyRep,
    radius: usize,
    budgets: Budgets,
) -> Result<ChamberSet> {
    check_kind(rs, b)?;
    let targets = rs.alcoves_within(budgets.dep_budget);
    let bel = b.element();
    let results: Vec<BTreeSet<AffineElement>> = targets
        .par_iter()
        .map(|e| {
            let t = smg(rs, e);
            let mut out = BTreeSet::new();
            for k in departures(rs, e, &t) {
                let dag = composite_family(rs, &t, k, &bel)?;
                out.extend(fold_dag(rs, &dag, Some(radius)));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut found = BTreeSet::new();
    for r in results {
        found.extend(r);
    }
    let mut out = ChamberSet::new(rs, *b, SetKind::Superset, Window::new(radius, budgets));
    if rs.kind() == Kind::G2 {
        out.window.flag("unvalidated");
    }
    Ok(finish(rs, out, found))
}

/// Folding results of a left-infinite type given by a finite tail: the
/// union over its truncations, each folded from its own first chamber.
pub fn fold_left_infinite(
    rs: &RootSystem,
    tail: &GalleryType,
    radius: Option<usize>,
) -> BTreeSet<AffineElement> {
    let chambers = tail.realization(rs);
    let mut out = BTreeSet::new();
    for (i, start) in chambers.iter().enumerate() {
        let t = GalleryType::new(*start, tail.labels[i..].to_vec());
        let dag = crate::gallery::LabelDag::path(&t);
        out.extend(fold_dag(rs, &dag, radius));
    }
    out
}

/// Class method with each q-limit replaced by the folding results of the
/// half-infinite tail at `depth`. b = 1 has no tails and uses q-limits.
pub fn superset_halfinf(
    rs: &RootSystem,
    b: &ConjugacyRep,
    radius: usize,
    budgets: Budgets,
    depth: usize,
) -> Result<ChamberSet> {
    check_kind(rs, b)?;
    if b.is_identity() || rs.kind() == Kind::G2 {
        let mut set = superset_classes(rs, b, radius, budgets)?;
        set.window.flag("halfinf-fallback");
        return Ok(set);
    }
    let results: Vec<BTreeSet<AffineElement>> = class_tasks(rs, budgets.p_max)
        .into_par_iter()
        .map(|(class, p, w)| {
            if valid_q_values(rs, class, p, w, budgets.q_max).is_empty() {
                return Ok(BTreeSet::new());
            }
            let tail = omega_tail(rs, class, p, w, b, depth)?;
            let out = fold_left_infinite(rs, &tail, Some(radius));
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut found = BTreeSet::new();
    for r in results {
        found.extend(r);
    }
    let out = ChamberSet::new(rs, *b, SetKind::Superset, Window::new(radius, budgets));
    Ok(finish(rs, out, found))
}

pub fn superset(
    rs: &RootSystem,
    b: &ConjugacyRep,
    radius: usize,
    budgets: Budgets,
    method: Method,
) -> Result<ChamberSet> {
    match method {
        Method::Classes => superset_classes(rs, b, radius, budgets),
        Method::Complete => superset_complete(rs, b, radius, budgets),
        Method::HalfInf => superset_halfinf(rs, b, radius, budgets, 40),
    }
}
