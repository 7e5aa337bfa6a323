//! Certified-nonempty chambers: norm-zero seeds for b = 1, chambers whose
//! composite gallery folds in only one way, and the closure of these under
//! the length rules and the symmetries.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chamber_set::{Budgets, ChamberSet, SetKind, Window};
use crate::error::{Error, Result};
use crate::folding::fold_dag;
use crate::gallery::{appendage_family, composite_family, smg, ConjugacyRep, LabelDag};
use crate::superset::departures;
use crate::symmetry::SymmetryKind;
use crate::weyl::{AffineElement, RootSystem};

/// Why a chamber is known to be nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// `N_w(λ) = 0`: the element itself is σ-conjugate to 1.
    NormZero,
    /// `w⁻¹·b·w` for a finite `w`, realized inside the main apartment.
    Conjugate,
    /// The only folding result of a composite gallery for `b`.
    UniqueFold { target: AffineElement, departure: usize },
    /// Appendage composite for a norm-zero element `tilde_b`.
    Appendage { tilde_b: AffineElement, cotype: usize },
    /// `sw` or `ws` from `w` when one side goes up and the other down.
    LengthOne { from: AffineElement, s: usize, left: bool },
    /// `sws` from `w` with equal length.
    Conjugation { from: AffineElement, s: usize },
    Symmetry { from: AffineElement, op: SymmetryKind },
    /// Given by the caller.
    External,
}

impl Provenance {
    pub fn parent(&self) -> Option<AffineElement> {
        match self {
            Provenance::LengthOne { from, .. }
            | Provenance::Conjugation { from, .. }
            | Provenance::Symmetry { from, .. } => Some(*from),
            _ => None,
        }
    }
}

pub type ProvenanceMap = BTreeMap<AffineElement, Provenance>;

/// Subset chambers plus the derivation of each.
#[derive(Clone, Debug)]
pub struct CertifiedSet {
    pub set: ChamberSet,
    pub provenance: ProvenanceMap,
    /// False when `max_passes` stopped the closure early.
    pub converged: bool,
}

fn require_identity(b: &ConjugacyRep, what: &str) -> Result<()> {
    if !b.is_identity() {
        return Err(Error::Unsupported(format!(
            "{what} is only effective for b = 1, got b = {:?}",
            b.exponents()
        )));
    }
    Ok(())
}

pub fn is_norm_zero(rs: &RootSystem, g: &AffineElement) -> bool {
    rs.norm_sum(g.finite, &g.lambda()).iter().all(|&x| x == 0)
}

/// All `t_λ·w·C_M` within `radius` whose norm `N_w(λ)` vanishes.
pub fn kr_seed(rs: &RootSystem, b: &ConjugacyRep, radius: usize) -> Result<ChamberSet> {
    require_identity(b, "the norm-zero seed")?;
    let mut set = ChamberSet::new(rs, *b, SetKind::Subset, Window::new(radius, Budgets::default()));
    let all = rs.alcoves_within(radius);
    set.chambers = all
        .par_iter()
        .filter(|g| is_norm_zero(rs, g))
        .copied()
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(set)
}

/// If every folding of the composite gallery ends in the same chamber,
/// that chamber. `None` when some path has several results.
fn unique_result(rs: &RootSystem, dag: &LabelDag) -> Result<Option<AffineElement>> {
    // Each path is a legitimate choice of middle gallery, and the true
    // value lies among the results of every one of them.
    for path in dag.paths(4096)? {
        let res = fold_dag(rs, &LabelDag::path(&path), None);
        if res.len() == 1 {
            return Ok(res.into_iter().next());
        }
    }
    Ok(None)
}

/// The appendage check: `xC_M` is the neighbour of C_M across its cotype
/// `cotype` facet, off the main apartment, and `tilde_b` is a norm-zero
/// element. A single folding result is a chamber of the b = 1 solution set.
pub fn appendage_certify(
    rs: &RootSystem,
    tilde_b: &AffineElement,
    cotype: usize,
) -> Result<Option<AffineElement>> {
    if !is_norm_zero(rs, tilde_b) {
        return Err(Error::InvalidParams(format!(
            "{} is not σ-conjugate to 1 (nonzero norm)",
            rs.format_element(tilde_b)
        )));
    }
    let dag = appendage_family(rs, tilde_b, cotype)?;
    unique_result(rs, &dag)
}

/// Appendage chambers over every norm-zero `tilde_b` within `radius` and
/// every cotype, kept when inside the window.
pub fn appendage_seeds(rs: &RootSystem, radius: usize) -> Result<ProvenanceMap> {
    let cands: Vec<AffineElement> = rs
        .alcoves_within(radius)
        .into_iter()
        .filter(|g| is_norm_zero(rs, g))
        .collect();
    let found: Vec<Vec<(AffineElement, Provenance)>> = cands
        .par_iter()
        .map(|tb| {
            let mut out = Vec::new();
            for c in 0..=rs.rank() {
                if let Some(g) = appendage_certify(rs, tb, c)? {
                    if rs.length(&g) <= radius {
                        out.push((g, Provenance::Appendage { tilde_b: *tb, cotype: c }));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut map = ProvenanceMap::new();
    for (g, p) in found.into_iter().flatten() {
        map.entry(g).or_insert(p);
    }
    Ok(map)
}

/// Chambers certified by a composite gallery with a unique folding, over
/// targets of length at most `dep_budget`.
pub fn unique_fold_seeds(
    rs: &RootSystem,
    b: &ConjugacyRep,
    radius: usize,
    dep_budget: usize,
) -> Result<ProvenanceMap> {
    let bel = b.element();
    let targets = rs.alcoves_within(dep_budget);
    let found: Vec<Vec<(AffineElement, Provenance)>> = targets
        .par_iter()
        .map(|e| {
            let t = smg(rs, e);
            let mut out = Vec::new();
            for k in departures(rs, e, &t) {
                let dag = composite_family(rs, &t, k, &bel)?;
                if let Some(g) = unique_result(rs, &dag)? {
                    if rs.length(&g) <= radius {
                        out.push((g, Provenance::UniqueFold { target: *e, departure: k }));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut map = ProvenanceMap::new();
    for (g, p) in found.into_iter().flatten() {
        map.entry(g).or_insert(p);
    }
    Ok(map)
}

/// Every chamber a single rule application produces from `w`, in a fixed
/// order, restricted to lengths `≤ radius`.
pub fn rule_images(rs: &RootSystem, w: &AffineElement, radius: usize) -> Vec<(AffineElement, Provenance)> {
    let lw = rs.length(w);
    let mut out = Vec::new();
    for s in 0..=rs.rank() {
        let g = rs.generator(s);
        let sw = rs.compose(&g, w);
        let ws = rs.compose(w, &g);
        let (lsw, lws) = (rs.length(&sw), rs.length(&ws));
        if lsw > lw && lws < lw {
            out.push((sw, Provenance::LengthOne { from: *w, s, left: true }));
        }
        if lsw < lw && lws > lw {
            out.push((ws, Provenance::LengthOne { from: *w, s, left: false }));
        }
        let sws = rs.compose(&sw, &g);
        if rs.length(&sws) == lw {
            out.push((sws, Provenance::Conjugation { from: *w, s }));
        }
    }
    for op in rs.symmetry_ops() {
        let h = rs.symmetry_apply(&op, w).expect("op of this system");
        out.push((h, Provenance::Symmetry { from: *w, op: op.kind }));
    }
    out.retain(|(h, _)| rs.length(h) <= radius);
    out
}

/// Least fixed point of the rules within the window. Rule A raises length
/// and the others keep it, so nothing outside the window can lead back in.
/// Works in passes over the newly added chambers, each sorted by length
/// then canonical order; `max_passes = None` runs to the fixed point.
pub fn closure_expand(
    rs: &RootSystem,
    seed: &ChamberSet,
    seed_provenance: &ProvenanceMap,
    radius: usize,
    max_passes: Option<usize>,
) -> CertifiedSet {
    let mut prov: ProvenanceMap = BTreeMap::new();
    for g in &seed.chambers {
        if rs.length(g) <= radius {
            let p = seed_provenance.get(g).cloned().unwrap_or(Provenance::External);
            prov.insert(*g, p);
        }
    }
    let mut frontier: Vec<AffineElement> = prov.keys().copied().collect();
    let mut passes = 0;
    let mut converged = true;
    while !frontier.is_empty() {
        if max_passes.is_some_and(|m| passes >= m) {
            converged = false;
            break;
        }
        passes += 1;
        frontier.sort_by_key(|g| (rs.length(g), *g));
        let mut next = Vec::new();
        for w in &frontier {
            for (h, p) in rule_images(rs, w, radius) {
                if let std::collections::btree_map::Entry::Vacant(e) = prov.entry(h) {
                    e.insert(p);
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    let mut set = seed.clone();
    set.kind = SetKind::Subset;
    set.window.radius = radius;
    set.chambers = prov.keys().copied().collect();
    CertifiedSet {
        set,
        provenance: prov,
        converged,
    }
}

/// Replays the provenance chain of `g`; returns the rule steps from a seed
/// to `g`, or an error if some step does not follow from its parent.
pub fn replay(rs: &RootSystem, prov: &ProvenanceMap, g: &AffineElement) -> Result<Vec<AffineElement>> {
    let mut chain = vec![*g];
    let mut cur = *g;
    while let Some(p) = prov.get(&cur) {
        let Some(parent) = p.parent() else {
            chain.reverse();
            return Ok(chain);
        };
        let ok = rule_images(rs, &parent, usize::MAX)
            .iter()
            .any(|(h, q)| *h == cur && q == p);
        if !ok || chain.len() > prov.len() {
            return Err(Error::InvalidParams(format!(
                "broken derivation at {}",
                rs.format_element(&cur)
            )));
        }
        chain.push(parent);
        cur = parent;
    }
    Err(Error::InvalidParams(format!(
        "{} has no provenance",
        rs.format_element(&cur)
    )))
}

/// The certified subset for `b`: for b = 1 the norm-zero seed plus
/// appendages, otherwise the conjugates `w⁻¹bw` plus unique foldings
/// (flagged partial), closed under the rules.
pub fn certified_subset(
    rs: &RootSystem,
    b: &ConjugacyRep,
    radius: usize,
    budgets: Budgets,
    seed_only: bool,
) -> Result<CertifiedSet> {
    let mut prov = ProvenanceMap::new();
    let mut seed = ChamberSet::new(rs, *b, SetKind::Subset, Window::new(radius, budgets));
    if b.is_identity() {
        for g in kr_seed(rs, b, radius)?.chambers {
            prov.insert(g, Provenance::NormZero);
        }
        if !seed_only {
            for (g, p) in appendage_seeds(rs, radius)? {
                prov.entry(g).or_insert(p);
            }
        }
    } else {
        for g in b.w_conjugates(rs) {
            if rs.length(&g) <= radius {
                prov.insert(g, Provenance::Conjugate);
            }
        }
        if !seed_only {
            for (g, p) in unique_fold_seeds(rs, b, radius, budgets.dep_budget)? {
                prov.entry(g).or_insert(p);
            }
        }
        seed.window.flag("partial");
    }
    seed.chambers = prov.keys().copied().collect::<BTreeSet<_>>();
    if seed_only {
        return Ok(CertifiedSet {
            set: seed,
            provenance: prov,
            converged: true,
        });
    }
    Ok(closure_expand(rs, &seed, &prov, radius, None))
}
