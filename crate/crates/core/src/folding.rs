//! Foldings of gallery types onto the main apartment, seen from C_M.
//!
//! Walking a type from its start, a crossing whose wall has C_M on the same
//! side as the current chamber must be taken; any other crossing may also
//! be folded back, leaving the chamber unchanged.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::gallery::{class_family, valid_q_values, ClassKind, ClassParams, ConjugacyRep, GalleryType, LabelDag};
use crate::weyl::{AffineElement, RootSystem};

pub const NAIVE_BOUND: usize = 16;

/// The successors of `d` for the label `c`: the reflection, and `d` itself
/// when the step is a choice point.
pub fn fold_step(rs: &RootSystem, d: &AffineElement, c: usize) -> (AffineElement, Option<AffineElement>) {
    let reflected = rs.adjacent(d, c);
    let base = rs.base_barycenter();
    if rs.facet_side(d, c, &base) > 0 {
        (reflected, None)
    } else {
        (reflected, Some(*d))
    }
}

/// Endpoint of the fold that always reflects, i.e. the unfolded gallery.
pub fn fold_standard(rs: &RootSystem, t: &GalleryType) -> AffineElement {
    t.end(rs)
}

/// Positions (0-based label indices) where the unfolded gallery meets a
/// choice point.
pub fn choice_points(rs: &RootSystem, t: &GalleryType) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cur = t.start;
    for (i, &c) in t.labels.iter().enumerate() {
        let (next, stay) = fold_step(rs, &cur, c as usize);
        if stay.is_some() {
            out.push(i);
        }
        cur = next;
    }
    out
}

pub fn fold_all(rs: &RootSystem, t: &GalleryType) -> BTreeSet<AffineElement> {
    fold_dag(rs, &LabelDag::path(t), None)
}

/// Folding results of every path of `dag`. With a radius, states that can
/// no longer end within that distance of C_M are dropped, so the output is
/// the folding results intersected with the window.
///
/// Reachable chambers are kept per node, which is the memoization the
/// exponential branch tree collapses to.
pub fn fold_dag(rs: &RootSystem, dag: &LabelDag, radius: Option<usize>) -> BTreeSet<AffineElement> {
    let remaining = dag.longest_to_sink();
    let mut states: Vec<HashSet<AffineElement>> = vec![HashSet::new(); dag.node_count()];
    states[dag.root() as usize].insert(dag.start);
    let mut results = BTreeSet::new();
    for node in dag.topo_order() {
        let here = std::mem::take(&mut states[node as usize]);
        let edges = dag.out_edges(node);
        if edges.is_empty() {
            // an edgeless root never went through the pruning below
            results.extend(here.into_iter().filter(|x| radius.map_or(true, |r| rs.length(x) <= r)));
            continue;
        }
        for d in here {
            for &(c, to) in edges {
                let (r, stay) = fold_step(rs, &d, c as usize);
                for x in std::iter::once(r).chain(stay) {
                    if let Some(rad) = radius {
                        if rs.length(&x) > rad + remaining[to as usize] {
                            continue;
                        }
                    }
                    states[to as usize].insert(x);
                }
            }
        }
    }
    results
}

/// Reference enumeration over every folding, without any caching.
pub fn fold_naive(rs: &RootSystem, t: &GalleryType) -> Result<BTreeSet<AffineElement>> {
    if t.labels.len() > NAIVE_BOUND {
        return Err(Error::OracleBound {
            len: t.labels.len(),
            bound: NAIVE_BOUND,
        });
    }
    fn go(rs: &RootSystem, labels: &[u8], d: AffineElement, out: &mut BTreeSet<AffineElement>) {
        match labels.split_first() {
            None => {
                out.insert(d);
            }
            Some((&c, rest)) => {
                let reflected = rs.adjacent(&d, c as usize);
                go(rs, rest, reflected, out);
                if rs.facet_side(&d, c as usize, &rs.base_barycenter()) < 0 {
                    go(rs, rest, d, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(rs, &t.labels, t.start, &mut out);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldLimit {
    pub chambers: BTreeSet<AffineElement>,
    /// True when `stability_window` consecutive q values added nothing.
    pub stable: bool,
    /// Largest q folded.
    pub q_reached: usize,
}

/// Union of the folding results of a class over `q ≤ q_max`, stopping
/// early once `stability_window` consecutive admissible q add nothing.
#[allow(clippy::too_many_arguments)]
pub fn fold_limit(
    rs: &RootSystem,
    class: ClassKind,
    p: usize,
    w: u8,
    b: &ConjugacyRep,
    q_max: usize,
    stability_window: usize,
    radius: Option<usize>,
) -> Result<FoldLimit> {
    if stability_window == 0 || stability_window > q_max {
        return Err(Error::InvalidParams(format!(
            "need 1 ≤ stability_window ({stability_window}) ≤ q_max ({q_max})"
        )));
    }
    let mut chambers = BTreeSet::new();
    let mut quiet = 0;
    let mut q_reached = 0;
    for q in valid_q_values(rs, class, p, w, q_max) {
        let dag = class_family(rs, &ClassParams { class, p, q, w }, b)?;
        let res = fold_dag(rs, &dag, radius);
        q_reached = q;
        let before = chambers.len();
        chambers.extend(res);
        if chambers.len() == before {
            quiet += 1;
            if quiet >= stability_window {
                return Ok(FoldLimit {
                    chambers,
                    stable: true,
                    q_reached,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Ok(FoldLimit {
        chambers,
        stable: false,
        q_reached,
    })
}
