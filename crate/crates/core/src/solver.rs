//! Per-chamber verdicts from the superset/subset sandwich, the rank-one
//! closed forms, and the extended groups (GL, PGL, GSp, PSp) that only add
//! a determinant coordinate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chamber_set::{Budgets, ChamberSet, SetKind, Window};
use crate::error::{Error, Result};
use crate::gallery::ConjugacyRep;
use crate::subset::{certified_subset, Provenance};
use crate::superset::{superset, Method};
use crate::weyl::{root_system, AffineElement, Kind, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Nonempty,
    Empty,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Nonempty => "NONEMPTY",
            Verdict::Empty => "EMPTY",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictEntry {
    pub verdict: Verdict,
    /// Set exactly for `Nonempty`.
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictMap {
    pub group: Kind,
    pub b: ConjugacyRep,
    pub window: Window,
    /// Every alcove within the window radius.
    pub entries: BTreeMap<AffineElement, VerdictEntry>,
}

impl VerdictMap {
    pub fn with(&self, v: Verdict) -> BTreeSet<AffineElement> {
        self.entries
            .iter()
            .filter(|(_, e)| e.verdict == v)
            .map(|(g, _)| *g)
            .collect()
    }

    pub fn nonempty(&self) -> BTreeSet<AffineElement> {
        self.with(Verdict::Nonempty)
    }

    pub fn empty(&self) -> BTreeSet<AffineElement> {
        self.with(Verdict::Empty)
    }

    pub fn unknown(&self) -> BTreeSet<AffineElement> {
        self.with(Verdict::Unknown)
    }

    pub fn verdict(&self, g: &AffineElement) -> Option<Verdict> {
        self.entries.get(g).map(|e| e.verdict)
    }

    /// No chamber is left undecided.
    pub fn is_exact(&self) -> bool {
        self.entries.values().all(|e| e.verdict != Verdict::Unknown)
    }

    /// EMPTY only means "outside the superset found within these budgets".
    pub fn empty_at_budget(&self) -> bool {
        self.window.truncated
    }

    /// Label used in reports: `EMPTY-at-budget` when the superset was cut.
    pub fn label(&self, v: Verdict) -> String {
        if v == Verdict::Empty && self.empty_at_budget() {
            "EMPTY-at-budget".into()
        } else {
            v.to_string()
        }
    }
}

/// Assembles verdicts from a superset and a certified subset over the same
/// window. Fails if the subset is not contained in the superset, which
/// would mean one of the two pipelines is wrong.
pub fn assemble(
    rs: &RootSystem,
    sup: &ChamberSet,
    sub: &ChamberSet,
    provenance: &BTreeMap<AffineElement, Provenance>,
) -> Result<VerdictMap> {
    sup.check_compatible(sub)?;
    if let Some(g) = sub.chambers.iter().find(|g| !sup.contains(g)) {
        return Err(Error::InvalidParams(format!(
            "certified chamber {} is missing from the superset",
            rs.format_element(g)
        )));
    }
    let mut window = sup.window.clone();
    for f in &sub.window.flags {
        window.flag(f);
    }
    let mut entries = BTreeMap::new();
    for g in rs.alcoves_within(sup.window.radius) {
        let entry = if sub.contains(&g) {
            VerdictEntry {
                verdict: Verdict::Nonempty,
                provenance: Some(provenance.get(&g).cloned().unwrap_or(Provenance::External)),
            }
        } else if sup.contains(&g) {
            VerdictEntry {
                verdict: Verdict::Unknown,
                provenance: None,
            }
        } else {
            VerdictEntry {
                verdict: Verdict::Empty,
                provenance: None,
            }
        };
        entries.insert(g, entry);
    }
    Ok(VerdictMap {
        group: rs.kind(),
        b: sup.b,
        window,
        entries,
    })
}

/// Runs both pipelines and assembles the verdicts.
pub fn solve(
    rs: &RootSystem,
    b: &ConjugacyRep,
    radius: usize,
    budgets: Budgets,
    method: Method,
    seed_only: bool,
) -> Result<VerdictMap> {
    let (sup, sub) = rayon::join(
        || superset(rs, b, radius, budgets, method),
        || certified_subset(rs, b, radius, budgets, seed_only),
    );
    let (sup, sub) = (sup?, sub?);
    let mut vm = assemble(rs, &sup, &sub.set, &sub.provenance)?;
    if !sub.converged {
        vm.window.flag("closure-unconverged");
    }
    Ok(vm)
}

// ---------------------------------------------------------------------------
// Rank one

/// Closed-form solution set for `b = diag(π^s, π^{-s})`, as a predicate on
/// the chamber index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sl2Solution {
    pub s: u64,
}

impl Sl2Solution {
    pub fn contains(&self, i: i64) -> bool {
        shifted_pattern(2 * self.s, i)
    }
}

pub fn sl2_solution(s: u64) -> Sl2Solution {
    Sl2Solution { s }
}

/// `{±d} ∪ {±(d + i) : i odd}`, which for `d = 0` is `{0} ∪ odd`.
fn shifted_pattern(d: u64, i: i64) -> bool {
    let a = i.unsigned_abs();
    a == d || (a > d && (a - d) % 2 == 1)
}

/// The `s` whose solution set contains chamber `i`.
pub fn sl2_inverse(i: i64) -> BTreeSet<u64> {
    let a = i.unsigned_abs();
    if a % 2 == 0 {
        BTreeSet::from([a / 2])
    } else {
        (0..=a / 2).collect()
    }
}

/// Rows `(i, s-values)` for `0 ≤ i ≤ max`.
pub fn sl2_table(max: u64) -> Vec<(u64, BTreeSet<u64>)> {
    (0..=max).map(|i| (i, sl2_inverse(i as i64))).collect()
}

// ---------------------------------------------------------------------------
// Extended groups

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Sl2,
    Gl2,
    Pgl2,
    Sl3,
    Gl3,
    Pgl3,
    Sp4,
    Gsp4,
    Psp4,
    G2,
}

impl Group {
    pub const ALL: [Group; 10] = [
        Group::Sl2,
        Group::Gl2,
        Group::Pgl2,
        Group::Sl3,
        Group::Gl3,
        Group::Pgl3,
        Group::Sp4,
        Group::Gsp4,
        Group::Psp4,
        Group::G2,
    ];

    pub fn kind(self) -> Kind {
        match self {
            Group::Sl2 | Group::Gl2 | Group::Pgl2 => Kind::A1,
            Group::Sl3 | Group::Gl3 | Group::Pgl3 => Kind::A2,
            Group::Sp4 | Group::Gsp4 | Group::Psp4 => Kind::C2,
            Group::G2 => Kind::G2,
        }
    }

    /// Modulus of the determinant coordinate for the adjoint forms.
    pub fn modulus(self) -> Option<i64> {
        match self {
            Group::Pgl2 | Group::Psp4 => Some(2),
            Group::Pgl3 => Some(3),
            _ => None,
        }
    }

    /// Whether the group carries a determinant (or similitude) coordinate.
    pub fn is_extended(self) -> bool {
        matches!(
            self,
            Group::Gl2 | Group::Pgl2 | Group::Gl3 | Group::Pgl3 | Group::Gsp4 | Group::Psp4
        )
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Group::Sl2 => "sl2",
            Group::Gl2 => "gl2",
            Group::Pgl2 => "pgl2",
            Group::Sl3 => "sl3",
            Group::Gl3 => "gl3",
            Group::Pgl3 => "pgl3",
            Group::Sp4 => "sp4",
            Group::Gsp4 => "gsp4",
            Group::Psp4 => "psp4",
            Group::G2 => "g2",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Group::ALL
            .into_iter()
            .find(|g| g.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown group {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gl2Variant {
    /// `diag(π^α, π^β)`.
    Diagonal { alpha: i64, beta: i64 },
    /// `[[0, 1], [π^α, 0]]` with `α` odd.
    Antidiagonal { alpha: i64 },
}

/// Chamber verdicts plus the constant second coordinate
/// `v(det(x⁻¹bσ(x))) = v(det b)`, reduced mod `modulus` for adjoint groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedVerdict {
    pub group: Group,
    pub b: Vec<i64>,
    pub radius: usize,
    pub nonempty: BTreeSet<AffineElement>,
    pub unknown: BTreeSet<AffineElement>,
    pub det_component: i64,
    pub modulus: Option<i64>,
    pub flags: Vec<String>,
}

fn reduce(x: i64, m: Option<i64>) -> i64 {
    m.map_or(x, |m| x.rem_euclid(m))
}

/// GL2 (or PGL2 when `adjoint`) for the two shapes of `b`. The chamber
/// coordinate lives on the A1 line of SL2.
pub fn gl2_variants(variant: Gl2Variant, radius: usize, adjoint: bool) -> Result<ExtendedVerdict> {
    let rs = root_system(Kind::A1);
    let r = radius as i64;
    let (chambers, det, b): (BTreeSet<AffineElement>, i64, Vec<i64>) = match variant {
        Gl2Variant::Diagonal { alpha, beta } => {
            let d = (alpha - beta).unsigned_abs();
            let set = (-r..=r)
                .filter(|&i| shifted_pattern(d, i))
                .map(|i| rs.a1_alcove(i))
                .collect();
            (set, alpha + beta, vec![alpha, beta])
        }
        Gl2Variant::Antidiagonal { alpha } => {
            if alpha % 2 == 0 {
                return Err(Error::InvalidParams(format!(
                    "the antidiagonal class needs an odd exponent, got {alpha}"
                )));
            }
            let set = (-r..=r)
                .filter(|i| i % 2 == 0)
                .map(|i| rs.a1_alcove(i))
                .collect();
            (set, alpha, vec![alpha])
        }
    };
    let group = if adjoint { Group::Pgl2 } else { Group::Gl2 };
    Ok(ExtendedVerdict {
        group,
        b,
        radius,
        nonempty: chambers,
        unknown: BTreeSet::new(),
        det_component: reduce(det, group.modulus()),
        modulus: group.modulus(),
        flags: Vec::new(),
    })
}

/// Attaches the determinant coordinate to a verdict map computed for the
/// simply-connected form. The chamber sets are unchanged; for the listed
/// representatives `b` has determinant (or similitude) valuation 0.
pub fn extended_decorate(group: Group, base: &VerdictMap) -> Result<ExtendedVerdict> {
    if !group.is_extended() || group.kind() != base.group || group == Group::Gl2 || group == Group::Pgl2 {
        return Err(Error::Unsupported(format!(
            "{group} is not an extension of the {} base map",
            base.group
        )));
    }
    Ok(ExtendedVerdict {
        group,
        b: base.b.exponents(),
        radius: base.window.radius,
        nonempty: base.nonempty(),
        unknown: base.unknown(),
        det_component: reduce(0, group.modulus()),
        modulus: group.modulus(),
        flags: base.window.flags.clone(),
    })
}

// ---------------------------------------------------------------------------
// Comparison

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub left_kind: SetKind,
    pub right_kind: SetKind,
    pub common: usize,
    pub only_left: Vec<String>,
    pub only_right: Vec<String>,
    pub exact: bool,
}

pub fn compare(rs: &RootSystem, a: &ChamberSet, b: &ChamberSet) -> Result<CompareReport> {
    a.check_compatible(b)?;
    let fmt = |s: BTreeSet<&AffineElement>| -> Vec<String> {
        s.into_iter().map(|g| rs.format_element(g)).collect()
    };
    let only_left = fmt(a.chambers.difference(&b.chambers).collect());
    let only_right = fmt(b.chambers.difference(&a.chambers).collect());
    Ok(CompareReport {
        left_kind: a.kind,
        right_kind: b.kind,
        common: a.chambers.intersection(&b.chambers).count(),
        exact: only_left.is_empty() && only_right.is_empty(),
        only_left,
        only_right,
    })
}
