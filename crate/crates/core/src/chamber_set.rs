//! Windowed chamber sets shared by the superset, subset and solver layers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gallery::ConjugacyRep;
use crate::weyl::{AffineElement, Kind, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetKind {
    Superset,
    Subset,
    Exact,
}

/// Search budgets. Defaults reproduce the extent of the usual pictures in
/// well under a minute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub p_max: usize,
    pub q_max: usize,
    /// Largest SMG target length for the complete enumeration.
    pub dep_budget: usize,
    pub stability_window: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            p_max: 9,
            q_max: 25,
            dep_budget: 12,
            stability_window: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub radius: usize,
    pub budgets: Budgets,
    /// Some q-limit hit `q_max` before going quiet.
    pub truncated: bool,
    /// Free-form markers such as `"unvalidated"` or `"partial"`.
    pub flags: Vec<String>,
}

impl Window {
    pub fn new(radius: usize, budgets: Budgets) -> Self {
        Window {
            radius,
            budgets,
            truncated: false,
            flags: Vec::new(),
        }
    }

    pub fn flag(&mut self, f: &str) {
        if !self.flags.iter().any(|x| x == f) {
            self.flags.push(f.to_string());
            self.flags.sort();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberSet {
    pub group: Kind,
    pub b: ConjugacyRep,
    pub kind: SetKind,
    pub window: Window,
    pub chambers: BTreeSet<AffineElement>,
}

impl ChamberSet {
    pub fn new(rs: &RootSystem, b: ConjugacyRep, kind: SetKind, window: Window) -> Self {
        ChamberSet {
            group: rs.kind(),
            b,
            kind,
            window,
            chambers: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn contains(&self, g: &AffineElement) -> bool {
        self.chambers.contains(g)
    }

    /// Drops everything outside the window radius.
    pub fn truncate(&mut self, rs: &RootSystem) {
        let r = self.window.radius;
        self.chambers.retain(|g| rs.length(g) <= r);
    }

    /// The same set cut down to a smaller radius.
    pub fn restricted(&self, rs: &RootSystem, radius: usize) -> ChamberSet {
        let mut out = self.clone();
        out.window.radius = radius.min(self.window.radius);
        out.truncate(rs);
        out
    }

    pub fn check_compatible(&self, other: &ChamberSet) -> Result<()> {
        if self.group != other.group {
            return Err(Error::KindMismatch {
                expected: self.group,
                found: other.group,
            });
        }
        if self.b != other.b || self.window.radius != other.window.radius {
            return Err(Error::InvalidParams(format!(
                "window mismatch: b {:?} radius {} vs b {:?} radius {}",
                self.b.exponents(),
                self.window.radius,
                other.b.exponents(),
                other.window.radius
            )));
        }
        Ok(())
    }
}

/// Closes `set` under the C_M-preserving symmetries. These preserve length,
/// so the result stays inside any window the input was in.
pub fn symmetry_closure(rs: &RootSystem, set: &mut BTreeSet<AffineElement>) {
    let ops = rs.symmetry_ops();
    let mut stack: Vec<AffineElement> = set.iter().copied().collect();
    while let Some(g) = stack.pop() {
        for op in &ops {
            let h = rs.symmetry_apply(op, &g).expect("ops come from the same system");
            if set.insert(h) {
                stack.push(h);
            }
        }
    }
}

/// True when every symmetry maps the set into itself.
pub fn is_symmetric(rs: &RootSystem, set: &BTreeSet<AffineElement>) -> bool {
    let ops = rs.symmetry_ops();
    set.iter().all(|g| {
        ops.iter()
            .all(|op| set.contains(&rs.symmetry_apply(op, g).unwrap()))
    })
}
