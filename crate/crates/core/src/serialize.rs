//! Canonical JSON documents for chamber sets, verdict maps and extended
//! verdicts. Chambers are listed in the canonical element order and the
//! output is pretty-printed with a fixed field order, so equal inputs give
//! identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chamber_set::{Budgets, ChamberSet, SetKind, Window};
use crate::error::{Error, Result};
use crate::gallery::ConjugacyRep;
use crate::solver::{ExtendedVerdict, Group, Verdict, VerdictEntry, VerdictMap};
use crate::subset::Provenance;
use crate::weyl::{root_system, AffineElement, Kind, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocKind {
    Superset,
    Subset,
    Exact,
    Verdicts,
    Extended,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowDoc {
    pub radius: usize,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub group: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Group>,
    pub b: Vec<i64>,
    pub kind: DocKind,
    pub window: WindowDoc,
    pub budgets: Budgets,
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det_component: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberDoc {
    pub translation: Vec<i64>,
    pub finite: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub header: Header,
    pub chambers: Vec<ChamberDoc>,
}

fn chamber_doc(rs: &RootSystem, g: &AffineElement) -> ChamberDoc {
    ChamberDoc {
        translation: g.translation[..rs.dim()].iter().map(|&x| x as i64).collect(),
        finite: rs.finite_name(g.finite).to_string(),
        verdict: None,
        provenance: None,
    }
}

fn element_of(rs: &RootSystem, c: &ChamberDoc) -> Result<AffineElement> {
    if c.translation.len() != rs.dim() {
        return Err(Error::Parse(format!(
            "translation {:?} has the wrong dimension for {}",
            c.translation,
            rs.kind()
        )));
    }
    let mut t = [0i64; 3];
    for (slot, &x) in t.iter_mut().zip(&c.translation) {
        i32::try_from(x).map_err(|_| Error::Parse(format!("coordinate {x} out of range")))?;
        *slot = x;
    }
    let g = AffineElement::new(t, rs.finite_from_name(&c.finite)?);
    rs.validate(&g)?;
    Ok(g)
}

fn set_kind_doc(k: SetKind) -> DocKind {
    match k {
        SetKind::Superset => DocKind::Superset,
        SetKind::Subset => DocKind::Subset,
        SetKind::Exact => DocKind::Exact,
    }
}

fn header(rs: &RootSystem, b: &ConjugacyRep, kind: DocKind, window: &Window) -> Header {
    Header {
        group: rs.kind(),
        variant: None,
        b: b.exponents(),
        kind,
        window: WindowDoc {
            radius: window.radius,
            truncated: window.truncated,
        },
        budgets: window.budgets,
        flags: window.flags.clone(),
        det_component: None,
        modulus: None,
    }
}

pub fn chamber_set_document(rs: &RootSystem, set: &ChamberSet) -> Document {
    Document {
        header: header(rs, &set.b, set_kind_doc(set.kind), &set.window),
        chambers: set.chambers.iter().map(|g| chamber_doc(rs, g)).collect(),
    }
}

pub fn verdict_document(rs: &RootSystem, vm: &VerdictMap) -> Document {
    let chambers = vm
        .entries
        .iter()
        .map(|(g, e)| ChamberDoc {
            verdict: Some(e.verdict),
            provenance: e.provenance.clone(),
            ..chamber_doc(rs, g)
        })
        .collect();
    Document {
        header: header(rs, &vm.b, DocKind::Verdicts, &vm.window),
        chambers,
    }
}

/// Lists the nonempty chambers (and undecided ones, marked unknown).
pub fn extended_document(ev: &ExtendedVerdict) -> Document {
    let rs = root_system(ev.group.kind());
    let mut chambers: Vec<(AffineElement, Verdict)> = ev
        .nonempty
        .iter()
        .map(|g| (*g, Verdict::Nonempty))
        .chain(ev.unknown.iter().map(|g| (*g, Verdict::Unknown)))
        .collect();
    chambers.sort();
    Document {
        header: Header {
            group: rs.kind(),
            variant: Some(ev.group),
            b: ev.b.clone(),
            kind: DocKind::Extended,
            window: WindowDoc {
                radius: ev.radius,
                truncated: false,
            },
            budgets: Budgets::default(),
            flags: ev.flags.clone(),
            det_component: Some(ev.det_component),
            modulus: ev.modulus,
        },
        chambers: chambers
            .iter()
            .map(|(g, v)| ChamberDoc {
                verdict: Some(*v),
                ..chamber_doc(rs, g)
            })
            .collect(),
    }
}

pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn window_of(h: &Header) -> Window {
    let mut w = Window::new(h.window.radius, h.budgets);
    w.truncated = h.window.truncated;
    w.flags = h.flags.clone();
    w
}

pub fn parse_chamber_set(doc: &Document) -> Result<ChamberSet> {
    let h = &doc.header;
    let kind = match h.kind {
        DocKind::Superset => SetKind::Superset,
        DocKind::Subset => SetKind::Subset,
        DocKind::Exact => SetKind::Exact,
        other => {
            return Err(Error::Parse(format!("expected a chamber set, found {other:?}")));
        }
    };
    let rs = root_system(h.group);
    let b = ConjugacyRep::new(rs, &h.b)?;
    let mut set = ChamberSet::new(rs, b, kind, window_of(h));
    for c in &doc.chambers {
        set.chambers.insert(element_of(rs, c)?);
    }
    Ok(set)
}

pub fn parse_verdict_map(doc: &Document) -> Result<VerdictMap> {
    let h = &doc.header;
    if h.kind != DocKind::Verdicts {
        return Err(Error::Parse(format!("expected verdicts, found {:?}", h.kind)));
    }
    let rs = root_system(h.group);
    let b = ConjugacyRep::new(rs, &h.b)?;
    let mut entries = BTreeMap::new();
    for c in &doc.chambers {
        let verdict = c
            .verdict
            .ok_or_else(|| Error::Parse("chamber without a verdict".into()))?;
        entries.insert(
            element_of(rs, c)?,
            VerdictEntry {
                verdict,
                provenance: c.provenance.clone(),
            },
        );
    }
    Ok(VerdictMap {
        group: h.group,
        b,
        window: window_of(h),
        entries,
    })
}
