//! Gallery types in the main apartment: standard minimal galleries, the
//! parallelogram of minimal galleries between two alcoves, composite
//! galleries for a conjugacy representative, and the I1/I2 class families.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weyl::{AffineElement, Kind, RootSystem, Vector, Wall};

/// A start alcove and the cotypes of the facets crossed in turn.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GalleryType {
    pub start: AffineElement,
    pub labels: Vec<u8>,
}

impl GalleryType {
    pub fn new(start: AffineElement, labels: Vec<u8>) -> Self {
        GalleryType { start, labels }
    }

    pub fn from_word(start: AffineElement, word: &[usize]) -> Self {
        GalleryType {
            start,
            labels: word.iter().map(|&c| c as u8).collect(),
        }
    }

    /// Number of crossings.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The unfolded chambers `start, start·s_{c1}, …`.
    pub fn realization(&self, rs: &RootSystem) -> Vec<AffineElement> {
        let mut out = Vec::with_capacity(self.labels.len() + 1);
        let mut cur = self.start;
        out.push(cur);
        for &c in &self.labels {
            cur = rs.adjacent(&cur, c as usize);
            out.push(cur);
        }
        out
    }

    pub fn end(&self, rs: &RootSystem) -> AffineElement {
        self.labels
            .iter()
            .fold(self.start, |cur, &c| rs.adjacent(&cur, c as usize))
    }

    pub fn is_minimal(&self, rs: &RootSystem) -> bool {
        rs.distance(&self.start, &self.end(rs)) == self.labels.len()
    }
}

/// A labelled DAG whose root-to-sink paths all have the same length. It
/// stands for the family of gallery types spelled by its paths, all starting
/// at `start`.
#[derive(Clone, Debug)]
pub struct LabelDag {
    pub start: AffineElement,
    edges: Vec<Vec<(u8, u32)>>,
}

impl LabelDag {
    pub fn new(start: AffineElement) -> Self {
        LabelDag {
            start,
            edges: vec![Vec::new()],
        }
    }

    pub fn path(t: &GalleryType) -> Self {
        let mut dag = LabelDag::new(t.start);
        dag.append_path(0, &t.labels);
        dag
    }

    pub fn root(&self) -> u32 {
        0
    }

    pub fn node_count(&self) -> usize {
        self.edges.len()
    }

    pub fn out_edges(&self, node: u32) -> &[(u8, u32)] {
        &self.edges[node as usize]
    }

    pub fn add_node(&mut self) -> u32 {
        self.edges.push(Vec::new());
        (self.edges.len() - 1) as u32
    }

    pub fn add_edge(&mut self, from: u32, label: u8, to: u32) {
        self.edges[from as usize].push((label, to));
    }

    pub fn append_path(&mut self, from: u32, labels: &[u8]) -> u32 {
        let mut cur = from;
        for &c in labels {
            let next = self.add_node();
            self.add_edge(cur, c, next);
            cur = next;
        }
        cur
    }

    /// Appends every minimal gallery from `a` to `b`, with `from` standing
    /// for `a`. Returns the node standing for `b`.
    pub fn append_geodesics(
        &mut self,
        rs: &RootSystem,
        from: u32,
        a: &AffineElement,
        b: &AffineElement,
    ) -> u32 {
        self.append_geodesics_into(rs, from, a, b, None)
    }

    /// As `append_geodesics`, but `b` is mapped to `to` when given.
    pub fn append_geodesics_into(
        &mut self,
        rs: &RootSystem,
        from: u32,
        a: &AffineElement,
        b: &AffineElement,
        to: Option<u32>,
    ) -> u32 {
        let mut ids: HashMap<AffineElement, u32> = HashMap::new();
        ids.insert(*a, from);
        if let Some(t) = to {
            if a != b {
                ids.insert(*b, t);
            }
        }
        let mut layer = vec![*a];
        let mut remaining = rs.distance(a, b);
        while remaining > 0 {
            let mut next_layer = Vec::new();
            for x in &layer {
                let xid = ids[x];
                for c in 0..=rs.rank() {
                    let y = rs.adjacent(x, c);
                    if rs.distance(&y, b) + 1 == remaining {
                        let yid = match ids.get(&y) {
                            Some(&id) => id,
                            None => {
                                let id = self.add_node();
                                ids.insert(y, id);
                                next_layer.push(y);
                                id
                            }
                        };
                        self.add_edge(xid, c as u8, yid);
                    }
                }
            }
            layer = next_layer;
            remaining -= 1;
        }
        ids[b]
    }

    /// Nodes in an order where every edge points forward.
    pub fn topo_order(&self) -> Vec<u32> {
        let n = self.edges.len();
        let mut indeg = vec![0usize; n];
        for out in &self.edges {
            for &(_, to) in out {
                indeg[to as usize] += 1;
            }
        }
        let mut stack: Vec<u32> = (0..n as u32).filter(|&v| indeg[v as usize] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(_, to) in &self.edges[v as usize] {
                indeg[to as usize] -= 1;
                if indeg[to as usize] == 0 {
                    stack.push(to);
                }
            }
        }
        order
    }

    /// Longest number of crossings from each node to a sink.
    pub fn longest_to_sink(&self) -> Vec<usize> {
        let mut best = vec![0usize; self.edges.len()];
        for &v in self.topo_order().iter().rev() {
            best[v as usize] = self.edges[v as usize]
                .iter()
                .map(|&(_, to)| best[to as usize] + 1)
                .max()
                .unwrap_or(0);
        }
        best
    }

    /// The lexicographically least path.
    pub fn least_path(&self) -> GalleryType {
        let mut memo: Vec<Option<Vec<u8>>> = vec![None; self.edges.len()];
        fn go(dag: &LabelDag, n: u32, memo: &mut Vec<Option<Vec<u8>>>) -> Vec<u8> {
            if let Some(v) = &memo[n as usize] {
                return v.clone();
            }
            let best = dag.edges[n as usize]
                .iter()
                .map(|&(c, m)| {
                    let mut v = vec![c];
                    v.extend(go(dag, m, memo));
                    v
                })
                .min()
                .unwrap_or_default();
            memo[n as usize] = Some(best.clone());
            best
        }
        GalleryType::new(self.start, go(self, 0, &mut memo))
    }

    /// Number of root-to-sink paths.
    pub fn path_count(&self) -> u128 {
        let mut memo = vec![None; self.edges.len()];
        fn go(dag: &LabelDag, n: u32, memo: &mut Vec<Option<u128>>) -> u128 {
            if let Some(v) = memo[n as usize] {
                return v;
            }
            let v = if dag.edges[n as usize].is_empty() {
                1
            } else {
                dag.edges[n as usize]
                    .iter()
                    .map(|&(_, m)| go(dag, m, memo))
                    .sum()
            };
            memo[n as usize] = Some(v);
            v
        }
        go(self, 0, &mut memo)
    }

    /// All spelled gallery types, sorted and deduplicated. Errors when there
    /// are more than `limit` paths.
    pub fn paths(&self, limit: usize) -> Result<Vec<GalleryType>> {
        let count = self.path_count();
        if count > limit as u128 {
            return Err(Error::InvalidParams(format!(
                "{count} galleries exceed the enumeration limit {limit}"
            )));
        }
        let mut out = Vec::new();
        let mut stack = vec![(0u32, Vec::new())];
        while let Some((n, labels)) = stack.pop() {
            let edges = &self.edges[n as usize];
            if edges.is_empty() {
                out.push(GalleryType::new(self.start, labels));
                continue;
            }
            for &(c, m) in edges {
                let mut l = labels.clone();
                l.push(c);
                stack.push((m, l));
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Alcoves lying on some minimal gallery from `a` to `b`, sorted.
pub fn parallelogram(rs: &RootSystem, a: &AffineElement, b: &AffineElement) -> Vec<AffineElement> {
    let d = rs.distance(a, b);
    let mut seen = vec![*a];
    let mut layer = vec![*a];
    for step in 0..d {
        let mut next = Vec::new();
        for x in &layer {
            for c in 0..=rs.rank() {
                let y = rs.adjacent(x, c);
                if rs.distance(&y, b) + step + 1 == d && !next.contains(&y) {
                    next.push(y);
                }
            }
        }
        seen.extend(next.iter().copied());
        layer = next;
    }
    seen.sort();
    seen
}

/// Every minimal gallery type from `a` to `b`.
pub fn minimal_galleries(
    rs: &RootSystem,
    a: &AffineElement,
    b: &AffineElement,
) -> Result<Vec<GalleryType>> {
    let mut dag = LabelDag::new(*a);
    dag.append_geodesics(rs, 0, a, b);
    dag.paths(1 << 20)
}

// ---------------------------------------------------------------------------
// Corridors and regions

#[derive(Clone, Copy, Debug)]
struct Corridor {
    strip: usize,
    side: usize,
    nonneg: bool,
}

#[derive(Clone, Copy, Debug)]
struct Sector {
    name: &'static str,
    signs: &'static [i8],
    primary: usize,
    secondary: usize,
}

struct Taxonomy {
    corridors: &'static [Corridor],
    sectors: &'static [Sector],
}

const fn cor(strip: usize, side: usize, nonneg: bool) -> Corridor {
    Corridor {
        strip,
        side,
        nonneg,
    }
}

// A2 roots: 0 = α1, 1 = α2 (horizontal walls), 2 = θ. Corridors c1..c6 run
// at 0°, 60°, …, 300°.
static A2_CORRIDORS: [Corridor; 6] = [
    cor(1, 0, true),
    cor(0, 1, true),
    cor(2, 1, true),
    cor(1, 0, false),
    cor(0, 1, false),
    cor(2, 1, false),
];
static A2_SECTORS: [Sector; 6] = [
    Sector { name: "R1", signs: &[1, 1, 1], primary: 0, secondary: 1 },
    Sector { name: "r2", signs: &[-1, 1, 1], primary: 2, secondary: 1 },
    Sector { name: "R2", signs: &[-1, 1, -1], primary: 2, secondary: 3 },
    Sector { name: "r3", signs: &[-1, -1, -1], primary: 4, secondary: 3 },
    Sector { name: "R3", signs: &[1, -1, -1], primary: 4, secondary: 5 },
    Sector { name: "r1", signs: &[1, -1, 1], primary: 0, secondary: 5 },
];

// C2 roots: 0 = e1-e2 (horizontal walls in the usual picture), 1 = 2e2,
// 2 = e1+e2 (vertical walls), 3 = 2e1. Corridors c1..c8 run at 45°, 90°,
// …, 360°.
static C2_CORRIDORS: [Corridor; 8] = [
    cor(1, 3, true),
    cor(2, 0, true),
    cor(3, 1, false),
    cor(0, 2, false),
    cor(1, 3, false),
    cor(2, 0, false),
    cor(3, 1, true),
    cor(0, 2, true),
];
static C2_SECTORS: [Sector; 8] = [
    Sector { name: "R1", signs: &[1, 1, 1, 1], primary: 0, secondary: 7 },
    Sector { name: "r1", signs: &[1, -1, 1, 1], primary: 0, secondary: 1 },
    Sector { name: "R2", signs: &[1, -1, -1, 1], primary: 2, secondary: 1 },
    Sector { name: "r2", signs: &[1, -1, -1, -1], primary: 2, secondary: 3 },
    Sector { name: "R3", signs: &[-1, -1, -1, -1], primary: 4, secondary: 3 },
    Sector { name: "r3", signs: &[-1, 1, -1, -1], primary: 4, secondary: 5 },
    Sector { name: "R4", signs: &[-1, 1, 1, -1], primary: 6, secondary: 5 },
    Sector { name: "r4", signs: &[-1, 1, 1, 1], primary: 6, secondary: 7 },
];

fn taxonomy(kind: Kind) -> Option<Taxonomy> {
    match kind {
        Kind::A2 => Some(Taxonomy {
            corridors: &A2_CORRIDORS,
            sectors: &A2_SECTORS,
        }),
        Kind::C2 => Some(Taxonomy {
            corridors: &C2_CORRIDORS,
            sectors: &C2_SECTORS,
        }),
        _ => None,
    }
}

/// Where an alcove sits relative to the corridors through C_M.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    Base,
    /// 0-based corridor index; corridor `c_{i+1}` in the usual numbering.
    /// For A1, 0 is the positive half-line and 1 the negative one.
    Corridor(usize),
    /// 0-based sector index into R1, r2, R2, … (A2) or R1, r1, R2, … (C2).
    Region(usize),
    /// G2 has no corridor/region taxonomy.
    Unclassified,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Base => f.write_str("C_M"),
            Location::Corridor(i) => write!(f, "c{}", i + 1),
            Location::Region(i) => write!(f, "sector {}", i + 1),
            Location::Unclassified => f.write_str("unclassified"),
        }
    }
}

pub fn sector_name(kind: Kind, i: usize) -> Option<&'static str> {
    taxonomy(kind).and_then(|t| t.sectors.get(i).map(|s| s.name))
}

fn in_corridor(k: &[i64; 6], c: &Corridor) -> bool {
    k[c.strip] == 0 && if c.nonneg { k[c.side] >= 0 } else { k[c.side] < 0 }
}

pub fn locate(rs: &RootSystem, g: &AffineElement) -> Location {
    if *g == AffineElement::IDENTITY {
        return Location::Base;
    }
    if rs.kind() == Kind::A1 {
        return Location::Corridor(if rs.a1_index(g) > 0 { 0 } else { 1 });
    }
    let Some(tax) = taxonomy(rs.kind()) else {
        return Location::Unclassified;
    };
    let k = rs.kvec(g);
    if let Some(i) = tax.corridors.iter().position(|c| in_corridor(&k, c)) {
        return Location::Corridor(i);
    }
    let nroots = rs.positive_roots().len();
    let signs: Vec<i8> = k[..nroots].iter().map(|&x| x.signum() as i8).collect();
    let i = tax
        .sectors
        .iter()
        .position(|s| s.signs == signs.as_slice())
        .expect("every off-corridor alcove lies in a sector");
    Location::Region(i)
}

/// The strip roots `(primary, secondary)` of a sector.
fn sector_strips(kind: Kind, sector: usize) -> (usize, usize) {
    let tax = taxonomy(kind).unwrap();
    let s = &tax.sectors[sector];
    (
        tax.corridors[s.primary].strip,
        tax.corridors[s.secondary].strip,
    )
}

/// Standard minimal gallery from C_M to `target`.
///
/// Corridor targets (and every A1 or G2 target) use the reduced word. Region
/// targets run along the primary strip through C_M while that still
/// shortens the distance, then along the secondary strip containing the
/// target; remaining ties go to the smaller cotype.
pub fn smg(rs: &RootSystem, target: &AffineElement) -> GalleryType {
    let id = AffineElement::IDENTITY;
    match locate(rs, target) {
        Location::Region(sector) => {
            let (d_root, e_root) = sector_strips(rs.kind(), sector);
            let e_level = rs.kvalue(target, e_root);
            let mut labels = Vec::new();
            let mut cur = id;
            let mut dist = rs.distance(&cur, target);
            while dist > 0 {
                let closer: Vec<(usize, AffineElement)> = (0..=rs.rank())
                    .map(|c| (c, rs.adjacent(&cur, c)))
                    .filter(|(_, y)| rs.distance(y, target) < dist)
                    .collect();
                let pick = closer
                    .iter()
                    .find(|(_, y)| rs.kvalue(y, d_root) == 0)
                    .or_else(|| closer.iter().find(|(_, y)| rs.kvalue(y, e_root) == e_level))
                    .unwrap_or(&closer[0]);
                labels.push(pick.0 as u8);
                cur = pick.1;
                dist -= 1;
            }
            GalleryType::new(id, labels)
        }
        _ => GalleryType::from_word(id, &rs.reduced_word(target)),
    }
}

/// Index of the first chamber of `t`'s realization lying in the strip of
/// the target's secondary direction. Only region targets have one.
pub fn turning_index(rs: &RootSystem, t: &GalleryType) -> Option<usize> {
    let target = t.end(rs);
    match locate(rs, &target) {
        Location::Region(sector) => {
            let (_, e_root) = sector_strips(rs.kind(), sector);
            first_in_strip(rs, t, e_root, rs.kvalue(&target, e_root))
        }
        _ => None,
    }
}

fn first_in_strip(rs: &RootSystem, t: &GalleryType, root: usize, level: i64) -> Option<usize> {
    t.realization(rs)
        .iter()
        .position(|g| rs.kvalue(g, root) == level)
}

/// Where a standard minimal gallery leaves the main apartment: the crossing
/// between chambers `index` and `index + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepartureSpec {
    pub index: usize,
    pub wall: Wall,
}

impl DepartureSpec {
    /// Checks the index against the gallery and, for region targets, against
    /// the turning edge.
    pub fn new(rs: &RootSystem, t: &GalleryType, index: usize) -> Result<Self> {
        if index >= t.len() {
            return Err(Error::InvalidParams(format!(
                "departure index {index} outside a gallery of {} crossings",
                t.len()
            )));
        }
        if let Some(turn) = turning_index(rs, t) {
            if index >= turn {
                return Err(Error::InvalidParams(format!(
                    "departure index {index} is at or after the turning edge {turn}"
                )));
            }
        }
        Ok(Self::unchecked(rs, t, index))
    }

    fn unchecked(rs: &RootSystem, t: &GalleryType, index: usize) -> Self {
        let mut cur = t.start;
        for &c in &t.labels[..index] {
            cur = rs.adjacent(&cur, c as usize);
        }
        DepartureSpec {
            index,
            wall: rs.facet_wall(&cur, t.labels[index] as usize),
        }
    }
}

// ---------------------------------------------------------------------------
// Conjugacy representatives

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Degeneracy {
    Identity,
    /// `⟨λ, α2⟩ = 0` (A2: α + 2β = 0; C2: β = 0).
    DegenLow,
    /// `⟨λ, α1⟩ = 0` (A2 and C2: α = β).
    DegenHigh,
    NonDegenerate,
}

/// A dominant translation `λ_b` standing for the representative `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConjugacyRep {
    pub kind: Kind,
    pub lambda: Vector,
    pub degeneracy: Degeneracy,
}

impl ConjugacyRep {
    pub fn identity(kind: Kind) -> Self {
        ConjugacyRep {
            kind,
            lambda: [0; 3],
            degeneracy: Degeneracy::Identity,
        }
    }

    /// Builds from exponents: A1 `[s]` or `[s, -s]`; A2 `[α, β, γ]` with
    /// zero sum, or `[α, β]`; C2 `[α, β]`; G2 `[a, b]` meaning `ε^a δ^b`.
    pub fn new(rs: &RootSystem, exps: &[i64]) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParams(format!("b = {exps:?}: {msg}"));
        let mut lambda = [0i64; 3];
        match (rs.kind(), exps.len()) {
            (Kind::A1, 1) => lambda[0] = exps[0],
            (Kind::A1, 2) if exps[0] + exps[1] == 0 => lambda[0] = exps[0],
            (Kind::A2, 2) => lambda = [exps[0], exps[1], -exps[0] - exps[1]],
            (Kind::A2, 3) if exps.iter().sum::<i64>() == 0 => {
                lambda = [exps[0], exps[1], exps[2]]
            }
            (Kind::C2 | Kind::G2, 2) => lambda[..2].copy_from_slice(exps),
            _ => return Err(bad("wrong number of exponents or nonzero sum")),
        }
        let pairings: Vec<i64> = rs
            .simple_roots()
            .iter()
            .map(|a| a.iter().zip(&lambda).map(|(x, y)| x * y).sum())
            .collect();
        if pairings.iter().any(|&p| p < 0) {
            return Err(Error::Unsupported(format!(
                "b = {exps:?} is not dominant; only the dominant representatives are supported"
            )));
        }
        let degeneracy = if pairings.iter().all(|&p| p == 0) {
            Degeneracy::Identity
        } else if pairings.len() == 2 && pairings[1] == 0 {
            Degeneracy::DegenLow
        } else if pairings.len() == 2 && pairings[0] == 0 {
            Degeneracy::DegenHigh
        } else {
            Degeneracy::NonDegenerate
        };
        Ok(ConjugacyRep {
            kind: rs.kind(),
            lambda,
            degeneracy,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.degeneracy == Degeneracy::Identity
    }

    pub fn element(&self) -> AffineElement {
        AffineElement::new(self.lambda, 0)
    }

    /// Exponents as accepted by [`ConjugacyRep::new`].
    pub fn exponents(&self) -> Vec<i64> {
        match self.kind {
            Kind::A1 => vec![self.lambda[0]],
            Kind::A2 => self.lambda.to_vec(),
            Kind::C2 | Kind::G2 => self.lambda[..2].to_vec(),
        }
    }

    /// `w⁻¹·t_λ·w` for every finite `w`, sorted and deduplicated.
    pub fn w_conjugates(&self, rs: &RootSystem) -> Vec<AffineElement> {
        let b = self.element();
        let mut out: Vec<_> = rs
            .finite_elements()
            .map(|w| {
                let we = AffineElement::new([0; 3], w);
                rs.compose(&rs.compose(&rs.invert(&we), &b), &we)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

// ---------------------------------------------------------------------------
// Composite galleries

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gamma2Choice {
    Canonical,
    All,
}

/// All composite galleries for `(smg_t, dep)` and the element `b` (a
/// translation, or any element for appendage checks), as one DAG rooted at
/// C_M: the reversed post-departure segment, the departure crossing, every
/// minimal gallery between the two chambers at the departure edge `e` and
/// the two at `b·e` (only pairs at least distance), the crossing back out,
/// and the post-departure segment again.
pub fn composite_family(
    rs: &RootSystem,
    smg_t: &GalleryType,
    dep_index: usize,
    b: &AffineElement,
) -> Result<LabelDag> {
    composite_dag(rs, smg_t, dep_index, b, false)
}

/// As [`composite_family`], but when the middle gallery already ends on
/// `b·S_{k+1}` the tail continues from there without the second crossing.
/// The standard folding of the real composite is this gallery reflected in
/// the wall through `b·e`; the unreflected one is what the half-infinite
/// tails are read from.
pub fn unfolded_family(
    rs: &RootSystem,
    smg_t: &GalleryType,
    dep_index: usize,
    b: &AffineElement,
) -> Result<LabelDag> {
    composite_dag(rs, smg_t, dep_index, b, true)
}

fn composite_dag(
    rs: &RootSystem,
    smg_t: &GalleryType,
    dep_index: usize,
    b: &AffineElement,
    straight: bool,
) -> Result<LabelDag> {
    if dep_index >= smg_t.len() {
        return Err(Error::InvalidParams(format!(
            "departure index {dep_index} outside a gallery of {} crossings",
            smg_t.len()
        )));
    }
    let chambers = smg_t.realization(rs);
    let c = smg_t.labels[dep_index];
    let tail = &smg_t.labels[dep_index + 1..];
    let rev: Vec<u8> = tail.iter().rev().copied().collect();

    let mut dag = LabelDag::new(AffineElement::IDENTITY);
    let before = dag.append_path(0, &rev);
    let join = dag.add_node();
    if *b == AffineElement::IDENTITY {
        dag.add_edge(before, c, join);
    } else {
        let near = [chambers[dep_index], chambers[dep_index + 1]];
        add_middle(rs, &mut dag, before, join, near, b, c, straight);
    }
    dag.append_path(join, tail);
    Ok(dag)
}

/// Crossing of `e`, the minimal galleries from the nearest chambers at `e`
/// to the nearest ones at `b·e`, and the crossing of `b·e`, from `before`
/// to `join`. `near` are the two chambers of the main apartment at `e`.
#[allow(clippy::too_many_arguments)]
fn add_middle(
    rs: &RootSystem,
    dag: &mut LabelDag,
    before: u32,
    join: u32,
    near: [AffineElement; 2],
    b: &AffineElement,
    c: u8,
    straight: bool,
) {
    // S_{k+1} and its image under b lie off the main apartment, so both e
    // and be are crossed.
    let far = [rs.compose(b, &near[0]), rs.compose(b, &near[1])];
    let mut pairs = Vec::new();
    for h1 in near {
        for (i, hm) in far.iter().enumerate() {
            pairs.push((rs.distance(&h1, hm), h1, i));
        }
    }
    let best = pairs.iter().map(|p| p.0).min().unwrap();
    for (d, h1, i) in pairs {
        if d != best {
            continue;
        }
        let n1 = dag.add_node();
        dag.add_edge(before, c, n1);
        if straight && i == 1 {
            dag.append_geodesics_into(rs, n1, &h1, &far[1], Some(join));
        } else {
            let nm = dag.append_geodesics(rs, n1, &h1, &far[i]);
            dag.add_edge(nm, c, join);
        }
    }
}

/// The appendage gallery: from the neighbour of C_M across its `cotype`
/// facet (off the main apartment) into C_M's panel, a minimal gallery to
/// the image of that panel under `tilde_b`, and out again. For the identity
/// this is the two-step mirror `[c, c]`.
pub fn appendage_family(rs: &RootSystem, tilde_b: &AffineElement, cotype: usize) -> Result<LabelDag> {
    if cotype > rs.rank() {
        return Err(Error::InvalidParams(format!("cotype {cotype} out of range")));
    }
    let near = [AffineElement::IDENTITY, rs.adjacent(&AffineElement::IDENTITY, cotype)];
    let mut dag = LabelDag::new(AffineElement::IDENTITY);
    let join = dag.add_node();
    add_middle(rs, &mut dag, 0, join, near, tilde_b, cotype as u8, false);
    Ok(dag)
}

pub fn composite(
    rs: &RootSystem,
    smg_t: &GalleryType,
    dep: &DepartureSpec,
    b: &ConjugacyRep,
    choice: Gamma2Choice,
) -> Result<Vec<GalleryType>> {
    if b.kind != rs.kind() {
        return Err(Error::KindMismatch {
            expected: rs.kind(),
            found: b.kind,
        });
    }
    let checked = DepartureSpec::new(rs, smg_t, dep.index)?;
    let dag = composite_family(rs, smg_t, checked.index, &b.element())?;
    match choice {
        Gamma2Choice::Canonical => Ok(vec![dag.least_path()]),
        Gamma2Choice::All => dag.paths(1 << 20),
    }
}

// ---------------------------------------------------------------------------
// Class families

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassKind {
    I1,
    I2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassParams {
    pub class: ClassKind,
    /// Chambers from the departure edge to the turning edge (I1 only).
    pub p: usize,
    /// Chambers after the turning edge (I1) or after the departure (I2).
    pub q: usize,
    /// Finite part of the target alcove.
    pub w: u8,
}

/// Which targets and departures make up a class for a given kind.
#[derive(Clone, Copy, Debug)]
struct ClassAnchor {
    /// Sector whose targets belong to the class (I1).
    sector: Option<usize>,
    /// Corridor whose targets belong to the class.
    corridor: usize,
    /// Strip root of the secondary direction (I1).
    turn_root: usize,
    /// Root of the admissible departure walls (I1).
    departure_root: Option<usize>,
}

fn class_anchor(kind: Kind, class: ClassKind) -> Result<ClassAnchor> {
    let anchor = match (kind, class) {
        // R2 targets with horizontal departures, plus the 120° corridor
        // whose targets are the q ≤ 1 end of the same family.
        (Kind::A2, ClassKind::I1) => ClassAnchor {
            sector: Some(2),
            corridor: 2,
            turn_root: 1,
            departure_root: Some(1),
        },
        (Kind::A2, ClassKind::I2) => ClassAnchor {
            sector: None,
            corridor: 3,
            turn_root: 1,
            departure_root: None,
        },
        (Kind::C2, ClassKind::I1) => ClassAnchor {
            sector: Some(3),
            corridor: 2,
            turn_root: 0,
            departure_root: Some(0),
        },
        (Kind::C2, ClassKind::I2) => ClassAnchor {
            sector: None,
            corridor: 3,
            turn_root: 0,
            departure_root: None,
        },
        (Kind::A1, ClassKind::I2) => ClassAnchor {
            sector: None,
            corridor: 1,
            turn_root: 0,
            departure_root: None,
        },
        _ => {
            return Err(Error::Unsupported(format!(
                "class {class:?} is not defined for {kind}"
            )))
        }
    };
    Ok(anchor)
}

pub fn class_defined(kind: Kind, class: ClassKind) -> bool {
    class_anchor(kind, class).is_ok()
}

/// For each `(p, q, w)` the nearest target and its departure index.
struct ClassIndex {
    bound: usize,
    entries: BTreeMap<(usize, usize, u8), (AffineElement, usize)>,
}

impl ClassIndex {
    fn build(rs: &RootSystem, class: ClassKind, bound: usize) -> Result<ClassIndex> {
        let anchor = class_anchor(rs.kind(), class)?;
        let mut targets: Vec<(usize, AffineElement)> = rs
            .alcoves_within(bound)
            .into_iter()
            .filter(|g| match locate(rs, g) {
                Location::Corridor(i) => i == anchor.corridor,
                Location::Region(s) => Some(s) == anchor.sector,
                _ => false,
            })
            .map(|g| (rs.length(&g), g))
            .collect();
        targets.sort();
        let mut entries = BTreeMap::new();
        for (n, e) in targets {
            let t = smg(rs, &e);
            match class {
                ClassKind::I1 => {
                    let level = rs.kvalue(&e, anchor.turn_root);
                    let Some(turn) = first_in_strip(rs, &t, anchor.turn_root, level) else {
                        continue;
                    };
                    let chambers = t.realization(rs);
                    for k in 0..turn {
                        let wall = rs.facet_wall(&chambers[k], t.labels[k] as usize);
                        if Some(wall.root) != anchor.departure_root {
                            continue;
                        }
                        entries
                            .entry((turn - k, n - turn, e.finite))
                            .or_insert((e, k));
                    }
                }
                ClassKind::I2 => {
                    for k in 0..n {
                        entries.entry((0, n - k, e.finite)).or_insert((e, k));
                    }
                }
            }
        }
        Ok(ClassIndex { bound, entries })
    }
}

type IndexCache = Mutex<HashMap<(Kind, ClassKind), Arc<ClassIndex>>>;

fn class_index(rs: &RootSystem, class: ClassKind, need: usize) -> Result<Arc<ClassIndex>> {
    static CACHE: OnceLock<IndexCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (rs.kind(), class);
    if let Some(ix) = cache.lock().unwrap().get(&key) {
        if ix.bound >= need {
            return Ok(ix.clone());
        }
    }
    // Grow geometrically so repeated requests rebuild rarely.
    let bound = need.max(24).next_power_of_two().max(need + 8);
    let ix = Arc::new(ClassIndex::build(rs, class, bound)?);
    let mut guard = cache.lock().unwrap();
    let entry = guard.entry(key).or_insert_with(|| ix.clone());
    if entry.bound < ix.bound {
        *entry = ix.clone();
    }
    Ok(entry.clone())
}

/// Target alcove and departure index realizing `params`, or `None` for the
/// I2 `q = 0` member, whose target lies in the main apartment.
pub fn class_target(
    rs: &RootSystem,
    params: &ClassParams,
) -> Result<Option<(GalleryType, usize)>> {
    if params.class == ClassKind::I1 && params.p % 2 == 0 {
        return Err(Error::InvalidParams(format!(
            "I1 needs an odd p, got {}",
            params.p
        )));
    }
    if params.class == ClassKind::I2 && params.q == 0 {
        class_anchor(rs.kind(), params.class)?;
        return Ok(None);
    }
    let p = if params.class == ClassKind::I1 { params.p } else { 0 };
    // Any target for these parameters is within p + q plus a few periods of
    // the strip pattern.
    let need = p + params.q + 2 * rs.finite_order() + 4;
    let ix = class_index(rs, params.class, need)?;
    let (e, k) = ix
        .entries
        .get(&(p, params.q, params.w))
        .copied()
        .ok_or_else(|| {
            Error::InvalidParams(format!(
                "no {:?} target with p = {}, q = {}, w = {} on {}",
                params.class,
                params.p,
                params.q,
                rs.finite_name(params.w),
                rs.kind()
            ))
        })?;
    Ok(Some((smg(rs, &e), k)))
}

/// The composite family of a class member as a DAG.
pub fn class_family(rs: &RootSystem, params: &ClassParams, b: &ConjugacyRep) -> Result<LabelDag> {
    class_dag(rs, params, b, false)
}

fn class_dag(rs: &RootSystem, params: &ClassParams, b: &ConjugacyRep, straight: bool) -> Result<LabelDag> {
    match class_target(rs, params)? {
        Some((t, k)) => composite_dag(rs, &t, k, &b.element(), straight),
        None => {
            let we = AffineElement::new([0; 3], params.w);
            let end = rs.compose(&rs.compose(&rs.invert(&we), &b.element()), &we);
            let mut dag = LabelDag::new(AffineElement::IDENTITY);
            dag.append_geodesics(rs, 0, &AffineElement::IDENTITY, &end);
            Ok(dag)
        }
    }
}

pub fn class_composite(
    rs: &RootSystem,
    params: &ClassParams,
    b: &ConjugacyRep,
    choice: Gamma2Choice,
) -> Result<Vec<GalleryType>> {
    let dag = class_family(rs, params, b)?;
    match choice {
        Gamma2Choice::Canonical => Ok(vec![dag.least_path()]),
        Gamma2Choice::All => dag.paths(1 << 20),
    }
}

/// The `q` values, ascending and at most `q_max`, for which the class has a
/// member with this `p` and `w`.
pub fn valid_q_values(rs: &RootSystem, class: ClassKind, p: usize, w: u8, q_max: usize) -> Vec<usize> {
    (0..=q_max)
        .filter(|&q| {
            class_target(
                rs,
                &ClassParams {
                    class,
                    p,
                    q,
                    w,
                },
            )
            .is_ok()
        })
        .collect()
}

/// Terminal segment of length `depth` (in chambers) of the half-infinite
/// gallery of a class, read off the unfolded composites of the class
/// members (see [`unfolded_family`]) for growing `q` of fixed parity.
pub fn omega_tail(
    rs: &RootSystem,
    class: ClassKind,
    p: usize,
    w: u8,
    b: &ConjugacyRep,
    depth: usize,
) -> Result<GalleryType> {
    let q_first = (1..=4)
        .find(|&q| {
            class_target(rs, &ClassParams { class, p, q, w }).is_ok()
        })
        .ok_or_else(|| Error::InvalidParams(format!("class {class:?} has no members for p = {p}")))?;
    omega_tail_from(rs, class, p, w, b, depth, q_first)
}

/// As [`omega_tail`], with `q` running over `q_first, q_first + 2, …`.
pub fn omega_tail_from(
    rs: &RootSystem,
    class: ClassKind,
    p: usize,
    w: u8,
    b: &ConjugacyRep,
    depth: usize,
    q_first: usize,
) -> Result<GalleryType> {
    if b.is_identity() {
        return Err(Error::Unsupported(
            "half-infinite tails need b ≠ 1; use the finite union instead".into(),
        ));
    }
    if depth == 0 {
        return Err(Error::InvalidParams("depth must be at least 1".into()));
    }
    const AGREEMENTS: usize = 3;
    let q_budget = q_first + 2 * depth + 80;
    let mut previous: Option<Vec<AffineElement>> = None;
    let mut agreements = 0;
    let mut q = q_first;
    let mut tried = Vec::new();
    while q <= q_budget {
        let params = ClassParams { class, p, q, w };
        let t = match class_dag(rs, &params, b, true) {
            Ok(dag) => dag.least_path(),
            Err(_) => {
                q += 2;
                continue;
            }
        };
        tried.push(q);
        let chambers = t.realization(rs);
        if chambers.len() >= depth {
            let tail = chambers[chambers.len() - depth..].to_vec();
            if previous.as_ref() == Some(&tail) {
                agreements += 1;
                if agreements >= AGREEMENTS {
                    let n = t.labels.len();
                    return Ok(GalleryType::new(tail[0], t.labels[n + 1 - depth..].to_vec()));
                }
            } else {
                agreements = 0;
            }
            previous = Some(tail);
        }
        q += 2;
    }
    Err(Error::NoStabilization(format!(
        "{class:?} p = {p} w = {} depth {depth}: tried q in {tried:?}",
        rs.finite_name(w)
    )))
}
