//! Integer models of the rank-1 and rank-2 root systems and their affine
//! Weyl groups.
//!
//! Points are stored multiplied by the system's `scale`, so vertices and
//! barycenters of alcoves have integer coordinates and every side test is
//! an exact integer sign.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ambient coordinates are padded to three entries; unused ones stay zero.
pub const DIM: usize = 3;

pub type Vector = [i64; DIM];
type Matrix = [[i64; DIM]; DIM];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A1,
    A2,
    C2,
    G2,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::A1, Kind::A2, Kind::C2, Kind::G2];
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::A1 => "A1",
            Kind::A2 => "A2",
            Kind::C2 => "C2",
            Kind::G2 => "G2",
        };
        f.write_str(s)
    }
}

/// An element `t_λ·w` of the affine Weyl group. The alcove it labels is
/// `t_λ·w·C_M`. The derived ordering is the canonical order used for sorted
/// output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineElement {
    pub translation: [i32; DIM],
    pub finite: u8,
}

impl AffineElement {
    pub const IDENTITY: AffineElement = AffineElement {
        translation: [0; DIM],
        finite: 0,
    };

    pub fn new(translation: Vector, finite: u8) -> Self {
        let mut t = [0i32; DIM];
        for i in 0..DIM {
            t[i] = i32::try_from(translation[i]).expect("translation out of range");
        }
        AffineElement {
            translation: t,
            finite,
        }
    }

    pub fn lambda(&self) -> Vector {
        [
            self.translation[0] as i64,
            self.translation[1] as i64,
            self.translation[2] as i64,
        ]
    }
}

/// A hyperplane `⟨x, α⟩ = level` with `α` a positive root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Wall {
    pub root: usize,
    pub level: i64,
}

pub struct RootSystem {
    kind: Kind,
    rank: usize,
    dim: usize,
    scale: i64,
    simple_roots: Vec<Vector>,
    simple_coroots: Vec<Vector>,
    highest_root: Vector,
    highest_coroot: Vector,
    positive_roots: Vec<Vector>,
    matrices: Vec<Matrix>,
    names: Vec<String>,
    mul: Vec<Vec<u8>>,
    inv: Vec<u8>,
    rotation_order: usize,
    generators: Vec<AffineElement>,
    base_vertices: Vec<Vector>,
    barycenter: Vector,
    // floor(α(w·bary) / scale) per finite element and positive root
    floor_k: Vec<Vec<i64>>,
    // covector α_c∘w⁻¹ per finite element and cotype
    facet_covectors: Vec<Vec<Vector>>,
    root_lookup: HashMap<Vector, (usize, i64)>,
}

fn dot(a: &Vector, b: &Vector) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn mat_vec(m: &Matrix, v: &Vector) -> Vector {
    let mut out = [0; DIM];
    for i in 0..DIM {
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    out
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = [[0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = (0..DIM).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn covec_mat(a: &Vector, m: &Matrix) -> Vector {
    let mut out = [0; DIM];
    for j in 0..DIM {
        out[j] = (0..DIM).map(|i| a[i] * m[i][j]).sum();
    }
    out
}

fn identity_matrix(dim: usize) -> Matrix {
    let mut m = [[0; DIM]; DIM];
    for (i, row) in m.iter_mut().enumerate().take(dim) {
        row[i] = 1;
    }
    m
}

fn add(a: &Vector, b: &Vector) -> Vector {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: &Vector, b: &Vector) -> Vector {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scaled(a: &Vector, k: i64) -> Vector {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn neg(a: &Vector) -> Vector {
    [-a[0], -a[1], -a[2]]
}

fn superscript(n: usize) -> &'static str {
    match n {
        2 => "²",
        3 => "³",
        4 => "⁴",
        5 => "⁵",
        _ => "",
    }
}

struct KindData {
    dim: usize,
    scale: i64,
    simple_roots: Vec<Vector>,
    simple_coroots: Vec<Vector>,
    highest_root: Vector,
    highest_coroot: Vector,
    positive_roots: Vec<Vector>,
    rotation: Matrix,
    rotation_order: usize,
    flip: Option<Matrix>,
    base_vertices: Vec<Vector>,
}

fn kind_data(kind: Kind) -> KindData {
    match kind {
        Kind::A1 => KindData {
            dim: 1,
            scale: 4,
            simple_roots: vec![[2, 0, 0]],
            simple_coroots: vec![[1, 0, 0]],
            highest_root: [2, 0, 0],
            highest_coroot: [1, 0, 0],
            positive_roots: vec![[2, 0, 0]],
            rotation: [[-1, 0, 0], [0, 0, 0], [0, 0, 0]],
            rotation_order: 2,
            flip: None,
            base_vertices: vec![[0, 0, 0], [2, 0, 0]],
        },
        Kind::A2 => KindData {
            dim: 3,
            scale: 9,
            simple_roots: vec![[1, -1, 0], [0, 1, -1]],
            simple_coroots: vec![[1, -1, 0], [0, 1, -1]],
            highest_root: [1, 0, -1],
            highest_coroot: [1, 0, -1],
            positive_roots: vec![[1, -1, 0], [0, 1, -1], [1, 0, -1]],
            rotation: [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
            rotation_order: 3,
            flip: Some([[1, 0, 0], [0, 0, 1], [0, 1, 0]]),
            base_vertices: vec![[0, 0, 0], [6, -3, -3], [3, 3, -6]],
        },
        Kind::C2 => KindData {
            dim: 2,
            scale: 6,
            simple_roots: vec![[1, -1, 0], [0, 2, 0]],
            simple_coroots: vec![[1, -1, 0], [0, 1, 0]],
            highest_root: [2, 0, 0],
            highest_coroot: [1, 0, 0],
            positive_roots: vec![[1, -1, 0], [0, 2, 0], [1, 1, 0], [2, 0, 0]],
            rotation: [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
            rotation_order: 4,
            flip: Some([[0, 1, 0], [1, 0, 0], [0, 0, 0]]),
            base_vertices: vec![[0, 0, 0], [3, 0, 0], [3, 3, 0]],
        },
        // Coordinates (a, b) stand for a·ε + b·δ with ε = (1, 0) and
        // δ = (-1/2, √3/2); α1 = b is short, α2 = a - 2b is long.
        Kind::G2 => KindData {
            dim: 2,
            scale: 18,
            simple_roots: vec![[0, 1, 0], [1, -2, 0]],
            simple_coroots: vec![[1, 2, 0], [0, -1, 0]],
            highest_root: [2, -1, 0],
            highest_coroot: [1, 0, 0],
            positive_roots: vec![
                [0, 1, 0],
                [1, -2, 0],
                [1, -1, 0],
                [1, 0, 0],
                [1, 1, 0],
                [2, -1, 0],
            ],
            rotation: [[1, -1, 0], [1, 0, 0], [0, 0, 0]],
            rotation_order: 6,
            flip: Some([[1, -1, 0], [0, -1, 0], [0, 0, 0]]),
            base_vertices: vec![[0, 0, 0], [12, 6, 0], [9, 0, 0]],
        },
    }
}

fn reflection_matrix(dim: usize, root: &Vector, coroot: &Vector) -> Matrix {
    let mut m = [[0; DIM]; DIM];
    for i in 0..dim {
        for j in 0..dim {
            m[i][j] = if i == j { 1 } else { 0 } - coroot[i] * root[j];
        }
    }
    m
}

impl RootSystem {
    pub fn new(kind: Kind) -> RootSystem {
        let d = kind_data(kind);
        let rank = d.simple_roots.len();
        let id = identity_matrix(d.dim);

        let mut matrices = Vec::new();
        let mut names = Vec::new();
        let flips: Vec<Option<Matrix>> = match d.flip {
            Some(f) => vec![None, Some(f)],
            None => vec![None],
        };
        for (j, flip) in flips.iter().enumerate() {
            let mut power = id;
            for i in 0..d.rotation_order {
                let m = match flip {
                    Some(f) => mat_mul(&power, f),
                    None => power,
                };
                matrices.push(m);
                let base = match (kind, i) {
                    (Kind::A1, 0) => "1".to_string(),
                    (Kind::A1, _) => "s".to_string(),
                    (_, 0) => String::new(),
                    (_, 1) => "r".to_string(),
                    (_, n) => format!("r{}", superscript(n)),
                };
                let name = match (j, base.is_empty()) {
                    (0, true) => "1".to_string(),
                    (0, false) => base,
                    (_, _) => format!("{base}f"),
                };
                names.push(name);
                power = mat_mul(&d.rotation, &power);
            }
        }

        let n = matrices.len();
        let index: HashMap<Matrix, u8> = matrices
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i as u8))
            .collect();
        assert_eq!(index.len(), n, "finite Weyl group elements must be distinct");
        let mut mul = vec![vec![0u8; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p = mat_mul(&matrices[a], &matrices[b]);
                mul[a][b] = *index.get(&p).expect("finite Weyl group not closed");
            }
        }
        let inv: Vec<u8> = (0..n)
            .map(|a| (0..n).find(|&b| mul[a][b] == 0).unwrap() as u8)
            .collect();

        let lookup_matrix = |m: &Matrix| -> u8 { *index.get(m).expect("reflection not in W") };
        let mut generators = Vec::with_capacity(rank + 1);
        let s_theta = reflection_matrix(d.dim, &d.highest_root, &d.highest_coroot);
        generators.push(AffineElement::new(d.highest_coroot, lookup_matrix(&s_theta)));
        for c in 0..rank {
            let s = reflection_matrix(d.dim, &d.simple_roots[c], &d.simple_coroots[c]);
            generators.push(AffineElement::new([0; DIM], lookup_matrix(&s)));
        }

        let mut bary = [0i64; DIM];
        for v in &d.base_vertices {
            bary = add(&bary, v);
        }
        let nv = d.base_vertices.len() as i64;
        for x in bary.iter_mut() {
            assert_eq!(*x % nv, 0, "scale must clear the barycenter denominator");
            *x /= nv;
        }

        let mut root_lookup = HashMap::new();
        for (i, a) in d.positive_roots.iter().enumerate() {
            root_lookup.insert(*a, (i, 1));
            root_lookup.insert(neg(a), (i, -1));
        }

        let floor_k = matrices
            .iter()
            .map(|m| {
                let b = mat_vec(m, &bary);
                d.positive_roots
                    .iter()
                    .map(|a| dot(a, &b).div_euclid(d.scale))
                    .collect()
            })
            .collect();

        let facet_roots: Vec<Vector> = std::iter::once(d.highest_root)
            .chain(d.simple_roots.iter().copied())
            .collect();
        let facet_covectors = (0..n)
            .map(|w| {
                let m_inv = &matrices[inv[w] as usize];
                facet_roots.iter().map(|a| covec_mat(a, m_inv)).collect()
            })
            .collect();

        RootSystem {
            kind,
            rank,
            dim: d.dim,
            scale: d.scale,
            simple_roots: d.simple_roots,
            simple_coroots: d.simple_coroots,
            highest_root: d.highest_root,
            highest_coroot: d.highest_coroot,
            positive_roots: d.positive_roots,
            matrices,
            names,
            mul,
            inv,
            rotation_order: d.rotation_order,
            generators,
            base_vertices: d.base_vertices,
            barycenter: bary,
            floor_k,
            facet_covectors,
            root_lookup,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn scale(&self) -> i64 {
        self.scale
    }
    pub fn simple_roots(&self) -> &[Vector] {
        &self.simple_roots
    }
    pub fn simple_coroots(&self) -> &[Vector] {
        &self.simple_coroots
    }
    pub fn highest_root(&self) -> Vector {
        self.highest_root
    }
    pub fn highest_coroot(&self) -> Vector {
        self.highest_coroot
    }
    pub fn positive_roots(&self) -> &[Vector] {
        &self.positive_roots
    }
    /// Scaled vertices of C_M indexed by type; type 0 is v_M.
    pub fn base_vertices(&self) -> &[Vector] {
        &self.base_vertices
    }
    /// Scaled barycenter of C_M.
    pub fn base_barycenter(&self) -> Vector {
        self.barycenter
    }
    pub fn finite_order(&self) -> usize {
        self.matrices.len()
    }
    pub fn finite_matrix(&self, w: u8) -> [[i64; DIM]; DIM] {
        self.matrices[w as usize]
    }
    pub fn finite_mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize][b as usize]
    }
    pub fn finite_inverse(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }
    pub fn finite_elements(&self) -> impl Iterator<Item = u8> {
        0..self.matrices.len() as u8
    }
    /// Index of the rotation generator `r` (the reflection `s` for A1).
    pub fn rotation(&self) -> u8 {
        1
    }
    /// Index of the flip `f`, absent for A1.
    pub fn flip(&self) -> Option<u8> {
        (self.kind != Kind::A1).then_some(self.rotation_order as u8)
    }
    pub fn finite_element_order(&self, w: u8) -> usize {
        let mut x = w;
        let mut k = 1;
        while x != 0 {
            x = self.finite_mul(x, w);
            k += 1;
        }
        k
    }
    pub fn finite_name(&self, w: u8) -> &str {
        &self.names[w as usize]
    }

    /// Accepts the display names (`r²f`) and ASCII spellings (`r2f`, `r^2f`).
    pub fn finite_from_name(&self, name: &str) -> Result<u8> {
        let norm = |s: &str| {
            s.trim()
                .replace('^', "")
                .replace('²', "2")
                .replace('³', "3")
                .replace('⁴', "4")
                .replace('⁵', "5")
                .replace("r1", "r")
        };
        let wanted = norm(name);
        let wanted = if wanted.is_empty() || wanted == "e" || wanted == "id" {
            "1".to_string()
        } else {
            wanted
        };
        self.names
            .iter()
            .position(|n| norm(n) == wanted)
            .map(|i| i as u8)
            .ok_or_else(|| Error::Parse(format!("unknown {} Weyl element '{name}'", self.kind)))
    }

    pub fn identity(&self) -> AffineElement {
        AffineElement::IDENTITY
    }

    /// The simple affine reflection `s_c`; `s_0` reflects across the wall
    /// `⟨x, θ⟩ = 1`.
    pub fn generator(&self, c: usize) -> AffineElement {
        self.generators[c]
    }

    pub fn translation(&self, lambda: Vector) -> AffineElement {
        AffineElement::new(lambda, 0)
    }

    pub fn in_coroot_lattice(&self, lambda: &Vector) -> bool {
        let unused_zero = lambda[self.dim..].iter().all(|&x| x == 0);
        match self.kind {
            Kind::A2 => lambda.iter().sum::<i64>() == 0,
            _ => unused_zero,
        }
    }

    pub fn validate(&self, g: &AffineElement) -> Result<()> {
        if (g.finite as usize) < self.finite_order() && self.in_coroot_lattice(&g.lambda()) {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                element: format!("{g:?}"),
                kind: self.kind,
            })
        }
    }

    pub fn compose(&self, g: &AffineElement, h: &AffineElement) -> AffineElement {
        let m = &self.matrices[g.finite as usize];
        let t = add(&g.lambda(), &mat_vec(m, &h.lambda()));
        AffineElement::new(t, self.finite_mul(g.finite, h.finite))
    }

    pub fn checked_compose(&self, g: &AffineElement, h: &AffineElement) -> Result<AffineElement> {
        self.validate(g)?;
        self.validate(h)?;
        Ok(self.compose(g, h))
    }

    pub fn invert(&self, g: &AffineElement) -> AffineElement {
        let wi = self.finite_inverse(g.finite);
        let t = neg(&mat_vec(&self.matrices[wi as usize], &g.lambda()));
        AffineElement::new(t, wi)
    }

    pub fn word_product(&self, word: &[usize]) -> AffineElement {
        word.iter().fold(self.identity(), |acc, &c| {
            self.compose(&acc, &self.generators[c])
        })
    }

    /// Action on a scaled point.
    pub fn apply(&self, g: &AffineElement, p: &Vector) -> Vector {
        let m = &self.matrices[g.finite as usize];
        add(&mat_vec(m, p), &scaled(&g.lambda(), self.scale))
    }

    pub fn finite_apply(&self, w: u8, v: &Vector) -> Vector {
        mat_vec(&self.matrices[w as usize], v)
    }

    pub fn barycenter(&self, g: &AffineElement) -> Vector {
        self.apply(g, &self.barycenter)
    }

    /// Scaled vertices of `g·C_M`, indexed by vertex type.
    pub fn vertices(&self, g: &AffineElement) -> Vec<Vector> {
        self.base_vertices.iter().map(|v| self.apply(g, v)).collect()
    }

    pub fn adjacent(&self, g: &AffineElement, c: usize) -> AffineElement {
        self.compose(g, &self.generators[c])
    }

    fn facet_raw(&self, g: &AffineElement, c: usize) -> (Vector, i64) {
        let beta = self.facet_covectors[g.finite as usize][c];
        let base = if c == 0 { 1 } else { 0 };
        (beta, base + dot(&beta, &g.lambda()))
    }

    /// The wall through the cotype-`c` facet of `g·C_M`.
    pub fn facet_wall(&self, g: &AffineElement, c: usize) -> Wall {
        let (beta, level) = self.facet_raw(g, c);
        let (root, sign) = self.root_lookup[&beta];
        Wall {
            root,
            level: sign * level,
        }
    }

    /// Side of the cotype-`c` wall of `g·C_M` on which the scaled point `p`
    /// lies: +1 on the side of `g·C_M`, -1 opposite, 0 on the wall.
    pub fn facet_side(&self, g: &AffineElement, c: usize, p: &Vector) -> i8 {
        let (beta, level) = self.facet_raw(g, c);
        let val = dot(&beta, p) - level * self.scale;
        let orient = if c == 0 { -1 } else { 1 };
        (val.signum() * orient) as i8
    }

    /// Signed side of a scaled point relative to a wall.
    pub fn wall_value(&self, wall: &Wall, p: &Vector) -> i64 {
        dot(&self.positive_roots[wall.root], p) - wall.level * self.scale
    }

    /// `k_α(g) = ⌊α(x)⌋` for x in the interior of `g·C_M`, one entry per
    /// positive root.
    pub fn kvec(&self, g: &AffineElement) -> [i64; 6] {
        let mut out = [0i64; 6];
        let lam = g.lambda();
        for (i, a) in self.positive_roots.iter().enumerate() {
            out[i] = self.floor_k[g.finite as usize][i] + dot(a, &lam);
        }
        out
    }

    pub fn kvalue(&self, g: &AffineElement, root: usize) -> i64 {
        self.floor_k[g.finite as usize][root] + dot(&self.positive_roots[root], &g.lambda())
    }

    /// Coxeter length, which is the gallery distance from C_M.
    pub fn length(&self, g: &AffineElement) -> usize {
        let k = self.kvec(g);
        let kc = self.kvec(&AffineElement::IDENTITY);
        (0..self.positive_roots.len())
            .map(|i| (k[i] - kc[i]).unsigned_abs() as usize)
            .sum()
    }

    pub fn distance(&self, a: &AffineElement, b: &AffineElement) -> usize {
        let ka = self.kvec(a);
        let kb = self.kvec(b);
        (0..self.positive_roots.len())
            .map(|i| (ka[i] - kb[i]).unsigned_abs() as usize)
            .sum()
    }

    pub fn length_checked(&self, g: &AffineElement) -> Result<usize> {
        self.validate(g)?;
        Ok(self.length(g))
    }

    /// True when `ℓ(s_c·g) < ℓ(g)`, i.e. the cotype-`c` wall of C_M
    /// separates C_M from `g·C_M`.
    pub fn is_left_descent(&self, g: &AffineElement, c: usize) -> bool {
        self.facet_side(&AffineElement::IDENTITY, c, &self.barycenter(g)) < 0
    }

    pub fn is_right_descent(&self, g: &AffineElement, c: usize) -> bool {
        self.length(&self.adjacent(g, c)) < self.length(g)
    }

    /// Reduced word taking the smallest left descent at each step.
    pub fn reduced_word(&self, g: &AffineElement) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = *g;
        while cur != AffineElement::IDENTITY {
            let c = (0..=self.rank)
                .find(|&c| self.is_left_descent(&cur, c))
                .expect("non-identity element has a left descent");
            word.push(c);
            cur = self.compose(&self.generators[c], &cur);
        }
        word
    }

    /// `λ + u(λ) + … + u^{d-1}(λ)` with `d` the order of `u`.
    pub fn norm_sum(&self, u: u8, lambda: &Vector) -> Vector {
        let m = &self.matrices[u as usize];
        let mut acc = [0; DIM];
        let mut cur = *lambda;
        for _ in 0..self.finite_element_order(u) {
            acc = add(&acc, &cur);
            cur = mat_vec(m, &cur);
        }
        acc
    }

    /// All alcoves within gallery distance `radius` of C_M, sorted.
    pub fn alcoves_within(&self, radius: usize) -> Vec<AffineElement> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(AffineElement::IDENTITY);
        queue.push_back((AffineElement::IDENTITY, 0usize));
        while let Some((g, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for c in 0..=self.rank {
                let h = self.adjacent(&g, c);
                if seen.insert(h) {
                    queue.push_back((h, d + 1));
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// An alcove whose closure contains the scaled point `p`, found by
    /// walking across separating walls.
    pub fn alcove_containing(&self, p: &Vector) -> AffineElement {
        let mut g = AffineElement::IDENTITY;
        'walk: loop {
            for c in 0..=self.rank {
                if self.facet_side(&g, c, p) < 0 {
                    g = self.adjacent(&g, c);
                    continue 'walk;
                }
            }
            return g;
        }
    }

    /// Type of a scaled point if it is a vertex of the tiling.
    pub fn vertex_type(&self, p: &Vector) -> Option<usize> {
        for (c, v) in self.base_vertices.iter().enumerate() {
            for w in self.finite_elements() {
                let d = sub(p, &self.finite_apply(w, v));
                if d.iter().all(|x| x % self.scale == 0) {
                    let lam = [d[0] / self.scale, d[1] / self.scale, d[2] / self.scale];
                    if self.in_coroot_lattice(&lam) {
                        return Some(c);
                    }
                }
            }
        }
        None
    }

    /// Canonical text form `t[λ]·w<index>`.
    pub fn format_element(&self, g: &AffineElement) -> String {
        let coords: Vec<String> = g.translation[..self.dim]
            .iter()
            .map(|x| x.to_string())
            .collect();
        format!("t[{}]·w{}", coords.join(","), g.finite)
    }

    pub fn parse_element(&self, s: &str) -> Result<AffineElement> {
        let bad = || Error::Parse(format!("malformed element '{s}'"));
        let rest = s.trim().strip_prefix("t[").ok_or_else(bad)?;
        let (coords, tail) = rest.split_once(']').ok_or_else(bad)?;
        let idx = tail
            .trim_start_matches('·')
            .trim_start_matches('.')
            .strip_prefix('w')
            .ok_or_else(bad)?;
        let finite: u8 = idx.parse().map_err(|_| bad())?;
        let vals: Vec<i64> = coords
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        if vals.len() != self.dim {
            return Err(bad());
        }
        let mut lam = [0; DIM];
        lam[..self.dim].copy_from_slice(&vals);
        let g = AffineElement::new(lam, finite);
        self.validate(&g)?;
        Ok(g)
    }

    /// Index `i` of the A1 alcove `C_M^i = [i/2, (i+1)/2]`.
    pub fn a1_index(&self, g: &AffineElement) -> i64 {
        debug_assert_eq!(self.kind, Kind::A1);
        self.kvalue(g, 0)
    }

    pub fn a1_alcove(&self, i: i64) -> AffineElement {
        debug_assert_eq!(self.kind, Kind::A1);
        // C^i has lower endpoint i/2; even i is t_{i/2}, odd i is t_{(i+1)/2}·s
        if i.rem_euclid(2) == 0 {
            AffineElement::new([i / 2, 0, 0], 0)
        } else {
            AffineElement::new([(i + 1) / 2, 0, 0], 1)
        }
    }
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootSystem").field("kind", &self.kind).finish()
    }
}

/// Shared instance per kind.
pub fn root_system(kind: Kind) -> &'static RootSystem {
    static CELLS: [OnceLock<RootSystem>; 4] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    let i = Kind::ALL.iter().position(|k| *k == kind).unwrap();
    CELLS[i].get_or_init(|| RootSystem::new(kind))
}
