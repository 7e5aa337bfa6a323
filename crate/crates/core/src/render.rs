//! SVG and ASCII pictures of chamber sets. Coordinates come from the
//! W-invariant inner product, so A2 and G2 come out triangular and C2 as
//! squares cut by diagonals; A1 is drawn as a row of segments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::chamber_set::ChamberSet;
use crate::error::{Error, Result};
use crate::solver::{Verdict, VerdictMap};
use crate::weyl::{AffineElement, Kind, RootSystem, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shade {
    Nonempty,
    Unknown,
    Empty,
    /// Member of a chamber set being drawn on its own.
    Member,
    /// `w⁻¹bwC_M`, drawn darker as in the usual pictures.
    Conjugate,
}

impl Shade {
    fn class(self) -> &'static str {
        match self {
            Shade::Nonempty => "nonempty",
            Shade::Unknown => "unknown",
            Shade::Empty => "empty",
            Shade::Member => "member",
            Shade::Conjugate => "conjugate",
        }
    }

    fn fill(self) -> &'static str {
        match self {
            Shade::Nonempty | Shade::Member => "#9a9a9a",
            Shade::Unknown => "#f2c14e",
            Shade::Empty => "#ffffff",
            Shade::Conjugate => "#4a4a4a",
        }
    }

    fn glyph(self) -> char {
        match self {
            Shade::Nonempty | Shade::Member => '#',
            Shade::Unknown => '?',
            Shade::Empty => '.',
            Shade::Conjugate => '@',
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub radius: usize,
    /// Width of the SVG in pixels; the height follows the aspect ratio.
    pub width: u32,
    /// Character columns of the ASCII raster (rank 2).
    pub columns: usize,
    pub shades: BTreeMap<AffineElement, Shade>,
}

impl RenderSpec {
    /// Every alcove in the window, unshaded ones counted as empty.
    fn shade(&self, g: &AffineElement) -> Shade {
        self.shades.get(g).copied().unwrap_or(Shade::Empty)
    }

    pub fn for_set(rs: &RootSystem, set: &ChamberSet) -> Self {
        let mut shades: BTreeMap<AffineElement, Shade> =
            set.chambers.iter().map(|g| (*g, Shade::Member)).collect();
        for g in set.b.w_conjugates(rs) {
            if shades.contains_key(&g) {
                shades.insert(g, Shade::Conjugate);
            }
        }
        RenderSpec {
            radius: set.window.radius,
            width: 640,
            columns: 96,
            shades,
        }
    }

    pub fn for_verdicts(rs: &RootSystem, vm: &VerdictMap) -> Self {
        let conj: Vec<AffineElement> = vm.b.w_conjugates(rs);
        let shades = vm
            .entries
            .iter()
            .map(|(g, e)| {
                let s = match e.verdict {
                    Verdict::Nonempty if conj.contains(g) => Shade::Conjugate,
                    Verdict::Nonempty => Shade::Nonempty,
                    Verdict::Unknown => Shade::Unknown,
                    Verdict::Empty => Shade::Empty,
                };
                (*g, s)
            })
            .collect();
        RenderSpec {
            radius: vm.window.radius,
            width: 640,
            columns: 96,
            shades,
        }
    }
}

/// Linear map from scaled model coordinates to the plane.
struct Embedding {
    m: [[f64; 3]; 2],
}

impl Embedding {
    fn new(rs: &RootSystem) -> Self {
        let scale = rs.scale() as f64;
        if rs.rank() == 1 {
            return Embedding {
                m: [[1.0 / scale, 0.0, 0.0], [0.0; 3]],
            };
        }
        // Invariant form G = Σ MᵀM over the finite Weyl group.
        let mut g = [[0.0f64; 3]; 3];
        for w in rs.finite_elements() {
            let m = rs.finite_matrix(w);
            for i in 0..3 {
                for j in 0..3 {
                    g[i][j] += (0..3).map(|k| (m[k][i] * m[k][j]) as f64).sum::<f64>();
                }
            }
        }
        // A plane basis and the coefficient map back from points of it.
        let (basis, coef): ([[f64; 3]; 2], [[f64; 3]; 2]) = if rs.kind() == Kind::A2 {
            (
                [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0]],
                [[1.0, 0.0, 0.0], [0.0, 0.0, -1.0]],
            )
        } else {
            (
                [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
                [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            )
        };
        let form = |u: &[f64; 3], v: &[f64; 3]| -> f64 {
            (0..3).map(|i| (0..3).map(|j| u[i] * g[i][j] * v[j]).sum::<f64>()).sum()
        };
        let g11 = form(&basis[0], &basis[0]);
        let g12 = form(&basis[0], &basis[1]);
        let g22 = form(&basis[1], &basis[1]);
        // Cholesky: Euclidean coordinates of a·B1 + b·B2.
        let l11 = g11.sqrt();
        let l21 = g12 / l11;
        let l22 = (g22 - l21 * l21).sqrt();
        let euclid = |a: f64, b: f64| -> [f64; 2] { [l11 * a + l21 * b, l22 * b] };
        // Rotate so the walls of the last simple root run horizontally.
        let alpha = rs.simple_roots()[rs.rank() - 1];
        let along: [f64; 3] = if rs.kind() == Kind::A2 {
            // kernel of α inside the trace-zero plane
            let a = [alpha[0] as f64, alpha[1] as f64, alpha[2] as f64];
            [a[1] - a[2], a[2] - a[0], a[0] - a[1]]
        } else {
            [-(alpha[1] as f64), alpha[0] as f64, 0.0]
        };
        let ca = (0..3).map(|k| coef[0][k] * along[k]).sum::<f64>();
        let cb = (0..3).map(|k| coef[1][k] * along[k]).sum::<f64>();
        let d = euclid(ca, cb);
        let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
        let (c, s) = (d[0] / n, d[1] / n);
        let mut m = [[0.0; 3]; 2];
        for k in 0..3 {
            let e = euclid(coef[0][k], coef[1][k]);
            m[0][k] = (c * e[0] + s * e[1]) / scale;
            m[1][k] = (-s * e[0] + c * e[1]) / scale;
        }
        Embedding { m }
    }

    fn point(&self, p: &Vector) -> [f64; 2] {
        let f = |row: &[f64; 3]| (0..3).map(|k| row[k] * p[k] as f64).sum::<f64>();
        [f(&self.m[0]), f(&self.m[1])]
    }
}

fn polygons(rs: &RootSystem, radius: usize) -> Vec<(AffineElement, Vec<[f64; 2]>)> {
    let emb = Embedding::new(rs);
    let mut out: Vec<(AffineElement, Vec<[f64; 2]>)> = rs
        .alcoves_within(radius)
        .into_iter()
        .map(|g| {
            let mut pts: Vec<[f64; 2]> = rs.vertices(&g).iter().map(|v| emb.point(v)).collect();
            // counter-clockwise around the barycenter
            let cx = pts.iter().map(|p| p[0]).sum::<f64>() / pts.len() as f64;
            let cy = pts.iter().map(|p| p[1]).sum::<f64>() / pts.len() as f64;
            pts.sort_by(|a, b| {
                let ta = (a[1] - cy).atan2(a[0] - cx);
                let tb = (b[1] - cy).atan2(b[0] - cx);
                ta.total_cmp(&tb)
            });
            (g, pts)
        })
        .collect();
    out.sort_by_key(|(g, _)| *g);
    out
}

fn check_rank(rs: &RootSystem) -> Result<()> {
    if rs.rank() > 2 {
        return Err(Error::Unsupported(format!("cannot draw rank {}", rs.rank())));
    }
    Ok(())
}

/// One polygon per alcove of the window, carrying its shade as the class.
pub fn render_svg(rs: &RootSystem, spec: &RenderSpec) -> Result<String> {
    check_rank(rs)?;
    let polys = polygons(rs, spec.radius);
    let a1 = rs.rank() == 1;
    // A1 segments become unit-high boxes.
    let shapes: Vec<(AffineElement, Vec<[f64; 2]>)> = polys
        .into_iter()
        .map(|(g, pts)| {
            if a1 {
                let (x0, x1) = (pts[0][0].min(pts[1][0]), pts[0][0].max(pts[1][0]));
                (g, vec![[x0, 0.0], [x1, 0.0], [x1, 0.4], [x0, 0.4]])
            } else {
                (g, pts)
            }
        })
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for (_, pts) in &shapes {
        for p in pts {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0);
    let (w, h) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let height = ((spec.width as f64) * h / w).round() as u32;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{:.4} {:.4} {:.4} {:.4}">"#,
        spec.width, height, x0 - pad, -(y1 + pad), w, h
    )
    .unwrap();
    writeln!(
        s,
        r##"<g stroke="#555555" stroke-width="{:.4}" stroke-linejoin="round">"##,
        0.004 * w
    )
    .unwrap();
    for (g, pts) in &shapes {
        let shade = spec.shade(g);
        let coords: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.4},{:.4}", p[0], -p[1]))
            .collect();
        let base = if *g == AffineElement::IDENTITY { " base" } else { "" };
        writeln!(
            s,
            r#"<polygon class="{}{}" fill="{}" points="{}"><title>{}</title></polygon>"#,
            shade.class(),
            base,
            shade.fill(),
            coords.join(" "),
            rs.format_element(g)
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    // outline of C_M and the main vertex
    if let Some((_, pts)) = shapes.iter().find(|(g, _)| *g == AffineElement::IDENTITY) {
        let coords: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.4},{:.4}", p[0], -p[1]))
            .collect();
        writeln!(
            s,
            r##"<polygon fill="none" stroke="#c0392b" stroke-width="{:.4}" points="{}"/>"##,
            0.01 * w,
            coords.join(" ")
        )
        .unwrap();
    }
    writeln!(
        s,
        r##"<circle cx="0.0000" cy="0.0000" r="{:.4}" fill="#c0392b"/>"##,
        0.008 * w
    )
    .unwrap();
    writeln!(s, "</svg>").unwrap();
    Ok(s)
}

fn inside(p: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= -1e-12
    })
}

/// A1: one character per chamber index with an index ruler. Rank 2: a
/// character raster of the window with `#` nonempty, `?` unknown, `.`
/// empty and `@` for the conjugates `w⁻¹bwC_M`.
pub fn render_ascii(rs: &RootSystem, spec: &RenderSpec) -> Result<String> {
    check_rank(rs)?;
    let mut s = String::new();
    if rs.rank() == 1 {
        let r = spec.radius as i64;
        let mut ruler = String::new();
        let mut row = String::new();
        for i in -r..r {
            row.push(spec.shade(&rs.a1_alcove(i)).glyph());
            ruler.push(if i == 0 {
                '0'
            } else if i.rem_euclid(5) == 0 {
                '|'
            } else {
                ' '
            });
        }
        // C^r lies outside [-r, r) but inside the window
        let last = rs.a1_alcove(r);
        row.push(spec.shade(&last).glyph());
        ruler.push(if r % 5 == 0 { '|' } else { ' ' });
        writeln!(s, "i = {}..{}", -r, r).unwrap();
        writeln!(s, "{ruler}").unwrap();
        writeln!(s, "{row}").unwrap();
        return Ok(s);
    }
    let polys = polygons(rs, spec.radius);
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for (_, pts) in &polys {
        for p in pts {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
    }
    let cols = spec.columns.max(8);
    let dx = (x1 - x0) / cols as f64;
    // terminal cells are about twice as tall as wide
    let dy = 2.0 * dx;
    let rows = ((y1 - y0) / dy).ceil() as usize;
    for r in 0..rows {
        let y = y1 - (r as f64 + 0.5) * dy;
        let mut line = String::new();
        for c in 0..cols {
            let x = x0 + (c as f64 + 0.5) * dx;
            let hit = polys.iter().find(|(_, pts)| inside([x, y], pts));
            line.push(hit.map_or(' ', |(g, _)| spec.shade(g).glyph()));
        }
        writeln!(s, "{}", line.trim_end()).unwrap();
    }
    Ok(s)
}
