//! Affine maps that send C_M to itself: the order-3 rotations about the
//! center of the A2 base alcove, the A1 midpoint flip and the C2 flip.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weyl::{AffineElement, Kind, RootSystem, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymmetryKind {
    Identity,
    Rot120A2,
    Rot240A2,
    FlipMidA1,
    FlipVertC2,
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SymmetryKind::Identity => "identity",
            SymmetryKind::Rot120A2 => "rot120",
            SymmetryKind::Rot240A2 => "rot240",
            SymmetryKind::FlipMidA1 => "flip-mid",
            SymmetryKind::FlipVertC2 => "flip-vert",
        };
        f.write_str(s)
    }
}

/// The map `x ↦ M·x + o` on scaled points. Acting on alcoves it conjugates:
/// `g ↦ τ∘g∘τ⁻¹`, which preserves C_M because τ does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetryOp {
    pub kind: SymmetryKind,
    pub linear: u8,
    pub offset: Vector,
}

impl SymmetryOp {
    pub fn valid_for(&self, kind: Kind) -> bool {
        matches!(
            (self.kind, kind),
            (SymmetryKind::Identity, _)
                | (SymmetryKind::Rot120A2 | SymmetryKind::Rot240A2, Kind::A2)
                | (SymmetryKind::FlipMidA1, Kind::A1)
                | (SymmetryKind::FlipVertC2, Kind::C2)
        )
    }
}

impl RootSystem {
    pub fn symmetry_op(&self, kind: SymmetryKind) -> Result<SymmetryOp> {
        let v = self.base_vertices();
        let op = match (kind, self.kind()) {
            (SymmetryKind::Identity, _) => SymmetryOp {
                kind,
                linear: 0,
                offset: [0; 3],
            },
            // v_M → ω1 → ω2
            (SymmetryKind::Rot120A2, Kind::A2) => SymmetryOp {
                kind,
                linear: 1,
                offset: v[1],
            },
            (SymmetryKind::Rot240A2, Kind::A2) => SymmetryOp {
                kind,
                linear: 2,
                offset: v[2],
            },
            (SymmetryKind::FlipMidA1, Kind::A1) => SymmetryOp {
                kind,
                linear: 1,
                offset: v[1],
            },
            // (x1, x2) ↦ (1/2 - x2, 1/2 - x1)
            (SymmetryKind::FlipVertC2, Kind::C2) => SymmetryOp {
                kind,
                linear: self.finite_mul(2, self.flip().unwrap()),
                offset: v[2],
            },
            _ => {
                return Err(Error::Unsupported(format!(
                    "symmetry {kind} on {}",
                    self.kind()
                )))
            }
        };
        Ok(op)
    }

    /// The non-identity symmetries used to close chamber sets.
    pub fn symmetry_ops(&self) -> Vec<SymmetryOp> {
        let kinds: &[SymmetryKind] = match self.kind() {
            Kind::A1 => &[SymmetryKind::FlipMidA1],
            Kind::A2 => &[SymmetryKind::Rot120A2, SymmetryKind::Rot240A2],
            Kind::C2 => &[SymmetryKind::FlipVertC2],
            Kind::G2 => &[],
        };
        kinds.iter().map(|k| self.symmetry_op(*k).unwrap()).collect()
    }

    pub fn symmetry_point(&self, op: &SymmetryOp, p: &Vector) -> Vector {
        let m = self.finite_apply(op.linear, p);
        [m[0] + op.offset[0], m[1] + op.offset[1], m[2] + op.offset[2]]
    }

    pub fn symmetry_apply(&self, op: &SymmetryOp, g: &AffineElement) -> Result<AffineElement> {
        if !op.valid_for(self.kind()) {
            return Err(Error::Unsupported(format!(
                "symmetry {} on {}",
                op.kind,
                self.kind()
            )));
        }
        let m = op.linear;
        let m_inv = self.finite_inverse(m);
        let u = self.finite_mul(self.finite_mul(m, g.finite), m_inv);
        let scale = self.scale();
        let ml = self.finite_apply(m, &g.lambda());
        let uo = self.finite_apply(u, &op.offset);
        let mut t = [0i64; 3];
        for i in 0..3 {
            let num = scale * ml[i] + op.offset[i] - uo[i];
            debug_assert_eq!(num % scale, 0);
            t[i] = num / scale;
        }
        Ok(AffineElement::new(t, u))
    }
}
