//! Alcove geometry and gallery folding for the affine Weyl groups of types
//! A1, A2, C2 and G2, used to decide which affine Deligne–Lusztig sets
//! `X_w(bσ)` are non-empty.
//!
//! The crate is organised bottom-up:
//!
//! * [`weyl`] and [`symmetry`]: root systems, affine Weyl group elements,
//!   walls, lengths and the C_M-preserving symmetries.
//! * [`gallery`]: standard minimal galleries, minimal-gallery enumeration and
//!   composite galleries for a conjugacy representative `b`.
//! * [`folding`]: the retraction onto the main apartment at the chamber level.
//! * [`superset`] and [`subset`]: the two sides of the sandwich
//!   `S₂ ⊆ S ⊆ S₁`, as [`chamber_set::ChamberSet`]s.
//! * [`solver`]: verdict assembly, rank-one closed forms and extended groups.
//! * [`serialize`] and [`render`]: JSON documents, SVG and ASCII output.

pub mod chamber_set;
pub mod error;
pub mod folding;
pub mod gallery;
pub mod render;
pub mod serialize;
pub mod solver;
pub mod subset;
pub mod superset;
pub mod symmetry;
pub mod weyl;

pub use chamber_set::{Budgets, ChamberSet, SetKind, Window};
pub use error::{Error, Result};
pub use weyl::{root_system, AffineElement, Kind, RootSystem, Vector, Wall};
