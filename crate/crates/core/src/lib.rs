//! Exact computations for `Z/p`-covers of curves in characteristic `p`: local
//! group cohomology of Artin-Schreier points, the global Hodge-de Rham splitting
//! defect, equivariant dimension formulas, splitting criteria for modules over
//! cyclic `p`-groups, and an explicit characteristic 2 example.

pub mod ascover;
pub mod char2ex;
pub mod cohom;
pub mod gf;
pub mod laurent;
pub mod linalg;
pub mod modrep;
pub mod profile;
pub mod verify;

pub use ascover::{LatticeWindow, LocalCover};
pub use gf::{FieldCtx, FieldElement};
pub use laurent::LaurentSeries;
pub use linalg::Matrix;
