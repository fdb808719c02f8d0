//! Exact topological classification of defects in crystals.
//!
//! The crate is organised bottom-up:
//!
//! * [`intlin`]: integer matrices, Smith normal form, abelian quotients;
//! * [`semidirect`]: the planar crystal group `Z^2 ⋊_M Z` and its conjugacy classes;
//! * [`quadratic`] and [`spherical`]: exact binary polyhedral groups in `SU(2)`;
//! * [`homotopy`]: symbolic homotopy types of punctured manifolds;
//! * [`classifier`]: assembly of the full defect set for a physical system.

pub mod classifier;
pub mod homotopy;
pub mod intlin;
pub mod quadratic;
pub mod semidirect;
pub mod spherical;
mod union_find;

pub use classifier::{classify, textures, DefectReport, SystemSpec};
pub use intlin::IntMat;
pub use semidirect::{f_classes, PointGroup2D, SdElement};
