//! Finite-scale computations around quasi-Boolean pro-2 groups: Boolean rings
//! and Stone duality, finite principal bundles, table groups, free products of
//! involutions, mod-2 group cohomology, embedding problems and the
//! reconstruction of presentations from graded cohomology algebras.

pub mod error;
pub mod gf2;
pub mod groups;
pub mod stone;
pub mod bundles;
pub mod freeprod;
pub mod cohomology;
pub mod graded;
pub mod embed;
pub mod formats;
pub mod reconstruct;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVec, Subspace};
pub use groups::{FiniteGroup, GroupHom, Subgroup};
