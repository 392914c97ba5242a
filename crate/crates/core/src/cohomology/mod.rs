//! Mod-2 cohomology of finite groups.
//!
//! Two routes are available. [`bar`] works with the literal normalized bar
//! cochains and is the reference for small groups and degrees. [`ring`] works
//! with a free resolution (minimal for 2-groups) and carries the ring structure,
//! induced maps and everything built on them; comparison maps translate bar
//! cocycles into resolution classes and back.

pub mod bar;
pub mod quillen;
pub mod resolution;
pub mod ring;
pub mod tower;

pub use bar::{cohomology_basis, pullback, BarClass, BarComplex};
pub use quillen::{module_generators_over_image, quillen_map, QuillenReport};
pub use resolution::Resolution;
pub use ring::{induced_map, involution_profile, CohomClass, GroupCohomology, InducedMap};
pub use tower::{tower_colimit, TowerColimit};

/// Resource limits shared by the cohomology computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest degree a caller may request.
    pub max_degree: usize,
    pub max_group_order: usize,
    /// Largest bar cochain space `(|G| − 1)^n`.
    pub max_bar_cochains: usize,
    /// Largest free module `F₂[G]^h` in a resolution, counted in bits.
    pub max_module_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_degree: 4,
            max_group_order: 64,
            max_bar_cochains: 1 << 15,
            max_module_dim: 1 << 15,
        }
    }
}

impl Caps {
    pub(crate) fn check_degree(&self, n: usize) -> crate::Result<()> {
        if n > self.max_degree {
            return Err(crate::Error::cap("degree", n as u128, self.max_degree as u128));
        }
        Ok(())
    }
}
