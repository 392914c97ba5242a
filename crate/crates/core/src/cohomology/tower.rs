//! Inflation along a tower of finite quotients.

use serde::Serialize;

use super::ring::{induced_map, CohomClass, GroupCohomology};
use super::Caps;
use crate::error::Result;
use crate::freeprod::Tower;
use crate::gf2::Subspace;
use crate::graded::{GradedAlgebra, Snapshot};

#[derive(Clone, Debug, Serialize)]
pub struct TowerColimit {
    pub n_max: usize,
    pub stage_orders: Vec<usize>,
    /// `stage_dims[n][k] = dim Hⁿ(G_k)`.
    pub stage_dims: Vec<Vec<usize>>,
    /// `ranks[n][k]` is the rank of inflation from stage `k` to the last stage.
    pub ranks: Vec<Vec<usize>>,
    /// Rank of inflation from the first stage, which every later stage contains.
    pub stable_dims: Vec<usize>,
    /// Canonical basis of the stable image in `Hⁿ` of the last stage.
    pub stable_basis: Vec<Vec<CohomClass>>,
    pub snapshot: Snapshot,
    #[serde(skip)]
    pub algebra: GradedAlgebra,
    #[serde(skip)]
    pub last: GroupCohomology,
}

/// Inflation ranks into the last stage in degrees `0..=n_max`, and the subring
/// of classes inflated from the first stage.
pub fn tower_colimit(tower: &Tower, n_max: usize, caps: &Caps) -> Result<TowerColimit> {
    caps.check_degree(n_max)?;
    let cohs = tower
        .stages
        .iter()
        .map(|s| GroupCohomology::new(s.group.clone(), n_max, caps))
        .collect::<Result<Vec<_>>>()?;
    let last_index = cohs.len() - 1;
    let last = &cohs[last_index];
    let infl = (0..=last_index)
        .map(|k| induced_map(&tower.composite(last_index, k), &cohs[k], last, n_max))
        .collect::<Result<Vec<_>>>()?;
    let stage_dims = (0..=n_max).map(|n| cohs.iter().map(|c| c.dim(n)).collect()).collect();
    let ranks: Vec<Vec<usize>> = (0..=n_max).map(|n| infl.iter().map(|m| m.rank(n)).collect()).collect();
    let stable: Vec<Subspace> = (0..=n_max).map(|n| infl[0].image(n)).collect();
    let stable_basis: Vec<Vec<CohomClass>> = stable
        .iter()
        .enumerate()
        .map(|(n, s)| {
            s.basis()
                .iter()
                .map(|v| CohomClass {
                    degree: n,
                    coords: v.clone(),
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = stable.iter().map(Subspace::dim).collect();
    let mut mult = vec![vec![Vec::new(); n_max + 1]; n_max + 1];
    for p in 0..=n_max {
        for q in 0..=n_max - p {
            mult[p][q] = stable_basis[p]
                .iter()
                .map(|a| {
                    stable_basis[q]
                        .iter()
                        .map(|b| {
                            let c = last.cup(a, b)?;
                            Ok(stable[p + q].coordinates(&c.coords).expect("inflation is multiplicative"))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
        }
    }
    let algebra = GradedAlgebra::new(dims.clone(), mult)?;
    Ok(TowerColimit {
        n_max,
        stage_orders: tower.stages.iter().map(|s| s.group.order()).collect(),
        stage_dims,
        ranks,
        stable_dims: dims,
        stable_basis,
        snapshot: algebra.to_snapshot(),
        algebra,
        last: last.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::ring::involution_profile;
    use crate::freeprod::{quotient_tower, Presentation};

    fn colimit(y: usize, x: usize, depth: usize, n: usize) -> TowerColimit {
        let t = quotient_tower(&Presentation::with_counts(y, x), depth).unwrap();
        tower_colimit(&t, n, &Caps::default()).unwrap()
    }

    #[test]
    fn cyclic_tower() {
        let c = colimit(1, 0, 3, 3);
        assert_eq!(c.stage_orders, vec![2, 4, 8]);
        assert_eq!(c.stable_dims, vec![1, 1, 0, 0]);
        assert_eq!(c.ranks[1], vec![1, 1, 1]);
    }

    #[test]
    fn dihedral_tower() {
        let c = colimit(0, 2, 3, 3);
        assert_eq!(c.stage_orders, vec![4, 8, 16]);
        assert_eq!(c.stable_dims, vec![1, 2, 2, 2]);
        // the stable degree-two classes separate the two reflection classes
        let mut seen = Vec::new();
        for a in Subspace::full(2).elements() {
            let class = c.stable_basis[2]
                .iter()
                .zip(a.iter_ones().fold(vec![false; 2], |mut v, i| {
                    v[i] = true;
                    v
                }))
                .filter(|(_, on)| *on)
                .fold(c.last.zero(2), |acc, (b, _)| acc.add(b).unwrap());
            let p = involution_profile(&c.last, &class).unwrap();
            let reflections: Vec<bool> = p
                .class_reps
                .iter()
                .zip(&p.values)
                .filter(|(&r, _)| r >= 8)
                .map(|(_, &v)| v)
                .collect();
            assert!(!seen.contains(&reflections));
            seen.push(reflections);
        }
    }

    #[test]
    fn other_shapes() {
        assert_eq!(colimit(0, 1, 2, 4).stable_dims, vec![1; 5]);
        assert_eq!(colimit(0, 0, 2, 3).stable_dims, vec![1, 0, 0, 0]);
        assert_eq!(colimit(2, 0, 2, 2).stable_dims, vec![1, 2, 0]);
    }
}
