//! Restriction to elementary abelian subgroups: the map into the inverse limit
//! over conjugations and inclusions, with bounded F-isomorphism checks, and
//! generators of subgroup cohomology as a module over the restriction image.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::ring::{induced_map, CohomClass, GroupCohomology, InducedMap};
use super::Caps;
use crate::error::{Error, Result};
use crate::gf2::{complement, kernel_basis, BitMatrix, BitVec, LinearSolver, Subspace};
use crate::groups::{elementary_abelian_category, FiniteGroup, GroupHom, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuillenReport {
    pub degree: usize,
    pub nil_bound: usize,
    pub pow_bound: usize,
    /// Number of elementary abelian subgroups, the trivial one included.
    pub objects: usize,
    pub rank: usize,
    pub source_dim: usize,
    pub limit_dim: usize,
    pub image_dim: usize,
    /// Kernel of `q_G` in degree `n`, canonical basis in `Hⁿ(G)` coordinates.
    pub kernel: Vec<BitVec>,
    /// Kernel elements with a nonzero power at the nilpotency bound.
    pub nilpotency_violations: Vec<BitVec>,
    /// Limit elements, in the coordinates of the stacked `Hⁿ(A)`, spanning a
    /// complement of those with a `2^k`-th power in the image for some `k` up to the bound.
    pub power_violations: Vec<BitVec>,
    pub clean: bool,
}

/// An elementary abelian subgroup identified with `F₂^r` through a basis.
struct Model {
    rank: usize,
    /// `F₂^r → G`.
    inclusion: GroupHom,
    /// Element of the subgroup to its mask.
    masks: BTreeMap<usize, usize>,
}

fn model(g: &Arc<FiniteGroup>, a: &Subgroup, groups: &[Arc<FiniteGroup>]) -> Model {
    let mut basis = Vec::new();
    let mut span = vec![0usize];
    for &x in a.elements() {
        if !span.contains(&x) {
            let shifted: Vec<usize> = span.iter().map(|&s| g.mul(s, x)).collect();
            span.extend(shifted);
            basis.push(x);
        }
    }
    let rank = basis.len();
    let element = |m: usize| {
        (0..rank)
            .filter(|k| m >> k & 1 == 1)
            .fold(0, |acc, k| g.mul(acc, basis[k]))
    };
    let map: Vec<usize> = (0..1usize << rank).map(element).collect();
    let masks = map.iter().enumerate().map(|(m, &x)| (x, m)).collect();
    let inclusion = GroupHom::new(groups[rank].clone(), g.clone(), map).expect("basis of an elementary abelian subgroup");
    Model { rank, inclusion, masks }
}

/// Stacked restriction data for every elementary abelian subgroup.
struct Restrictions {
    models: Vec<Model>,
    model_coh: Vec<GroupCohomology>,
    restrictions: Vec<InducedMap>,
    offsets: Vec<Vec<usize>>,
}

impl Restrictions {
    fn new(coh: &GroupCohomology, objects: &[Subgroup], top: usize) -> Result<Self> {
        let g = coh.group();
        let max_rank = objects.iter().map(|o| o.order().trailing_zeros() as usize).max().unwrap_or(0);
        let groups: Vec<Arc<FiniteGroup>> = (0..=max_rank).map(|r| Arc::new(FiniteGroup::elementary_abelian(r))).collect();
        let model_coh = groups
            .iter()
            .map(|e| GroupCohomology::new(e.clone(), top, coh.caps()))
            .collect::<Result<Vec<_>>>()?;
        let models: Vec<Model> = objects.iter().map(|a| model(g, a, &groups)).collect();
        let restrictions = models
            .iter()
            .map(|m| induced_map(&m.inclusion, coh, &model_coh[m.rank], top))
            .collect::<Result<Vec<_>>>()?;
        let offsets = (0..=top)
            .map(|d| {
                let mut acc = 0;
                let mut out = Vec::with_capacity(models.len() + 1);
                for m in &models {
                    out.push(acc);
                    acc += model_coh[m.rank].dim(d);
                }
                out.push(acc);
                out
            })
            .collect();
        Ok(Restrictions {
            models,
            model_coh,
            restrictions,
            offsets,
        })
    }

    fn ambient(&self, d: usize) -> usize {
        *self.offsets[d].last().expect("nonempty")
    }

    fn block_dim(&self, k: usize, d: usize) -> usize {
        self.offsets[d][k + 1] - self.offsets[d][k]
    }

    /// `q_G` in degree `d` as a matrix into the stacked coordinates.
    fn q(&self, coh: &GroupCohomology, d: usize) -> Result<BitMatrix> {
        let amb = self.ambient(d);
        let columns = coh
            .basis(d)
            .iter()
            .map(|c| {
                let mut col = BitVec::zeros(amb);
                for (k, r) in self.restrictions.iter().enumerate() {
                    for i in r.apply(c)?.coords.iter_ones() {
                        col.set(self.offsets[d][k] + i, true);
                    }
                }
                Ok(col)
            })
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_columns(amb, &columns)
    }

    /// Squaring applied blockwise, degree `d` to `2d`.
    fn frobenius(&self, d: usize, x: &BitVec) -> Result<BitVec> {
        let mut out = BitVec::zeros(self.ambient(2 * d));
        for (k, m) in self.models.iter().enumerate() {
            let sq = self.model_coh[m.rank].squaring_matrix(d)?;
            let block = x.slice(self.offsets[d][k], self.block_dim(k, d));
            for i in sq.mul_vec(&block)?.iter_ones() {
                out.set(self.offsets[2 * d][k] + i, true);
            }
        }
        Ok(out)
    }
}

fn column_span(m: &BitMatrix) -> Subspace {
    Subspace::span(m.rows(), m.transpose().row_vectors().iter())
}

/// `q_G: Hⁿ(G) → lim Hⁿ(A)` over the elementary abelian subgroups, with a
/// nilpotency check of the kernel at `nil_bound` and a check that every limit
/// element has a `2^k`-th power in the image for some `k ≤ pow_bound`.
pub fn quillen_map(g: &Arc<FiniteGroup>, n: usize, nil_bound: usize, pow_bound: usize, caps: &Caps) -> Result<QuillenReport> {
    caps.check_degree(n)?;
    if !g.is_two_group() {
        return Err(Error::NotTwoGroup { order: g.order() });
    }
    let top = (n * nil_bound).max(n << pow_bound).max(n);
    let coh = GroupCohomology::new(g.clone(), top, caps)?;
    let cat = elementary_abelian_category(g);
    let data = Restrictions::new(&coh, &cat.objects, top)?;
    let amb = data.ambient(n);

    // compatibility constraints from isomorphisms and index-2 inclusions, which generate all morphisms
    let mut rows = Vec::new();
    for mor in &cat.morphisms {
        let (a, b) = (&cat.objects[mor.source], &cat.objects[mor.target]);
        let iso = a.order() == b.order();
        let step = mor.map == a.elements() && b.order() == 2 * a.order();
        if !iso && !step {
            continue;
        }
        let (ma, mb) = (&data.models[mor.source], &data.models[mor.target]);
        let pos: BTreeMap<usize, usize> = a.elements().iter().enumerate().map(|(i, &y)| (y, i)).collect();
        let map: Vec<usize> = (0..1usize << ma.rank)
            .map(|m| mb.masks[&mor.map[pos[&ma.inclusion.apply(m)]]])
            .collect();
        let hom = GroupHom::new(ma.inclusion.source().clone(), mb.inclusion.source().clone(), map)?;
        let pulled = induced_map(&hom, &data.model_coh[mb.rank], &data.model_coh[ma.rank], n)?;
        let m = pulled.matrix(n);
        for i in 0..m.rows() {
            let mut row = BitVec::zeros(amb);
            row.flip(data.offsets[n][mor.source] + i);
            for j in m.row(i).iter_ones() {
                row.flip(data.offsets[n][mor.target] + j);
            }
            rows.push(row);
        }
    }
    let limit = kernel_basis(&BitMatrix::from_rows(amb, rows)?);
    let q = data.q(&coh, n)?;
    let image = column_span(&q);
    if !image.is_subspace_of(&limit) {
        return Err(Error::invalid("quillen map", "restrictions are not compatible families"));
    }
    let kernel = kernel_basis(&q);

    let mut nilpotency_violations = Vec::new();
    if nil_bound.is_power_of_two() {
        // x ↦ x^b is additive, so the kernel basis decides
        for x in kernel.basis() {
            let c = CohomClass { degree: n, coords: x.clone() };
            if !coh.power(&c, nil_bound)?.is_zero() {
                nilpotency_violations.push(x.clone());
            }
        }
    } else {
        for x in kernel.elements() {
            let c = CohomClass { degree: n, coords: x.clone() };
            if !x.is_zero() && !coh.power(&c, nil_bound)?.is_zero() {
                nilpotency_violations.push(x);
            }
        }
    }

    // V_k = {λ ∈ L : λ^{2^k} ∈ im q}; these grow with k since the image is closed under squaring
    let mut frob: Vec<BitVec> = limit.basis().to_vec();
    let mut d = n;
    let mut covered = Subspace::zero(limit.dim());
    for k in 0..=pow_bound {
        if k > 0 {
            frob = frob.iter().map(|x| data.frobenius(d, x)).collect::<Result<Vec<_>>>()?;
            d *= 2;
        }
        let im = column_span(&data.q(&coh, d)?);
        let residues: Vec<BitVec> = frob.iter().map(|x| im.reduce(x)).collect();
        let solver = LinearSolver::from_columns(data.ambient(d), &residues);
        covered = solver.kernel_subspace();
        if covered.dim() == limit.dim() {
            break;
        }
    }
    let power_violations: Vec<BitVec> = complement(&covered)
        .basis()
        .iter()
        .map(|coords| limit.combine(coords))
        .collect();

    let clean = nilpotency_violations.is_empty() && power_violations.is_empty();
    Ok(QuillenReport {
        degree: n,
        nil_bound,
        pow_bound,
        objects: cat.objects.len(),
        rank: cat.rank,
        source_dim: coh.dim(n),
        limit_dim: limit.dim(),
        image_dim: image.dim(),
        kernel: kernel.basis().to_vec(),
        nilpotency_violations,
        power_violations,
        clean,
    })
}

/// Homogeneous generators of `H•(H)` through degree `bound` as a module over
/// `H•(G)` acting by restriction, chosen greedily by ascending degree as
/// canonical complements of what the earlier generators already produce.
pub fn module_generators_over_image(g: &Arc<FiniteGroup>, h: &Subgroup, bound: usize, caps: &Caps) -> Result<Vec<CohomClass>> {
    caps.check_degree(bound)?;
    let (sub, inc) = GroupHom::inclusion(g.clone(), h);
    let cg = GroupCohomology::new(g.clone(), bound, caps)?;
    let ch = GroupCohomology::new(sub, bound, caps)?;
    let res = induced_map(&inc, &cg, &ch, bound)?;
    let mut gens: Vec<CohomClass> = Vec::new();
    for i in 0..=bound {
        let mut produced = Vec::new();
        for x in &gens {
            for c in cg.basis(i - x.degree) {
                produced.push(ch.cup(&res.apply(&c)?, x)?.coords);
            }
        }
        let span = Subspace::span(ch.dim(i), produced.iter());
        for v in complement(&span).basis() {
            gens.push(CohomClass {
                degree: i,
                coords: v.clone(),
            });
        }
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_abelian_is_injective() {
        for r in 1..=3 {
            let g = Arc::new(FiniteGroup::elementary_abelian(r));
            for n in 1..=2 {
                let q = quillen_map(&g, n, 4, 2, &Caps::default()).unwrap();
                assert!(q.kernel.is_empty());
                assert_eq!(q.image_dim, q.limit_dim);
                assert!(q.clean);
            }
        }
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let q = quillen_map(&z2, 3, 4, 2, &Caps::default()).unwrap();
        assert_eq!((q.source_dim, q.limit_dim, q.image_dim), (1, 1, 1));
    }

    #[test]
    fn quaternion_degree_one() {
        let g = Arc::new(FiniteGroup::quaternion(8));
        let q = quillen_map(&g, 1, 4, 2, &Caps::default()).unwrap();
        assert_eq!(q.objects, 2);
        assert_eq!(q.rank, 1);
        assert_eq!(q.limit_dim, 1);
        assert_eq!(q.kernel.len(), 2);
        assert!(q.clean);
        // the limit class only reaches the image at its fourth power
        let q = quillen_map(&g, 1, 4, 1, &Caps::default()).unwrap();
        assert_eq!(q.power_violations.len(), 1);
        // degree-one classes cube to zero but do not square to zero
        let q = quillen_map(&g, 1, 2, 2, &Caps::default()).unwrap();
        assert!(!q.nilpotency_violations.is_empty());
    }

    #[test]
    fn dihedral_and_cyclic() {
        for g in [FiniteGroup::dihedral(8), FiniteGroup::cyclic(4), FiniteGroup::dihedral(16)] {
            let g = Arc::new(g);
            for n in 1..=2 {
                assert!(quillen_map(&g, n, 4, 2, &Caps::default()).unwrap().clean);
            }
        }
    }

    #[test]
    fn module_generators() {
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let h = z4.subgroup(&[0, 2]).unwrap();
        let gens = module_generators_over_image(&z4, &h, 4, &Caps::default()).unwrap();
        let degrees: Vec<usize> = gens.iter().map(|c| c.degree).collect();
        assert_eq!(degrees, vec![0, 1]);
        let whole = z4.whole();
        let gens = module_generators_over_image(&z4, &whole, 4, &Caps::default()).unwrap();
        assert_eq!(gens.len(), 1);
        let q8 = Arc::new(FiniteGroup::quaternion(8));
        let gens = module_generators_over_image(&q8, &q8.center(), 4, &Caps::default()).unwrap();
        let degrees: Vec<usize> = gens.iter().map(|c| c.degree).collect();
        assert_eq!(degrees, vec![0, 1, 2, 3]);
    }
}
