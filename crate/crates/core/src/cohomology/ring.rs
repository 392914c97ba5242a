//! The cohomology ring computed from a free resolution.
//!
//! A class of degree `n` is a coordinate vector in the canonical basis of
//! `Hⁿ(G, F₂)`. For 2-groups the resolution is minimal, so cochains and classes
//! coincide and the basis is dual to the module generators of `Pₙ`. Otherwise
//! classes are cocycles modulo coboundaries, reduced by least-index pivoting.
//!
//! Products are Yoneda composites: a cocycle `u` of degree `p` is lifted to a
//! chain map `U: P_{p+•} → P_•` and `u ∪ v = v ∘ U_q`. Induced maps come from
//! chain maps lifted along a homomorphism.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bar::BarComplex;
use super::resolution::{apply_equivariant, block_augmentations, Resolution};
use super::Caps;
use crate::error::{Error, Result};
use crate::gf2::{kernel_basis, BitMatrix, BitVec, QuotientSpace, Subspace};
use crate::graded::GradedAlgebra;
use crate::groups::{involution_data, FiniteGroup, GroupHom};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomClass {
    pub degree: usize,
    pub coords: BitVec,
}

impl CohomClass {
    pub fn zero(degree: usize, dim: usize) -> Self {
        CohomClass {
            degree,
            coords: BitVec::zeros(dim),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn add(&self, other: &CohomClass) -> Result<CohomClass> {
        if self.degree != other.degree || self.coords.len() != other.coords.len() {
            return Err(Error::invalid(
                "cohomology",
                format!("cannot add classes of degrees {} and {}", self.degree, other.degree),
            ));
        }
        Ok(CohomClass {
            degree: self.degree,
            coords: self.coords.xor(&other.coords),
        })
    }
}

#[derive(Clone, Debug)]
pub struct GroupCohomology {
    res: Resolution,
    top: usize,
    caps: Caps,
    /// `Hⁿ` as cocycles modulo coboundaries inside `Hom_G(Pₙ, F₂) = F₂^{hₙ}`.
    spaces: Vec<QuotientSpace>,
}

/// Applies the map `P^H → P^G` over `φ` determined by the generator images.
fn apply_along(phi: &GroupHom, images: &[BitVec], target_len: usize, x: &BitVec) -> BitVec {
    let (h, g) = (phi.source(), phi.target());
    let (nh, ng) = (h.order(), g.order());
    let mut out = BitVec::zeros(target_len);
    for k in x.iter_ones() {
        let (i, a) = (k / nh, phi.apply(k % nh));
        for t in images[i].iter_ones() {
            out.flip((t / ng) * ng + g.mul(a, t % ng));
        }
    }
    out
}

impl GroupCohomology {
    /// Cohomology in degrees `0..=top`. The degree cap of `caps` is not applied
    /// here so that powers of requested classes stay computable; the module cap is.
    pub fn new(group: Arc<FiniteGroup>, top: usize, caps: &Caps) -> Result<Self> {
        let minimal = group.is_two_group();
        let res = Resolution::new(group, if minimal { top } else { top + 1 }, caps)?;
        let spaces = (0..=top)
            .map(|n| {
                let h = res.rank(n);
                if res.is_minimal() {
                    return QuotientSpace::new(Subspace::full(h), Subspace::zero(h));
                }
                let cocycles = kernel_basis(&BitMatrix::from_rows(h, res.coboundary_rows(n + 1))?);
                let coboundaries = if n == 0 {
                    Subspace::zero(h)
                } else {
                    let m = BitMatrix::from_rows(res.rank(n - 1), res.coboundary_rows(n))?.transpose();
                    Subspace::span(h, m.row_vectors().iter())
                };
                QuotientSpace::new(cocycles, coboundaries)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupCohomology {
            res,
            top,
            caps: caps.clone(),
            spaces,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.res.group()
    }

    pub fn resolution(&self) -> &Resolution {
        &self.res
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn dim(&self, n: usize) -> usize {
        self.spaces[n].dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top).map(|n| self.dim(n)).collect()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.top {
            return Err(Error::cap("degree", n as u128, self.top as u128));
        }
        Ok(())
    }

    fn check_class(&self, c: &CohomClass) -> Result<()> {
        self.check(c.degree)?;
        if c.coords.len() != self.dim(c.degree) {
            return Err(Error::DimensionMismatch {
                expected: self.dim(c.degree),
                found: c.coords.len(),
            });
        }
        Ok(())
    }

    pub fn zero(&self, n: usize) -> CohomClass {
        CohomClass::zero(n, self.dim(n))
    }

    pub fn unit(&self) -> CohomClass {
        CohomClass {
            degree: 0,
            coords: BitVec::ones(1),
        }
    }

    pub fn basis(&self, n: usize) -> Vec<CohomClass> {
        (0..self.dim(n))
            .map(|i| CohomClass {
                degree: n,
                coords: BitVec::unit(self.dim(n), i),
            })
            .collect()
    }

    /// All classes of degree `n`; only for small dimensions.
    pub fn elements(&self, n: usize) -> Result<Vec<CohomClass>> {
        let d = self.dim(n);
        if d > 20 {
            return Err(Error::cap(format!("enumeration of H^{n}"), 1u128 << d, 1 << 20));
        }
        Ok((0..1u64 << d)
            .map(|m| CohomClass {
                degree: n,
                coords: BitVec::from_mask(d, m),
            })
            .collect())
    }

    /// The canonical cocycle `Pₙ → F₂` of a class, as its values on generators.
    pub fn cochain(&self, c: &CohomClass) -> BitVec {
        self.spaces[c.degree].lift(&c.coords)
    }

    pub fn class_of_cochain(&self, n: usize, u: &BitVec) -> Result<CohomClass> {
        self.check(n)?;
        let coords = self.spaces[n]
            .coordinates(u)
            .ok_or_else(|| Error::invalid("cohomology", format!("cochain of degree {n} is not a cocycle")))?;
        Ok(CohomClass { degree: n, coords })
    }

    /// Matrix sending a cochain of degree `q` to its product with `a`; rows are
    /// `ε(U_q(eᵢ))` for the lifted chain map `U` of `a`.
    pub fn left_multiplication(&self, a: &CohomClass, q: usize) -> Result<BitMatrix> {
        self.check_class(a)?;
        let p = a.degree;
        self.check(p + q)?;
        let group = self.group();
        let order = group.order();
        let u = self.cochain(a);
        let mut images: Vec<BitVec> = (0..self.res.rank(p))
            .map(|i| {
                if u.get(i) {
                    BitVec::unit(order, 0)
                } else {
                    BitVec::zeros(order)
                }
            })
            .collect();
        for k in 1..=q {
            images = self
                .res
                .boundary(p + k)
                .iter()
                .map(|db| {
                    let y = apply_equivariant(group, &images, self.res.module_len(k - 1), db);
                    self.res.preimage(k, &y).expect("a cocycle lifts to a chain map")
                })
                .collect();
        }
        let rows = images
            .iter()
            .map(|x| block_augmentations(order, self.res.rank(q), x))
            .collect();
        BitMatrix::from_rows(self.res.rank(q), rows)
    }

    pub fn cup(&self, a: &CohomClass, b: &CohomClass) -> Result<CohomClass> {
        self.check_class(b)?;
        let m = self.left_multiplication(a, b.degree)?;
        self.class_of_cochain(a.degree + b.degree, &m.mul_vec(&self.cochain(b))?)
    }

    /// `a^k`, with `a⁰ = 1`.
    pub fn power(&self, a: &CohomClass, k: usize) -> Result<CohomClass> {
        self.check_class(a)?;
        self.check(a.degree * k)?;
        let mut out = self.unit();
        for _ in 0..k {
            out = self.cup(&out, a)?;
        }
        Ok(out)
    }

    /// Matrix of the linear map `c ↦ c²` on `Hⁿ`; column `i` is the square of the
    /// `i`-th basis class.
    pub fn squaring_matrix(&self, n: usize) -> Result<BitMatrix> {
        self.check(2 * n)?;
        let columns = self
            .basis(n)
            .iter()
            .map(|b| self.cup(b, b).map(|s| s.coords))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_columns(self.dim(2 * n), &columns)
    }

    /// Products of basis classes: `table[a][b]` in degree `p + q`.
    pub fn product_table(&self, p: usize, q: usize) -> Result<Vec<Vec<BitVec>>> {
        self.basis(p)
            .iter()
            .map(|a| {
                let m = self.left_multiplication(a, q)?;
                self.basis(q)
                    .iter()
                    .map(|b| {
                        let w = m.mul_vec(&self.cochain(b))?;
                        Ok(self.class_of_cochain(p + q, &w)?.coords)
                    })
                    .collect()
            })
            .collect()
    }

    /// The ring through degree `n_max` as a graded algebra in the canonical bases.
    pub fn snapshot(&self, n_max: usize) -> Result<GradedAlgebra> {
        self.check(n_max)?;
        let dims: Vec<usize> = (0..=n_max).map(|n| self.dim(n)).collect();
        let mut mult = vec![vec![Vec::new(); n_max + 1]; n_max + 1];
        for p in 0..=n_max {
            for q in 0..=n_max - p {
                mult[p][q] = self.product_table(p, q)?;
            }
        }
        GradedAlgebra::new(dims, mult)
    }

    /// `γₙ(eᵢ)` for the comparison map from the resolution into the normalized
    /// bar resolution, built with the contraction `g[t] ↦ [g|t]`.
    pub fn comparison_to_bar(&self, n: usize) -> Result<Vec<BitVec>> {
        self.check(n)?;
        let bar = BarComplex::new(self.group().clone(), self.caps.clone())?;
        let order = self.group().order();
        let mut gamma = vec![BitVec::ones(1)];
        for k in 1..=n {
            let prev_dim = bar.dim(k - 1)?;
            let dim = bar.dim(k)?;
            gamma = self
                .res
                .boundary(k)
                .iter()
                .map(|db| {
                    let mut out = BitVec::zeros(dim);
                    for t in db.iter_ones() {
                        let (j, h) = (t / order, t % order);
                        if h == 0 {
                            continue;
                        }
                        for s in gamma[j].iter_ones() {
                            out.flip((h - 1) * prev_dim + s);
                        }
                    }
                    out
                })
                .collect();
        }
        Ok(gamma)
    }

    /// The class of a bar cocycle of degree `n`.
    pub fn class_of_bar_cocycle(&self, z: &BitVec, n: usize) -> Result<CohomClass> {
        let gamma = self.comparison_to_bar(n)?;
        if let Some(g) = gamma.first() {
            if g.len() != z.len() {
                return Err(Error::DimensionMismatch {
                    expected: g.len(),
                    found: z.len(),
                });
            }
        }
        let u = BitVec::from_bools(&gamma.iter().map(|g| g.dot(z)).collect::<Vec<_>>());
        self.class_of_cochain(n, &u)
    }

    /// A bar cocycle representing `c`, through the comparison map from the bar
    /// resolution into the resolution.
    pub fn bar_representative(&self, c: &CohomClass) -> Result<BitVec> {
        self.check_class(c)?;
        let n = c.degree;
        let bar = BarComplex::new(self.group().clone(), self.caps.clone())?;
        let group = self.group();
        let order = group.order();
        // f[s] = f_k([tuple s]) ∈ P_k
        let mut f = vec![BitVec::unit(order, 0)];
        for k in 1..=n {
            let dim = bar.dim(k)?;
            let prev_len = self.res.module_len(k - 1);
            let mut next = Vec::with_capacity(dim);
            for s in 0..dim {
                let t = bar.tuple(k, s);
                // f_{k-1}(d[t]) with d[t] = t₁[t₂..] + Σ[..tᵢtᵢ₊₁..] + [t₁..t_{k-1}]
                let mut y = apply_equivariant(group, std::slice::from_ref(&f[bar.tuple_index(&t[1..])]), prev_len, &BitVec::unit(order, t[0]));
                for i in 0..k - 1 {
                    let prod = group.mul(t[i], t[i + 1]);
                    if prod != 0 {
                        let mut face = t[..i].to_vec();
                        face.push(prod);
                        face.extend_from_slice(&t[i + 2..]);
                        y.xor_assign(&f[bar.tuple_index(&face)]);
                    }
                }
                y.xor_assign(&f[bar.tuple_index(&t[..k - 1])]);
                next.push(self.res.preimage(k, &y).expect("bar boundaries lift"));
            }
            f = next;
        }
        let u = self.cochain(c);
        Ok(BitVec::from_bools(
            &f.iter()
                .map(|x| block_augmentations(order, self.res.rank(n), x).dot(&u))
                .collect::<Vec<_>>(),
        ))
    }
}

/// `φ*: H•(G) → H•(H)` for `φ: H → G`, through degree `top`.
#[derive(Clone, Debug)]
pub struct InducedMap {
    /// `matrices[n]` maps coordinates in `Hⁿ(G)` to coordinates in `Hⁿ(H)`.
    matrices: Vec<BitMatrix>,
}

impl InducedMap {
    pub fn top(&self) -> usize {
        self.matrices.len() - 1
    }

    pub fn matrix(&self, n: usize) -> &BitMatrix {
        &self.matrices[n]
    }

    pub fn apply(&self, c: &CohomClass) -> Result<CohomClass> {
        let m = self
            .matrices
            .get(c.degree)
            .ok_or_else(|| Error::cap("degree", c.degree as u128, self.top() as u128))?;
        Ok(CohomClass {
            degree: c.degree,
            coords: m.mul_vec(&c.coords)?,
        })
    }

    pub fn rank(&self, n: usize) -> usize {
        self.matrices[n].rank()
    }

    /// Image of `Hⁿ(G)` inside `Hⁿ(H)`.
    pub fn image(&self, n: usize) -> Subspace {
        let m = &self.matrices[n];
        Subspace::span(m.rows(), m.transpose().row_vectors().iter())
    }
}

/// The map induced by `phi: H → G`; `source` must be the cohomology of `H` and
/// `target` that of `G`.
pub fn induced_map(phi: &GroupHom, target: &GroupCohomology, source: &GroupCohomology, top: usize) -> Result<InducedMap> {
    if phi.target().as_ref() != target.group().as_ref() || phi.source().as_ref() != source.group().as_ref() {
        return Err(Error::invalid("induced map", "cohomology objects do not match the homomorphism"));
    }
    target.check(top)?;
    source.check(top)?;
    let (rg, rh) = (&target.res, &source.res);
    let ng = target.group().order();
    let mut images = vec![BitVec::unit(ng, 0)];
    let mut matrices = Vec::with_capacity(top + 1);
    for n in 0..=top {
        if n > 0 {
            images = rh
                .boundary(n)
                .iter()
                .map(|db| {
                    let y = apply_along(phi, &images, rg.module_len(n - 1), db);
                    rg.preimage(n, &y).expect("chain maps lift over a free resolution")
                })
                .collect();
        }
        let eps: Vec<BitVec> = images.iter().map(|x| block_augmentations(ng, rg.rank(n), x)).collect();
        let columns = target
            .basis(n)
            .iter()
            .map(|c| {
                let u = target.cochain(c);
                let pulled = BitVec::from_bools(&eps.iter().map(|e| e.dot(&u)).collect::<Vec<_>>());
                source.class_of_cochain(n, &pulled).map(|k| k.coords)
            })
            .collect::<Result<Vec<_>>>()?;
        matrices.push(BitMatrix::from_columns(source.dim(n), &columns)?);
    }
    Ok(InducedMap { matrices })
}

/// Values of a class on the involution classes of `G`: the restriction of `c`
/// to the subgroup generated by the least representative, as a multiple of the
/// generator of `Hⁿ(Z/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionProfile {
    pub class_reps: Vec<usize>,
    pub values: Vec<bool>,
}

pub fn involution_profile(coh: &GroupCohomology, c: &CohomClass) -> Result<InvolutionProfile> {
    coh.check_class(c)?;
    if c.degree == 0 {
        return Err(Error::invalid("involution profile", "degree must be at least 1"));
    }
    let g = coh.group();
    let data = involution_data(g);
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let z2_coh = GroupCohomology::new(z2.clone(), c.degree, coh.caps())?;
    let reps = data.representatives();
    let values = reps
        .iter()
        .map(|&t| {
            let phi = GroupHom::new(z2.clone(), g.clone(), vec![0, t])?;
            let m = induced_map(&phi, coh, &z2_coh, c.degree)?;
            Ok(m.apply(c)?.coords.get(0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InvolutionProfile {
        class_reps: reps,
        values,
    })
}
