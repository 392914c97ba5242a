//! Free `F₂[G]`-resolutions of the trivial module.
//!
//! An element of the free module `P = F₂[G]^h` is a bit vector with coordinate
//! `(i, g)` at index `i·|G| + g`, standing for `g·eᵢ`. For 2-groups the
//! resolution is minimal: new generators represent a basis of `K / I·K` where
//! `K` is the previous kernel and `I` the augmentation ideal, so every
//! coboundary of the cochain complex `Hom_G(P, F₂)` vanishes.

use std::sync::Arc;

use super::Caps;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Echelon, LinearSolver, Subspace};
use crate::groups::FiniteGroup;

#[derive(Clone, Debug)]
pub struct Resolution {
    group: Arc<FiniteGroup>,
    minimal: bool,
    /// `ranks[n] = hₙ`.
    ranks: Vec<usize>,
    /// `boundaries[n][i] = dₙ(eᵢ) ∈ P_{n−1}` for `n ≥ 1`.
    boundaries: Vec<Vec<BitVec>>,
    /// Preimages under `dₙ` for `n ≥ 1`.
    solvers: Vec<Option<LinearSolver>>,
    /// `ker dₙ` (`ker ε` for `n = 0`) for the top degree, kept to extend.
    top_kernel: Subspace,
    /// Conjugation-closed generating set used for `I·K`.
    conj_gens: Vec<usize>,
    max_module_dim: usize,
}

/// `g · x` in a free module of rank `h`.
pub fn act(group: &FiniteGroup, g: usize, x: &BitVec) -> BitVec {
    let n = group.order();
    let mut out = BitVec::zeros(x.len());
    for k in x.iter_ones() {
        out.set((k / n) * n + group.mul(g, k % n), true);
    }
    out
}

/// Applies the `G`-map sending `eᵢ` to `images[i]`.
pub fn apply_equivariant(group: &FiniteGroup, images: &[BitVec], target_len: usize, x: &BitVec) -> BitVec {
    let n = group.order();
    let mut out = BitVec::zeros(target_len);
    for k in x.iter_ones() {
        let (i, g) = (k / n, k % n);
        for t in images[i].iter_ones() {
            out.flip((t / n) * n + group.mul(g, t % n));
        }
    }
    out
}

/// `εᵢ(x)`: the augmentation of the `i`-th block of `x`.
pub fn block_augmentations(order: usize, rank: usize, x: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(rank);
    for k in x.iter_ones() {
        out.flip(k / order);
    }
    out
}

impl Resolution {
    /// A resolution through degree `top`.
    pub fn new(group: Arc<FiniteGroup>, top: usize, caps: &Caps) -> Result<Self> {
        if group.order() > caps.max_group_order {
            return Err(Error::cap("group order", group.order() as u128, caps.max_group_order as u128));
        }
        let n = group.order();
        let minimal = group.is_two_group();
        // ker ε is spanned by g − 1
        let aug: Vec<BitVec> = (1..n).map(|g| BitVec::from_indices(n, [0, g])).collect();
        let mut conj_gens: Vec<usize> = Vec::new();
        for s in group.generating_set() {
            for c in group.conjugacy_class(s) {
                if !conj_gens.contains(&c) {
                    conj_gens.push(c);
                }
            }
        }
        conj_gens.sort_unstable();
        let mut r = Resolution {
            group,
            minimal,
            ranks: vec![1],
            boundaries: vec![Vec::new()],
            solvers: vec![None],
            top_kernel: Subspace::span(n, aug.iter()),
            conj_gens,
            max_module_dim: caps.max_module_dim,
        };
        r.extend_to(top)?;
        Ok(r)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    pub fn module_len(&self, n: usize) -> usize {
        self.ranks[n] * self.group.order()
    }

    pub fn boundary(&self, n: usize) -> &[BitVec] {
        &self.boundaries[n]
    }

    /// `dₙ(x)` for any `x ∈ Pₙ`.
    pub fn apply_boundary(&self, n: usize, x: &BitVec) -> BitVec {
        if n == 0 {
            return BitVec::from_bools(&[x.parity()]);
        }
        apply_equivariant(&self.group, &self.boundaries[n], self.module_len(n - 1), x)
    }

    /// Some `y ∈ Pₙ` with `dₙ(y) = x`, when `x ∈ im dₙ`.
    pub fn preimage(&self, n: usize, x: &BitVec) -> Option<BitVec> {
        self.solvers[n].as_ref().expect("degree ≥ 1").solve(x)
    }

    pub fn extend_to(&mut self, top: usize) -> Result<()> {
        while self.top() < top {
            self.extend_once()?;
        }
        Ok(())
    }

    fn extend_once(&mut self) -> Result<()> {
        let order = self.group.order();
        let k = &self.top_kernel;
        let prev_len = k.ambient_dim();
        let gens: Vec<BitVec> = if self.minimal {
            let mut ik = Echelon::new(prev_len);
            for &c in &self.conj_gens {
                for b in k.basis() {
                    let mut v = act(&self.group, c, b);
                    v.xor_assign(b);
                    ik.insert(v);
                }
            }
            k.basis().iter().filter(|b| ik.insert((*b).clone())).cloned().collect()
        } else {
            let mut sub = Echelon::new(prev_len);
            let mut gens = Vec::new();
            for b in k.basis() {
                if sub.rank() == k.dim() {
                    break;
                }
                if sub.contains(b) {
                    continue;
                }
                gens.push(b.clone());
                for g in 0..order {
                    sub.insert(act(&self.group, g, b));
                }
            }
            gens
        };
        let h = gens.len();
        let len = h * order;
        if len > self.max_module_dim {
            return Err(Error::cap(
                format!("resolution module in degree {}", self.top() + 1),
                len as u128,
                self.max_module_dim as u128,
            ));
        }
        let columns: Vec<BitVec> = (0..h)
            .flat_map(|i| (0..order).map(move |g| (i, g)))
            .map(|(i, g)| act(&self.group, g, &gens[i]))
            .collect();
        let solver = LinearSolver::from_columns(prev_len, &columns);
        self.top_kernel = solver.kernel_subspace();
        self.ranks.push(h);
        self.boundaries.push(gens);
        self.solvers.push(Some(solver));
        Ok(())
    }

    /// Matrix of `δ: Hom(P_{n−1}, F₂) → Hom(Pₙ, F₂)`; row `i` holds `εⱼ(dₙeᵢ)`.
    pub fn coboundary_rows(&self, n: usize) -> Vec<BitVec> {
        let order = self.group.order();
        self.boundaries[n]
            .iter()
            .map(|b| block_augmentations(order, self.ranks[n - 1], b))
            .collect()
    }
}
