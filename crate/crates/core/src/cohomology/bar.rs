//! Normalized inhomogeneous bar cochains with `F₂` coefficients.
//!
//! A cochain of degree `n` is a function on tuples `(g₁,…,gₙ)` of non-identity
//! elements. Tuples are indexed in base `m = |G| − 1` with `g₁` the most
//! significant digit, digit `gᵢ − 1`.

use std::sync::Arc;

use serde::Serialize;

use super::Caps;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, QuotientSpace, Subspace};
use crate::groups::{FiniteGroup, GroupHom};

#[derive(Clone, Debug)]
pub struct BarComplex {
    group: Arc<FiniteGroup>,
    caps: Caps,
}

impl BarComplex {
    pub fn new(group: Arc<FiniteGroup>, caps: Caps) -> Result<Self> {
        if group.order() > caps.max_group_order {
            return Err(Error::cap("group order", group.order() as u128, caps.max_group_order as u128));
        }
        Ok(BarComplex { group, caps })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn base(&self) -> usize {
        self.group.order() - 1
    }

    /// `(|G| − 1)^n`, checked against the cochain cap.
    pub fn dim(&self, n: usize) -> Result<usize> {
        let m = self.base() as u128;
        let d = m.checked_pow(n as u32).unwrap_or(u128::MAX);
        if d > self.caps.max_bar_cochains as u128 {
            return Err(Error::cap(format!("bar cochains in degree {n}"), d, self.caps.max_bar_cochains as u128));
        }
        Ok(d as usize)
    }

    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        let m = self.base();
        tuple.iter().fold(0, |acc, &g| {
            debug_assert!(g != 0, "normalized tuples avoid the identity");
            acc * m + (g - 1)
        })
    }

    pub fn tuple(&self, n: usize, index: usize) -> Vec<usize> {
        let m = self.base();
        let mut out = vec![0; n];
        let mut k = index;
        for slot in out.iter_mut().rev() {
            *slot = k % m + 1;
            k /= m;
        }
        out
    }

    /// Indices of the faces of an `(n+1)`-tuple that avoid the identity, with
    /// multiplicity, in the order of the coboundary formula.
    fn faces(&self, tuple: &[usize], out: &mut Vec<usize>) {
        out.clear();
        let k = tuple.len();
        out.push(self.tuple_index(&tuple[1..]));
        let mut buf = Vec::with_capacity(k - 1);
        for i in 0..k - 1 {
            let prod = self.group.mul(tuple[i], tuple[i + 1]);
            if prod == 0 {
                continue;
            }
            buf.clear();
            buf.extend_from_slice(&tuple[..i]);
            buf.push(prod);
            buf.extend_from_slice(&tuple[i + 2..]);
            out.push(self.tuple_index(&buf));
        }
        out.push(self.tuple_index(&tuple[..k - 1]));
    }

    /// `(df)(g₁..g_{n+1}) = f(g₂..) + Σ f(..gᵢg_{i+1}..) + f(g₁..gₙ)`.
    pub fn coboundary(&self, f: &BitVec, n: usize) -> Result<BitVec> {
        let dn = self.dim(n)?;
        if f.len() != dn {
            return Err(Error::DimensionMismatch { expected: dn, found: f.len() });
        }
        let dn1 = self.dim(n + 1)?;
        let mut out = BitVec::zeros(dn1);
        if n == 0 {
            // f(·) − f(·) = 0 for a constant
            return Ok(out);
        }
        let mut faces = Vec::new();
        for s in 0..dn1 {
            self.faces(&self.tuple(n + 1, s), &mut faces);
            if faces.iter().filter(|&&t| f.get(t)).count() % 2 == 1 {
                out.set(s, true);
            }
        }
        Ok(out)
    }

    /// `Zⁿ = ker dⁿ`.
    pub fn cocycles(&self, n: usize) -> Result<Subspace> {
        let dn = self.dim(n)?;
        if n == 0 {
            return Ok(Subspace::full(dn));
        }
        let dn1 = self.dim(n + 1)?;
        let mut faces = Vec::new();
        let mut rows = Vec::with_capacity(dn1);
        for s in 0..dn1 {
            self.faces(&self.tuple(n + 1, s), &mut faces);
            let mut row = BitVec::zeros(dn);
            for &t in &faces {
                row.flip(t);
            }
            rows.push(row);
        }
        Ok(crate::gf2::kernel_basis(&BitMatrix::from_rows(dn, rows)?))
    }

    /// `Bⁿ = im d^{n−1}`.
    pub fn coboundaries(&self, n: usize) -> Result<Subspace> {
        let dn = self.dim(n)?;
        if n <= 1 {
            return Ok(Subspace::zero(dn));
        }
        let dprev = self.dim(n - 1)?;
        let mut columns = vec![BitVec::zeros(dn); dprev];
        let mut faces = Vec::new();
        for s in 0..dn {
            self.faces(&self.tuple(n, s), &mut faces);
            for &t in &faces {
                columns[t].flip(s);
            }
        }
        Ok(Subspace::span(dn, columns.iter()))
    }

    pub fn cohomology(&self, n: usize) -> Result<QuotientSpace> {
        QuotientSpace::new(self.cocycles(n)?, self.coboundaries(n)?)
    }

    /// Front face times back face.
    pub fn cup(&self, f: &BitVec, p: usize, g: &BitVec, q: usize) -> Result<BitVec> {
        let (dp, dq) = (self.dim(p)?, self.dim(q)?);
        if f.len() != dp || g.len() != dq {
            return Err(Error::DimensionMismatch { expected: dp, found: f.len() });
        }
        let mut out = BitVec::zeros(self.dim(p + q)?);
        for i in f.iter_ones() {
            for j in g.iter_ones() {
                out.set(i * dq + j, true);
            }
        }
        Ok(out)
    }

    /// The constant cochain in degree 0.
    pub fn unit(&self) -> BitVec {
        BitVec::ones(1)
    }
}

/// `(φ*f)(h₁..hₙ) = f(φh₁..φhₙ)`, zero when some `φhᵢ` is the identity.
pub fn pullback(source: &BarComplex, target: &BarComplex, phi: &GroupHom, f: &BitVec, n: usize) -> Result<BitVec> {
    let ds = source.dim(n)?;
    let dt = target.dim(n)?;
    if f.len() != dt {
        return Err(Error::DimensionMismatch { expected: dt, found: f.len() });
    }
    let mut out = BitVec::zeros(ds);
    let mut image = vec![0; n];
    for s in 0..ds {
        let t = source.tuple(n, s);
        let mut degenerate = false;
        for (k, &h) in t.iter().enumerate() {
            image[k] = phi.apply(h);
            degenerate |= image[k] == 0;
        }
        if !degenerate && f.get(target.tuple_index(&image)) {
            out.set(s, true);
        }
    }
    Ok(out)
}

/// A class with a cocycle representative and its canonical reduction
/// modulo coboundaries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarClass {
    pub degree: usize,
    pub representative: BitVec,
    /// The representative reduced modulo `Bⁿ`; equal ids mean equal classes.
    pub coset_id: BitVec,
}

/// The canonical basis of `Hⁿ(G, F₂)` computed in the bar complex.
pub fn cohomology_basis(g: &Arc<FiniteGroup>, n: usize, caps: &Caps) -> Result<Vec<BarClass>> {
    if n > caps.max_degree {
        return Err(Error::cap("degree", n as u128, caps.max_degree as u128));
    }
    let bar = BarComplex::new(g.clone(), caps.clone())?;
    let h = bar.cohomology(n)?;
    Ok(h.representatives()
        .iter()
        .map(|z| BarClass {
            degree: n,
            representative: z.clone(),
            coset_id: h.denominator().reduce(z),
        })
        .collect())
}
