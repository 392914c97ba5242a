//! Exact linear algebra over the two-element field.
//!
//! Vectors are bit-packed into `u64` words. Every echelon form in this module
//! uses least-index pivoting: the pivot of a row is its lowest set bit, and
//! rows of a reduced echelon form are sorted by strictly increasing pivot.
//! That makes bases, complements and solutions canonical.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over F₂ of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Builds a vector from 0/1 entries. Any nonzero entry counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// The low `len` bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == 64 { mask } else { mask & ((1u64 << len) - 1) };
        }
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Inner product over F₂.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the number of set bits.
    pub fn parity(&self) -> bool {
        self.count_ones() % 2 == 1
    }

    /// Index of the lowest set bit.
    #[inline]
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// The low 64 bits as an integer mask.
    pub fn to_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Entries `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        let mut out = BitVec::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Entries at the given positions, in order.
    pub fn select(&self, positions: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(positions.len());
        for (k, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(k, true);
            }
        }
        out
    }

    /// Compares by the entries read from index 0 upward, treating 0 < 1.
    pub fn lex_cmp(&self, other: &BitVec) -> std::cmp::Ordering {
        for i in 0..self.len.min(other.len) {
            match (self.get(i), other.get(i)) {
                (false, true) => return std::cmp::Ordering::Less,
                (true, false) => return std::cmp::Ordering::Greater,
                _ => {}
            }
        }
        self.len.cmp(&other.len)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

impl Serialize for BitVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_bits().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(serde::de::Error::custom(format!("bit entries must be 0 or 1, got {bad}")));
        }
        Ok(BitVec::from_bits(&bits))
    }
}

/// A dense matrix over F₂ stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: r.len(),
            });
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Parses row-major 0/1 entries.
    pub fn from_entries(entries: &[Vec<u8>]) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        Self::from_rows(cols, entries.iter().map(|r| BitVec::from_bits(r)).collect())
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for i in c.iter_ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.data[i].set(j, v);
    }

    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_bools(&(0..self.rows).map(|i| self.get(i, j)).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for j in r.iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// `M · x`.
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(BitVec::from_bools(
            &self.data.iter().map(|r| r.dot(x)).collect::<Vec<_>>(),
        ))
    }

    /// `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for (i, r) in self.data.iter().enumerate() {
            for k in r.iter_ones() {
                out.data[i].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for r in &self.data {
            e.insert(r.clone());
        }
        e.rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        // columns of the inverse solve M x = e_i
        let solver = LinearSolver::from_columns(n, &(0..n).map(|j| self.column(j)).collect::<Vec<_>>());
        if solver.rank() != n {
            return None;
        }
        let cols: Vec<BitVec> = (0..n)
            .map(|i| solver.solve(&BitVec::unit(n, i)).expect("full rank"))
            .collect();
        BitMatrix::from_columns(n, &cols).ok()
    }
}

/// Incremental semi-echelon form: each stored row has a distinct pivot (its
/// lowest set bit) and is reduced against every row of smaller pivot at the
/// time of insertion.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    rows: Vec<BitVec>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivot_row: vec![None; width],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` in place; returns true when it reduced to zero.
    pub fn reduce(&self, v: &mut BitVec) -> bool {
        while let Some(p) = v.first_one() {
            match self.pivot_row[p] {
                Some(r) => v.xor_assign(&self.rows[r]),
                None => return false,
            }
        }
        true
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w)
    }

    /// Inserts `v`; returns true if the rank grew.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        debug_assert_eq!(v.len(), self.width);
        if self.reduce(&mut v) {
            return false;
        }
        let p = v.first_one().expect("nonzero after reduction");
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(v);
        true
    }

    /// The canonical reduced row echelon basis of the span.
    pub fn into_subspace(self) -> Subspace {
        Subspace::from_semi_echelon(self.width, self.rows)
    }
}

/// A subspace of F₂ⁿ held by its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| BitVec::unit(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span<'a>(ambient: usize, vectors: impl IntoIterator<Item = &'a BitVec>) -> Self {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            e.insert(v.clone());
        }
        e.into_subspace()
    }

    fn from_semi_echelon(ambient: usize, mut rows: Vec<BitVec>) -> Self {
        rows.sort_by_key(|r| r.first_one().expect("nonzero rows"));
        // back substitution: clear each pivot column from every other row
        for i in (0..rows.len()).rev() {
            let p = rows[i].first_one().expect("nonzero rows");
            for j in 0..i {
                if rows[j].get(p) {
                    let (lo, hi) = rows.split_at_mut(i);
                    lo[j].xor_assign(&hi[0]);
                }
            }
        }
        let pivots = rows.iter().map(|r| r.first_one().unwrap()).collect();
        Subspace {
            ambient,
            basis: rows,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v + U`: `v` with every pivot coordinate cleared.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut w = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if w.get(p) {
                w.xor_assign(b);
            }
        }
        w
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        v.len() == self.ambient && self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v ∉ U`.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        if !self.contains(v) {
            return None;
        }
        Some(v.select(&self.pivots))
    }

    /// The element with the given coordinates in the echelon basis.
    pub fn combine(&self, coords: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.ambient);
        for i in coords.iter_ones() {
            out.xor_assign(&self.basis[i]);
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().chain(other.basis.iter()))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // kernel of (a, b) ↦ Σ aᵢuᵢ + Σ bⱼwⱼ projects onto the intersection
        let cols: Vec<BitVec> = self.basis.iter().chain(other.basis.iter()).cloned().collect();
        let solver = LinearSolver::from_columns(self.ambient, &cols);
        let pieces: Vec<BitVec> = solver
            .kernel()
            .iter()
            .map(|k| {
                let mut v = BitVec::zeros(self.ambient);
                for i in k.iter_ones().filter(|&i| i < self.dim()) {
                    v.xor_assign(&self.basis[i]);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, pieces.iter())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// Enumerates every element; only sensible for small dimensions.
    pub fn elements(&self) -> Vec<BitVec> {
        assert!(self.dim() <= 24, "refusing to enumerate 2^{} elements", self.dim());
        (0u64..(1u64 << self.dim()))
            .map(|m| self.combine(&BitVec::from_mask(self.dim(), m)))
            .collect()
    }
}

/// Rank of `m` together with a solution of `m · x = b`, if one exists.
///
/// Free variables are set to zero, so the reported solution is the unique one
/// supported on the pivot columns of the least-index echelon form.
pub fn rank_and_solve(m: &BitMatrix, b: &BitVec) -> Result<(usize, Option<BitVec>)> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let cols = m.cols();
    let augmented: Vec<BitVec> = m
        .row_vectors()
        .iter()
        .enumerate()
        .map(|(i, r)| r.concat(&BitVec::from_bools(&[b.get(i)])))
        .collect();
    let rref = Subspace::span(cols + 1, augmented.iter());
    let rank = rref.pivots().iter().filter(|&&p| p < cols).count();
    if rref.pivots().contains(&cols) {
        return Ok((rank, None));
    }
    let mut x = BitVec::zeros(cols);
    for (row, &p) in rref.basis().iter().zip(rref.pivots()) {
        if row.get(cols) {
            x.set(p, true);
        }
    }
    Ok((rank, Some(x)))
}

/// `{x : M·x = 0}` with its canonical echelon basis.
pub fn kernel_basis(m: &BitMatrix) -> Subspace {
    let cols = m.cols();
    let rref = Subspace::span(cols, m.row_vectors().iter());
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &p in rref.pivots() {
            s[p] = true;
        }
        s
    };
    let mut vectors = Vec::new();
    for f in (0..cols).filter(|&c| !pivot_set[c]) {
        let mut v = BitVec::unit(cols, f);
        for (row, &p) in rref.basis().iter().zip(rref.pivots()) {
            if row.get(f) {
                v.set(p, true);
            }
        }
        vectors.push(v);
    }
    Subspace::span(cols, vectors.iter())
}

/// The complement of `u` spanned by standard basis vectors at its non-pivot
/// coordinates.
pub fn complement(u: &Subspace) -> Subspace {
    let n = u.ambient_dim();
    let mut is_pivot = vec![false; n];
    for &p in u.pivots() {
        is_pivot[p] = true;
    }
    let vectors: Vec<BitVec> = (0..n)
        .filter(|&i| !is_pivot[i])
        .map(|i| BitVec::unit(n, i))
        .collect();
    Subspace::span(n, vectors.iter())
}

/// Solves `A x = y` for a linear map given by the images of the standard
/// basis vectors of its domain, and exposes its kernel.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    domain: usize,
    image: Echelon,
    // combination of domain basis vectors producing each echelon row
    tags: Vec<BitVec>,
    kernel: Vec<BitVec>,
}

impl LinearSolver {
    /// `columns[j]` is the image of the j-th domain basis vector.
    pub fn from_columns(codomain: usize, columns: &[BitVec]) -> Self {
        let domain = columns.len();
        let mut image = Echelon::new(codomain);
        let mut tags = Vec::new();
        let mut kernel = Vec::new();
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), codomain);
            let mut v = c.clone();
            let mut tag = BitVec::unit(domain, j);
            while let Some(p) = v.first_one() {
                match image.pivot_row[p] {
                    Some(r) => {
                        v.xor_assign(&image.rows[r]);
                        tag.xor_assign(&tags[r]);
                    }
                    None => break,
                }
            }
            match v.first_one() {
                Some(p) => {
                    image.pivot_row[p] = Some(image.rows.len());
                    image.rows.push(v);
                    tags.push(tag);
                }
                None => kernel.push(tag),
            }
        }
        LinearSolver {
            domain,
            image,
            tags,
            kernel,
        }
    }

    pub fn domain_dim(&self) -> usize {
        self.domain
    }

    pub fn rank(&self) -> usize {
        self.image.rank()
    }

    /// Some preimage of `y`, or `None` when `y` is outside the image.
    pub fn solve(&self, y: &BitVec) -> Option<BitVec> {
        let mut v = y.clone();
        let mut x = BitVec::zeros(self.domain);
        while let Some(p) = v.first_one() {
            let r = self.image.pivot_row[p]?;
            v.xor_assign(&self.image.rows[r]);
            x.xor_assign(&self.tags[r]);
        }
        Some(x)
    }

    pub fn in_image(&self, y: &BitVec) -> bool {
        self.image.contains(y)
    }

    /// A basis (not echelonized) of the kernel.
    pub fn kernel(&self) -> &[BitVec] {
        &self.kernel
    }

    pub fn kernel_subspace(&self) -> Subspace {
        Subspace::span(self.domain, self.kernel.iter())
    }

    pub fn image_subspace(&self) -> Subspace {
        self.image.clone().into_subspace()
    }
}

/// The quotient `Z / B` of nested subspaces with canonical coordinates.
///
/// Representatives are reduced modulo `B`; the quotient basis is the reduced
/// echelon basis of those residues.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    numerator: Subspace,
    denominator: Subspace,
    residues: Subspace,
}

impl QuotientSpace {
    pub fn new(numerator: Subspace, denominator: Subspace) -> Result<Self> {
        if !denominator.is_subspace_of(&numerator) {
            return Err(Error::invalid("quotient", "denominator is not contained in numerator"));
        }
        let reduced: Vec<BitVec> = numerator.basis().iter().map(|z| denominator.reduce(z)).collect();
        let residues = Subspace::span(numerator.ambient_dim(), reduced.iter());
        Ok(QuotientSpace {
            numerator,
            denominator,
            residues,
        })
    }

    pub fn dim(&self) -> usize {
        self.residues.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.numerator.ambient_dim()
    }

    pub fn numerator(&self) -> &Subspace {
        &self.numerator
    }

    pub fn denominator(&self) -> &Subspace {
        &self.denominator
    }

    /// Canonical representatives of the quotient basis.
    pub fn representatives(&self) -> &[BitVec] {
        self.residues.basis()
    }

    /// Coordinates of the class of `v`, or `None` if `v` is not in the numerator.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        if !self.numerator.contains(v) {
            return None;
        }
        let r = self.denominator.reduce(v);
        Some(r.select(self.residues.pivots()))
    }

    pub fn lift(&self, coords: &BitVec) -> BitVec {
        self.residues.combine(coords)
    }

    pub fn is_trivial_class(&self, v: &BitVec) -> bool {
        self.denominator.contains(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(entries: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_entries(&entries.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn all_vectors(n: usize) -> Vec<BitVec> {
        (0..1u64 << n).map(|k| BitVec::from_mask(n, k)).collect()
    }

    #[test]
    fn identity_solve() {
        let (rank, x) = rank_and_solve(&BitMatrix::identity(3), &BitVec::from_bits(&[1, 0, 1])).unwrap();
        assert_eq!(rank, 3);
        assert_eq!(x.unwrap(), BitVec::from_bits(&[1, 0, 1]));
    }

    #[test]
    fn parallel_rows_inconsistent() {
        let (rank, x) = rank_and_solve(&m(&[&[1, 1], &[1, 1]]), &BitVec::from_bits(&[1, 0])).unwrap();
        assert_eq!(rank, 1);
        assert!(x.is_none());
    }

    #[test]
    fn parallel_rows_least_index_solution() {
        let a = m(&[&[1, 1], &[1, 1]]);
        let b = BitVec::from_bits(&[1, 1]);
        // exhaustive oracle: the solutions are (1,0) and (0,1); free vars zero picks (1,0)
        let solutions: Vec<BitVec> = all_vectors(2)
            .into_iter()
            .filter(|x| a.mul_vec(x).unwrap() == b)
            .collect();
        assert_eq!(solutions.len(), 2);
        let (rank, x) = rank_and_solve(&a, &b).unwrap();
        assert_eq!(rank, 1);
        assert_eq!(x.unwrap(), BitVec::from_bits(&[1, 0]));
    }

    #[test]
    fn solve_dimension_mismatch() {
        assert!(matches!(
            rank_and_solve(&BitMatrix::identity(2), &BitVec::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_basis(&BitMatrix::identity(2)).dim(), 0);
        assert_eq!(kernel_basis(&BitMatrix::zeros(2, 2)), Subspace::full(2));
        let k = kernel_basis(&m(&[&[1, 1]]));
        assert_eq!(k.basis(), &[BitVec::from_bits(&[1, 1])]);
    }

    #[test]
    fn complement_examples() {
        let u = Subspace::span(2, [BitVec::from_bits(&[1, 1])].iter());
        let c = complement(&u);
        assert_eq!(c.basis(), &[BitVec::from_bits(&[0, 1])]);
        // both direct-sum conditions, exhaustively
        for v in all_vectors(2) {
            let in_both = u.contains(&v) && c.contains(&v);
            assert!(!in_both || v.is_zero());
        }
        assert_eq!(u.sum(&c), Subspace::full(2));
        assert_eq!(complement(&Subspace::full(4)).dim(), 0);
        assert_eq!(complement(&Subspace::zero(3)), Subspace::full(3));
    }

    /// Every subspace of F₂ⁿ for n ≤ 4, enumerated as spans of vector subsets.
    fn all_subspaces(n: usize) -> Vec<Subspace> {
        let vs = all_vectors(n);
        let mut out: Vec<Subspace> = Vec::new();
        let mut frontier = vec![Subspace::zero(n)];
        while let Some(s) = frontier.pop() {
            if out.contains(&s) {
                continue;
            }
            for v in &vs {
                if !s.contains(v) {
                    frontier.push(s.sum(&Subspace::span(n, [v.clone()].iter())));
                }
            }
            out.push(s);
        }
        out
    }

    #[test]
    fn complement_direct_sum_exhaustive() {
        for n in 0..=4 {
            let subspaces = all_subspaces(n);
            // Gaussian binomial totals: 1, 2, 5, 16, 67
            assert_eq!(subspaces.len(), [1, 2, 5, 16, 67][n]);
            for u in subspaces {
                let c = complement(&u);
                assert_eq!(u.dim() + c.dim(), n);
                assert_eq!(u.intersection(&c).dim(), 0);
                assert_eq!(u.sum(&c), Subspace::full(n));
            }
        }
    }

    #[test]
    fn quotient_coordinates() {
        let z = Subspace::full(3);
        let b = Subspace::span(3, [BitVec::from_bits(&[1, 1, 0])].iter());
        let q = QuotientSpace::new(z, b).unwrap();
        assert_eq!(q.dim(), 2);
        let v = BitVec::from_bits(&[0, 1, 1]);
        let w = v.xor(&BitVec::from_bits(&[1, 1, 0]));
        assert_eq!(q.coordinates(&v), q.coordinates(&w));
        let c = q.coordinates(&v).unwrap();
        assert_eq!(q.coordinates(&q.lift(&c)).unwrap(), c);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), BitMatrix::identity(3));
        assert!(m(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
                .prop_map(|rows| BitMatrix::from_entries(&rows).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_nullity(a in arb_matrix(64)) {
            let k = kernel_basis(&a);
            prop_assert_eq!(a.rank() + k.dim(), a.cols());
            for v in k.basis() {
                prop_assert!(a.mul_vec(v).unwrap().is_zero());
            }
        }

        #[test]
        fn solutions_verify(a in arb_matrix(24), seed in any::<u64>()) {
            // right-hand sides both inside and (likely) outside the column space
            let x0 = BitVec::from_mask(a.cols().min(64), seed);
            let x0 = BitVec::from_indices(a.cols(), x0.iter_ones().filter(|&i| i < a.cols()));
            let inside = a.mul_vec(&x0).unwrap();
            let (_, sol) = rank_and_solve(&a, &inside).unwrap();
            prop_assert_eq!(a.mul_vec(&sol.unwrap()).unwrap(), inside);
            let other = BitVec::from_indices(a.rows(), (0..a.rows()).filter(|i| (seed >> (i % 64)) & 1 == 0));
            if let (_, Some(x)) = rank_and_solve(&a, &other).unwrap() {
                prop_assert_eq!(a.mul_vec(&x).unwrap(), other);
            }
        }

        #[test]
        fn solver_preimages(a in arb_matrix(32)) {
            let cols: Vec<BitVec> = (0..a.cols()).map(|j| a.column(j)).collect();
            let s = LinearSolver::from_columns(a.rows(), &cols);
            prop_assert_eq!(s.rank(), a.rank());
            prop_assert_eq!(s.kernel().len() + s.rank(), a.cols());
            for j in 0..a.cols() {
                let x = s.solve(&cols[j]).unwrap();
                prop_assert_eq!(a.mul_vec(&x).unwrap(), cols[j].clone());
            }
        }
    }
}
