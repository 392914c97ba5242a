//! Graded commutative `F₂`-algebras truncated at a degree cap, their snapshot
//! file form, graded maps between them and bounded F-isomorphism checks.
//!
//! The snapshot lists the basis of every degree in order, so global index
//! `offset(i) + a` is the `a`-th basis element of degree `i`. `cup[s][t]` is the
//! product of global basis elements `s` and `t` as a bit vector over the whole
//! basis, or empty when the degrees add up past the cap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    dims: Vec<usize>,
    /// `mult[i][j][a][b]` for `i + j ≤ n_max`, empty otherwise.
    mult: Vec<Vec<Vec<Vec<BitVec>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub dims: Vec<usize>,
    pub cup: Vec<Vec<BitVec>>,
}

impl GradedAlgebra {
    pub fn new(dims: Vec<usize>, mult: Vec<Vec<Vec<Vec<BitVec>>>>) -> Result<Self> {
        let a = GradedAlgebra { dims, mult };
        a.validate()?;
        Ok(a)
    }

    /// Builds the tables from a product rule on basis elements.
    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(usize, usize, usize, usize) -> BitVec) -> Result<Self> {
        let n = dims.len().saturating_sub(1);
        let mut mult = vec![vec![Vec::new(); n + 1]; n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                mult[i][j] = (0..dims[i]).map(|a| (0..dims[j]).map(|b| f(i, a, j, b)).collect()).collect();
            }
        }
        Self::new(dims, mult)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid("graded algebra", msg));
        if self.dims.is_empty() || self.dims[0] != 1 {
            return bad("degree 0 must be one-dimensional".into());
        }
        let n = self.n_max();
        if self.mult.len() != n + 1 || self.mult.iter().any(|row| row.len() != n + 1) {
            return bad(format!("multiplication tables must be indexed by degrees 0..={n}"));
        }
        for i in 0..=n {
            for j in 0..=n {
                let t = &self.mult[i][j];
                if i + j > n {
                    if !t.is_empty() {
                        return bad(format!("table for degrees ({i}, {j}) exceeds the cap"));
                    }
                    continue;
                }
                if t.len() != self.dims[i] || t.iter().any(|r| r.len() != self.dims[j]) {
                    return bad(format!("table for degrees ({i}, {j}) has the wrong shape"));
                }
                if t.iter().flatten().any(|v| v.len() != self.dims[i + j]) {
                    return bad(format!("products of degrees ({i}, {j}) have the wrong length"));
                }
            }
        }
        for j in 0..=n {
            for b in 0..self.dims[j] {
                let e = BitVec::unit(self.dims[j], b);
                if self.mult[0][j][0][b] != e || self.mult[j][0][b][0] != e {
                    return bad(format!("unit does not act as identity on basis element {b} of degree {j}"));
                }
            }
        }
        for i in 0..=n {
            for j in 0..=n - i {
                for a in 0..self.dims[i] {
                    for b in 0..self.dims[j] {
                        if self.mult[i][j][a][b] != self.mult[j][i][b][a] {
                            return bad(format!("product of ({i},{a}) and ({j},{b}) is not commutative"));
                        }
                    }
                }
            }
        }
        for i in 1..=n {
            for j in 1..=n - i {
                for k in 1..=n - i - j {
                    for a in 0..self.dims[i] {
                        for b in 0..self.dims[j] {
                            let ab = &self.mult[i][j][a][b];
                            for c in 0..self.dims[k] {
                                let l = self.mul_basis_left(i + j, ab, k, c);
                                let bc = &self.mult[j][k][b][c];
                                let r = self.mul_basis_right(i, a, j + k, bc);
                                if l != r {
                                    return bad(format!(
                                        "product of ({i},{a}), ({j},{b}), ({k},{c}) is not associative"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn mul_basis_left(&self, i: usize, x: &BitVec, k: usize, c: usize) -> BitVec {
        let mut out = BitVec::zeros(self.dims[i + k]);
        for a in x.iter_ones() {
            out.xor_assign(&self.mult[i][k][a][c]);
        }
        out
    }

    fn mul_basis_right(&self, i: usize, a: usize, k: usize, y: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.dims[i + k]);
        for b in y.iter_ones() {
            out.xor_assign(&self.mult[i][k][a][b]);
        }
        out
    }

    pub fn n_max(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn offset(&self, i: usize) -> usize {
        self.dims[..i].iter().sum()
    }

    pub fn basis_product(&self, i: usize, a: usize, j: usize, b: usize) -> &BitVec {
        &self.mult[i][j][a][b]
    }

    pub fn unit(&self) -> BitVec {
        BitVec::ones(1)
    }

    /// Product of homogeneous elements; `None` past the degree cap.
    pub fn mul(&self, i: usize, x: &BitVec, j: usize, y: &BitVec) -> Option<BitVec> {
        if i + j > self.n_max() {
            return None;
        }
        let mut out = BitVec::zeros(self.dims[i + j]);
        for a in x.iter_ones() {
            for b in y.iter_ones() {
                out.xor_assign(&self.mult[i][j][a][b]);
            }
        }
        Some(out)
    }

    /// `x^k`; `None` past the degree cap.
    pub fn power(&self, i: usize, x: &BitVec, k: usize) -> Option<BitVec> {
        let mut out = self.unit();
        for step in 0..k {
            out = self.mul(i * step, &out, i, x)?;
        }
        Some(out)
    }

    /// Matrix of squaring `Aⁱ → A²ⁱ`, column `a` the square of basis element `a`.
    pub fn squaring_matrix(&self, i: usize) -> Option<BitMatrix> {
        if 2 * i > self.n_max() {
            return None;
        }
        let cols: Vec<BitVec> = (0..self.dims[i]).map(|a| self.mult[i][i][a][a].clone()).collect();
        BitMatrix::from_columns(self.dims[2 * i], &cols).ok()
    }

    /// The algebra in new bases: `bases[i]` has as columns the new basis of `Aⁱ`
    /// in old coordinates (degree 0 is left alone).
    pub fn change_basis(&self, bases: &[BitMatrix]) -> Result<GradedAlgebra> {
        let n = self.n_max();
        if bases.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: bases.len(),
            });
        }
        let inverses = bases
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if i == 0 {
                    return Ok(BitMatrix::identity(1));
                }
                if m.rows() != self.dims[i] || m.cols() != self.dims[i] {
                    return Err(Error::DimensionMismatch {
                        expected: self.dims[i],
                        found: m.rows(),
                    });
                }
                m.inverse()
                    .ok_or_else(|| Error::invalid("graded algebra", format!("basis change in degree {i} is singular")))
            })
            .collect::<Result<Vec<_>>>()?;
        let col = |i: usize, a: usize| if i == 0 { BitVec::ones(1) } else { bases[i].column(a) };
        GradedAlgebra::from_fn(self.dims.clone(), |i, a, j, b| {
            let p = self.mul(i, &col(i, a), j, &col(j, b)).expect("within cap");
            inverses[i + j].mul_vec(&p).expect("square matrix")
        })
    }

    /// Whether `maps` (one matrix per degree, old coordinates to `other`'s) is an
    /// isomorphism of graded algebras onto `other`.
    pub fn is_isomorphism(&self, other: &GradedAlgebra, maps: &[BitMatrix]) -> bool {
        let map = GradedMap {
            matrices: maps.to_vec(),
        };
        self.dims == other.dims
            && map.check_shapes(self, other).is_ok()
            && maps.iter().all(BitMatrix::is_invertible)
            && map.is_multiplicative(self, other)
    }

    pub fn to_snapshot(&self) -> Snapshot {
        let n = self.n_max();
        let total = self.total_dim();
        let mut index = Vec::new();
        for i in 0..=n {
            for a in 0..self.dims[i] {
                index.push((i, a));
            }
        }
        let cup = index
            .iter()
            .map(|&(i, a)| {
                index
                    .iter()
                    .map(|&(j, b)| {
                        if i + j > n {
                            return BitVec::zeros(0);
                        }
                        let mut out = BitVec::zeros(total);
                        let off = self.offset(i + j);
                        for k in self.mult[i][j][a][b].iter_ones() {
                            out.set(off + k, true);
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        Snapshot {
            dims: self.dims.clone(),
            cup,
        }
    }

    pub fn from_snapshot(s: &Snapshot) -> Result<GradedAlgebra> {
        let bad = |msg: String| Error::invalid("snapshot", msg);
        if s.dims.is_empty() {
            return Err(bad("dims must be nonempty".into()));
        }
        let n = s.dims.len() - 1;
        let total: usize = s.dims.iter().sum();
        if s.cup.len() != total || s.cup.iter().any(|r| r.len() != total) {
            return Err(bad(format!("cup must be a {total} × {total} table")));
        }
        let offsets: Vec<usize> = (0..=n).map(|i| s.dims[..i].iter().sum()).collect();
        let mut mult = vec![vec![Vec::new(); n + 1]; n + 1];
        for i in 0..=n {
            for j in 0..=n {
                if i + j > n {
                    for a in 0..s.dims[i] {
                        for b in 0..s.dims[j] {
                            if !s.cup[offsets[i] + a][offsets[j] + b].is_empty() {
                                return Err(bad(format!("entry for degrees ({i}, {j}) must be empty")));
                            }
                        }
                    }
                    continue;
                }
                let mut t = Vec::with_capacity(s.dims[i]);
                for a in 0..s.dims[i] {
                    let mut row = Vec::with_capacity(s.dims[j]);
                    for b in 0..s.dims[j] {
                        let v = &s.cup[offsets[i] + a][offsets[j] + b];
                        if v.len() != total {
                            return Err(bad(format!("entry ({}, {}) must have length {total}", offsets[i] + a, offsets[j] + b)));
                        }
                        let (lo, hi) = (offsets[i + j], offsets[i + j] + s.dims[i + j]);
                        if v.iter_ones().any(|k| k < lo || k >= hi) {
                            return Err(bad(format!("product of degrees ({i}, {j}) leaves degree {}", i + j)));
                        }
                        row.push(v.slice(lo, s.dims[i + j]));
                    }
                    t.push(row);
                }
                mult[i][j] = t;
            }
        }
        GradedAlgebra::new(s.dims.clone(), mult)
    }
}

/// A degree-preserving linear map; `matrices[n]` sends `Aⁿ` to `Bⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub matrices: Vec<BitMatrix>,
}

impl GradedMap {
    pub fn identity(a: &GradedAlgebra) -> Self {
        GradedMap {
            matrices: a.dims.iter().map(|&d| BitMatrix::identity(d)).collect(),
        }
    }

    pub fn check_shapes(&self, a: &GradedAlgebra, b: &GradedAlgebra) -> Result<()> {
        if a.n_max() != b.n_max() || self.matrices.len() != a.dims.len() {
            return Err(Error::invalid(
                "graded map",
                format!("degree caps differ ({} vs {})", a.n_max(), b.n_max()),
            ));
        }
        for (n, m) in self.matrices.iter().enumerate() {
            if m.cols() != a.dims[n] || m.rows() != b.dims[n] {
                return Err(Error::invalid(
                    "graded map",
                    format!("degree {n} needs a {} × {} matrix", b.dims[n], a.dims[n]),
                ));
            }
        }
        if a.dims[0] == 1 && !self.matrices[0].get(0, 0) {
            return Err(Error::invalid("graded map", "unit is not preserved"));
        }
        Ok(())
    }

    pub fn apply(&self, n: usize, x: &BitVec) -> BitVec {
        self.matrices[n].mul_vec(x).expect("checked shapes")
    }

    pub fn is_multiplicative(&self, a: &GradedAlgebra, b: &GradedAlgebra) -> bool {
        let n = a.n_max();
        (0..=n).all(|i| {
            (0..=n - i).all(|j| {
                (0..a.dims[i]).all(|x| {
                    (0..a.dims[j]).all(|y| {
                        let lhs = self.apply(i + j, &a.mult[i][j][x][y]);
                        let fx = self.matrices[i].column(x);
                        let fy = self.matrices[j].column(y);
                        b.mul(i, &fx, j, &fy).is_some_and(|rhs| rhs == lhs)
                    })
                })
            })
        })
    }

    pub fn kernel(&self, n: usize) -> Subspace {
        crate::gf2::kernel_basis(&self.matrices[n])
    }

    pub fn image(&self, n: usize) -> Subspace {
        let m = &self.matrices[n];
        Subspace::span(m.rows(), m.transpose().row_vectors().iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub degree: usize,
    pub element: BitVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FIsoReport {
    /// Kernel elements whose power at the nilpotency bound, or at the largest
    /// exponent the degree cap allows, is nonzero.
    pub nilpotency_violations: Vec<Violation>,
    /// Target elements none of whose `2^k`-th powers, `k ≤` power bound, is in the image.
    pub power_violations: Vec<Violation>,
    /// Degrees where a bound reaches past the degree cap and only lower powers were checked.
    pub truncated_degrees: Vec<usize>,
    pub clean: bool,
    /// Set when both sides are graded Boolean and the report is clean.
    pub bijective: Option<bool>,
}

fn enumerate(basis: &[BitVec], len: usize) -> Result<Vec<BitVec>> {
    if basis.len() > 16 {
        return Err(Error::cap("enumerated subspace dimension", basis.len() as u128, 16));
    }
    Ok((0..1u64 << basis.len())
        .map(|m| {
            let mut v = BitVec::zeros(len);
            for (k, b) in basis.iter().enumerate() {
                if m >> k & 1 == 1 {
                    v.xor_assign(b);
                }
            }
            v
        })
        .collect())
}

/// Checks, within the degree cap and the given bounds, that `phi: A → B` has
/// nilpotent homogeneous kernel and that every homogeneous element of `B` has a
/// `2^k`-th power in the image.
pub fn f_isomorphism_check(
    phi: &GradedMap,
    a: &GradedAlgebra,
    b: &GradedAlgebra,
    nil_bound: usize,
    pow_bound: usize,
) -> Result<FIsoReport> {
    phi.check_shapes(a, b)?;
    let n_max = a.n_max();
    let mut nil = Vec::new();
    let mut pow = Vec::new();
    let mut truncated = Vec::new();
    for n in 1..=n_max {
        let ker = phi.kernel(n);
        let e = nil_bound.min(n_max / n);
        let reachable: Vec<usize> = (0..=pow_bound).take_while(|&k| n << k <= n_max).collect();
        if (e < nil_bound && ker.dim() > 0) || reachable.len() <= pow_bound {
            truncated.push(n);
        }
        for x in enumerate(ker.basis(), a.dims[n])? {
            // past the cap the largest reachable power stands in for the bound
            if !x.is_zero() && !a.power(n, &x, e).expect("within cap").is_zero() {
                nil.push(Violation { degree: n, element: x });
            }
        }
        let images: Vec<Subspace> = reachable.iter().map(|&k| phi.image(n << k)).collect();
        for y in Subspace::full(b.dims[n]).elements() {
            if y.is_zero() {
                continue;
            }
            let mut p = y.clone();
            let mut hit = false;
            for (k, im) in images.iter().enumerate() {
                if k > 0 {
                    p = b.mul(n << (k - 1), &p, n << (k - 1), &p).expect("within cap");
                }
                if im.contains(&p) {
                    hit = true;
                    break;
                }
            }
            if !hit {
                pow.push(Violation { degree: n, element: y });
            }
        }
    }
    let clean = nil.is_empty() && pow.is_empty();
    let bijective = if clean && crate::reconstruct::is_graded_boolean(a) && crate::reconstruct::is_graded_boolean(b) {
        Some(phi.matrices.iter().all(BitMatrix::is_invertible))
    } else {
        None
    };
    Ok(FIsoReport {
        nilpotency_violations: nil,
        power_violations: pow,
        truncated_degrees: truncated,
        clean,
        bijective,
    })
}
