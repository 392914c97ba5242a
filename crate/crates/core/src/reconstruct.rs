//! Connected sums of a dual algebra and a graded Boolean algebra: building
//! them, splitting a graded algebra back into its parts, and the presentation
//! `F(Y) ∗₂ 𝔹(X)` they determine.
//!
//! In [`build_connected_sum`] the degree-one basis lists `D¹` first and then the
//! basis of the Boolean ring; every higher degree carries the ring basis.

use rand::Rng;
use serde::Serialize;

use crate::cohomology::{tower_colimit, Caps};
use crate::error::{Error, Result};
use crate::freeprod::{quotient_tower, Presentation};
use crate::gf2::{kernel_basis, BitMatrix, BitVec, LinearSolver, QuotientSpace, Subspace};
use crate::graded::GradedAlgebra;
use crate::stone::{random_invertible, spectrum, BooleanRing, FiniteSpace};

/// `D ⊓ B•` with `dim D = d1` and `B` in every positive degree up to `n_max`.
pub fn build_connected_sum(d1: usize, b: &BooleanRing, n_max: usize) -> Result<GradedAlgebra> {
    if n_max < 2 {
        return Err(Error::invalid("connected sum", "degree cap must be at least 2"));
    }
    let k = b.dim();
    let mut dims = vec![1, d1 + k];
    dims.extend(std::iter::repeat_n(k, n_max - 1));
    let dd = dims.clone();
    GradedAlgebra::from_fn(dims, |i, a, j, c| {
        let len = dd[i + j];
        if i == 0 {
            return BitVec::unit(len, c);
        }
        if j == 0 {
            return BitVec::unit(len, a);
        }
        let skip = |deg: usize, idx: usize| if deg == 1 { idx.checked_sub(d1) } else { Some(idx) };
        match (skip(i, a), skip(j, c)) {
            (Some(x), Some(y)) => {
                let p = &b.mult_table()[x][y];
                BitVec::from_indices(len, p.iter_ones())
            }
            _ => BitVec::zeros(len),
        }
    })
}

/// The quasi-canonical classes: `particular + D¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coset {
    pub particular: BitVec,
    pub directions: Vec<BitVec>,
}

impl Coset {
    pub fn size(&self) -> u128 {
        1u128 << self.directions.len()
    }

    pub fn elements(&self) -> Vec<BitVec> {
        let d = self.directions.len().min(20);
        (0..1u64 << d)
            .map(|m| {
                let mut v = self.particular.clone();
                for (i, b) in self.directions.iter().enumerate().take(d) {
                    if m >> i & 1 == 1 {
                        v.xor_assign(b);
                    }
                }
                v
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// `D¹ = ker(c ↦ c²)` inside `A¹`.
    pub d1: Subspace,
    /// The ring on `A¹/D¹` with `[c][c'] = ψ⁻¹(cc')`, `ψ(c) = c·k`.
    pub ring: BooleanRing,
    pub coset: Coset,
    /// `identifications[i]` has as columns the images in `Aⁱ` of the ring
    /// basis (`i ≥ 1`); in degree one these are representatives of the classes.
    pub identifications: Vec<BitMatrix>,
    /// Whether `Aⁱ = 0` for all `i ≥ 2`, so that the Boolean part is absent.
    pub degenerate: bool,
}

impl Decomposition {
    pub fn y_count(&self) -> usize {
        self.d1.dim()
    }

    pub fn x_points(&self) -> usize {
        self.ring.dim()
    }
}

fn fail(msg: String) -> Error {
    Error::Decomposition(msg)
}

fn left_multiplication(a: &GradedAlgebra, i: usize, x: &BitVec, j: usize) -> BitMatrix {
    let cols: Vec<BitVec> = (0..a.dim(j))
        .map(|b| a.mul(i, x, j, &BitVec::unit(a.dim(j), b)).expect("within cap"))
        .collect();
    BitMatrix::from_columns(a.dim(i + j), &cols).expect("consistent lengths")
}

pub fn decompose(a: &GradedAlgebra) -> Result<Decomposition> {
    let n = a.n_max();
    if n < 2 {
        return Err(Error::invalid("decompose", "degree cap must be at least 2"));
    }
    let d = a.dim(1);
    let sq = a.squaring_matrix(1).expect("n_max ≥ 2");
    let d1 = kernel_basis(&sq);
    for x in d1.basis() {
        for j in 1..n {
            for b in 0..a.dim(j) {
                let p = a.mul(1, x, j, &BitVec::unit(a.dim(j), b)).expect("within cap");
                if !p.is_zero() {
                    return Err(fail(format!(
                        "square-zero class {x:?} has a nonzero product with basis element {b} of degree {j}"
                    )));
                }
            }
        }
    }
    if (2..=n).all(|i| a.dim(i) == 0) {
        let identifications = (0..=n).map(|i| BitMatrix::zeros(a.dim(i), 0)).collect();
        return Ok(Decomposition {
            coset: Coset {
                particular: BitVec::zeros(d),
                directions: d1.basis().to_vec(),
            },
            d1,
            ring: BooleanRing::zero(),
            identifications,
            degenerate: true,
        });
    }
    // c·k = c² for every basis class c, stacked into one linear system in k
    let mut columns = vec![BitVec::zeros(d * a.dim(2)); d];
    let mut rhs = BitVec::zeros(d * a.dim(2));
    for c in 0..d {
        let e = BitVec::unit(d, c);
        let m = left_multiplication(a, 1, &e, 1);
        for (col, out) in columns.iter_mut().enumerate() {
            for t in m.column(col).iter_ones() {
                out.set(c * a.dim(2) + t, true);
            }
        }
        for t in sq.column(c).iter_ones() {
            rhs.set(c * a.dim(2) + t, true);
        }
    }
    let solver = LinearSolver::from_columns(d * a.dim(2), &columns);
    let k = solver.solve(&rhs).ok_or_else(|| {
        fail("no degree-one class k satisfies c² = c·k for all c".into())
    })?;
    let directions = solver.kernel_subspace();
    if directions != d1 {
        return Err(fail(format!(
            "solutions of c² = c·k differ by a {}-dimensional space, but D¹ has dimension {}",
            directions.dim(),
            d1.dim()
        )));
    }
    let quotient = QuotientSpace::new(Subspace::full(d), d1.clone())?;
    let reps: Vec<BitVec> = quotient.representatives().to_vec();
    let r = reps.len();
    // θ_i([c]) = c·k^{i-1}
    let mut identifications = vec![BitMatrix::zeros(1, r)];
    let mut current = reps.clone();
    for i in 1..=n {
        if i > 1 {
            current = current.iter().map(|x| a.mul(i - 1, x, 1, &k).expect("within cap")).collect();
        }
        let m = BitMatrix::from_columns(a.dim(i), &current)?;
        if i > 1 && !(m.rows() == r && m.is_invertible()) {
            return Err(fail(format!(
                "multiplication by powers of k does not identify A^{i} with A¹/D¹ (dims {} and {r})",
                a.dim(i)
            )));
        }
        identifications.push(m);
    }
    let psi_inv = identifications[2].inverse().expect("checked invertible");
    let mult: Vec<Vec<BitVec>> = reps
        .iter()
        .map(|x| {
            reps.iter()
                .map(|y| psi_inv.mul_vec(&a.mul(1, x, 1, y).expect("within cap")).expect("square"))
                .collect()
        })
        .collect();
    let one = quotient.coordinates(&k).expect("every class is a cocycle here");
    let labels = (0..r).map(|i| format!("b{}", i + 1)).collect();
    let ring = BooleanRing::new(labels, mult, one).map_err(|e| fail(format!("induced ring is not Boolean: {e}")))?;
    // the identifications intertwine all products
    for i in 1..=n {
        for j in 1..=n - i {
            for x in 0..r {
                for y in 0..r {
                    let lhs = a
                        .mul(i, &identifications[i].column(x), j, &identifications[j].column(y))
                        .expect("within cap");
                    let xy = ring.mul(&BitVec::unit(r, x), &BitVec::unit(r, y));
                    let rhs = identifications[i + j].mul_vec(&xy)?;
                    if lhs != rhs {
                        return Err(fail(format!(
                            "product of ring basis elements {x} and {y} in degrees ({i}, {j}) is not the ring product"
                        )));
                    }
                }
            }
        }
    }
    let k_reduced = d1.reduce(&k);
    Ok(Decomposition {
        coset: Coset {
            particular: k_reduced,
            directions: d1.basis().to_vec(),
        },
        d1,
        ring,
        identifications,
        degenerate: false,
    })
}

/// Whether the algebra is graded Boolean (a connected sum with `D¹ = 0`).
pub fn is_graded_boolean(a: &GradedAlgebra) -> bool {
    a.n_max() >= 2 && decompose(a).is_ok_and(|d| d.d1.dim() == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Boolean,
    QuasiBoolean,
    Neither,
}

pub fn classify(a: &GradedAlgebra) -> Classification {
    match decompose(a) {
        Ok(d) if d.d1.dim() == 0 => Classification::Boolean,
        Ok(_) => Classification::QuasiBoolean,
        Err(_) => Classification::Neither,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationOut {
    pub free_rank: usize,
    #[serde(rename = "X_points")]
    pub x_points: usize,
    #[serde(skip)]
    pub space: FiniteSpace,
}

impl PresentationOut {
    pub fn presentation(&self) -> Presentation {
        Presentation::with_counts(self.free_rank, self.x_points)
    }
}

pub fn reconstruct_presentation(a: &GradedAlgebra) -> Result<PresentationOut> {
    let d = decompose(a)?;
    let space = if d.ring.dim() == 0 {
        FiniteSpace::discrete(0)
    } else {
        spectrum(&d.ring).space
    };
    Ok(PresentationOut {
        free_rank: d.y_count(),
        x_points: space.points(),
        space,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: usize,
    pub expected: usize,
    pub stable: usize,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub free_rank: usize,
    #[serde(rename = "X_points")]
    pub x_points: usize,
    pub depth: usize,
    pub stage_orders: Vec<usize>,
    pub degrees: Vec<DegreeCheck>,
    /// Invariants recovered from the stable subring, when its degree cap allows.
    pub stable_invariants: Option<(usize, usize)>,
    pub products_match: Option<bool>,
    pub all_match: bool,
}

/// Compares the stable tower cohomology of the presented group with `a` in
/// degrees up to `degree_bound`.
pub fn verify_reconstruction(
    p: &PresentationOut,
    a: &GradedAlgebra,
    depth: usize,
    degree_bound: usize,
    caps: &Caps,
) -> Result<VerificationReport> {
    let bound = degree_bound.min(a.n_max());
    let tower = quotient_tower(&p.presentation(), depth)?;
    let col = tower_colimit(&tower, bound, caps)?;
    let degrees: Vec<DegreeCheck> = (0..=bound)
        .map(|i| DegreeCheck {
            degree: i,
            expected: a.dim(i),
            stable: col.stable_dims[i],
            matches: a.dim(i) == col.stable_dims[i],
        })
        .collect();
    // connected sums are classified by (dim D¹, |X|), so matching invariants
    // of the stable subring means matching products
    let (stable_invariants, products_match) = if bound >= 2 {
        let inv = decompose(&col.algebra).ok().map(|d| (d.y_count(), d.x_points()));
        (inv, Some(inv == Some((p.free_rank, p.x_points))))
    } else {
        (None, None)
    };
    let all_match = degrees.iter().all(|d| d.matches) && products_match != Some(false);
    Ok(VerificationReport {
        free_rank: p.free_rank,
        x_points: p.x_points,
        depth,
        stage_orders: col.stage_orders,
        degrees,
        stable_invariants,
        products_match,
        all_match,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub isomorphic: bool,
    pub invariants_preserved: bool,
    pub recovered: (usize, usize),
}

/// Build, optionally present in random bases, decompose and rebuild.
pub fn roundtrip<R: Rng>(d1: usize, b: &BooleanRing, n_max: usize, rng: Option<&mut R>) -> Result<RoundtripReport> {
    let built = build_connected_sum(d1, b, n_max)?;
    let a = match rng {
        Some(rng) => {
            let bases: Vec<BitMatrix> = built
                .dims()
                .iter()
                .enumerate()
                .map(|(i, &dim)| if i == 0 { BitMatrix::identity(1) } else { random_invertible(dim, rng) })
                .collect();
            built.change_basis(&bases)?
        }
        None => built,
    };
    let dec = decompose(&a)?;
    let rebuilt = build_connected_sum(dec.y_count(), &dec.ring, n_max)?;
    // rebuilt → a: D¹ basis then ring representatives in degree one, θᵢ above
    let maps: Vec<BitMatrix> = (0..=n_max)
        .map(|i| match i {
            0 => Ok(BitMatrix::identity(1)),
            1 => {
                let mut cols = dec.d1.basis().to_vec();
                cols.extend((0..dec.ring.dim()).map(|x| dec.identifications[1].column(x)));
                BitMatrix::from_columns(a.dim(1), &cols)
            }
            _ => Ok(dec.identifications[i].clone()),
        })
        .collect::<Result<Vec<_>>>()?;
    let recovered = (dec.y_count(), dec.x_points());
    Ok(RoundtripReport {
        isomorphic: rebuilt.is_isomorphism(&a, &maps),
        invariants_preserved: recovered == (d1, b.dim()),
        recovered,
    })
}
