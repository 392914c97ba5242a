//! Finite Boolean rings, finite topological spaces and Stone duality between them.
//!
//! Rings are stored by structure constants in an arbitrary basis. Spaces have
//! at most 64 points and are stored through minimal open neighbourhoods, point
//! sets being `u64` masks.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{kernel_basis, BitMatrix, BitVec, Subspace};

/// A finite Boolean ring presented by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanRing {
    labels: Vec<String>,
    mult: Vec<Vec<BitVec>>,
    one: BitVec,
}

impl BooleanRing {
    /// Validates symmetry, the unit, idempotence and associativity.
    ///
    /// In characteristic 2 with a commutative product, `x² = Σ xᵢ bᵢ²`, so
    /// idempotence of every element is equivalent to idempotence of the basis.
    /// Associativity is trilinear and is checked on all basis triples.
    pub fn new(labels: Vec<String>, mult: Vec<Vec<BitVec>>, one: BitVec) -> Result<Self> {
        let dim = labels.len();
        if mult.len() != dim || mult.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("ring", format!("multiplication table is not {dim}×{dim}")));
        }
        if mult.iter().flatten().any(|v| v.len() != dim) || one.len() != dim {
            return Err(Error::invalid("ring", "entries must be vectors of length dim"));
        }
        let r = BooleanRing { labels, mult, one };
        for i in 0..dim {
            for j in 0..i {
                if r.mult[i][j] != r.mult[j][i] {
                    return Err(Error::invalid("ring", format!("product table not symmetric at ({i}, {j})")));
                }
            }
            let bi = BitVec::unit(dim, i);
            if r.mul(&bi, &bi) != bi {
                return Err(Error::invalid("ring", format!("basis element {i} is not idempotent")));
            }
            if r.mul(&r.one, &bi) != bi {
                return Err(Error::invalid("ring", format!("one does not fix basis element {i}")));
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let (bi, bj, bk) = (BitVec::unit(dim, i), BitVec::unit(dim, j), BitVec::unit(dim, k));
                    if r.mul(&r.mul(&bi, &bj), &bk) != r.mul(&bi, &r.mul(&bj, &bk)) {
                        return Err(Error::invalid("ring", format!("associativity fails at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(r)
    }

    /// `F₂ⁿ` with its standard idempotent basis.
    pub fn standard(n: usize) -> Self {
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BitVec::unit(n, i) } else { BitVec::zeros(n) })
                    .collect()
            })
            .collect();
        BooleanRing {
            labels: (0..n).map(|i| format!("e{}", i + 1)).collect(),
            mult,
            one: BitVec::ones(n),
        }
    }

    /// The zero ring.
    pub fn zero() -> Self {
        Self::standard(0)
    }

    /// Re-presents the ring in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &BitMatrix) -> Result<Self> {
        let n = self.dim();
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.rows(),
            });
        }
        let inv = p.inverse().ok_or_else(|| Error::invalid("basis change", "matrix is singular"))?;
        let cols: Vec<BitVec> = (0..n).map(|j| p.column(j)).collect();
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| inv.mul_vec(&self.mul(&cols[i], &cols[j])).expect("square"))
                    .collect()
            })
            .collect();
        Ok(BooleanRing {
            labels: (0..n).map(|i| format!("b{}", i + 1)).collect(),
            mult,
            one: inv.mul_vec(&self.one)?,
        })
    }

    /// The same ring in a uniformly random basis.
    pub fn scrambled<R: Rng>(&self, rng: &mut R) -> Self {
        let p = random_invertible(self.dim(), rng);
        self.change_basis(&p).expect("invertible change of basis")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mult_table(&self) -> &[Vec<BitVec>] {
        &self.mult
    }

    pub fn one(&self) -> &BitVec {
        &self.one
    }

    pub fn zero_element(&self) -> BitVec {
        BitVec::zeros(self.dim())
    }

    pub fn basis_element(&self, i: usize) -> BitVec {
        BitVec::unit(self.dim(), i)
    }

    pub fn mul(&self, x: &BitVec, y: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.dim());
        for i in x.iter_ones() {
            for j in y.iter_ones() {
                out.xor_assign(&self.mult[i][j]);
            }
        }
        out
    }

    pub fn add(&self, x: &BitVec, y: &BitVec) -> BitVec {
        x.xor(y)
    }

    /// Every element; only for small dimensions.
    pub fn elements(&self) -> Vec<BitVec> {
        Subspace::full(self.dim()).elements()
    }
}

/// A uniformly random invertible `n × n` matrix.
pub fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> BitMatrix {
    loop {
        let rows: Vec<BitVec> = (0..n)
            .map(|_| BitVec::from_bools(&(0..n).map(|_| rng.gen::<bool>()).collect::<Vec<_>>()))
            .collect();
        let m = BitMatrix::from_rows(n, rows).expect("square");
        if m.is_invertible() {
            return m;
        }
    }
}

/// The atoms of `R`, sorted by their coordinate vectors.
///
/// Starting from `{1}`, every block `e` is split into `e·b` and `e·(1 + b)`
/// for each basis element `b`; the nonzero blocks that remain are the atoms.
pub fn atoms(r: &BooleanRing) -> Vec<BitVec> {
    if r.dim() == 0 {
        return Vec::new();
    }
    let mut blocks = vec![r.one().clone()];
    for i in 0..r.dim() {
        let b = r.basis_element(i);
        let nb = r.add(r.one(), &b);
        let mut next = Vec::with_capacity(blocks.len() * 2);
        for e in &blocks {
            for part in [r.mul(e, &b), r.mul(e, &nb)] {
                if !part.is_zero() {
                    next.push(part);
                }
            }
        }
        blocks = next;
    }
    blocks.sort_by(|a, b| a.lex_cmp(b));
    blocks
}

/// `x + y + xy`, a generator of the ideal `(x, y)`.
pub fn principal_generator(r: &BooleanRing, x: &BitVec, y: &BitVec) -> BitVec {
    r.add(&r.add(x, y), &r.mul(x, y))
}

/// The ideal generated by `gens`, enumerated as `{Σ rᵢ gᵢ}`.
pub fn ideal_elements(r: &BooleanRing, gens: &[BitVec]) -> Vec<BitVec> {
    let products: Vec<BitVec> = r
        .elements()
        .iter()
        .flat_map(|s| gens.iter().map(move |g| (s, g)))
        .map(|(s, g)| r.mul(s, g))
        .collect();
    let mut ideal = Subspace::span(r.dim(), products.iter()).elements();
    ideal.sort_by(|a, b| a.lex_cmp(b));
    ideal
}

/// A finite space on at most 64 points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    points: usize,
    /// Smallest open set containing each point.
    min_nbhd: Vec<u64>,
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn mask_points(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| (mask >> i) & 1 == 1).collect()
}

impl FiniteSpace {
    /// The topology generated by `opens` under finite unions and intersections.
    pub fn new(points: usize, opens: &[u64]) -> Result<Self> {
        if points > 64 {
            return Err(Error::cap("space points", points as u128, 64));
        }
        let full = full_mask(points);
        if let Some(bad) = opens.iter().find(|&&o| o & !full != 0) {
            return Err(Error::invalid("space", format!("open set {bad:#b} uses points beyond {points}")));
        }
        let min_nbhd = (0..points)
            .map(|x| {
                opens
                    .iter()
                    .filter(|&&o| (o >> x) & 1 == 1)
                    .fold(full, |acc, &o| acc & o)
            })
            .collect();
        Ok(FiniteSpace { points, min_nbhd })
    }

    pub fn from_point_lists(points: usize, opens: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(opens.len());
        for o in opens {
            let mut m = 0u64;
            for &p in o {
                if p >= points {
                    return Err(Error::invalid("space", format!("point {p} out of range")));
                }
                m |= 1 << p;
            }
            masks.push(m);
        }
        Self::new(points, &masks)
    }

    pub fn discrete(points: usize) -> Self {
        FiniteSpace {
            points,
            min_nbhd: (0..points).map(|x| 1u64 << x).collect(),
        }
    }

    pub fn indiscrete(points: usize) -> Self {
        FiniteSpace {
            points,
            min_nbhd: vec![full_mask(points); points],
        }
    }

    /// Two points, opens `∅, {0}, {0,1}`.
    pub fn sierpinski() -> Self {
        Self::new(2, &[0b01]).expect("valid")
    }

    /// Disjoint union with `other`'s points shifted after ours.
    pub fn disjoint_union(&self, other: &FiniteSpace) -> Result<Self> {
        let n = self.points + other.points;
        if n > 64 {
            return Err(Error::cap("space points", n as u128, 64));
        }
        let mut min_nbhd = self.min_nbhd.clone();
        min_nbhd.extend(other.min_nbhd.iter().map(|m| m << self.points));
        Ok(FiniteSpace { points: n, min_nbhd })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn full(&self) -> u64 {
        full_mask(self.points)
    }

    pub fn min_neighbourhood(&self, x: usize) -> u64 {
        self.min_nbhd[x]
    }

    pub fn is_open(&self, set: u64) -> bool {
        set & !self.full() == 0 && mask_points(set).iter().all(|&x| self.min_nbhd[x] & !set == 0)
    }

    pub fn is_clopen(&self, set: u64) -> bool {
        self.is_open(set) && self.is_open(self.full() & !set)
    }

    /// All open sets, ascending as masks.
    pub fn opens(&self) -> Vec<u64> {
        let mut found = std::collections::BTreeSet::from([0u64]);
        for x in 0..self.points {
            let add: Vec<u64> = found.iter().map(|o| o | self.min_nbhd[x]).collect();
            found.extend(add);
        }
        found.into_iter().collect()
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.points).all(|x| self.min_nbhd[x] == 1 << x)
    }

    /// Connected components, each the smallest clopen set around its points,
    /// ordered by least point.
    pub fn components(&self) -> Vec<u64> {
        let mut parent: Vec<usize> = (0..self.points).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for x in 0..self.points {
            for y in mask_points(self.min_nbhd[x]) {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut blocks: Vec<u64> = Vec::new();
        let mut block_of_root = vec![usize::MAX; self.points];
        for x in 0..self.points {
            let r = find(&mut parent, x);
            if block_of_root[r] == usize::MAX {
                block_of_root[r] = blocks.len();
                blocks.push(0);
            }
            blocks[block_of_root[r]] |= 1 << x;
        }
        blocks
    }

    /// Distinct points can always be separated by a clopen set.
    pub fn is_totally_separated(&self) -> bool {
        self.components().iter().all(|c| c.count_ones() == 1)
    }

    pub fn open_point_lists(&self) -> Vec<Vec<usize>> {
        self.opens().into_iter().map(mask_points).collect()
    }
}

/// A continuous map between finite spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuousMap {
    pub source: FiniteSpace,
    pub target: FiniteSpace,
    pub point_map: Vec<usize>,
}

impl ContinuousMap {
    /// Checks that preimages of opens are open.
    ///
    /// It suffices to check the minimal neighbourhoods of the target: every
    /// open set is a union of them.
    pub fn new(source: FiniteSpace, target: FiniteSpace, point_map: Vec<usize>) -> Result<Self> {
        if point_map.len() != source.points() {
            return Err(Error::invalid("map", "point map length differs from source size"));
        }
        if point_map.iter().any(|&y| y >= target.points()) {
            return Err(Error::invalid("map", "image point out of range"));
        }
        let m = ContinuousMap {
            source,
            target,
            point_map,
        };
        for y in 0..m.target.points() {
            if !m.source.is_open(m.preimage(m.target.min_neighbourhood(y))) {
                return Err(Error::invalid("map", format!("preimage of the neighbourhood of {y} is not open")));
            }
        }
        Ok(m)
    }

    pub fn preimage(&self, set: u64) -> u64 {
        (0..self.source.points())
            .filter(|&x| (set >> self.point_map[x]) & 1 == 1)
            .fold(0, |acc, x| acc | 1 << x)
    }

    pub fn image(&self, set: u64) -> u64 {
        mask_points(set).iter().fold(0, |acc, &x| acc | 1 << self.point_map[x])
    }

    pub fn is_bijective(&self) -> bool {
        self.source.points() == self.target.points()
            && self.image(self.source.full()) == self.target.full()
    }

    /// Bijective, continuous, and open.
    pub fn is_homeomorphism(&self) -> bool {
        self.is_bijective() && self.source.opens().iter().all(|&o| self.target.is_open(self.image(o)))
    }
}

/// The maximal spectrum of a finite Boolean ring.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub space: FiniteSpace,
    pub atoms: Vec<BitVec>,
    /// The maximal ideal at each point: the span of the other atoms.
    pub ideals: Vec<Subspace>,
}

impl Spectrum {
    /// The point whose ideal omits `x`, i.e. the characters `R → F₂` evaluated at `x`.
    pub fn evaluate(&self, r: &BooleanRing, x: &BitVec) -> BitVec {
        BitVec::from_bools(
            &self
                .atoms
                .iter()
                .map(|a| !r.mul(x, a).is_zero())
                .collect::<Vec<_>>(),
        )
    }
}

pub fn spectrum(r: &BooleanRing) -> Spectrum {
    let atoms = atoms(r);
    let ideals = (0..atoms.len())
        .map(|i| {
            let others: Vec<&BitVec> = atoms.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, a)| a).collect();
            Subspace::span(r.dim(), others)
        })
        .collect();
    Spectrum {
        space: FiniteSpace::discrete(atoms.len()),
        atoms,
        ideals,
    }
}

/// The ring of continuous functions `X → F₂`, with its basis of functions.
///
/// A function is continuous exactly when it is constant on every minimal
/// neighbourhood, which is a linear condition.
#[derive(Clone, Debug)]
pub struct FunctionRing {
    pub ring: BooleanRing,
    /// Basis functions as point vectors.
    pub functions: Subspace,
}

impl FunctionRing {
    /// Coordinates in the ring basis of a continuous function.
    pub fn coordinates(&self, f: &BitVec) -> Option<BitVec> {
        self.functions.coordinates(f)
    }

    pub fn function(&self, coords: &BitVec) -> BitVec {
        self.functions.combine(coords)
    }
}

pub fn function_ring(x: &FiniteSpace) -> FunctionRing {
    let n = x.points();
    let mut rows = Vec::new();
    for p in 0..n {
        for q in mask_points(x.min_neighbourhood(p)) {
            if q != p {
                rows.push(BitVec::from_indices(n, [p, q]));
            }
        }
    }
    let functions = kernel_basis(&BitMatrix::from_rows(n, rows).expect("widths agree"));
    let d = functions.dim();
    let mult = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let prod = functions.basis()[i].and(&functions.basis()[j]);
                    functions.coordinates(&prod).expect("continuous functions are closed under products")
                })
                .collect()
        })
        .collect();
    let one = functions.coordinates(&BitVec::ones(n)).expect("constants are continuous");
    let ring = BooleanRing {
        labels: (0..d).map(|i| format!("f{}", i + 1)).collect(),
        mult,
        one,
    };
    FunctionRing { ring, functions }
}

/// Checks of `σ: R → BB(Spec R)`.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaCheck {
    /// `σ(bᵢ)` as a function on the points of `Spec R`.
    pub images: Vec<BitVec>,
    pub ring_hom: bool,
    pub bijective: bool,
}

/// Checks of `β: X → Spec(BB(X))`.
#[derive(Clone, Debug, Serialize)]
pub struct BetaCheck {
    pub point_map: Vec<usize>,
    pub bijective: bool,
    pub continuous: bool,
    pub inverse_continuous: bool,
    /// Set when `X` is not totally separated.
    pub inapplicable: Option<String>,
}

/// Naturality squares along a continuous map `f: X → Y`.
#[derive(Clone, Debug, Serialize)]
pub struct NaturalityCheck {
    /// `BB(f)` is a ring homomorphism `BB(Y) → BB(X)`.
    pub functor_ring_hom: bool,
    /// `Spec(BB(f)) ∘ β_X = β_Y ∘ f`.
    pub beta_square: bool,
    /// `σ_{BB(X)} ∘ BB(f) = BB(Spec(BB(f))) ∘ σ_{BB(Y)}`.
    pub sigma_square: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityCertificate {
    pub sigma: SigmaCheck,
    pub beta: BetaCheck,
    pub naturality: Option<NaturalityCheck>,
}

impl DualityCertificate {
    pub fn sigma_iso(&self) -> bool {
        self.sigma.ring_hom && self.sigma.bijective
    }

    pub fn beta_homeomorphism(&self) -> bool {
        self.beta.inapplicable.is_none() && self.beta.bijective && self.beta.continuous && self.beta.inverse_continuous
    }
}

/// `σ` as the matrix sending ring coordinates to functions on `Spec R`.
pub fn sigma(r: &BooleanRing, spec: &Spectrum) -> SigmaCheck {
    let images: Vec<BitVec> = (0..r.dim()).map(|i| spec.evaluate(r, &r.basis_element(i))).collect();
    let apply = |x: &BitVec| {
        let mut out = BitVec::zeros(spec.atoms.len());
        for i in x.iter_ones() {
            out.xor_assign(&images[i]);
        }
        out
    };
    // σ is linear by construction; multiplicativity is checked on basis pairs
    // and the unit, which determines it on all elements
    let mut ring_hom = apply(r.one()) == BitVec::ones(spec.atoms.len());
    for i in 0..r.dim() {
        for j in 0..r.dim() {
            let prod = r.mul(&r.basis_element(i), &r.basis_element(j));
            ring_hom &= apply(&prod) == images[i].and(&images[j]);
        }
    }
    let m = BitMatrix::from_columns(spec.atoms.len(), &images).expect("consistent lengths");
    let bijective = r.dim() == spec.atoms.len() && m.is_invertible();
    SigmaCheck {
        images,
        ring_hom,
        bijective,
    }
}

/// `β(x)` is the point of `Spec(BB(X))` whose atom contains `x`.
pub fn beta(x: &FiniteSpace) -> BetaCheck {
    let fr = function_ring(x);
    let spec = spectrum(&fr.ring);
    let atom_sets: Vec<BitVec> = spec.atoms.iter().map(|a| fr.function(a)).collect();
    let point_map: Vec<usize> = (0..x.points())
        .map(|p| atom_sets.iter().position(|s| s.get(p)).expect("atoms cover X"))
        .collect();
    let target = spec.space.clone();
    let as_map = ContinuousMap {
        source: x.clone(),
        target: target.clone(),
        point_map: point_map.clone(),
    };
    let bijective = as_map.is_bijective();
    let continuous = target.opens().iter().all(|&o| x.is_open(as_map.preimage(o)));
    let inverse_continuous = bijective && x.opens().iter().all(|&o| target.is_open(as_map.image(o)));
    let inapplicable = (!x.is_totally_separated()).then(|| "space is not totally separated".to_string());
    BetaCheck {
        point_map,
        bijective,
        continuous,
        inverse_continuous,
        inapplicable,
    }
}

/// Runs the `σ` and `β` checks and, for a supplied map, both naturality squares.
pub fn duality_roundtrip(r: &BooleanRing, x: &FiniteSpace, f: Option<&ContinuousMap>) -> DualityCertificate {
    let spec = spectrum(r);
    DualityCertificate {
        sigma: sigma(r, &spec),
        beta: beta(x),
        naturality: f.map(naturality),
    }
}

fn naturality(f: &ContinuousMap) -> NaturalityCheck {
    let fx = function_ring(&f.source);
    let fy = function_ring(&f.target);
    // BB(f): h ↦ h ∘ f in coordinates
    let pull = |coords: &BitVec| -> BitVec {
        let h = fy.function(coords);
        let hf = BitVec::from_bools(&(0..f.source.points()).map(|p| h.get(f.point_map[p])).collect::<Vec<_>>());
        fx.coordinates(&hf).expect("composite of continuous maps is continuous")
    };
    let dy = fy.ring.dim();
    let mut functor_ring_hom = pull(fy.ring.one()) == *fx.ring.one();
    for i in 0..dy {
        for j in 0..dy {
            let (bi, bj) = (BitVec::unit(dy, i), BitVec::unit(dy, j));
            functor_ring_hom &= pull(&fy.ring.mul(&bi, &bj)) == fx.ring.mul(&pull(&bi), &pull(&bj));
        }
    }
    let spec_x = spectrum(&fx.ring);
    let spec_y = spectrum(&fy.ring);
    // Spec(BB(f)) sends an atom a of BB(X) to the atom b of BB(Y) with pull(b)·a ≠ 0
    let spec_map: Vec<usize> = spec_x
        .atoms
        .iter()
        .map(|a| {
            spec_y
                .atoms
                .iter()
                .position(|b| !fx.ring.mul(&pull(b), a).is_zero())
                .expect("preimage of a maximal ideal is maximal")
        })
        .collect();
    let beta_x = beta(&f.source).point_map;
    let beta_y = beta(&f.target).point_map;
    let beta_square = (0..f.source.points()).all(|p| spec_map[beta_x[p]] == beta_y[f.point_map[p]]);
    // σ_X(pull(h)) evaluated at a point of Spec BB(X) equals σ_Y(h) at its image
    let sigma_square = (0..dy).all(|i| {
        let h = BitVec::unit(dy, i);
        let left = spec_x.evaluate(&fx.ring, &pull(&h));
        let right = spec_y.evaluate(&fy.ring, &h);
        (0..spec_x.atoms.len()).all(|p| left.get(p) == right.get(spec_map[p]))
    });
    NaturalityCheck {
        functor_ring_hom,
        beta_square,
        sigma_square,
    }
}

/// The quotient of `X` by clopen indistinguishability.
#[derive(Clone, Debug)]
pub struct Completion {
    pub space: FiniteSpace,
    pub map: ContinuousMap,
    /// Fibres of the quotient map.
    pub classes: Vec<u64>,
    /// The induced map to `Spec(BB(X))` is a homeomorphism.
    pub matches_spectrum: bool,
}

pub fn profinite_completion(x: &FiniteSpace) -> Completion {
    let classes = x.components();
    let point_map: Vec<usize> = (0..x.points())
        .map(|p| classes.iter().position(|c| (c >> p) & 1 == 1).expect("components cover"))
        .collect();
    let space = FiniteSpace::discrete(classes.len());
    let map = ContinuousMap::new(x.clone(), space.clone(), point_map).expect("components are clopen");
    // β̂: Xhat → Spec(BB(X)) through the function ring, independently of the components
    let beta_points = beta(x).point_map;
    let well_defined = classes.iter().all(|&c| {
        let pts = mask_points(c);
        pts.iter().all(|&p| beta_points[p] == beta_points[pts[0]])
    });
    let hat: Vec<usize> = classes.iter().map(|&c| beta_points[c.trailing_zeros() as usize]).collect();
    let spec_points = spectrum(&function_ring(x).ring).atoms.len();
    let matches_spectrum = well_defined
        && ContinuousMap {
            source: space.clone(),
            target: FiniteSpace::discrete(spec_points),
            point_map: hat,
        }
        .is_homeomorphism();
    Completion {
        space,
        map,
        classes,
        matches_spectrum,
    }
}

/// Atoms of the subring of `BB(X)` generated by the indicators of a clopen cover.
pub fn clopen_partition_refine(x: &FiniteSpace, cover: &[u64]) -> Result<Vec<u64>> {
    for &c in cover {
        if !x.is_clopen(c) {
            return Err(Error::BadCover(format!("{:?} is not clopen", mask_points(c))));
        }
    }
    let union = cover.iter().fold(0, |a, &c| a | c);
    if union != x.full() {
        return Err(Error::BadCover(format!(
            "points {:?} are not covered",
            mask_points(x.full() & !union)
        )));
    }
    let mut blocks = if x.points() == 0 { vec![] } else { vec![x.full()] };
    for &c in cover {
        blocks = blocks
            .into_iter()
            .flat_map(|b| [b & c, b & !c])
            .filter(|&b| b != 0)
            .collect();
    }
    blocks.sort_by_key(|b| b.trailing_zeros());
    Ok(blocks)
}

pub fn points_of(mask: u64) -> Vec<usize> {
    mask_points(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2_squared_scrambled() -> BooleanRing {
        // basis {1 = (1,1), u = (1,0)}
        let p = BitMatrix::from_entries(&[vec![1, 1], vec![1, 0]]).unwrap();
        BooleanRing::standard(2).change_basis(&p).unwrap()
    }

    #[test]
    fn standard_atoms() {
        let r = BooleanRing::standard(3);
        assert_eq!(atoms(&r), vec![
            BitVec::from_bits(&[0, 0, 1]),
            BitVec::from_bits(&[0, 1, 0]),
            BitVec::from_bits(&[1, 0, 0]),
        ]);
        assert_eq!(atoms(&BooleanRing::standard(1)), vec![BitVec::from_bits(&[1])]);
        assert!(atoms(&BooleanRing::zero()).is_empty());
    }

    #[test]
    fn scrambled_atoms_match_definition() {
        let r = f2_squared_scrambled();
        assert_eq!(r.one(), &BitVec::from_bits(&[1, 0]));
        // u and 1 + u in coordinates of {1, u}
        let found = atoms(&r);
        assert_eq!(found, vec![BitVec::from_bits(&[0, 1]), BitVec::from_bits(&[1, 1])]);
        // oracle: nonzero idempotents with no nonzero proper sub-idempotent
        let els = r.elements();
        let oracle: Vec<BitVec> = els
            .iter()
            .filter(|a| !a.is_zero())
            .filter(|a| {
                els.iter()
                    .all(|b| b.is_zero() || r.mul(a, b) != *b || b == *a)
            })
            .cloned()
            .collect();
        let mut sorted = oracle;
        sorted.sort_by(|a, b| a.lex_cmp(b));
        assert_eq!(found, sorted);
    }

    #[test]
    fn spectrum_ideals_are_character_kernels() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = BooleanRing::standard(3).scrambled(&mut rng);
        let spec = spectrum(&r);
        assert_eq!(spec.space.points(), 3);
        // oracle: every surjective ring hom R → F₂, by enumeration of linear maps
        let mut kernels = Vec::new();
        for mask in 1u64..8 {
            let chi = |x: &BitVec| x.iter_ones().filter(|&i| (mask >> i) & 1 == 1).count() % 2 == 1;
            let is_hom = chi(r.one())
                && r.elements()
                    .iter()
                    .all(|x| r.elements().iter().all(|y| chi(&r.mul(x, y)) == (chi(x) && chi(y))));
            if is_hom {
                let ker: Vec<BitVec> = r.elements().into_iter().filter(|x| !chi(x)).collect();
                kernels.push(Subspace::span(3, ker.iter()));
            }
        }
        assert_eq!(kernels.len(), 3);
        for ideal in &spec.ideals {
            assert!(kernels.contains(ideal));
        }
    }

    #[test]
    fn duality_on_discrete_pair() {
        let c = duality_roundtrip(&BooleanRing::standard(2), &FiniteSpace::discrete(2), None);
        assert!(c.sigma_iso());
        assert!(c.beta_homeomorphism());
    }

    #[test]
    fn sierpinski_is_inapplicable() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.opens(), vec![0, 1, 3]);
        let fr = function_ring(&s);
        assert_eq!(fr.ring.dim(), 1);
        let b = beta(&s);
        assert!(!b.bijective);
        assert!(b.inapplicable.is_some());
        let c = profinite_completion(&s);
        assert_eq!(c.space.points(), 1);
        assert!(c.matches_spectrum);
    }

    #[test]
    fn completion_examples() {
        let d = FiniteSpace::discrete(3);
        let c = profinite_completion(&d);
        assert_eq!(c.map.point_map, vec![0, 1, 2]);
        let x = FiniteSpace::sierpinski().disjoint_union(&FiniteSpace::discrete(1)).unwrap();
        let c = profinite_completion(&x);
        assert_eq!(c.space.points(), 2);
        assert!(c.matches_spectrum);
    }

    #[test]
    fn naturality_squares() {
        let x = FiniteSpace::discrete(3);
        let y = FiniteSpace::discrete(2);
        let f = ContinuousMap::new(x.clone(), y, vec![0, 1, 1]).unwrap();
        let c = duality_roundtrip(&BooleanRing::standard(3), &x, Some(&f));
        let n = c.naturality.unwrap();
        assert!(n.functor_ring_hom && n.beta_square && n.sigma_square);
        let s = FiniteSpace::sierpinski();
        assert!(ContinuousMap::new(s.clone(), s.clone(), vec![1, 0]).is_err());
    }

    #[test]
    fn refinement_examples() {
        let x = FiniteSpace::discrete(4);
        let blocks = clopen_partition_refine(&x, &[0b0111, 0b1110]).unwrap();
        assert_eq!(blocks, vec![0b0001, 0b0110, 0b1000]);
        assert_eq!(clopen_partition_refine(&x, &[0b1111]).unwrap(), vec![0b1111]);
        let singles = [1, 2, 4, 8];
        assert_eq!(clopen_partition_refine(&x, &singles).unwrap(), singles.to_vec());
        assert!(matches!(clopen_partition_refine(&x, &[0b0111]), Err(Error::BadCover(_))));
        assert!(matches!(
            clopen_partition_refine(&FiniteSpace::sierpinski(), &[0b01, 0b11]),
            Err(Error::BadCover(_))
        ));
    }

    #[test]
    fn principal_generators() {
        let r = BooleanRing::standard(3);
        let x = BitVec::from_bits(&[1, 1, 0]);
        let y = BitVec::from_bits(&[0, 1, 1]);
        let g = principal_generator(&r, &x, &y);
        assert_eq!(g, BitVec::from_bits(&[1, 1, 1]));
        assert_eq!(ideal_elements(&r, &[g]), ideal_elements(&r, &[x.clone(), y]));
        assert_eq!(principal_generator(&r, &x, &x), x);
        let r2 = BooleanRing::standard(2);
        let (e1, e2) = (BitVec::from_bits(&[1, 0]), BitVec::from_bits(&[0, 1]));
        assert_eq!(principal_generator(&r2, &e1, &e2), BitVec::ones(2));
    }

    #[test]
    fn rejects_non_boolean_tables() {
        // F₄-like table: b·b = 1 + b is not idempotent
        let mult = vec![
            vec![BitVec::from_bits(&[1, 0]), BitVec::from_bits(&[0, 1])],
            vec![BitVec::from_bits(&[0, 1]), BitVec::from_bits(&[1, 1])],
        ];
        let err = BooleanRing::new(vec!["1".into(), "b".into()], mult, BitVec::from_bits(&[1, 0])).unwrap_err();
        assert!(err.is_validation());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn refinement_is_subordinate_partition(n in 1usize..=8, covers in proptest::collection::vec(any::<u8>(), 1..5)) {
            let x = FiniteSpace::discrete(n);
            let full = x.full();
            let mut cover: Vec<u64> = covers.iter().map(|&c| c as u64 & full).filter(|&c| c != 0).collect();
            let union = cover.iter().fold(0, |a, &c| a | c);
            if union != full {
                cover.push(full & !union);
            }
            let blocks = clopen_partition_refine(&x, &cover).unwrap();
            prop_assert_eq!(blocks.iter().fold(0, |a, &b| a | b), full);
            for (i, &a) in blocks.iter().enumerate() {
                prop_assert!(x.is_clopen(a));
                prop_assert!(cover.iter().any(|&c| a & !c == 0));
                for &b in &blocks[i + 1..] {
                    prop_assert_eq!(a & b, 0);
                }
            }
        }

        #[test]
        fn atoms_orthogonal_and_sum_to_one(n in 1usize..=6, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = BooleanRing::standard(n).scrambled(&mut rng);
            let a = atoms(&r);
            prop_assert_eq!(a.len(), n);
            let mut sum = BitVec::zeros(n);
            for (i, x) in a.iter().enumerate() {
                sum.xor_assign(x);
                for y in &a[i + 1..] {
                    prop_assert!(r.mul(x, y).is_zero());
                }
            }
            prop_assert_eq!(&sum, r.one());
            prop_assert_eq!(Subspace::span(n, a.iter()).dim(), n);
        }

        #[test]
        fn completion_of_discrete_is_identity(n in 0usize..=10) {
            let c = profinite_completion(&FiniteSpace::discrete(n));
            prop_assert_eq!(c.map.point_map, (0..n).collect::<Vec<_>>());
        }
    }
}
