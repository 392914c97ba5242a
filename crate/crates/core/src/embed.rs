//! Embedding problems `(φ: G → A, α: B ↠ A)` over finite groups: realness,
//! Sylow reduction, central filtrations, obstruction classes and the
//! lifting-data solver.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::cohomology::{BarClass, BarComplex, Caps};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, LinearSolver};
use crate::groups::{group_quotient, involution_data, sylow_transfer, FiniteGroup, GroupHom, Subgroup};

#[derive(Clone, Debug)]
pub struct EmbeddingProblem {
    phi: GroupHom,
    alpha: GroupHom,
}

impl EmbeddingProblem {
    pub fn new(phi: GroupHom, alpha: GroupHom) -> Result<Self> {
        if phi.target() != alpha.target() {
            return Err(Error::invalid("embedding problem", "φ and α have different targets"));
        }
        if let Some(missing) = alpha.surjectivity_witness() {
            return Err(Error::NotSurjective { missing });
        }
        Ok(EmbeddingProblem { phi, alpha })
    }

    pub fn phi(&self) -> &GroupHom {
        &self.phi
    }

    pub fn alpha(&self) -> &GroupHom {
        &self.alpha
    }

    pub fn g(&self) -> &Arc<FiniteGroup> {
        self.phi.source()
    }

    pub fn a(&self) -> &Arc<FiniteGroup> {
        self.phi.target()
    }

    pub fn b(&self) -> &Arc<FiniteGroup> {
        self.alpha.source()
    }

    /// `true` when `α∘ψ = φ`.
    pub fn is_solution(&self, psi: &GroupHom) -> bool {
        psi.source() == self.g()
            && psi.target() == self.b()
            && (0..self.g().order()).all(|x| self.alpha.apply(psi.apply(x)) == self.phi.apply(x))
    }

    /// The problem pulled back along `χ: H → G`.
    pub fn pullback(&self, chi: &GroupHom) -> Result<EmbeddingProblem> {
        EmbeddingProblem::new(chi.then(&self.phi)?, self.alpha.clone())
    }
}

/// Least element of the conjugacy class of `x`.
pub fn class_rep(g: &FiniteGroup, x: usize) -> usize {
    g.conjugacy_class(x)[0]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProblemFlags {
    pub real: bool,
    pub two_problem: bool,
    pub central: bool,
    pub kernel_order: usize,
    /// An involution of `G` with no involution of `B` above its image.
    pub non_real_witness: Option<usize>,
    /// A kernel element outside the centre of `B`.
    pub non_central_witness: Option<usize>,
}

pub fn classify_problem(e: &EmbeddingProblem) -> ProblemFlags {
    let b = e.b();
    let non_real_witness = involution_data(e.g()).representatives().into_iter().find(|&t| {
        let a = e.phi.apply(t);
        a != 0 && !b.involutions().iter().any(|&y| e.alpha.apply(y) == a)
    });
    let kernel = e.alpha.kernel();
    let non_central_witness = kernel.elements().iter().copied().find(|&k| !b.is_central(k));
    ProblemFlags {
        real: non_real_witness.is_none(),
        two_problem: e.a().is_two_group() && b.is_two_group(),
        central: non_central_witness.is_none(),
        kernel_order: kernel.order(),
        non_real_witness,
        non_central_witness,
    }
}

/// The problem `(φ: G → H, α|P: P → H)` with `H = im φ`, `P` a Sylow
/// 2-subgroup of `α⁻¹(H)`, and the inclusions that carry its solutions back.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub problem: EmbeddingProblem,
    /// `P → B`.
    pub sylow_inclusion: GroupHom,
    /// `H → A`.
    pub image_inclusion: GroupHom,
}

impl Reduction {
    /// Composes a solution of the reduced problem into `B` and checks it
    /// against the original problem.
    pub fn lift_solution(&self, original: &EmbeddingProblem, psi: &GroupHom) -> Result<GroupHom> {
        if !self.problem.is_solution(psi) {
            return Err(Error::invalid("solution", "does not solve the reduced problem"));
        }
        let out = psi.then(&self.sylow_inclusion)?;
        if !original.is_solution(&out) {
            return Err(Error::invalid("solution", "composite does not solve the original problem"));
        }
        Ok(out)
    }
}

pub fn reduce_to_2_embedding(e: &EmbeddingProblem) -> Result<Reduction> {
    let g = e.g();
    if !g.is_two_group() {
        return Err(Error::NotTwoGroup { order: g.order() });
    }
    if let Some(class_rep) = classify_problem(e).non_real_witness {
        return Err(Error::NotReal { class_rep });
    }
    let a = e.a();
    let b = e.b();
    let image = e.phi.image();
    let (h, h_incl) = GroupHom::inclusion(a.clone(), &image);
    let h_pos: BTreeMap<usize, usize> = image.elements().iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let phi_h = GroupHom::new(g.clone(), h.clone(), (0..g.order()).map(|x| h_pos[&e.phi.apply(x)]).collect())?;

    let c_elems: Vec<usize> = (0..b.order()).filter(|&y| image.contains(e.alpha.apply(y))).collect();
    let c_sub = b.subgroup(&c_elems)?;
    let (c, c_incl) = GroupHom::inclusion(b.clone(), &c_sub);
    let alpha_c = GroupHom::new(
        c.clone(),
        h.clone(),
        (0..c.order()).map(|i| h_pos[&e.alpha.apply(c_incl.apply(i))]).collect(),
    )?;

    // Every involution of C over an involution of H has a conjugate in P over
    // the same element, so realness passes to the restriction.
    let p_sub = c.sylow2();
    for t in involution_data(g).representatives() {
        let target = phi_h.apply(t);
        if target == 0 {
            continue;
        }
        let lift = c
            .involutions()
            .into_iter()
            .find(|&y| alpha_c.apply(y) == target)
            .expect("realness gives an involution above the image");
        let w = sylow_transfer(&alpha_c, lift)?;
        debug_assert!(p_sub.contains(w.conjugate));
    }
    let (p, p_incl) = GroupHom::inclusion(c.clone(), &p_sub);
    let alpha_p = p_incl.then(&alpha_c)?;
    let problem = EmbeddingProblem::new(phi_h, alpha_p)?;
    let flags = classify_problem(&problem);
    if let Some(class_rep) = flags.non_real_witness {
        return Err(Error::NotReal { class_rep });
    }
    debug_assert!(flags.two_problem);
    let sylow_inclusion = GroupHom::new(p, b.clone(), (0..p_sub.order()).map(|i| c_incl.apply(p_incl.apply(i))).collect())?;
    Ok(Reduction {
        problem,
        sylow_inclusion,
        image_inclusion: h_incl,
    })
}

/// `1 = N₀ ⊂ N₁ ⊂ … ⊂ Nₙ = K` with each `N_{k+1}/N_k` central of order 2 in
/// `B/N_k`. Each step takes the least-index central involution of `B/N_k`
/// lying in the image of `K`.
pub fn central_filtration(b: &Arc<FiniteGroup>, k: &Subgroup) -> Result<Vec<Subgroup>> {
    if !b.is_two_group() {
        return Err(Error::NotTwoGroup { order: b.order() });
    }
    if let Some((element, conjugator)) = b.normality_witness(k) {
        return Err(Error::NotNormal { element, conjugator });
    }
    let mut chain = vec![b.trivial_subgroup()];
    while chain.last().unwrap().order() < k.order() {
        let n = chain.last().unwrap();
        let (q, proj) = group_quotient(b, n)?;
        let image_k: Vec<usize> = k.elements().iter().map(|&x| proj.apply(x)).collect();
        let z = (1..q.order())
            .find(|&z| image_k.contains(&z) && q.mul(z, z) == 0 && q.is_central(z))
            .expect("a nontrivial normal subgroup of a 2-group meets the centre");
        let next: Vec<usize> = (0..b.order()).filter(|&x| proj.apply(x) == 0 || proj.apply(x) == z).collect();
        chain.push(b.subgroup(&next)?);
    }
    Ok(chain)
}

/// `o(E)` with the cocycle of the least-index section and its class id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub class: BarClass,
    pub section: Vec<usize>,
}

impl Obstruction {
    pub fn is_zero(&self) -> bool {
        self.class.coset_id.is_zero()
    }
}

fn check_order_two_central(e: &EmbeddingProblem) -> Result<usize> {
    let kernel = e.alpha.kernel();
    if kernel.order() != 2 {
        return Err(Error::KernelOrder { order: kernel.order() });
    }
    let z = kernel.elements()[1];
    if !e.b().is_central(z) {
        return Err(Error::NotCentral { element: z });
    }
    Ok(z)
}

/// `c(x, y) = φ̂(xy)φ̂(y)⁻¹φ̂(x)⁻¹` as a normalized bar 2-cochain on `G`.
pub fn section_cocycle(e: &EmbeddingProblem, bar: &BarComplex, section: &[usize]) -> Result<BitVec> {
    let g = e.g();
    let b = e.b();
    let mut c = BitVec::zeros(bar.dim(2)?);
    for x in 1..g.order() {
        for y in 1..g.order() {
            let v = b.mul(b.mul(section[g.mul(x, y)], b.inv(section[y])), b.inv(section[x]));
            if v != 0 {
                c.set(bar.tuple_index(&[x, y]), true);
            }
        }
    }
    Ok(c)
}

pub fn least_section(e: &EmbeddingProblem) -> Vec<usize> {
    let pre = e.alpha.least_preimages();
    (0..e.g().order())
        .map(|x| pre[e.phi.apply(x)].expect("α is surjective"))
        .collect()
}

/// The obstruction class for a central problem with kernel of order 2, from
/// an arbitrary normalized set-section of `α` over `φ`.
pub fn obstruction_with_section(e: &EmbeddingProblem, section: &[usize], caps: &Caps) -> Result<Obstruction> {
    check_order_two_central(e)?;
    let g = e.g();
    if section.len() != g.order() || section[0] != 0 {
        return Err(Error::invalid("section", "must have one entry per element and fix the identity"));
    }
    if let Some(x) = (0..g.order()).find(|&x| e.alpha.apply(section[x]) != e.phi.apply(x)) {
        return Err(Error::invalid("section", format!("does not lie over φ at {x}")));
    }
    let bar = BarComplex::new(g.clone(), caps.clone())?;
    let c = section_cocycle(e, &bar, section)?;
    debug_assert!(bar.coboundary(&c, 2)?.is_zero());
    let h = bar.cohomology(2)?;
    Ok(Obstruction {
        class: BarClass {
            degree: 2,
            coset_id: h.denominator().reduce(&c),
            representative: c,
        },
        section: section.to_vec(),
    })
}

pub fn obstruction_class(e: &EmbeddingProblem, caps: &Caps) -> Result<Obstruction> {
    obstruction_with_section(e, &least_section(e), caps)
}

/// For a vanishing obstruction, the homomorphic lift `φ̂·z^β` where `dβ = c`
/// and `β` is the least solution of the linear system.
fn split_lift(e: &EmbeddingProblem, o: &Obstruction, z: usize, caps: &Caps) -> Result<Option<GroupHom>> {
    let g = e.g();
    let bar = BarComplex::new(g.clone(), caps.clone())?;
    let d2 = bar.dim(2)?;
    let columns = (1..g.order())
        .map(|x| bar.coboundary(&BitVec::unit(g.order() - 1, x - 1), 1))
        .collect::<Result<Vec<_>>>()?;
    let solver = LinearSolver::from_columns(d2, &columns);
    let Some(beta) = solver.solve(&o.class.representative) else {
        return Ok(None);
    };
    let b = e.b();
    let mut map = o.section.clone();
    for x in 1..g.order() {
        if beta.get(x - 1) {
            map[x] = b.mul(map[x], z);
        }
    }
    Ok(Some(GroupHom::new(g.clone(), b.clone(), map)?))
}

/// A map from involution classes of `G` to classes of elements of order at
/// most 2 in `B`, keyed by least class representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftingData {
    pub map: BTreeMap<usize, usize>,
}

impl LiftingData {
    /// Checks the keys are the involution classes of `G`, the values are
    /// classes of `B` of elements with square 1, and `α#∘f = φ#`.
    pub fn validate(&self, e: &EmbeddingProblem) -> Result<()> {
        let g = e.g();
        let b = e.b();
        let a = e.a();
        let reps = involution_data(g).representatives();
        for &x in &reps {
            if !self.map.contains_key(&x) {
                return Err(Error::InconsistentLifting {
                    class_rep: x,
                    message: "no value".into(),
                });
            }
        }
        for (&x, &y) in &self.map {
            if !reps.contains(&x) {
                return Err(Error::InconsistentLifting {
                    class_rep: x,
                    message: "not the least element of an involution class".into(),
                });
            }
            if y >= b.order() || b.mul(y, y) != 0 {
                return Err(Error::InconsistentLifting {
                    class_rep: x,
                    message: format!("value {y} does not square to 1 in B"),
                });
            }
            if !a.conjugacy_class(e.phi.apply(x)).contains(&e.alpha.apply(y)) {
                return Err(Error::InconsistentLifting {
                    class_rep: x,
                    message: "α# ∘ f differs from φ#".into(),
                });
            }
        }
        Ok(())
    }

    /// `true` when `ψ#` agrees with `f` on every involution class of `G`.
    pub fn is_matched_by(&self, psi: &GroupHom) -> bool {
        let b = psi.target();
        self.map.iter().all(|(&x, &y)| b.conjugacy_class(y).contains(&psi.apply(x)))
    }
}

/// `f = g∘φ#`, where `g` sends a class of `A` to the least-index involution
/// class of `B` above it, or to the identity class if there is none above
/// the identity.
pub fn make_lifting_data(e: &EmbeddingProblem) -> Result<LiftingData> {
    let b = e.b();
    let a = e.a();
    let b_reps = involution_data(b).representatives();
    let mut map = BTreeMap::new();
    for x in involution_data(e.g()).representatives() {
        let target = a.conjugacy_class(e.phi.apply(x));
        let found = b_reps.iter().copied().find(|&y| target.contains(&e.alpha.apply(y)));
        let value = match found {
            Some(y) => y,
            None if target == [0] => 0,
            None => return Err(Error::NotReal { class_rep: x }),
        };
        map.insert(x, value);
    }
    let data = LiftingData { map };
    data.validate(e)?;
    Ok(data)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Solved { map: Vec<usize> },
    Obstructed { class: BarClass, step: usize },
    LiftUnmatched { residual: BTreeMap<usize, bool>, step: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Orders of `N₀ ⊂ … ⊂ Nₙ`.
    pub filtration: Vec<usize>,
    /// Steps at which the character correction was nontrivial.
    pub corrected_steps: Vec<usize>,
}

impl SolveReport {
    pub fn solution(&self, e: &EmbeddingProblem) -> Option<GroupHom> {
        match &self.verdict {
            Verdict::Solved { map } => GroupHom::new(e.g().clone(), e.b().clone(), map.clone()).ok(),
            _ => None,
        }
    }
}

/// Solves a 2-embedding problem step by step along a central filtration of
/// `ker α`; steps are numbered from 1 starting at the top of the filtration.
pub fn solve(e: &EmbeddingProblem, lifting: Option<&LiftingData>, caps: &Caps) -> Result<SolveReport> {
    let g = e.g();
    let b = e.b();
    for grp in [g, e.a(), b] {
        if !grp.is_two_group() {
            return Err(Error::NotTwoGroup { order: grp.order() });
        }
    }
    if let Some(l) = lifting {
        l.validate(e)?;
    }
    let kernel = e.alpha.kernel();
    let chain = central_filtration(b, &kernel)?;
    let filtration: Vec<usize> = chain.iter().map(Subgroup::order).collect();
    let quotients = chain
        .iter()
        .map(|n| group_quotient(b, n))
        .collect::<Result<Vec<_>>>()?;
    let top = chain.len() - 1;

    // h: G → B/K through A ≅ B/K
    let (q_top, p_top) = &quotients[top];
    let pre = e.alpha.least_preimages();
    let h_map: Vec<usize> = (0..g.order())
        .map(|x| p_top.apply(pre[e.phi.apply(x)].expect("α is surjective")))
        .collect();
    let mut h = GroupHom::new(g.clone(), q_top.clone(), h_map)?;

    let reps = involution_data(g).representatives();
    let characters = characters(g, caps)?;
    let mut corrected_steps = Vec::new();
    for (step, k) in (0..top).rev().enumerate() {
        let step = step + 1;
        let (qk, pk) = &quotients[k];
        let (_, pk1) = &quotients[k + 1];
        // π: B/N_k → B/N_{k+1}
        let pi_map: Vec<usize> = {
            let mut m = vec![usize::MAX; qk.order()];
            for y in 0..b.order() {
                m[pk.apply(y)] = pk1.apply(y);
            }
            m
        };
        let pi = GroupHom::new(qk.clone(), h.target().clone(), pi_map)?;
        let ek = EmbeddingProblem::new(h.clone(), pi)?;
        let z = check_order_two_central(&ek)?;
        let o = obstruction_class(&ek, caps)?;
        if !o.is_zero() {
            return Ok(SolveReport {
                verdict: Verdict::Obstructed { class: o.class, step },
                filtration,
                corrected_steps,
            });
        }
        let s = split_lift(&ek, &o, z, caps)?.expect("a zero class is a coboundary");
        let Some(l) = lifting else {
            h = s;
            continue;
        };
        let residual: BTreeMap<usize, bool> = reps
            .iter()
            .map(|&x| {
                let want = pk.apply(l.map[&x]);
                (x, !qk.conjugacy_class(want).contains(&s.apply(x)))
            })
            .collect();
        if residual.values().all(|&v| !v) {
            h = s;
            continue;
        }
        let r = BitVec::from_bools(&residual.values().copied().collect::<Vec<_>>());
        let profiles: Vec<BitVec> = characters
            .iter()
            .map(|chi| BitVec::from_bools(&reps.iter().map(|&x| chi[x]).collect::<Vec<_>>()))
            .collect();
        let Some(coeffs) = LinearSolver::from_columns(reps.len(), &profiles).solve(&r) else {
            return Ok(SolveReport {
                verdict: Verdict::LiftUnmatched { residual, step },
                filtration,
                corrected_steps,
            });
        };
        let chi: Vec<bool> = (0..g.order())
            .map(|x| coeffs.iter_ones().fold(false, |acc, i| acc ^ characters[i][x]))
            .collect();
        let map = (0..g.order())
            .map(|x| if chi[x] { qk.mul(s.apply(x), z) } else { s.apply(x) })
            .collect();
        h = GroupHom::new(g.clone(), qk.clone(), map)?;
        corrected_steps.push(step);
    }

    // B/N₀ = B with identical indexing
    let solution = GroupHom::new(g.clone(), b.clone(), h.map().to_vec())?;
    assert!(e.is_solution(&solution), "solver output commutes with the diagram");
    if let Some(l) = lifting {
        assert!(l.is_matched_by(&solution), "solver output realizes the lifting data");
    }
    Ok(SolveReport {
        verdict: Verdict::Solved {
            map: solution.map().to_vec(),
        },
        filtration,
        corrected_steps,
    })
}

/// A basis of `Hom(G, F₂) = H¹(G, F₂)` as value tables.
fn characters(g: &Arc<FiniteGroup>, caps: &Caps) -> Result<Vec<Vec<bool>>> {
    let bar = BarComplex::new(g.clone(), caps.clone())?;
    let z1 = bar.cocycles(1)?;
    Ok(z1
        .basis()
        .iter()
        .map(|v| (0..g.order()).map(|x| x != 0 && v.get(x - 1)).collect())
        .collect())
}
