//! One pass/fail line per acceptance criterion, each checked against an
//! oracle computed here independently of the library routine under test.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use quasibool::bundles::{find_section, quotient_bundle, FiniteBundle};
use quasibool::cohomology::{
    induced_map, involution_profile, pullback, quillen_map, tower_colimit, BarComplex, Caps, GroupCohomology,
};
use quasibool::embed::*;
use quasibool::freeprod::{quotient_tower, Presentation};
use quasibool::gf2::{BitVec, Subspace};
use quasibool::groups::{abelian_2torsion_quotient, homomorphisms, FiniteGroup, TWO_GROUPS_TO_16};
use quasibool::reconstruct::{build_connected_sum, reconstruct_presentation, roundtrip, verify_reconstruction};
use quasibool::stone::{atoms, duality_roundtrip, profinite_completion, spectrum, BooleanRing, FiniteSpace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_elements(r: &BooleanRing) -> Vec<BitVec> {
    (0..1u64 << r.dim()).map(|m| BitVec::from_mask(r.dim(), m)).collect()
}

/// `e ≠ 0` with `ex ∈ {0, e}` for every `x`.
fn is_atom(r: &BooleanRing, e: &BitVec) -> bool {
    !e.is_zero()
        && all_elements(r).iter().all(|x| {
            let p = r.mul(e, x);
            p.is_zero() || p == *e
        })
}

fn stone_duality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for d in 0..=4 {
        for trial in 0..20 {
            let r = BooleanRing::standard(d).scrambled(&mut rng);
            let spec = spectrum(&r);
            let cert = duality_roundtrip(&r, &spec.space, None);
            ensure(cert.sigma_iso(), || format!("σ fails for dim {d}, trial {trial}"))?;
            ensure(cert.beta_homeomorphism(), || format!("β fails for dim {d}, trial {trial}"))?;
            // σ(x) at a point is the character x ↦ [x·atom ≠ 0]
            for (i, img) in cert.sigma.images.iter().enumerate() {
                let b = r.basis_element(i);
                for (p, a) in spec.atoms.iter().enumerate() {
                    ensure(img.get(p) == !r.mul(&b, a).is_zero(), || format!("σ value at dim {d}"))?;
                }
            }
        }
    }
    Ok(())
}

fn atom_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for d in 0..=4 {
        for _ in 0..5 {
            let r = BooleanRing::standard(d).scrambled(&mut rng);
            let at = atoms(&r);
            ensure(at.len() == d, || format!("dim {d} has {} atoms", at.len()))?;
            ensure(at.iter().all(|a| is_atom(&r, a)), || "non-atom returned".into())?;
            for (i, a) in at.iter().enumerate() {
                for b in &at[i + 1..] {
                    ensure(r.mul(a, b).is_zero(), || "atoms not orthogonal".into())?;
                }
            }
            let sum = at.iter().fold(r.zero_element(), |s, a| r.add(&s, a));
            ensure(sum == *r.one(), || "atoms do not sum to one".into())?;
            ensure(Subspace::span(d, at.iter()).dim() == d, || "atoms not a basis".into())?;
            if d > 3 {
                continue;
            }
            // every orthogonal basis is made of atoms
            let nonzero: Vec<BitVec> = all_elements(&r).into_iter().filter(|x| !x.is_zero()).collect();
            let mut chosen = Vec::new();
            let mut bases = 0;
            enumerate_bases(&r, &nonzero, 0, &mut chosen, &mut bases)?;
            ensure(bases > 0 || d == 0, || "no orthogonal basis found".into())?;
        }
    }
    Ok(())
}

fn enumerate_bases(r: &BooleanRing, pool: &[BitVec], start: usize, chosen: &mut Vec<BitVec>, found: &mut usize) -> Check {
    if chosen.len() == r.dim() {
        if Subspace::span(r.dim(), chosen.iter()).dim() == r.dim() {
            let orthogonal = (0..chosen.len()).all(|i| (i + 1..chosen.len()).all(|j| r.mul(&chosen[i], &chosen[j]).is_zero()));
            if orthogonal {
                *found += 1;
                ensure(chosen.iter().all(|e| is_atom(r, e)), || format!("orthogonal basis {chosen:?} has a non-atom"))?;
            }
        }
        return Ok(());
    }
    for i in start..pool.len() {
        chosen.push(pool[i].clone());
        enumerate_bases(r, pool, i + 1, chosen, found)?;
        chosen.pop();
    }
    Ok(())
}

/// Minimal nonempty clopen sets, by brute force over all subsets.
fn minimal_clopens(x: &FiniteSpace) -> Vec<u64> {
    let full = x.full();
    let clopens: Vec<u64> = (1..=full).filter(|&s| s & !full == 0 && x.is_open(s) && x.is_open(full & !s)).collect();
    clopens
        .iter()
        .copied()
        .filter(|&s| !clopens.iter().any(|&t| t != s && t & s == t))
        .collect()
}

fn completion_vs_spectrum() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..50 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(0..5);
        let opens: Vec<u64> = (0..k).map(|_| rng.gen_range(0..1u64 << n)).collect();
        let x = FiniteSpace::new(n, &opens).map_err(|e| e.to_string())?;
        let c = profinite_completion(&x);
        let mut oracle = minimal_clopens(&x);
        oracle.sort();
        let mut fibres = c.classes.clone();
        fibres.sort();
        ensure(fibres == oracle, || format!("trial {trial}: fibres {fibres:?}, minimal clopens {oracle:?}"))?;
        ensure(c.space.is_discrete() && c.space.points() == oracle.len(), || format!("trial {trial}: size"))?;
        ensure(c.matches_spectrum, || format!("trial {trial}: map to the spectrum"))?;
    }
    Ok(())
}

fn bundle_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let groups = ["Z2", "Z3", "Z4", "F2^2", "S3", "Z6", "D8", "Q8", "Z8", "F2^3"].map(builtin);
    for trial in 0..100 {
        let g = groups.choose(&mut rng).unwrap().clone();
        let base = rng.gen_range(1..=6);
        let b = FiniteBundle::random(g.clone(), base, &mut rng);
        let s = find_section(&b).map_err(|e| e.to_string())?;
        let ok = s.len() == base && (0..base).all(|x| b.projection()[s[x]] == x);
        ensure(ok, || format!("trial {trial}: not a section"))?;
        for n in g.normal_subgroups() {
            let q = quotient_bundle(&b, &n).map_err(|e| e.to_string())?;
            let qb = &q.bundle;
            FiniteBundle::new(
                qb.group().clone(),
                qb.total(),
                qb.base(),
                qb.projection().to_vec(),
                qb.action_table().to_vec(),
            )
            .map_err(|e| format!("trial {trial}: quotient fails validation: {e}"))?;
            ensure(qb.total() * n.order() == b.total() && qb.base() == base, || format!("trial {trial}: sizes"))?;
            let image: Vec<usize> = s.iter().map(|&y| q.orbit_map[y]).collect();
            ensure((0..base).all(|x| qb.projection()[image[x]] == x), || format!("trial {trial}: pushed section"))?;
        }
    }
    Ok(())
}

fn cohomology_dimensions() -> Check {
    let caps = Caps {
        max_degree: 6,
        ..Caps::default()
    };
    let cases: [(&str, usize, fn(usize) -> usize); 3] = [("Z2", 6, |_| 1), ("F2^2", 4, |n| n + 1), ("Z4", 4, |_| 1)];
    for (name, top, expected) in cases {
        let g = builtin(name);
        let coh = GroupCohomology::new(g.clone(), top, &caps).map_err(|e| e.to_string())?;
        let bar = BarComplex::new(g, caps.clone()).map_err(|e| e.to_string())?;
        for n in 0..=top {
            ensure(coh.dim(n) == expected(n), || format!("{name}: dim H^{n} = {}", coh.dim(n)))?;
            if bar.dim(n + 1).is_ok() {
                let z = bar.cocycles(n).map_err(|e| e.to_string())?.dim();
                let b = bar.coboundaries(n).map_err(|e| e.to_string())?.dim();
                ensure(z - b == expected(n), || format!("{name}: bar dim in degree {n} is {}", z - b))?;
            }
        }
    }
    Ok(())
}

fn obstruction_oracle() -> Check {
    let caps = Caps::default();
    let corpus = central_corpus_over(150, &["Z2", "F2^2", "Z4", "D8", "Q8", "F2^3", "D16", "Z4xZ4"]);
    ensure(corpus.len() >= 50, || format!("corpus has {} problems", corpus.len()))?;
    ensure(corpus.iter().any(|e| e.g().order() == 16), || "corpus has no source of order 16".into())?;
    let mut zero = 0;
    for (i, e) in corpus.iter().enumerate() {
        let o = obstruction_class(e, &caps).map_err(|e| e.to_string())?;
        let lift = exhaustive_lift(e);
        ensure(o.is_zero() == lift.is_some(), || format!("problem {i}: class zero = {}", o.is_zero()))?;
        zero += usize::from(o.is_zero());
    }
    ensure(zero > 0 && zero < corpus.len(), || "corpus lacks one of the two outcomes".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let small: Vec<_> = corpus.iter().filter(|e| e.g().order() <= 8).collect();
    let sources = ["Z2", "F2^2", "Z4", "D8", "Q8", "Z4xZ2"].map(builtin);
    for trial in 0..50 {
        let e = small.choose(&mut rng).unwrap();
        let h = sources.choose(&mut rng).unwrap();
        let chi = homomorphisms(h, e.g()).choose(&mut rng).unwrap().clone();
        let o = obstruction_class(e, &caps).map_err(|e| e.to_string())?;
        let o_pulled = obstruction_class(&e.pullback(&chi).unwrap(), &caps).map_err(|e| e.to_string())?;
        let coh_g = GroupCohomology::new(e.g().clone(), 2, &caps).map_err(|e| e.to_string())?;
        let coh_h = GroupCohomology::new(h.clone(), 2, &caps).map_err(|e| e.to_string())?;
        let m = induced_map(&chi, &coh_g, &coh_h, 2).map_err(|e| e.to_string())?;
        let lhs = m
            .apply(&coh_g.class_of_bar_cocycle(&o.class.representative, 2).unwrap())
            .unwrap();
        let rhs = coh_h.class_of_bar_cocycle(&o_pulled.class.representative, 2).unwrap();
        ensure(lhs == rhs, || format!("naturality trial {trial}"))?;
        let bar_g = BarComplex::new(e.g().clone(), caps.clone()).unwrap();
        let bar_h = BarComplex::new(h.clone(), caps.clone()).unwrap();
        let z = pullback(&bar_h, &bar_g, &chi, &o.class.representative, 2).unwrap();
        let reduced = bar_h.cohomology(2).unwrap().denominator().reduce(&z);
        ensure(reduced == o_pulled.class.coset_id, || format!("bar naturality trial {trial}"))?;
    }
    Ok(())
}

fn verify_solved(e: &EmbeddingProblem, l: &LiftingData, r: &SolveReport) -> std::result::Result<bool, String> {
    let psi = r.solution(e).ok_or_else(|| format!("expected a solution, got {:?}", r.verdict))?;
    let commutes = (0..e.g().order()).all(|x| e.alpha().apply(psi.apply(x)) == e.phi().apply(x));
    let classes = l.map.iter().all(|(&x, &y)| e.b().conjugacy_class(y).contains(&psi.apply(x)));
    ensure(commutes && classes, || "solution certificate fails".into())?;
    Ok(!r.corrected_steps.is_empty())
}

fn solver_end_to_end() -> Check {
    let caps = Caps::default();
    let d8 = builtin("D8");
    let (a, q) = abelian_2torsion_quotient(&d8);

    // α = φ = the quotient; the reflection classes go to themselves
    let e = EmbeddingProblem::new(q.clone(), q.clone()).unwrap();
    let l = make_lifting_data(&e).map_err(|e| e.to_string())?;
    ensure(l.map.get(&4) == Some(&4) && l.map.get(&5) == Some(&5), || format!("lifting data {:?}", l.map))?;
    let r = solve(&e, Some(&l), &caps).map_err(|e| e.to_string())?;
    verify_solved(&e, &l, &r)?;

    // through F₂² × Z/2 every choice of reflection lifts is solvable, and all
    // but the one matching the least section need a character
    let b = Arc::new(FiniteGroup::direct_product(&a, &FiniteGroup::cyclic(2)));
    let alpha = hom(&b, &a, |x| x / 2);
    let e = EmbeddingProblem::new(q.clone(), alpha).unwrap();
    let mut branches = [0usize; 2];
    for bits in 0..4 {
        let l = LiftingData {
            map: BTreeMap::from([(2, 0), (4, 2 * q.apply(4) + (bits & 1)), (5, 2 * q.apply(5) + (bits >> 1))]),
        };
        l.validate(&e).map_err(|e| e.to_string())?;
        let r = solve(&e, Some(&l), &caps).map_err(|e| e.to_string())?;
        branches[usize::from(verify_solved(&e, &l, &r)?)] += 1;
    }
    ensure(branches == [1, 3], || format!("branch counts {branches:?}"))?;

    let z4 = z4_problem();
    match solve(&z4, None, &caps).map_err(|e| e.to_string())?.verdict {
        Verdict::Obstructed { class, step: 1 } if !class.coset_id.is_zero() => {}
        other => return Err(format!("Z/4 problem gave {other:?}")),
    }
    ensure(exhaustive_lift(&z4).is_none(), || "Z/4 problem has a lift".into())?;
    ensure(make_lifting_data(&z4).is_err(), || "non-real problem accepted".into())?;
    Ok(())
}

fn quillen_finite() -> Check {
    let caps = Caps::default();
    for name in TWO_GROUPS_TO_16 {
        let g = builtin(name);
        for n in 1..=2 {
            let r = quillen_map(&g, n, 4, 2, &caps).map_err(|e| format!("{name}: {e}"))?;
            ensure(r.nilpotency_violations.is_empty() && r.power_violations.is_empty() && r.clean, || {
                format!("{name} degree {n}: {} nil, {} power", r.nilpotency_violations.len(), r.power_violations.len())
            })?;
        }
    }
    Ok(())
}

fn dihedral_tower() -> Check {
    let t = quotient_tower(&Presentation::with_counts(0, 2), 3).map_err(|e| e.to_string())?;
    let orders: Vec<usize> = t.stages.iter().map(|s| s.group.order()).collect();
    ensure(orders == [4, 8, 16], || format!("stage orders {orders:?}"))?;
    let c = tower_colimit(&t, 3, &Caps::default()).map_err(|e| e.to_string())?;
    ensure(c.stable_dims[1..] == [2, 2, 2], || format!("stable ranks {:?}", c.stable_dims))?;
    let d16 = &t.stages[2].group;
    // reflections of D16 are the elements s·r^i, of order 2 outside ⟨r⟩
    let reflection_classes: Vec<usize> = (8..16).map(|x| d16.conjugacy_class(x)[0]).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    ensure(reflection_classes.len() == 2, || "two reflection classes".into())?;
    let mut seen = std::collections::BTreeSet::new();
    for m in 0..4u64 {
        let coords = BitVec::from_mask(2, m);
        let class = c.stable_basis[2]
            .iter()
            .enumerate()
            .filter(|(i, _)| coords.get(*i))
            .fold(c.last.zero(2), |acc, (_, b)| acc.add(b).unwrap());
        let p = involution_profile(&c.last, &class).map_err(|e| e.to_string())?;
        let values: Vec<bool> = reflection_classes
            .iter()
            .map(|r| p.values[p.class_reps.iter().position(|x| x == r).unwrap()])
            .collect();
        seen.insert(values);
    }
    ensure(seen.len() == 4, || format!("profiles hit {} functions", seen.len()))
}

fn reconstruction_roundtrip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for d1 in 0..=3 {
        for x in 0..=4 {
            for _ in 0..5 {
                let b = BooleanRing::standard(x).scrambled(&mut rng);
                let r = roundtrip(d1, &b, 3, Some(&mut rng)).map_err(|e| format!("({d1}, {x}): {e}"))?;
                ensure(r.isomorphic && r.recovered == (d1, x), || format!("({d1}, {x}) gave {:?}", r.recovered))?;
            }
        }
    }
    for (d1, x, depth, bound) in [(0, 2, 3, 3), (1, 0, 3, 3), (0, 1, 3, 3), (2, 0, 2, 2), (0, 0, 3, 3)] {
        let a = build_connected_sum(d1, &BooleanRing::standard(x), 3).map_err(|e| e.to_string())?;
        let p = reconstruct_presentation(&a).map_err(|e| e.to_string())?;
        let v = verify_reconstruction(&p, &a, depth, bound, &Caps::default()).map_err(|e| e.to_string())?;
        ensure(v.all_match, || format!("({d1}, {x}): {:?}", v.degrees))?;
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("stone duality in scrambled bases", 5, stone_duality),
        ("atoms and orthogonal bases", 5, atom_suite),
        ("completion against the spectrum", 10, completion_vs_spectrum),
        ("random principal bundles", 10, bundle_suite),
        ("cohomology dimensions", 60, cohomology_dimensions),
        ("obstruction oracle and naturality", 60, obstruction_oracle),
        ("lifting-data solver", 5, solver_end_to_end),
        ("quillen map on 2-groups to order 16", 120, quillen_finite),
        ("dihedral tower stabilization", 60, dihedral_tower),
        ("reconstruction round trip", 60, reconstruction_roundtrip),
    ];
    let mut failed = Vec::new();
    println!();
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let failure = match (&outcome, elapsed <= Duration::from_secs(limit)) {
            (Ok(()), true) => None,
            (Ok(()), false) => Some(format!("over the {limit} s bound")),
            (Err(msg), _) => Some(msg.clone()),
        };
        let tag = if failure.is_none() { "PASS" } else { "FAIL" };
        print!("[{tag}] criterion {}: {name} ({:.2} s, limit {limit} s)", i + 1, elapsed.as_secs_f64());
        match failure {
            None => println!(),
            Some(msg) => {
                println!(": {msg}");
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
