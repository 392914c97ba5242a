#![allow(dead_code)]

use std::sync::Arc;

use quasibool::embed::EmbeddingProblem;
use quasibool::groups::{group_quotient, homomorphisms, FiniteGroup, GroupHom};

pub fn builtin(name: &str) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::builtin(name).unwrap())
}

/// Searches every normalized set-section of `α` over `φ` for a homomorphism.
pub fn exhaustive_lift(e: &EmbeddingProblem) -> Option<Vec<usize>> {
    let g = e.g();
    let b = e.b();
    let n = g.order();
    let fibres: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..b.order()).filter(|&y| e.alpha().apply(y) == e.phi().apply(x)).collect())
        .collect();
    assert!(fibres.iter().all(|f| f.len() == 2));
    for mask in 0u64..(1 << (n - 1)) {
        let s: Vec<usize> = (0..n)
            .map(|x| if x == 0 { 0 } else { fibres[x][((mask >> (x - 1)) & 1) as usize] })
            .collect();
        if s[0] != 0 {
            continue;
        }
        let hom = (1..n).all(|x| (1..n).all(|y| s[g.mul(x, y)] == b.mul(s[x], s[y])));
        if hom {
            return Some(s);
        }
    }
    None
}

/// Central problems with kernel of order 2: `B ↠ B/⟨z⟩` for central
/// involutions `z`, pulled back along homomorphisms from small 2-groups.
pub fn central_corpus(limit: usize) -> Vec<EmbeddingProblem> {
    central_corpus_over(limit, &["Z2", "F2^2", "Z4", "D8", "Q8", "Z4xZ2", "F2^3"])
}

pub fn central_corpus_over(limit: usize, gs: &[&str]) -> Vec<EmbeddingProblem> {
    let bs = ["Z4", "F2^2", "Z8", "Z4xZ2", "F2^3", "D8", "Q8", "D16", "Q16", "SD16", "Z4:Z4", "Pauli", "D8xZ2"];
    let mut out = Vec::new();
    for bn in bs {
        let b = builtin(bn);
        for &z in b.center().elements() {
            if z == 0 || b.element_order(z) != 2 {
                continue;
            }
            let (a, alpha) = group_quotient(&b, &b.generated(&[z])).unwrap();
            for &gn in gs {
                let g = builtin(gn);
                let homs = homomorphisms(&g, &a);
                // a spread of maps, always including the trivial one
                let step = (homs.len() / 3).max(1);
                for phi in homs.into_iter().step_by(step) {
                    out.push(EmbeddingProblem::new(phi, alpha.clone()).unwrap());
                    if out.len() == limit {
                        return out;
                    }
                }
            }
        }
    }
    out
}

pub fn hom(s: &Arc<FiniteGroup>, t: &Arc<FiniteGroup>, f: impl Fn(usize) -> usize) -> GroupHom {
    GroupHom::new(s.clone(), t.clone(), (0..s.order()).map(f).collect()).unwrap()
}

/// `Z/2 → Z/2` lifted through `Z/4 ↠ Z/2`.
pub fn z4_problem() -> EmbeddingProblem {
    let z2 = builtin("Z2");
    let z4 = builtin("Z4");
    EmbeddingProblem::new(GroupHom::identity(z2.clone()), hom(&z4, &z2, |x| x % 2)).unwrap()
}
