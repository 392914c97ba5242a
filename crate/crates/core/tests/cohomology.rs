mod common;

use std::sync::Arc;

use common::builtin;
use proptest::prelude::*;
use quasibool::cohomology::{induced_map, CohomClass, involution_profile, quillen_map, BarComplex, Caps, GroupCohomology};
use quasibool::gf2::BitVec;
use quasibool::groups::{abelian_2torsion_quotient, FiniteGroup, GroupHom, TWO_GROUPS_TO_16};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus() -> Vec<Arc<FiniteGroup>> {
    TWO_GROUPS_TO_16.iter().chain(&["S3", "S4", "Z3", "Z6"]).map(|n| builtin(n)).collect()
}

fn random_vec(len: usize, rng: &mut ChaCha8Rng) -> BitVec {
    BitVec::from_bools(&(0..len).map(|_| rng.gen()).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundary_squares_to_zero(g in 0usize..26, n in 1usize..4, seed in any::<u64>()) {
        let g = corpus()[g].clone();
        let bar = BarComplex::new(g, Caps::default()).unwrap();
        prop_assume!(bar.dim(n + 2).is_ok());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_vec(bar.dim(n).unwrap(), &mut rng);
        let df = bar.coboundary(&f, n).unwrap();
        prop_assert!(bar.coboundary(&df, n + 1).unwrap().is_zero());
    }

    #[test]
    fn squaring_is_additive_in_degree_one(g in 0usize..22, seed in any::<u64>()) {
        let g = corpus()[g].clone();
        let coh = GroupCohomology::new(g, 2, &Caps::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = coh.dim(1);
        let class = |rng: &mut ChaCha8Rng| CohomClass { degree: 1, coords: random_vec(d, rng) };
        let (c, e) = (class(&mut rng), class(&mut rng));
        let sum = c.add(&e).unwrap();
        let lhs = coh.cup(&sum, &sum).unwrap();
        let rhs = coh.cup(&c, &c).unwrap().add(&coh.cup(&e, &e).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn first_cohomology_is_the_torsion_quotient() {
    for g in corpus() {
        let coh = GroupCohomology::new(g.clone(), 1, &Caps::default()).unwrap();
        let q = abelian_2torsion_quotient(&g).0.order();
        assert_eq!(1usize << coh.dim(1), q);
    }
}

#[test]
fn restriction_to_order_two_subgroups_is_eventually_nonzero() {
    let caps = Caps {
        max_degree: 6,
        ..Caps::default()
    };
    let z2 = builtin("Z2");
    let coh_z2 = GroupCohomology::new(z2.clone(), 6, &caps).unwrap();
    for name in TWO_GROUPS_TO_16.iter().filter(|n| builtin(n).order() <= 8).chain(&["D16", "Q16", "S4"]) {
        let g = builtin(name);
        let coh = GroupCohomology::new(g.clone(), 6, &caps).unwrap();
        for t in g.involutions() {
            let incl = GroupHom::new(z2.clone(), g.clone(), vec![0, t]).unwrap();
            let m = induced_map(&incl, &coh, &coh_z2, 6).unwrap();
            assert!((1..=6).any(|n| m.rank(n) > 0), "{name}: restriction to <{t}> vanishes");
        }
    }
}

#[test]
fn profiles_do_not_depend_on_representatives() {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["D8", "Q8", "F2^3", "D16", "Z4xZ2", "S4"] {
        let g = builtin(name);
        let coh = GroupCohomology::new(g.clone(), 3, &caps).unwrap();
        let bar = BarComplex::new(g.clone(), caps.clone()).unwrap();
        for n in 1..=3 {
            for c in coh.elements(n).unwrap() {
                let p = involution_profile(&coh, &c).unwrap();
                let rep = bar.coboundary(&random_vec(bar.dim(n - 1).unwrap(), &mut rng), n - 1).unwrap();
                let z = coh.bar_representative(&c).unwrap().xor(&rep);
                for (rep_t, &value) in p.class_reps.iter().zip(&p.values) {
                    for t in g.conjugacy_class(*rep_t) {
                        assert_eq!(z.get(bar.tuple_index(&vec![t; n])), value, "{name} degree {n}");
                    }
                }
            }
        }
    }
}

#[test]
fn quillen_map_is_clean_on_small_groups() {
    for name in TWO_GROUPS_TO_16.iter().filter(|n| builtin(n).order() <= 8) {
        let g = builtin(name);
        for n in 1..=2 {
            let r = quillen_map(&g, n, 4, 2, &Caps::default()).unwrap();
            assert!(r.clean, "{name} in degree {n}");
        }
    }
}
