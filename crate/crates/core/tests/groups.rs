mod common;

use common::builtin;
use quasibool::freeprod::{abelianized_2torsion, quotient_tower, tower_shape_supported, Presentation};
use quasibool::groups::*;

const WIDE: [&str; 9] = ["S3", "S4", "Z6", "Z12", "D12", "S3xZ2", "S3xF2^2", "D24", "Z3xQ8"];
const ORDER_32: [&str; 7] = ["D32", "Q32", "F2^5", "D8xF2^2", "Z4xZ8", "Q8xZ4", "SD32"];

#[test]
fn hom_count_matches_torsion_quotient() {
    for name in TWO_GROUPS_TO_16.iter().chain(&WIDE).chain(&ORDER_32) {
        let g = builtin(name);
        let z2 = builtin("Z2");
        let homs = homomorphisms(&g, &z2).len();
        assert_eq!(homs, abelian_2torsion_quotient(&g).0.order(), "{name}");
    }
}

#[test]
fn sylow_transfer_claims_hold() {
    for name in WIDE.iter().chain(&TWO_GROUPS_TO_16) {
        let c = builtin(name);
        let (a, f) = abelian_2torsion_quotient(&c);
        for x in c.involutions() {
            let w = sylow_transfer(&f, x).unwrap();
            assert!(w.sylow.order().is_power_of_two() && (c.order() / w.sylow.order()) % 2 == 1);
            let image: std::collections::BTreeSet<usize> = w.sylow.elements().iter().map(|&e| f.apply(e)).collect();
            assert_eq!(image.len(), a.order(), "{name}: the Sylow subgroup maps onto");
            assert!(w.sylow.contains(w.conjugate));
            assert!(c.conjugacy_class(x).contains(&w.conjugate));
            assert_eq!(f.apply(w.conjugate), f.apply(x));
        }
    }
}

#[test]
fn involution_classes_partition_the_involutions() {
    for name in TWO_GROUPS_TO_16.iter().chain(&WIDE) {
        let g = builtin(name);
        let data = involution_data(&g);
        let mut all: Vec<usize> = data.classes.concat();
        all.sort();
        assert_eq!(all, data.involutions, "{name}");
        for class in &data.classes {
            for &t in class {
                for h in 0..g.order() {
                    assert!(class.contains(&g.conj(h, t)));
                }
            }
        }
    }
}

#[test]
fn elementary_abelian_category_is_closed() {
    for name in ["D8", "Q8", "F2^3", "D8xZ2", "Pauli", "S4"] {
        let g = builtin(name);
        let c = elementary_abelian_category(&g);
        for (i, obj) in c.objects.iter().enumerate() {
            assert!(c.find(i, i, obj.elements()).is_some(), "{name}: identity");
        }
        for f in &c.morphisms {
            let tgt = &c.objects[f.target];
            for h in c.morphisms.iter().filter(|h| h.source == f.target) {
                let map: Vec<usize> = f.map.iter().map(|&y| h.map[tgt.elements().binary_search(&y).unwrap()]).collect();
                assert!(c.find(f.source, h.target, &map).is_some(), "{name}: composite");
            }
        }
    }
}

#[test]
fn tower_maps_compose_and_are_onto() {
    for (y, x) in [(1, 0), (0, 1), (0, 2), (2, 0), (0, 0), (1, 1)] {
        let p = Presentation::with_counts(y, x);
        assert_eq!(abelianized_2torsion(&p).order(), 1 << (y + x));
        if !tower_shape_supported(y, x) {
            assert!(quotient_tower(&p, 2).is_err());
            continue;
        }
        let depth = if (y, x) == (2, 0) { 2 } else { 3 };
        let t = quotient_tower(&p, depth).unwrap();
        for m in &t.maps {
            assert!(m.is_surjective());
        }
        for from in 0..t.stages.len() {
            for mid in 0..=from {
                for to in 0..=mid {
                    let direct = t.composite(from, to);
                    let two = t.composite(from, mid).then(&t.composite(mid, to)).unwrap();
                    assert_eq!(direct, two);
                }
            }
        }
    }
}
