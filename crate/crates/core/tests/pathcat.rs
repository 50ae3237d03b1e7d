use std::sync::Arc;

use proptest::prelude::*;
use quivhom::pathcat::*;

mod common;
use common::{arb_quiver, build, unit};

#[test]
fn enveloping_dimensions_of_a2() {
    let c = build("vertices 1 2; arrow a: 1 -> 2");
    let e = enveloping(c.category());
    assert_eq!(e.num_objects(), 4);
    let o = |a, b| pair_index(2, a, b);
    assert_eq!(e.dim(o(0, 0), o(0, 1)), 1);
    assert_eq!(e.dim(o(1, 0), o(0, 1)), 1);
    assert_eq!(e.dim(o(0, 0), o(1, 0)), 0);
    e.check_axioms().unwrap();
    // Product formula on every pair of objects.
    let k = c.category();
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        for (a2, b2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_eq!(e.dim(o(a, b), o(a2, b2)), k.dim(a2, a) * k.dim(b, b2));
        }
    }
}

#[test]
fn enveloping_of_dual_numbers() {
    let c = build("truncate 2; vertices p; arrows x: p -> p; relations x*x");
    let e = enveloping(c.category());
    assert_eq!(e.dim(0, 0), 4);
    e.check_axioms().unwrap();
    let labels: Vec<_> = e.basis(0, 0).iter().map(|b| b.label.clone()).collect();
    assert_eq!(labels[3], "x⊗x");
    assert_eq!(e.identity(0), Some(0));
}

#[test]
fn ideal_of_the_target_identity_in_a2() {
    let c = build("vertices 1 2; arrow a: 1 -> 2");
    let k = c.category();
    let f = k.field();
    let i = ideal_from_generators(k, &[(1, 1, k.identity_vector(1))]);
    // Hand closure: C(1,2) = span{id_2 ∘ a}, C(2,2) = span{id_2}, nothing lands in C(1,1).
    assert_eq!((i.dim(0, 0), i.dim(0, 1), i.dim(1, 1), i.dim(1, 0)), (0, 1, 1, 0));
    assert!(i.contains(0, 1, &unit(f, 1, 0)));
    i.check_saturated().unwrap();
    let q = quotient_category(&i).unwrap();
    let qc = q.category();
    assert_eq!((qc.dim(0, 0), qc.dim(0, 1), qc.dim(1, 1)), (1, 0, 0));
    assert_eq!(qc.identity(1), None);
    q.check_functor().unwrap();
    qc.check_axioms().unwrap();
}

#[test]
fn zero_ideal_gives_the_same_category() {
    let c = build("field q; vertices 1 2 3; arrows a: 1 -> 2, b: 2 -> 3, c: 1 -> 3; relations b*a");
    let i = ideal_from_generators(c.category(), &[]);
    assert_eq!(i.total_dim(), 0);
    let q = quotient_category(&i).unwrap();
    assert_eq!(**q.category(), **c.category());
}

#[test]
fn arrow_ideal_of_dual_numbers() {
    let c = build("truncate 2; vertices p; arrows x: p -> p; relations x*x");
    let k = c.category();
    let f = k.field();
    let i = ideal_from_generators(k, &[(0, 0, unit(f, 2, 1))]);
    assert_eq!(i.dim(0, 0), 1);
    assert!(i.contains(0, 0, &unit(f, 2, 1)));
    assert!(!i.contains(0, 0, &unit(f, 2, 0)));
    // x·x = 0, so I² = 0.
    assert_eq!(i.compose_with(&i).total_dim(), 0);
    let q = quotient_category(&i).unwrap();
    assert_eq!(q.category().dim(0, 0), 1);
    assert_eq!(q.category().identity(0), Some(0));
    q.check_functor().unwrap();
}

#[test]
fn ideal_from_declaration() {
    let c = build("vertices 1 2 3; arrows a: 1 -> 2, b: 2 -> 3\nideal I; gen id(2)");
    let ideal = c.ideal(c.spec().ideal("I").unwrap()).unwrap();
    // Everything through vertex 2: id_2, a, b, b*a.
    assert_eq!(ideal.total_dim(), 4);
    assert_eq!(ideal.compose_with(&ideal).total_dim(), 4);
}

#[test]
fn opposite_is_an_involution() {
    let c = build("field q; vertices 1 2 3 4; arrows a: 1 -> 2, b: 2 -> 4, c: 1 -> 3, d: 3 -> 4; relations b*a + d*c");
    let k = c.category();
    let op = opposite(k);
    op.check_axioms().unwrap();
    assert_eq!(op.dim(3, 0), 1);
    assert_eq!(op.dim(0, 3), 0);
    assert_eq!(opposite(&op), **k);
}

#[test]
fn staircase_functor_is_an_isomorphism_onto_itself() {
    let c = build("vertices 1 2 3; arrows a: 1 -> 2, b: 2 -> 3");
    let k = c.category().clone();
    let f = k.field();
    let images = vec![unit(f, 1, 0), unit(f, 1, 0)];
    let func = LinearFunctor::from_arrow_images(&c, k.clone(), vec![0, 1, 2], &images).unwrap();
    func.check().unwrap();
    assert!(func.is_isomorphism());
    // Sending b to zero is still a functor but not an isomorphism.
    let func = LinearFunctor::from_arrow_images(&c, k, vec![0, 1, 2], &[unit(f, 1, 0), vec![f.zero()]]).unwrap();
    func.check().unwrap();
    assert!(!func.is_isomorphism());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructions_satisfy_the_axioms(spec in arb_quiver(), gen_seed in any::<u32>()) {
        let c = build_category(&spec).unwrap();
        let k = c.category();
        k.check_axioms().unwrap();
        let op = opposite(k);
        op.check_axioms().unwrap();
        prop_assert_eq!(&opposite(&op), &**k);
        if k.total_dim() <= 12 {
            let e = enveloping(k);
            e.check_axioms().unwrap();
            let n = k.num_objects();
            for x in 0..n * n {
                for y in 0..n * n {
                    let ((a, b), (a2, b2)) = ((x / n, x % n), (y / n, y % n));
                    prop_assert_eq!(e.dim(x, y), k.dim(a2, a) * k.dim(b, b2));
                }
            }
        }

        // A random generator: one basis element of some nonzero hom space.
        let n = k.num_objects();
        let spaces: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| k.dim(x, y) > 0).collect();
        let (x, y) = spaces[gen_seed as usize % spaces.len()];
        let g = unit(k.field(), k.dim(x, y), (gen_seed as usize / 7) % k.dim(x, y));
        let ideal = ideal_from_generators(k, &[(x, y, g.clone())]);
        prop_assert!(ideal.contains(x, y, &g));
        ideal.check_saturated().unwrap();
        prop_assert!(ideal.saturate().same_as(&ideal));
        let quot = quotient_category(&ideal).unwrap();
        quot.check_functor().unwrap();
        quot.category().check_axioms().unwrap();
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(quot.category().dim(a, b) + ideal.dim(a, b), k.dim(a, b));
            }
        }
    }
}

#[test]
fn quotient_shares_field_and_objects() {
    let c = build("vertices 1 2; arrow a: 1 -> 2");
    let i = IdealData::zero(c.category());
    let q = quotient_category(&i).unwrap();
    assert!(Arc::ptr_eq(q.parent(), c.category()));
    assert_eq!(q.category().objects(), c.category().objects());
}
