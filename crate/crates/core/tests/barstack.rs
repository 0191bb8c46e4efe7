use std::collections::BTreeMap;

use bgcrys::barstack::{
    bar_complex, cyclic_resolution_homology, exterior_square, group_homology, kan_classifying, Budget,
};
use bgcrys::homology::{homology, kunneth, Coefficients, FinAbGroup};
use num_bigint::BigInt;
use num_traits::Zero;

fn g(orders: &[u64]) -> FinAbGroup {
    FinAbGroup::from_orders(orders)
}

fn abelian_p_groups_up_to_16() -> Vec<Vec<u64>> {
    vec![
        vec![2],
        vec![4],
        vec![2, 2],
        vec![8],
        vec![2, 4],
        vec![2, 2, 2],
        vec![16],
        vec![2, 8],
        vec![4, 4],
        vec![2, 2, 4],
        vec![2, 2, 2, 2],
        vec![3],
        vec![9],
        vec![3, 3],
        vec![5],
        vec![7],
        vec![11],
        vec![13],
    ]
}

#[test]
fn bar_matches_periodic_resolution_for_cyclic_groups() {
    for n in 2..=6u64 {
        for coeffs in [Coefficients::Integers, Coefficients::Mod(BigInt::from(4))] {
            let bar = group_homology(&g(&[n]), 4, &coeffs, false, &Budget::default()).unwrap();
            let per = cyclic_resolution_homology(n, &coeffs, 4).unwrap();
            assert_eq!(bar, per, "Z/{n}");
        }
    }
}

#[test]
fn low_degrees_of_small_p_groups() {
    for orders in abelian_p_groups_up_to_16() {
        let grp = g(&orders);
        let h = group_homology(&grp, 2, &Coefficients::Integers, true, &Budget::default()).unwrap();
        assert_eq!(h[&0], FinAbGroup::free(1), "{grp}");
        assert_eq!(h[&1], grp, "{grp}");
        assert_eq!(h[&2], exterior_square(&grp), "{grp}");
    }
}

#[test]
fn exterior_square_against_bar_h2() {
    for orders in [vec![2, 4], vec![2, 2, 2]] {
        let grp = g(&orders);
        let h = group_homology(&grp, 2, &Coefficients::Integers, false, &Budget::default()).unwrap();
        assert_eq!(h[&2], exterior_square(&grp));
    }
}

#[test]
fn invariant_factors_divide_group_order() {
    for orders in abelian_p_groups_up_to_16() {
        let grp = g(&orders);
        let size = grp.order().unwrap();
        let h = group_homology(&grp, 3, &Coefficients::Integers, true, &Budget::default()).unwrap();
        for i in 1..=3 {
            assert!(h[&i].is_finite());
            for d in &h[&i].torsion {
                assert!((&size % d).is_zero(), "{grp}: H_{i} has factor {d}");
            }
        }
    }
}

#[test]
fn normalized_and_unnormalized_agree() {
    for orders in [vec![2], vec![3], vec![4], vec![2, 2], vec![5], vec![6]] {
        let grp = g(&orders);
        let a = group_homology(&grp, 3, &Coefficients::Integers, false, &Budget::default()).unwrap();
        let b = group_homology(&grp, 3, &Coefficients::Integers, true, &Budget::default()).unwrap();
        assert_eq!(a, b, "{grp}");
    }
}

#[test]
fn kunneth_matches_bar_of_products() {
    for a in 2..=4u64 {
        for b in 2..=4u64 {
            let ha = group_homology(&g(&[a]), 3, &Coefficients::Integers, true, &Budget::default()).unwrap();
            let hb = group_homology(&g(&[b]), 3, &Coefficients::Integers, true, &Budget::default()).unwrap();
            let hab = group_homology(&g(&[a, b]), 3, &Coefficients::Integers, true, &Budget::default()).unwrap();
            for n in 0..=3 {
                assert_eq!(kunneth(&ha, &hb, n), hab[&n], "Z/{a} x Z/{b}, degree {n}");
            }
        }
    }
}

#[test]
fn universal_coefficients_on_bar_complexes() {
    for orders in [vec![2], vec![4], vec![2, 2], vec![3]] {
        let grp = g(&orders);
        let c = bar_complex(&grp, 4).unwrap();
        let hz = homology(&c, &Coefficients::Integers).unwrap();
        for m in [2u64, 4, 9] {
            let mb = BigInt::from(m);
            let hm = homology(&c, &Coefficients::Mod(mb.clone())).unwrap();
            let zm = g(&[m]);
            for n in 1..=3 {
                let expect = hz[&n].tensor(&zm).direct_sum(&hz[&(n - 1)].tor(&zm));
                assert_eq!(hm[&n], expect, "{grp} with Z/{m}, degree {n}");
            }
        }
    }
}

#[test]
fn z2_with_z4_coefficients() {
    let c = bar_complex(&g(&[2]), 3).unwrap();
    let h = homology(&c, &Coefficients::Mod(BigInt::from(4))).unwrap();
    assert_eq!(h[&1], g(&[2]));
    assert_eq!(h[&2], g(&[2]));
}

#[test]
fn eilenberg_maclane_z2_level_two() {
    let k = kan_classifying(&g(&[2]), 2, 3, &Budget::default()).unwrap();
    let expect: BTreeMap<i64, FinAbGroup> = [
        (0, FinAbGroup::free(1)),
        (1, FinAbGroup::trivial()),
        (2, g(&[2])),
        (3, FinAbGroup::trivial()),
    ]
    .into_iter()
    .collect();
    assert_eq!(k.homology, expect);
}

#[test]
fn eilenberg_maclane_z3_level_one_is_bar() {
    let k = kan_classifying(&g(&[3]), 1, 3, &Budget::default()).unwrap();
    let h = group_homology(&g(&[3]), 3, &Coefficients::Integers, false, &Budget::default()).unwrap();
    assert_eq!(k.homology, h);
}
