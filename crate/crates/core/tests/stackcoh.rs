use bgcrys::barstack::Budget;
use bgcrys::dieudonne::{catalog, CatalogEntry, CatalogModule, SigmaTwist};
use bgcrys::error::Error;
use bgcrys::exactalg::Field;
use bgcrys::homology::{kunneth_graded, Coefficients, FinAbGroup, Grading, Homology};
use bgcrys::specseq::alternating_face_complex;
use bgcrys::stackcoh::{
    abelian_model_stack_cohomology, compare_with_dieudonne, constant_group_stack_cohomology, group_cochains,
    pdivisible_stack_cohomology, CoefficientOracle,
};
use num_bigint::BigInt;

fn zn(n: u64, k: usize) -> FinAbGroup {
    FinAbGroup::power_of_cyclic(&BigInt::from(n), k)
}

#[test]
fn abelian_model_genus_one() {
    let r = abelian_model_stack_cohomology(1, 2, 2, 6, None).unwrap();
    assert!(r.pass(), "{:?}", r.checks);
    for (n, k) in [(0, 1), (2, 2), (4, 3), (6, 4)] {
        assert_eq!(r.groups[&n], zn(4, k));
    }
    for n in [1, 3, 5] {
        assert!(r.groups[&n].is_trivial());
    }
    assert!(r.certificate.as_ref().unwrap().holds);
}

#[test]
fn supersingular_frobenius_on_h2() {
    let f = [vec![0, 1], vec![2, 0]];
    let r = abelian_model_stack_cohomology(1, 2, 2, 2, Some(&f)).unwrap();
    assert!(r.check("F on H^2j is Sym^j F").unwrap().pass);
    // a matrix that does not commute with nothing special still transports
    let f = [vec![1, 1], vec![0, 1]];
    let r = abelian_model_stack_cohomology(1, 3, 2, 4, Some(&f)).unwrap();
    assert!(r.pass(), "{:?}", r.checks);
}

#[test]
fn abelian_model_genus_two() {
    let r = abelian_model_stack_cohomology(2, 3, 1, 4, None).unwrap();
    assert!(r.pass(), "{:?}", r.checks);
    assert_eq!(r.groups[&4], zn(3, 10));
}

#[test]
fn cyclic_p_groups_against_the_catalog() {
    for p in [2u64, 3] {
        let k = Field::prime(p).unwrap();
        for m in 1..=3usize {
            let order = p.pow(m as u32);
            let budget = Budget::default().with_group_cap(27);
            let r = constant_group_stack_cohomology(&FinAbGroup::cyclic(order), p, m, 2, &budget).unwrap();
            assert!(r.pass(), "Z/{order}: {:?}", r.checks);
            assert_eq!(r.stable[&2], FinAbGroup::cyclic(order));
            assert!(r.stable[&1].is_trivial());
            let CatalogModule::Finite(module) = catalog(&CatalogEntry::Constant(m), &k, m).unwrap() else {
                panic!()
            };
            assert_eq!(module.exponents(), &[m]);
            let cmp = compare_with_dieudonne(&CatalogEntry::Constant(m), &k, m).unwrap();
            assert!(cmp.equal, "{cmp:?}");
            assert_eq!(cmp.sigma_twist, SigmaTwist::Identity);
        }
    }
}

#[test]
fn h1_tower_has_multiplication_by_p_transitions() {
    let r = constant_group_stack_cohomology(&FinAbGroup::cyclic(3), 3, 2, 2, &Budget::default()).unwrap();
    let t = &r.towers[&1];
    assert!(t.levels.iter().all(|g| *g == FinAbGroup::cyclic(3)));
    assert!(t.limit.as_ref().unwrap().limit.is_trivial());
}

#[test]
fn klein_four_is_killed_by_four() {
    let g = FinAbGroup::from_orders(&[2, 2]);
    let r = constant_group_stack_cohomology(&g, 2, 2, 3, &Budget::default()).unwrap();
    for n in 1..=3 {
        assert!(r.groups[&n].is_killed_by(&BigInt::from(4)));
    }
    assert_eq!(r.groups[&2], zn(2, 3));
}

#[test]
fn products_follow_kunneth() {
    let (a, b) = (FinAbGroup::cyclic(2), FinAbGroup::cyclic(4));
    let coh = |g: &FinAbGroup| {
        let c = alternating_face_complex(&group_cochains(g, 4).unwrap()).unwrap();
        Homology::compute_degrees(&c, &Coefficients::Integers, false, &[0, 1, 2, 3])
            .unwrap()
            .groups()
    };
    let (ha, hb) = (coh(&a), coh(&b));
    let hab = coh(&a.direct_sum(&b));
    for n in 0..=3 {
        assert_eq!(
            hab[&n],
            kunneth_graded(&ha, &hb, n, Grading::Cohomological),
            "degree {n}"
        );
    }
}

#[test]
fn etale_p_divisible_groups() {
    for h in 1..=2usize {
        for n in 1..=2usize {
            let r = pdivisible_stack_cohomology(h, 2, n, 4).unwrap();
            assert!(r.pass(), "h={h} N={n}: {:?}", r.checks);
            let wn = 2u64.pow(n as u32);
            assert_eq!(r.stable[&2], zn(wn, h));
            assert_eq!(r.stable[&4], zn(wn, h * (h + 1) / 2));
            for t in r.towers.values() {
                assert!(t.limit.as_ref().unwrap().lim1.is_trivial());
            }
        }
    }
    let r = pdivisible_stack_cohomology(1, 3, 2, 2).unwrap();
    assert_eq!(r.stable[&2], FinAbGroup::cyclic(9));
}

#[test]
fn comparison_examples() {
    let f3 = Field::prime(3).unwrap();
    let cmp = compare_with_dieudonne(&"constant(p^2)".parse().unwrap(), &f3, 3).unwrap();
    assert!(cmp.equal);
    assert_eq!(cmp.dieudonne, FinAbGroup::cyclic(9));
    let f2 = Field::prime(2).unwrap();
    let cmp = compare_with_dieudonne(&CatalogEntry::QpZp, &f2, 2).unwrap();
    assert!(cmp.equal);
    assert_eq!(cmp.stack_h2, Some(FinAbGroup::cyclic(4)));
    for name in ["alpha_p", "mu(p^2)", "mu(p^inf)", "W(1,1)"] {
        let e: CatalogEntry = name.parse().unwrap();
        assert!(matches!(compare_with_dieudonne(&e, &f2, 2), Err(Error::OutOfScope(_))));
    }
    let f4 = Field::new(2, 2).unwrap();
    let cmp = compare_with_dieudonne(&CatalogEntry::Constant(1), &f4, 2).unwrap();
    assert_eq!(cmp.sigma_twist, SigmaTwist::UpToSigma);
}

#[test]
fn oracles_are_multiplicative() {
    assert!(CoefficientOracle::AbelianModel { rank: 2 }.check_kunneth(3, 4).unwrap());
    assert!(CoefficientOracle::ConstantGroup(FinAbGroup::cyclic(3))
        .check_kunneth(3, 2)
        .unwrap());
}

#[test]
fn json_is_stable() {
    let r = constant_group_stack_cohomology(&FinAbGroup::cyclic(4), 2, 3, 2, &Budget::default()).unwrap();
    let a = serde_json::to_string(&r.to_json()).unwrap();
    let b = serde_json::to_string(&r.to_json()).unwrap();
    assert_eq!(a, b);
    assert_eq!(r.to_json()["stable"]["2"]["group"], "Z/4");
}
