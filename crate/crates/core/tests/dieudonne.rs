use bgcrys::dieudonne::{
    canonical_form, catalog, is_truncation_stable, module_from_presentation, CatalogEntry, CatalogModule,
    DieudonneElement, DieudonneModule, Expression, Letter,
};
use bgcrys::exactalg::{Field, WittVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Length of D/(D F^m + D V^n) over W_N(F_p), computed from the presentation.
/// Over F_p the ring is W_N[F, V]/(FV - p); monomials F^k (k >= 0) and V^k
/// (k > 0) span it. Relations are all x F^m and x V^n with x a monomial.
fn presentation_length(p: i64, m: i64, n: i64, big_n: u32) -> u32 {
    let bound = m + n + 2;
    let dim = (2 * bound + 1) as usize;
    let col = |k: i64| (k + bound) as usize;
    // product of monomials with signed exponents a and b: p^e X^{a+b}
    let mul = |a: i64, b: i64| -> (i64, u32) {
        let e = if (a > 0 && b < 0) || (a < 0 && b > 0) {
            a.abs().min(b.abs())
        } else {
            0
        };
        (a + b, e as u32)
    };
    let modulus = p.pow(big_n);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for x in -bound..=bound {
        for r in [m, -n] {
            let (k, e) = mul(x, r);
            let mut row = vec![0; dim];
            if k.abs() <= bound {
                row[col(k)] = p.pow(e) % modulus;
            }
            rows.push(row);
        }
    }
    // monomials beyond the window lie in the relation span already
    for k in -bound..=bound {
        if k >= m || k <= -n {
            let mut row = vec![0; dim];
            row[col(k)] = 1;
            rows.push(row);
        }
    }
    // elementary divisors over Z/p^N by least-valuation pivoting
    let val = |x: i64| -> u32 {
        let x = x.rem_euclid(modulus);
        if x == 0 {
            big_n
        } else {
            let (mut x, mut v) = (x, 0);
            while x % p == 0 {
                x /= p;
                v += 1;
            }
            v
        }
    };
    let inv = |u: i64| -> i64 {
        (1..modulus)
            .find(|y| (u.rem_euclid(modulus) * y) % modulus == 1)
            .unwrap()
    };
    let mut killed = 0;
    let mut used_rows = vec![false; rows.len()];
    let mut used_cols = vec![false; dim];
    loop {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, r) in rows.iter().enumerate() {
            if used_rows[i] {
                continue;
            }
            for (j, &x) in r.iter().enumerate() {
                if !used_cols[j] && val(x) < big_n && best.map_or(true, |b| val(x) < b.2) {
                    best = Some((i, j, val(x)));
                }
            }
        }
        let Some((pi, pj, v)) = best else { break };
        used_rows[pi] = true;
        used_cols[pj] = true;
        killed += big_n - v;
        let unit = rows[pi][pj] / p.pow(v);
        let ui = inv(unit);
        let pivot = rows[pi].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if used_rows[i] || r[pj] == 0 {
                continue;
            }
            let q = ((r[pj] / p.pow(v)) % modulus * ui) % modulus;
            for j in 0..dim {
                r[j] = (r[j] - q * pivot[j]).rem_euclid(modulus);
            }
        }
    }
    // the ambient window is (Z/p^N)^dim; the quotient length is what is left
    dim as u32 * big_n - killed
}

#[test]
fn presentation_length_matches_nm() {
    for p in [2u64, 3] {
        let k = Field::prime(p).unwrap();
        for n in 1..=3usize {
            for m in 1..=3usize {
                let big_n = n + m + 1;
                let module = module_from_presentation(&k, m, n, big_n).unwrap();
                assert_eq!(module.w_length(), n * m, "p={p} n={n} m={m}");
                assert_eq!(
                    presentation_length(p as i64, m as i64, n as i64, big_n as u32),
                    (n * m) as u32
                );
                assert!(is_truncation_stable(&k, m, n, big_n).unwrap());
                let bigger = module_from_presentation(&k, m, n, big_n + 1).unwrap();
                assert_eq!(bigger.w_length(), n * m);
                assert!(module.check_axioms().pass);
            }
        }
    }
}

#[test]
fn presentation_over_extension_field() {
    let k = Field::new(2, 2).unwrap();
    let module = module_from_presentation(&k, 2, 2, 5).unwrap();
    assert_eq!(module.w_length(), 4);
    assert!(module.check_axioms().pass);
}

#[test]
fn f_plus_v_squared_acts_as_expected() {
    let k = Field::prime(3).unwrap();
    let len = 5;
    let f = DieudonneElement::f(&k, len);
    let v = DieudonneElement::v(&k, len);
    let s = &f + &v;
    let lhs = s.pow(2).unwrap();
    let two_p = DieudonneElement::scalar(WittVector::from_integer(&k, len, 6));
    let rhs = &(&(&f * &f) + &two_p) + &(&v * &v);
    assert_eq!(lhs, rhs);
    // as operators on a module
    let module = module_from_presentation(&k, 2, 2, len).unwrap();
    for j in 0..module.rank() {
        let x = module.basis_vector(j);
        let once = module.add(&module.apply_f(&x), &module.apply_v(&x));
        let twice = module.add(&module.apply_f(&once), &module.apply_v(&once));
        assert_eq!(module.act(&lhs, &x).unwrap(), twice);
    }
}

fn random_word(k: &Field, len: usize, rng: &mut ChaCha8Rng) -> Vec<Letter> {
    let l = rng.gen_range(0..7);
    (0..l)
        .map(|_| match rng.gen_range(0..3) {
            0 => Letter::F,
            1 => Letter::V,
            _ => Letter::Scalar(WittVector::random(k, len, rng)),
        })
        .collect()
}

fn random_expression(k: &Field, len: usize, rng: &mut ChaCha8Rng) -> Expression {
    let terms = rng.gen_range(1..4);
    (0..terms).fold(Expression::new(k, len), |e, _| {
        e.plus(Expression::word(k, len, random_word(k, len, rng)))
    })
}

#[test]
fn random_words_reduce_consistently() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let fields = [
        Field::prime(2).unwrap(),
        Field::prime(3).unwrap(),
        Field::new(2, 2).unwrap(),
    ];
    for i in 0..500 {
        let k = &fields[i % fields.len()];
        let len = 1 + i % 3;
        let a = random_expression(k, len, &mut rng);
        let b = random_expression(k, len, &mut rng);
        let ca = canonical_form(&a).unwrap();
        let cb = canonical_form(&b).unwrap();
        assert_eq!(canonical_form(&ca.to_expression()).unwrap(), ca);
        assert_eq!(canonical_form(&a.times(&b)).unwrap(), &ca * &cb);
    }
}

proptest! {
    #[test]
    fn product_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Field::new(3, 2).unwrap();
        let mut e = || canonical_form(&random_expression(&k, 2, &mut ChaCha8Rng::seed_from_u64(rng.gen()))).unwrap();
        let (a, b, c) = (e(), e(), e());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn action_is_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Field::prime(2).unwrap();
        let module = module_from_presentation(&k, 2, 1, 4).unwrap();
        let a = canonical_form(&random_expression(&k, 4, &mut rng)).unwrap();
        let b = canonical_form(&random_expression(&k, 4, &mut rng)).unwrap();
        for j in 0..module.rank() {
            let x = module.basis_vector(j);
            let lhs = module.act(&(&a * &b), &x).unwrap();
            let rhs = module.act(&a, &module.act(&b, &x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn catalog_entries_satisfy_axioms() {
    for p in [2u64, 3, 5] {
        let k = Field::prime(p).unwrap();
        for name in ["constant(p^2)", "mu(p^2)", "alpha_p", "W(2,1)", "W(1,3)"] {
            let entry: CatalogEntry = name.parse().unwrap();
            match catalog(&entry, &k, 4).unwrap() {
                CatalogModule::Finite(m) => {
                    assert!(m.check_axioms().pass, "{name} p={p}");
                    let expected = match entry {
                        CatalogEntry::Constant(n) | CatalogEntry::Mu(n) => n,
                        CatalogEntry::AlphaP => 1,
                        CatalogEntry::WittKernel { n, m } => n * m,
                        _ => unreachable!(),
                    };
                    assert_eq!(m.w_length(), expected);
                    let back = DieudonneModule::from_json(&m.to_json()).unwrap();
                    assert_eq!(back, m);
                }
                CatalogModule::PDivisible(_) => panic!("{name} should be finite"),
            }
        }
        for (name, h) in [("Qp/Zp", 1), ("mu(p^inf)", 1), ("height_2_etale", 2)] {
            let entry: CatalogEntry = name.parse().unwrap();
            let CatalogModule::PDivisible(m) = catalog(&entry, &k, 3).unwrap() else {
                panic!("{name} should be p-divisible")
            };
            let r = m.check().unwrap();
            assert_eq!(r.height, h);
            assert!(r.p_in_image);
            for n in 1..=3 {
                let t = m.truncate(n).unwrap();
                assert!(t.check_axioms().pass);
                assert_eq!(t.w_length(), n * h);
            }
        }
    }
}

#[test]
fn supersingular_frobenius_has_v() {
    let k = Field::prime(2).unwrap();
    let e = |x| WittVector::from_integer(&k, 3, x);
    let f = vec![vec![e(0), e(1)], vec![e(2), e(0)]];
    let m = bgcrys::dieudonne::PDivisibleModule::new(&k, 3, f).unwrap();
    let r = m.check().unwrap();
    assert_eq!(r.f_valuations.iter().sum::<usize>(), 1);
    assert_eq!(r.dimension, 1);
    assert!(m.truncate(3).unwrap().check_axioms().pass);
}

#[test]
fn non_divisible_frobenius_is_rejected() {
    let k = Field::prime(3).unwrap();
    let f = vec![vec![WittVector::from_integer(&k, 3, 9)]];
    let m = bgcrys::dieudonne::PDivisibleModule::new(&k, 3, f).unwrap();
    assert!(!m.check().unwrap().p_in_image);
    assert!(m.v_matrix().is_err());
}
