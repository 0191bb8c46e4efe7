use bgcrys::exactalg::{Field, WittVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Value in Z/p^N of a Witt vector over F_p: sum p^i [x_i], with the
/// Teichmuller lift [x] = x^{p^{N-1}} mod p^N.
fn integer_value(w: &WittVector, p: u64) -> u64 {
    let n = w.len() as u32;
    let m = p.pow(n);
    let pow_mod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r
    };
    w.coords()
        .iter()
        .enumerate()
        .map(|(i, x)| p.pow(i as u32) * pow_mod(x.coeffs()[0], p.pow(n - 1)) % m)
        .sum::<u64>()
        % m
}

#[test]
fn ring_axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        for d in 1..=2usize {
            let k = Field::new(p, d).unwrap();
            for n in 1..=4usize {
                let triples = if d == 1 { 60 } else { 30 };
                for _ in 0..triples {
                    let a = WittVector::random(&k, n, &mut rng);
                    let b = WittVector::random(&k, n, &mut rng);
                    let c = WittVector::random(&k, n, &mut rng);
                    let zero = WittVector::zero(&k, n);
                    let one = WittVector::one(&k, n);
                    assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                    assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                    assert_eq!(&a + &b, &b + &a);
                    assert_eq!(&a * &b, &b * &a);
                    assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                    assert_eq!(&a + &zero, a);
                    assert_eq!(&a * &one, a);
                    assert!((&a + &(-&a)).is_zero());
                    if d == 1 {
                        let m = p.pow(n as u32);
                        let (x, y) = (integer_value(&a, p), integer_value(&b, p));
                        assert_eq!(integer_value(&(&a + &b), p), (x + y) % m);
                        assert_eq!(integer_value(&(&a * &b), p), x * y % m);
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 1000);
}

/// Every Witt vector of W_N(k).
fn all_vectors(k: &Field, n: usize) -> Vec<WittVector> {
    let q = k.order();
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let coords = (0..n)
                .map(|_| {
                    let e = k.element_from_index(idx % q);
                    idx /= q;
                    e
                })
                .collect();
            WittVector::new(k, coords).unwrap()
        })
        .collect()
}

#[test]
fn fv_and_vf_are_p_exhaustively() {
    for d in 1..=2usize {
        let k = Field::new(2, d).unwrap();
        for n in 1..=3usize {
            let p = WittVector::from_integer(&k, n, 2);
            for x in all_vectors(&k, n) {
                assert_eq!(x.verschiebung().frobenius(), &p * &x);
                assert_eq!(x.frobenius().verschiebung(), &p * &x);
            }
        }
    }
}

#[test]
fn frobenius_is_a_ring_map_of_order_d() {
    let k = Field::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let a = WittVector::random(&k, 3, &mut rng);
        let b = WittVector::random(&k, 3, &mut rng);
        assert_eq!((&a * &b).frobenius(), &a.frobenius() * &b.frobenius());
        assert_eq!((&a + &b).frobenius(), &a.frobenius() + &b.frobenius());
        assert_eq!(a.frobenius().frobenius(), a);
        assert_eq!(a.frobenius().frobenius_inv(), a);
    }
}

proptest! {
    #[test]
    fn integer_embedding_is_a_ring_map(x in 0i64..625, y in 0i64..625) {
        let k = Field::prime(5).unwrap();
        let a = WittVector::from_integer(&k, 4, x);
        let b = WittVector::from_integer(&k, 4, y);
        prop_assert_eq!(integer_value(&a, 5), x as u64);
        prop_assert_eq!(integer_value(&(&a * &b), 5), (x * y % 625) as u64);
        prop_assert_eq!(a.to_integer().unwrap(), x as u128);
    }

    #[test]
    fn units_invert(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Field::new(2, 2).unwrap();
        let a = WittVector::random(&k, 3, &mut rng);
        if a.is_unit() {
            prop_assert_eq!(&a * &a.inverse().unwrap(), WittVector::one(&k, 3));
        } else {
            prop_assert!(a.inverse().is_err());
        }
    }
}
