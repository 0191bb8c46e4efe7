use bgcrys::homology::{
    homology, invariant_factors, smith_normal_form, tower_limit, ChainComplex, Coefficients, FinAbGroup, IntMatrix,
    Tower,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn det(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x).collect())
                .collect();
            (if c % 2 == 0 { 1 } else { -1 }) * m[0][c] * det(&minor)
        })
        .sum()
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = choose(n - 1, k);
    for mut s in choose(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Determinantal divisors: gcd of all k x k minors.
fn determinantal_divisor(rows: &[Vec<i64>], k: usize) -> BigInt {
    let (r, c) = (rows.len(), rows[0].len());
    let mut g = BigInt::zero();
    for rs in choose(r, k) {
        for cs in choose(c, k) {
            let minor: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
            g = g.gcd(&BigInt::from(det(&minor)));
        }
    }
    g
}

fn dense_det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::from(1);
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != c)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let s = if c % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
            s * &m[0][c] * dense_det(&minor)
        })
        .sum()
}

proptest! {
    #[test]
    fn smith_form_is_certified(entries in proptest::collection::vec(-6i64..7, 12)) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        let d = s.u_matrix().mul(&m).unwrap().mul(&s.v_matrix()).unwrap();
        prop_assert_eq!(d, s.d_matrix(3, 4));
        prop_assert!(dense_det(&s.u).abs() == BigInt::from(1));
        prop_assert!(dense_det(&s.v).abs() == BigInt::from(1));
        for w in s.diagonal[..s.rank].windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        // d_1 ... d_k = gcd of k x k minors
        let mut prod = BigInt::from(1);
        for k in 1..=3 {
            let dk = determinantal_divisor(&rows, k);
            if k <= s.rank {
                prod *= s.diagonal[k - 1].abs();
                prop_assert_eq!(&prod, &dk);
            } else {
                prop_assert!(dk.is_zero());
            }
        }
        prop_assert_eq!(invariant_factors(&m).len(), s.rank);
    }

    #[test]
    fn two_term_complex_homology(a in -12i64..13, b in -12i64..13) {
        // Z --(a, b)--> Z^2
        let c = ChainComplex::cohomological(0, vec![1, 2], vec![IntMatrix::from_rows(&[vec![a], vec![b]])]).unwrap();
        let h = homology(&c, &Coefficients::Integers).unwrap();
        let g = BigInt::from(a).gcd(&BigInt::from(b));
        if g.is_zero() {
            prop_assert_eq!(&h[&0], &FinAbGroup::free(1));
            prop_assert_eq!(&h[&1], &FinAbGroup::free(2));
        } else {
            prop_assert!(h[&0].is_trivial());
            prop_assert_eq!(&h[&1], &FinAbGroup::free(1).direct_sum(&FinAbGroup::from_diagonal([g])));
        }
    }
}

#[test]
fn reduction_tower_stabilizes_at_truncation() {
    // Z/p^min(n, N) in n with reduction maps: limit Z/p^N
    for p in [2u64, 3] {
        for big_n in 1..=3u32 {
            let orders = (1..=big_n + 3)
                .map(|n| vec![BigInt::from(p.pow(n.min(big_n)))])
                .collect();
            let maps = vec![IntMatrix::identity(1); big_n as usize + 2];
            let l = tower_limit(&Tower::new(orders, maps).unwrap()).unwrap();
            assert_eq!(l.limit, FinAbGroup::cyclic(p.pow(big_n)));
            assert!(l.lim1.is_trivial());
        }
    }
}

#[test]
fn json_round_trip_of_complexes() {
    let c = ChainComplex::homological(0, vec![1, 2], vec![IntMatrix::from_rows(&[vec![2, 0]])]).unwrap();
    assert_eq!(ChainComplex::from_json(&c.to_json()).unwrap(), c);
}
