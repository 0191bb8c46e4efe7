use bgcrys::barstack::bar_complex;
use bgcrys::homology::{homology, Coefficients, FinAbGroup, IntMatrix};
use bgcrys::specseq::{
    alternating_face_complex, closed_form_differential, decalage_check, e1_row, exterior_power,
    hom_complex_and_contraction, run_spectral_sequence, subsets, symmetric_power, synthetic_double_complex,
    synthetic_rows, RunStatus,
};
use bgcrys::stackcoh::group_cochains;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Leibniz determinant of a small dense matrix.
fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0;
    for c in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let s = if c % 2 == 0 { 1 } else { -1 };
        total += s * m[0][c] * det(&minor);
    }
    total
}

proptest! {
    #[test]
    fn exterior_power_entries_are_minors(
        entries in proptest::collection::vec(-3i64..4, 20),
        k in 1usize..4,
    ) {
        let rows: Vec<Vec<i64>> = entries.chunks(5).map(|c| c.to_vec()).collect();
        let m = IntMatrix::from_rows(&rows);
        let e = exterior_power(&m, k);
        for (i, rs) in subsets(4, k).iter().enumerate() {
            for (j, cs) in subsets(5, k).iter().enumerate() {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c]).collect()).collect();
                prop_assert_eq!(e.get(i, j), BigInt::from(det(&minor)));
            }
        }
    }
}

#[test]
fn closed_forms_contractions_and_d_squared() {
    for r in 1..=4 {
        for n in [1u64, 2, 3] {
            let m = BigInt::from(2u64.pow(n as u32));
            let (k, _, rep) = hom_complex_and_contraction(r, 8, Some(&m)).unwrap();
            assert!(rep.pass, "rank {r}: {rep:?}");
            assert!(rep.closed_form_mismatches.is_empty());
            assert!(rep.first_differential_zero);
            // d^2 = 0 on the closed forms themselves
            for d in 1..8 {
                let dd = closed_form_differential(r, d + 1)
                    .mul(&closed_form_differential(r, d))
                    .unwrap();
                assert!(dd.is_zero());
            }
            assert_eq!(k.rank(8), 8 * r);
        }
        let (_, _, exact) = hom_complex_and_contraction(r, 8, None).unwrap();
        assert!(exact.pass);
    }
}

#[test]
fn rank_two_row_matches_printed_differentials() {
    let row = e1_row(2, 1, 4).unwrap();
    // d_2(v1, v2) = (-v1, 0, v2) on V = Z^2
    let d2 = IntMatrix::from_rows(&[
        vec![-1, 0, 0, 0],
        vec![0, -1, 0, 0],
        vec![0, 0, 0, 0],
        vec![0, 0, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
    ]);
    assert_eq!(row.outgoing(2), Some(&d2));
    assert!(row.outgoing(1).unwrap().is_zero());
}

/// Number of size-j multisets from r letters, by enumeration.
fn count_multisets(r: usize, j: usize) -> usize {
    fn rec(start: usize, r: usize, left: usize) -> usize {
        if left == 0 {
            return 1;
        }
        (start..r).map(|x| rec(x, r, left - 1)).sum()
    }
    rec(0, r, j)
}

#[test]
fn decalage_gives_symmetric_powers() {
    for r in [1usize, 2, 4] {
        for j in 0..=3usize {
            for coeffs in [
                Coefficients::witt(2, 2),
                Coefficients::witt(3, 1),
                Coefficients::Integers,
            ] {
                let bound = j + 2;
                let rep = decalage_check(r, j, bound, &coeffs).unwrap();
                assert!(rep.pass, "rank {r} j {j}: {:?}", rep.cohomology);
                assert_eq!(rep.sym_rank, count_multisets(r, j));
            }
        }
    }
    let rep = decalage_check(4, 1, 6, &Coefficients::witt(2, 2)).unwrap();
    assert!(rep.pass);
}

#[test]
fn group_cochains_are_the_dual_bar_complex() {
    for orders in [vec![2u64], vec![3], vec![2, 2], vec![4]] {
        let g = FinAbGroup::from_orders(&orders);
        let c = alternating_face_complex(&group_cochains(&g, 3).unwrap()).unwrap();
        assert_eq!(c, bar_complex(&g, 3).unwrap().dual());
    }
}

#[test]
fn constant_rows_abut_to_group_cohomology() {
    let g = FinAbGroup::cyclic(4);
    let row = alternating_face_complex(&group_cochains(&g, 4).unwrap()).unwrap();
    let run = run_spectral_sequence(&[row.clone()], &Coefficients::Integers, 2, None).unwrap();
    assert!(run.certificate.holds);
    let direct = homology(&row, &Coefficients::Integers).unwrap();
    for n in 0..=2usize {
        assert_eq!(run.abutment[&n].group.as_ref(), Some(&direct[&(n as i64)]));
    }
    assert_eq!(direct[&2], FinAbGroup::cyclic(4));
}

#[test]
fn synthetic_double_complex_has_nonzero_d2() {
    let rows = synthetic_rows();
    let dc = synthetic_double_complex();
    let run = run_spectral_sequence(&rows, &Coefficients::Integers, 2, Some(&dc)).unwrap();
    assert_eq!(run.status, RunStatus::DoubleComplex);
    assert_ne!(run.pages[0].entries, run.pages[1].entries);
    // the total complex, by hand: d x = a, d b = -a + c, acyclic
    let total = dc.total_complex().unwrap();
    let h = homology(&total, &Coefficients::Integers).unwrap();
    assert!(h.values().all(|g| g.is_trivial()));
    let json = run.pages[0].to_json();
    assert_eq!(json["entries"]["0,1"]["free_rank"], 1);
}

#[test]
fn symmetric_power_of_identity_is_identity() {
    for r in 1..=4 {
        for j in 0..=3 {
            let s = symmetric_power(&IntMatrix::identity(r), j);
            assert_eq!(s, IntMatrix::identity(count_multisets(r, j)));
        }
    }
}
