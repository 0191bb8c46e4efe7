use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::cosimplicial::{alternating_face_complex, CosimplicialModule};
use super::exterior::{binomial, exterior_power};
use crate::error::{Error, Result};
use crate::homology::{
    verify_homotopy_through, ChainComplex, Coefficients, FinAbGroup, Homology, HomotopyReport, IntMatrix,
};

fn block_matrix(rows: usize, cols: usize, r: usize, entries: &[(usize, usize, i64)]) -> IntMatrix {
    // entries (block row, block col, scalar) on r x r identity blocks
    let mut columns = vec![Vec::new(); cols * r];
    for &(bi, bj, s) in entries {
        if s == 0 {
            continue;
        }
        for t in 0..r {
            columns[bj * r + t].push((bi * r + t, BigInt::from(s)));
        }
    }
    for c in columns.iter_mut() {
        c.sort_by_key(|e| e.0);
    }
    IntMatrix::from_columns(rows * r, columns)
}

/// delta^k : V^{i-1} -> V^i on H^1 of the levels of BA, V of rank r.
/// Block c of the output is v_c for c <= k and v_{c-1} otherwise (blocks
/// numbered from 1, v_0 = v_i = 0): delta^0 prepends 0, delta^i appends 0
/// and the inner cofaces duplicate a coordinate.
pub fn h1_coface(r: usize, level: usize, k: usize) -> IntMatrix {
    let mut entries = Vec::new();
    for c in 1..=level {
        let src = if c <= k { c } else { c - 1 };
        if src >= 1 && src < level {
            entries.push((c - 1, src - 1, 1));
        }
    }
    block_matrix(level, level - 1, r, &entries)
}

/// The cosimplicial module Lambda^j(V^{+i}), levels 0..=top, V of rank r.
pub fn e1_row_cosimplicial(r: usize, j: usize, top: usize) -> Result<CosimplicialModule> {
    let ranks = (0..=top).map(|i| binomial(r * i, j)).collect();
    let cofaces = (0..=top)
        .map(|i| {
            if i == 0 {
                Vec::new()
            } else {
                (0..=i).map(|k| exterior_power(&h1_coface(r, i, k), j)).collect()
            }
        })
        .collect();
    CosimplicialModule::new(ranks, cofaces)
}

/// The row E_1^{*,j} of the abelian-variety model: the alternating face
/// complex of Lambda^j(V^{+i}), degrees 0..=top.
pub fn e1_row(r: usize, j: usize, top: usize) -> Result<ChainComplex> {
    alternating_face_complex(&e1_row_cosimplicial(r, j, top)?)
}

/// Closed form of d_n : V^n -> V^{n+1} on the row j = 1:
/// (-v_1, 0, v_2 - v_3, 0, ..., v_n) for even n and
/// (0, v_2, v_2, v_4, v_4, ..., 0) for odd n.
pub fn closed_form_differential(r: usize, n: usize) -> IntMatrix {
    let mut entries = Vec::new();
    for c in 1..=n + 1 {
        if n % 2 == 0 {
            if c % 2 == 1 {
                if c >= 2 {
                    entries.push((c - 1, c - 2, 1));
                }
                if c <= n {
                    entries.push((c - 1, c - 1, -1));
                }
            }
        } else if c % 2 == 0 {
            if c <= n {
                entries.push((c - 1, c - 1, 1));
            }
        } else if c >= 2 {
            entries.push((c - 1, c - 2, 1));
        }
    }
    block_matrix(n + 1, n, r, &entries)
}

/// The contraction h_i : V^i -> V^{i-1} of the row j = 1:
/// h_i = 0 for i <= 2, (0, v_2, 0, v_4, ..., v_{i-2}, 0) for even i and
/// (-v_1, 0, -v_3, ..., -v_{i-2}, v_i) for odd i.
pub fn contraction_homotopy(r: usize, i: usize) -> IntMatrix {
    let out = i.saturating_sub(1);
    let mut entries = Vec::new();
    if i >= 3 {
        for c in 1..=out {
            if i % 2 == 0 {
                if c % 2 == 0 && c <= i - 2 {
                    entries.push((c - 1, c - 1, 1));
                }
            } else if c == i - 1 {
                entries.push((c - 1, i - 1, 1));
            } else if c % 2 == 1 {
                entries.push((c - 1, c - 1, -1));
            }
        }
    }
    block_matrix(out, i, r, &entries)
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub rank: usize,
    pub bound: usize,
    /// d_1 = 0.
    pub first_differential_zero: bool,
    /// Degrees n <= bound where the closed form differs from the
    /// alternating coface sum.
    pub closed_form_mismatches: Vec<usize>,
    pub homotopy: HomotopyReport,
    pub pass: bool,
}

/// The row j = 1 with its closed-form differentials and the contraction
/// h, checking d h + h d = id - e through degree `bound`, where e projects
/// onto V in degree 1.
pub fn hom_complex_and_contraction(
    r: usize,
    bound: usize,
    modulus: Option<&BigInt>,
) -> Result<(ChainComplex, Vec<IntMatrix>, ContractionReport)> {
    if bound < 3 {
        return Err(Error::InvalidArgument(format!("bound must be at least 3, got {bound}")));
    }
    let top = bound + 1;
    let k = e1_row(r, 1, top)?;
    let mut mismatches = Vec::new();
    for n in 1..=bound {
        if k.outgoing(n as i64) != Some(&closed_form_differential(r, n)) {
            mismatches.push(n);
        }
    }
    let first_differential_zero = k.outgoing(1).is_some_and(|d| d.is_zero());
    let h: Vec<IntMatrix> = (0..=top).map(|i| contraction_homotopy(r, i)).collect();
    let id = k.identity_map();
    let e: Vec<IntMatrix> = (0..=top)
        .map(|i| {
            if i == 1 {
                IntMatrix::identity(r)
            } else {
                IntMatrix::zeros(k.rank(i as i64), k.rank(i as i64))
            }
        })
        .collect();
    let report = verify_homotopy_through(&k, &id, &e, &h, modulus, bound as i64)?;
    let pass = first_differential_zero && mismatches.is_empty() && report.pass;
    Ok((
        k,
        h,
        ContractionReport {
            rank: r,
            bound,
            first_differential_zero,
            closed_form_mismatches: mismatches,
            homotopy: report,
            pass,
        },
    ))
}

/// C(r + j - 1, j): the rank of Sym^j of a rank-r module.
pub fn sym_rank(r: usize, j: usize) -> usize {
    if j == 0 {
        1
    } else {
        binomial(r + j - 1, j)
    }
}

fn free_over(coefficients: &Coefficients, rank: usize) -> FinAbGroup {
    match coefficients {
        Coefficients::Integers => FinAbGroup::free(rank),
        Coefficients::Mod(m) => FinAbGroup::power_of_cyclic(m, rank),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecalageReport {
    pub rank: usize,
    pub j: usize,
    pub bound: usize,
    pub sym_rank: usize,
    pub expected: FinAbGroup,
    pub cohomology: BTreeMap<i64, FinAbGroup>,
    pub pass: bool,
}

/// Cohomology of e1_row(V, j) through degree `bound` against Sym^j(V) in
/// degree j and zero elsewhere.
pub fn decalage_check(r: usize, j: usize, bound: usize, coefficients: &Coefficients) -> Result<DecalageReport> {
    let row = e1_row(r, j, bound + 1)?;
    let degrees: Vec<i64> = (0..=bound as i64).collect();
    let h = Homology::compute_degrees(&row, coefficients, false, &degrees)?.groups();
    let expected = free_over(coefficients, sym_rank(r, j));
    let pass = h
        .iter()
        .all(|(&n, g)| if n == j as i64 { *g == expected } else { g.is_trivial() });
    Ok(DecalageReport {
        rank: r,
        j,
        bound,
        sym_rank: sym_rank(r, j),
        expected,
        cohomology: h,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_low_degree_formulas() {
        // d_2(v1, v2) = (-v1, 0, v2), d_3(v) = (0, v2, v2, 0)
        assert_eq!(
            closed_form_differential(1, 2),
            IntMatrix::from_rows(&[vec![-1, 0], vec![0, 0], vec![0, 1]])
        );
        assert_eq!(
            closed_form_differential(1, 3),
            IntMatrix::from_rows(&[vec![0, 0, 0], vec![0, 1, 0], vec![0, 1, 0], vec![0, 0, 0]])
        );
        // h_3(v) = (-v1, v3), h_4(v) = (0, v2, 0)
        assert_eq!(
            contraction_homotopy(1, 3),
            IntMatrix::from_rows(&[vec![-1, 0, 0], vec![0, 0, 1]])
        );
        assert_eq!(
            contraction_homotopy(1, 4),
            IntMatrix::from_rows(&[vec![0, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 0]])
        );
        // h_3 d_2 = id
        let hd = contraction_homotopy(1, 3).mul(&closed_form_differential(1, 2)).unwrap();
        assert_eq!(hd, IntMatrix::identity(2));
    }

    #[test]
    fn row_one_contracts() {
        let (_, _, rep) = hom_complex_and_contraction(2, 8, None).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn symmetric_square_in_degree_two() {
        let rep = decalage_check(2, 2, 4, &Coefficients::witt(2, 2)).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.cohomology[&2], FinAbGroup::from_orders(&[4, 4, 4]));
    }
}
