use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::homology::{ChainComplex, Coefficients, FinAbGroup, Homology, IntMatrix};

/// Multiplication by a polynomial in t on Z[t]/(t^n - 1), basis 1, t, ...,
/// t^{n-1}.
fn poly_mult(n: usize, coeffs: &[(usize, i64)]) -> IntMatrix {
    let cols = (0..n)
        .map(|j| {
            let mut col = vec![0i64; n];
            for &(e, c) in coeffs {
                col[(j + e) % n] += c;
            }
            col.into_iter()
                .enumerate()
                .filter(|e| e.1 != 0)
                .map(|(i, c)| (i, BigInt::from(c)))
                .collect()
        })
        .collect();
    IntMatrix::from_columns(n, cols)
}

/// The 2-periodic free resolution of Z over Z[Z/n] in degrees 0..=top,
/// as a complex of free abelian groups of rank n: odd differentials are
/// t - 1, even ones the norm 1 + t + ... + t^{n-1}.
pub fn cyclic_resolution(n: u64, top: usize) -> Result<ChainComplex> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("cyclic order {n} < 2")));
    }
    let k = n as usize;
    let t_minus_1 = poly_mult(k, &[(1, 1), (0, -1)]);
    let norm = poly_mult(k, &(0..k).map(|e| (e, 1)).collect::<Vec<_>>());
    let diffs = (1..=top)
        .map(|d| if d % 2 == 1 { t_minus_1.clone() } else { norm.clone() })
        .collect();
    ChainComplex::homological(0, vec![k; top + 1], diffs)
}

/// The resolution with t set to 1: Z <-0- Z <-n- Z <-0- Z ...
pub fn cyclic_coinvariants(n: u64, top: usize) -> Result<ChainComplex> {
    let res = cyclic_resolution(n, top)?;
    // coinvariants: sum the coordinates of each column
    let diffs = res
        .diffs()
        .iter()
        .map(|d| {
            let s: BigInt = d.column(0).iter().map(|e| e.1.clone()).sum();
            IntMatrix::from_columns(1, vec![if s == BigInt::from(0) { vec![] } else { vec![(0, s)] }])
        })
        .collect();
    ChainComplex::homological(0, vec![1; top + 1], diffs)
}

/// H_0..H_bound of Z/n from the periodic resolution.
pub fn cyclic_resolution_homology(
    n: u64,
    coefficients: &Coefficients,
    bound: usize,
) -> Result<BTreeMap<i64, FinAbGroup>> {
    let c = cyclic_coinvariants(n, bound + 1)?;
    let degrees: Vec<i64> = (0..=bound as i64).collect();
    Ok(Homology::compute_degrees(&c, coefficients, false, &degrees)?.groups())
}

/// Tensor product of the periodic coinvariant complexes of the cyclic
/// factors of G, degrees 0..=top. Its homology is H_*(G) by Künneth.
pub fn periodic_model(orders: &[u64], top: usize) -> Result<ChainComplex> {
    let mut c = ChainComplex::homological(0, vec![1], vec![])?;
    for &n in orders {
        c = c.tensor(&cyclic_coinvariants(n, top)?)?.truncate(top as i64);
    }
    Ok(c)
}

/// Chain map of periodic coinvariant complexes induced by Z/a -> Z/b,
/// 1 -> b/a: identity in even degrees, multiplication by b/a in odd ones.
pub fn periodic_inclusion_map(a: u64, b: u64, top: usize) -> Result<Vec<IntMatrix>> {
    if a == 0 || b % a != 0 {
        return Err(Error::InvalidArgument(format!("Z/{a} does not embed in Z/{b}")));
    }
    let k = BigInt::from(b / a);
    Ok((0..=top)
        .map(|d| {
            if d % 2 == 0 {
                IntMatrix::identity(1)
            } else {
                IntMatrix::scalar(1, &k)
            }
        })
        .collect())
}

/// Chain map periodic_model(src) -> periodic_model(dst) induced by the
/// factorwise inclusions Z/src_i -> Z/dst_i.
pub fn periodic_model_inclusion(src: &[u64], dst: &[u64], top: usize) -> Result<Vec<IntMatrix>> {
    if src.len() != dst.len() {
        return Err(Error::Mismatch(
            "inclusion between groups with different numbers of factors".into(),
        ));
    }
    let mut map: Vec<IntMatrix> = vec![IntMatrix::identity(1)];
    let mut lo_c = ChainComplex::homological(0, vec![1], vec![])?;
    for (&a, &b) in src.iter().zip(dst) {
        let f = periodic_inclusion_map(a, b, top)?;
        let factor = cyclic_coinvariants(a, top)?;
        let mut next = Vec::new();
        for n in 0..=top as i64 {
            let mut blocks = Vec::new();
            for i in lo_c.lo()..=lo_c.hi() {
                let j = n - i;
                if factor.contains(j) && (i as usize) < map.len() {
                    blocks.push(map[i as usize].kronecker(&f[j as usize]));
                }
            }
            next.push(block_diagonal(&blocks));
        }
        lo_c = lo_c.tensor(&factor)?.truncate(top as i64);
        map = next;
    }
    Ok(map)
}

fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut cols = Vec::new();
    let mut off = 0;
    for b in blocks {
        for col in b.columns() {
            cols.push(col.iter().map(|(i, v)| (i + off, v.clone())).collect());
        }
        off += b.nrows();
    }
    IntMatrix::from_columns(rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{homology, is_chain_map};

    #[test]
    fn resolution_is_exact() {
        for n in 2..=6 {
            let h = homology(&cyclic_resolution(n, 5).unwrap(), &Coefficients::Integers).unwrap();
            assert_eq!(h[&0], FinAbGroup::free(1));
            for d in 1..5 {
                assert!(h[&d].is_trivial(), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn periodic_pattern() {
        let h = cyclic_resolution_homology(2, &Coefficients::Integers, 3).unwrap();
        assert_eq!(h[&0], FinAbGroup::free(1));
        assert_eq!(h[&1], FinAbGroup::cyclic(2));
        assert!(h[&2].is_trivial());
        assert_eq!(h[&3], FinAbGroup::cyclic(2));
        let h = cyclic_resolution_homology(3, &Coefficients::Mod(BigInt::from(9)), 2).unwrap();
        assert_eq!(h[&2], FinAbGroup::cyclic(3));
    }

    #[test]
    fn inclusion_maps_are_chain_maps() {
        let top = 4;
        let src = periodic_model(&[2, 4], top).unwrap();
        let dst = periodic_model(&[4, 8], top).unwrap();
        let f = periodic_model_inclusion(&[2, 4], &[4, 8], top).unwrap();
        assert!(is_chain_map(&src, &dst, &f).unwrap());
    }
}
