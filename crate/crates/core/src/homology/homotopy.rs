use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::complex::{ChainComplex, Grading};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// First entry where d h + h d differs from f - g.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyWitness {
    pub degree: i64,
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyReport {
    pub pass: bool,
    pub degrees_checked: Vec<i64>,
    pub witness: Option<HomotopyWitness>,
}

/// Degree the homotopy out of n lands in (against the differential).
fn back(c: &ChainComplex, n: i64) -> i64 {
    match c.grading() {
        Grading::Homological => n + 1,
        Grading::Cohomological => n - 1,
    }
}

fn check_shape(m: &IntMatrix, rows: usize, cols: usize, what: &str, n: i64) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return Err(Error::Mismatch(format!(
            "{what} in degree {n} is {}x{}, expected {rows}x{cols}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Check d h + h d = f - g in every degree of `c`, exactly or modulo
/// `modulus`. `f`, `g`, `h` hold one matrix per degree lo..=hi; h in
/// degree n maps C_n to the neighbouring degree against the differential
/// (a matrix with zero rows where that degree is outside the complex).
pub fn verify_homotopy(
    c: &ChainComplex,
    f: &[IntMatrix],
    g: &[IntMatrix],
    h: &[IntMatrix],
    modulus: Option<&BigInt>,
) -> Result<HomotopyReport> {
    verify_homotopy_through(c, f, g, h, modulus, c.hi())
}

/// As [`verify_homotopy`], checking only degrees lo..=hi. Useful for a
/// truncated complex, whose top degree lacks the outgoing differential.
pub fn verify_homotopy_through(
    c: &ChainComplex,
    f: &[IntMatrix],
    g: &[IntMatrix],
    h: &[IntMatrix],
    modulus: Option<&BigInt>,
    hi: i64,
) -> Result<HomotopyReport> {
    let len = c.ranks().len();
    if f.len() != len || g.len() != len || h.len() != len {
        return Err(Error::Mismatch(format!(
            "expected {len} matrices per map, got {}, {}, {}",
            f.len(),
            g.len(),
            h.len()
        )));
    }
    let idx = |n: i64| (n - c.lo()) as usize;
    for n in c.lo()..=c.hi() {
        let r = c.rank(n);
        check_shape(&f[idx(n)], r, r, "f", n)?;
        check_shape(&g[idx(n)], r, r, "g", n)?;
        check_shape(&h[idx(n)], c.rank(back(c, n)), r, "h", n)?;
    }
    let mut degrees = Vec::new();
    for n in c.lo()..=hi.min(c.hi()) {
        let r = c.rank(n);
        let target = f[idx(n)].sub(&g[idx(n)])?;
        let mut lhs = IntMatrix::zeros(r, r);
        // (incoming differential) o h_n
        if let Some(d_in) = c.incoming(n) {
            lhs = lhs.add(&d_in.mul(&h[idx(n)])?)?;
        }
        // h_{next} o (outgoing differential)
        if let Some(d_out) = c.outgoing(n) {
            let m = c.next_degree(n);
            lhs = lhs.add(&h[idx(m)].mul(d_out)?)?;
        }
        degrees.push(n);
        for col in 0..r {
            for row in 0..r {
                let mut diff = lhs.get(row, col) - target.get(row, col);
                if let Some(m) = modulus {
                    diff = diff.mod_floor(m);
                }
                if !diff.is_zero() {
                    return Ok(HomotopyReport {
                        pass: false,
                        degrees_checked: degrees,
                        witness: Some(HomotopyWitness {
                            degree: n,
                            row,
                            col,
                            expected: target.get(row, col).to_string(),
                            actual: lhs.get(row, col).to_string(),
                        }),
                    });
                }
            }
        }
    }
    Ok(HomotopyReport {
        pass: true,
        degrees_checked: degrees,
        witness: None,
    })
}

/// Zero homotopy shaped for `c`.
pub fn zero_homotopy(c: &ChainComplex) -> Vec<IntMatrix> {
    (c.lo()..=c.hi())
        .map(|n| IntMatrix::zeros(c.rank(back(c, n)), c.rank(n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_maps_zero_homotopy() {
        let c = ChainComplex::homological(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![3]])]).unwrap();
        let id = c.identity_map();
        let r = verify_homotopy(&c, &id, &id, &zero_homotopy(&c), None).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn contractible_complex() {
        // Z --1--> Z is contractible: id - 0 = d h + h d with h = 1
        let c = ChainComplex::homological(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![1]])]).unwrap();
        let h = vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::zeros(0, 1)];
        let r = verify_homotopy(&c, &c.identity_map(), &c.zero_map(), &h, None).unwrap();
        assert!(r.pass);
        let bad = vec![IntMatrix::from_rows(&[vec![2]]), IntMatrix::zeros(0, 1)];
        let r = verify_homotopy(&c, &c.identity_map(), &c.zero_map(), &bad, None).unwrap();
        assert!(!r.pass);
        assert_eq!(r.witness.unwrap().degree, 0);
    }
}
