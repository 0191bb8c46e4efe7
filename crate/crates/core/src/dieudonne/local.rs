use crate::error::{Error, Result};
use crate::exactalg::{Field, WittVector};

use super::module::WittMatrix;

/// U * A * W = diag over the local ring W_N(k), with U, W invertible.
#[derive(Debug, Clone)]
pub struct LocalSmith {
    pub u: WittMatrix,
    pub w: WittMatrix,
    pub diagonal: Vec<WittVector>,
    /// p-adic valuation of each diagonal entry (N for zero).
    pub valuations: Vec<usize>,
}

fn identity(field: &Field, len: usize, n: usize) -> WittMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        WittVector::one(field, len)
                    } else {
                        WittVector::zero(field, len)
                    }
                })
                .collect()
        })
        .collect()
}

/// Smith form over W_N(k): pivots of least valuation, cleared with the
/// exact quotient a / (p^v u) = (a / p^v) u^{-1}.
pub fn local_smith(a: &WittMatrix, field: &Field, len: usize) -> Result<LocalSmith> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m = a.clone();
    let mut u = identity(field, len, rows);
    let mut w = identity(field, len, cols);
    let lim = rows.min(cols);
    for t in 0..lim {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                let v = x.valuation();
                if v < len && best.map_or(true, |b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, v)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in w.iter_mut() {
            row.swap(t, pj);
        }
        let unit_inv = m[t][t].div_p_pow(v)?.inverse()?;
        for i in t + 1..rows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = &m[i][t].div_p_pow(v)? * &unit_inv;
            for j in 0..cols {
                let s = &q * &m[t][j];
                m[i][j] = &m[i][j] - &s;
            }
            for j in 0..rows {
                let s = &q * &u[t][j];
                u[i][j] = &u[i][j] - &s;
            }
        }
        for j in t + 1..cols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = &m[t][j].div_p_pow(v)? * &unit_inv;
            for row in m.iter_mut() {
                let s = &row[t] * &q;
                row[j] = &row[j] - &s;
            }
            for row in w.iter_mut() {
                let s = &row[t] * &q;
                row[j] = &row[j] - &s;
            }
        }
        if m.iter().skip(t + 1).any(|r| !r[t].is_zero()) || m[t].iter().skip(t + 1).any(|x| !x.is_zero()) {
            return Err(Error::NotInvertible(
                "local Smith reduction did not clear the pivot".into(),
            ));
        }
    }
    let diagonal: Vec<WittVector> = (0..lim).map(|i| m[i][i].clone()).collect();
    let valuations = diagonal.iter().map(|d| d.valuation()).collect();
    Ok(LocalSmith {
        u,
        w,
        diagonal,
        valuations,
    })
}

pub fn mat_mul(a: &WittMatrix, b: &WittMatrix, field: &Field, len: usize) -> WittMatrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(WittVector::zero(field, len), |acc, (x, brow)| &acc + &(x * &brow[j]))
                })
                .collect()
        })
        .collect()
}

pub fn sigma_matrix(a: &WittMatrix, k: i64) -> WittMatrix {
    a.iter()
        .map(|row| row.iter().map(|x| x.sigma_pow(k)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_diagonal() {
        let k = Field::prime(3).unwrap();
        let n = 3;
        let e = |x: i64| WittVector::from_integer(&k, n, x);
        let a = vec![vec![e(3), e(6)], vec![e(9), e(1)]];
        let s = local_smith(&a, &k, n).unwrap();
        let d = mat_mul(&mat_mul(&s.u, &a, &k, n), &s.w, &k, n);
        for i in 0..2 {
            for j in 0..2 {
                if i == j {
                    assert_eq!(d[i][j], s.diagonal[i]);
                } else {
                    assert!(d[i][j].is_zero());
                }
            }
        }
        assert_eq!(s.valuations, vec![0, 1]);
    }
}
