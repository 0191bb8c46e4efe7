use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::group::FinAbGroup;
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

type Dense = Vec<Vec<BigInt>>;

/// D = U * M * V with U, V unimodular and D diagonal, d_1 | d_2 | ... .
/// The inverses of U and V are tracked alongside.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: Dense,
    pub u_inv: Dense,
    pub v: Dense,
    pub v_inv: Dense,
    /// Diagonal entries, length min(rows, cols); nonzero ones first.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    pub fn u_matrix(&self) -> IntMatrix {
        IntMatrix::from_dense(self.u.len(), self.u.len(), &self.u)
    }

    pub fn v_matrix(&self) -> IntMatrix {
        IntMatrix::from_dense(self.v.len(), self.v.len(), &self.v)
    }

    /// The diagonal matrix D with the shape of the input.
    pub fn d_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = vec![vec![BigInt::zero(); cols]; rows];
        for (i, x) in self.diagonal.iter().enumerate() {
            d[i][i] = x.clone();
        }
        IntMatrix::from_dense(rows, cols, &d)
    }
}

struct Work {
    a: Dense,
    m: usize,
    n: usize,
    track: bool,
    u: Dense,
    u_inv: Dense,
    v: Dense,
    v_inv: Dense,
}

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::one();
            r
        })
        .collect()
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if self.track {
            self.u.swap(i, j);
            for row in self.u_inv.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if self.track {
            for row in self.v.iter_mut() {
                row.swap(i, j);
            }
            self.v_inv.swap(i, j);
        }
    }

    /// row_i += q * row_t
    fn add_row(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let (src, dst) = borrow_two(&mut self.a, t, i);
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d += q * s;
            }
        }
        if self.track {
            let (src, dst) = borrow_two(&mut self.u, t, i);
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d += q * s;
                }
            }
            // U^{-1} <- U^{-1} E^{-1}: column t -= q * column i
            for row in self.u_inv.iter_mut() {
                if !row[i].is_zero() {
                    let x = q * &row[i];
                    row[t] -= x;
                }
            }
        }
    }

    /// col_j += q * col_t
    fn add_col(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in self.a.iter_mut() {
            if !row[t].is_zero() {
                let x = q * &row[t];
                row[j] += x;
            }
        }
        if self.track {
            for row in self.v.iter_mut() {
                if !row[t].is_zero() {
                    let x = q * &row[t];
                    row[j] += x;
                }
            }
            // V^{-1} <- F^{-1} V^{-1}: row t -= q * row j
            let (src, dst) = borrow_two(&mut self.v_inv, j, t);
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d -= q * s;
                }
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in self.a[t].iter_mut() {
            *x = -&*x;
        }
        if self.track {
            for x in self.u[t].iter_mut() {
                *x = -&*x;
            }
            for row in self.u_inv.iter_mut() {
                row[t] = -&row[t];
            }
        }
    }

    fn min_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().map_or(true, |(_, _, b)| &ax < b) {
                    let is_one = ax.is_one();
                    best = Some((i, j, ax));
                    if is_one {
                        let (i, j, _) = best.unwrap();
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) -> usize {
        let lim = self.m.min(self.n);
        let mut t = 0;
        while t < lim {
            let Some((pi, pj)) = self.min_in_block(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = -(&self.a[i][t] / &self.a[t][t]);
                    self.add_row(i, t, &q);
                    if !self.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = -(&self.a[t][j] / &self.a[t][t]);
                    self.add_col(j, t, &q);
                    if !self.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // a smaller remainder appeared in row or column t
                    let mut best = (t, t, self.a[t][t].abs());
                    for i in t + 1..self.m {
                        let x = self.a[i][t].abs();
                        if !x.is_zero() && x < best.2 {
                            best = (i, t, x);
                        }
                    }
                    for j in t + 1..self.n {
                        let x = self.a[t][j].abs();
                        if !x.is_zero() && x < best.2 {
                            best = (t, j, x);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let piv = self.a[t][t].clone();
                let mut bad = None;
                'outer: for i in t + 1..self.m {
                    for j in t + 1..self.n {
                        if !(&self.a[i][j] % &piv).is_zero() {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

fn borrow_two(v: &mut Dense, src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = v.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

fn run_snf(m: &IntMatrix, track: bool) -> Work {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut w = Work {
        a: m.to_dense(),
        m: rows,
        n: cols,
        track,
        u: if track { identity(rows) } else { Vec::new() },
        u_inv: if track { identity(rows) } else { Vec::new() },
        v: if track { identity(cols) } else { Vec::new() },
        v_inv: if track { identity(cols) } else { Vec::new() },
    };
    w.run();
    w
}

/// A basis (at most `dim` vectors) of the span of sparse integer vectors,
/// built by incremental echelon insertion. With a modulus m the span of
/// the vectors together with m Z^dim is returned, entries reduced mod m.
pub(crate) fn span_basis(
    cols: &[Vec<(usize, BigInt)>],
    dim: usize,
    modulus: Option<&BigInt>,
) -> Vec<Vec<(usize, BigInt)>> {
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; dim];
    let reduce = |v: &mut Vec<BigInt>| {
        if let Some(m) = modulus {
            for x in v.iter_mut() {
                *x = x.mod_floor(m);
            }
        }
    };
    let insert = |mut v: Vec<BigInt>, basis: &mut Vec<Option<Vec<BigInt>>>| {
        for i in 0..dim {
            if v[i].is_zero() {
                continue;
            }
            match basis[i].take() {
                None => {
                    basis[i] = Some(v);
                    return;
                }
                Some(b) => {
                    let e = b[i].extended_gcd(&v[i]);
                    let (bi, vi) = (&b[i] / &e.gcd, &v[i] / &e.gcd);
                    let mut nb: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let mut nv: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &vi * x - &bi * y).collect();
                    reduce(&mut nb);
                    reduce(&mut nv);
                    basis[i] = Some(nb);
                    v = nv;
                }
            }
        }
    };
    for col in cols {
        let mut v = vec![BigInt::zero(); dim];
        for (i, x) in col {
            v[*i] += x;
        }
        reduce(&mut v);
        insert(v, &mut basis);
    }
    if let Some(m) = modulus {
        for j in 0..dim {
            let mut v = vec![BigInt::zero(); dim];
            v[j] = m.clone();
            insert(v, &mut basis);
        }
    }
    basis
        .into_iter()
        .flatten()
        .map(|b| b.into_iter().enumerate().filter(|e| !e.1.is_zero()).collect())
        .collect()
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let w = run_snf(m, true);
    let lim = w.m.min(w.n);
    let diagonal: Vec<BigInt> = (0..lim).map(|i| w.a[i][i].clone()).collect();
    let rank = diagonal.iter().take_while(|x| !x.is_zero()).count();
    SmithForm {
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
        diagonal,
        rank,
    }
}

/// Nonzero invariant factors d_1 | ... | d_r (units included).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let w = run_snf(m, false);
    let lim = w.m.min(w.n);
    (0..lim).map(|i| w.a[i][i].abs()).take_while(|x| !x.is_zero()).collect()
}

pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).len()
}

/// Z^rows / (column span of m).
pub fn cokernel(m: &IntMatrix) -> FinAbGroup {
    let f = invariant_factors(m);
    let free = m.nrows() - f.len();
    let mut g = FinAbGroup::from_diagonal(f);
    g.free_rank += free;
    g
}

/// A basis of the integer kernel of m, as vectors.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(m);
    (s.rank..m.ncols())
        .map(|j| s.v.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// The subquotient A / B of Z^n, where the columns of `a` generate A and
/// the columns of `b` generate B, B a subgroup of A.
pub fn subquotient(a: &IntMatrix, b: &IntMatrix) -> Result<FinAbGroup> {
    let coords = lattice_coordinates(a, b)?;
    let (r, rel) = coords;
    let f = invariant_factors(&rel);
    let mut g = FinAbGroup::from_diagonal(f.iter().cloned());
    g.free_rank += r - f.len();
    Ok(g)
}

/// Express the columns of `b` in a basis of the lattice spanned by the
/// columns of `a`. Returns (rank of A, coordinate matrix rank(A) x cols(b)).
pub fn lattice_coordinates(a: &IntMatrix, b: &IntMatrix) -> Result<(usize, IntMatrix)> {
    if a.nrows() != b.nrows() {
        return Err(Error::Mismatch("lattices live in different ambient spaces".into()));
    }
    let s = smith_normal_form(a);
    let r = s.rank;
    let mut cols = Vec::with_capacity(b.ncols());
    for j in 0..b.ncols() {
        let mut v = vec![BigInt::zero(); b.nrows()];
        for (i, x) in b.column(j) {
            v[*i] = x.clone();
        }
        let c: Vec<BigInt> =
            s.u.iter()
                .map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum())
                .collect();
        let mut col = Vec::new();
        for (i, ci) in c.iter().enumerate() {
            if i < r {
                let (q, rem) = ci.div_rem(&s.diagonal[i]);
                if !rem.is_zero() {
                    return Err(Error::Mismatch("sublattice not contained in lattice".into()));
                }
                if !q.is_zero() {
                    col.push((i, q));
                }
            } else if !ci.is_zero() {
                return Err(Error::Mismatch("sublattice not contained in lattice".into()));
            }
        }
        cols.push(col);
    }
    Ok((r, IntMatrix::from_columns(r, cols)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        let u = s.u_matrix();
        let v = s.v_matrix();
        let d = s.d_matrix(m.nrows(), m.ncols());
        assert_eq!(u.mul(m).unwrap().mul(&v).unwrap(), d);
        let ui = IntMatrix::from_dense(m.nrows(), m.nrows(), &s.u_inv);
        let vi = IntMatrix::from_dense(m.ncols(), m.ncols(), &s.v_inv);
        assert_eq!(u.mul(&ui).unwrap(), IntMatrix::identity(m.nrows()));
        assert_eq!(v.mul(&vi).unwrap(), IntMatrix::identity(m.ncols()));
        for w in s.diagonal[..s.rank].windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        s
    }

    #[test]
    fn examples() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
        let s = check(&IntMatrix::zeros(3, 2));
        assert_eq!(s.rank, 0);
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn rectangular_and_degenerate() {
        check(&IntMatrix::from_rows(&[vec![0, 0, 4], vec![0, 6, 0]]));
        check(&IntMatrix::from_rows(&[vec![3], vec![5], vec![7]]));
        check(&IntMatrix::zeros(0, 3));
    }

    #[test]
    fn cokernel_and_kernel() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]);
        assert_eq!(cokernel(&m), FinAbGroup::from_orders(&[2, 0]));
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![1, 1, 0]]));
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn subquotient_of_lattices() {
        let a = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]);
        let b = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(subquotient(&a, &b).unwrap(), FinAbGroup::cyclic(6));
        let a2 = IntMatrix::from_rows(&[vec![2], vec![0]]);
        let b2 = IntMatrix::from_rows(&[vec![1], vec![0]]);
        assert!(subquotient(&a2, &b2).is_err());
    }
}
