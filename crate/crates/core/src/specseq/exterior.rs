use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::homology::IntMatrix;

/// Binomial coefficient C(n, k) (0 when k > n).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All size-k multisets of 0..n (non-decreasing sequences), lexicographic.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Lexicographic rank of a strictly increasing k-subset of 0..n.
pub fn subset_rank(n: usize, s: &[usize]) -> usize {
    let k = s.len();
    let mut rank = 0;
    let mut prev = 0;
    for (pos, &x) in s.iter().enumerate() {
        for y in prev..x {
            rank += binomial(n - y - 1, k - pos - 1);
        }
        prev = x + 1;
    }
    rank
}

/// Sort a sequence of distinct indices, returning the sign of the
/// permutation, or None when an index repeats.
fn sort_sign(v: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// The k-th exterior power of a matrix on lexicographic subset bases:
/// the column of e_J is M e_{j_1} ^ ... ^ M e_{j_k}.
pub fn exterior_power(m: &IntMatrix, k: usize) -> IntMatrix {
    let (rows, cols) = (m.nrows(), m.ncols());
    let columns = subsets(cols, k)
        .into_iter()
        .map(|js| {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            let factors: Vec<&[(usize, BigInt)]> = js.iter().map(|&j| m.column(j)).collect();
            let mut idx = vec![0usize; k];
            if factors.iter().any(|f| f.is_empty()) {
                return Vec::new();
            }
            loop {
                let mut rows_sel: Vec<usize> = (0..k).map(|t| factors[t][idx[t]].0).collect();
                if let Some(sign) = sort_sign(&mut rows_sel) {
                    let mut c = BigInt::from(sign);
                    for t in 0..k {
                        c *= &factors[t][idx[t]].1;
                    }
                    *acc.entry(subset_rank(rows, &rows_sel)).or_default() += c;
                }
                // advance the mixed-radix counter
                let mut t = 0;
                while t < k {
                    idx[t] += 1;
                    if idx[t] < factors[t].len() {
                        break;
                    }
                    idx[t] = 0;
                    t += 1;
                }
                if t == k {
                    break;
                }
            }
            acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect();
    IntMatrix::from_columns(binomial(rows, k), columns)
}

/// The k-th symmetric power of a square or rectangular matrix on
/// lexicographic multiset bases: the column of e_{a_1}...e_{a_k} is the
/// product M e_{a_1} ... M e_{a_k}.
pub fn symmetric_power(m: &IntMatrix, k: usize) -> IntMatrix {
    let (rows, cols) = (m.nrows(), m.ncols());
    let targets = multisets(rows, k);
    let index: BTreeMap<Vec<usize>, usize> = targets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let columns = multisets(cols, k)
        .into_iter()
        .map(|aa| {
            let mut poly: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
            poly.insert(Vec::new(), BigInt::from(1));
            for &a in &aa {
                let mut next: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
                for (mono, c) in &poly {
                    for (i, v) in m.column(a) {
                        let mut mm = mono.clone();
                        mm.push(*i);
                        mm.sort_unstable();
                        *next.entry(mm).or_default() += c * v;
                    }
                }
                poly = next;
            }
            let mut col: Vec<(usize, BigInt)> = poly
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(mono, c)| (index[&mono], c))
                .collect();
            col.sort_by_key(|e| e.0);
            col
        })
        .collect();
    IntMatrix::from_columns(targets.len(), columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_lexicographic() {
        for (r, s) in subsets(5, 3).iter().enumerate() {
            assert_eq!(subset_rank(5, s), r);
        }
        assert_eq!(multisets(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn top_exterior_power_is_determinant() {
        let m = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        // 2(12 - 1) - 1(4 - 0) = 18
        assert_eq!(exterior_power(&m, 3), IntMatrix::from_rows(&[vec![18]]));
        assert_eq!(exterior_power(&m, 1), m);
    }

    #[test]
    fn symmetric_square_of_diagonal() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = symmetric_power(&m, 2);
        assert_eq!(s, IntMatrix::from_rows(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 9]]));
    }

    #[test]
    fn exterior_power_is_functorial() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 1], vec![2, 1, 0]]);
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![1, 1], vec![0, 3]]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(
            exterior_power(&ab, 2),
            exterior_power(&a, 2).mul(&exterior_power(&b, 2)).unwrap()
        );
        assert_eq!(
            symmetric_power(&ab, 2),
            symmetric_power(&a, 2).mul(&symmetric_power(&b, 2)).unwrap()
        );
    }
}
