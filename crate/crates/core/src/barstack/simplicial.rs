use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::bar::Budget;
use super::finite_orders;
use crate::error::{Error, Result};
use crate::homology::{ChainComplex, Coefficients, FinAbGroup, Homology, IntMatrix};

type Mat = Vec<Vec<i64>>;

/// A simplicial abelian group with finite levels up to some top level.
/// Level n is a product of cyclic groups (`orders[n]`); faces are
/// homomorphisms given as integer matrices on coordinates.
#[derive(Debug, Clone)]
pub struct SimplicialAbelianGroup {
    orders: Vec<Vec<u64>>,
    /// faces[n][i]: level n -> level n-1 (faces[0] is empty)
    faces: Vec<Vec<Mat>>,
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &Mat, b: &Mat, inner: usize) -> Mat {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

impl SimplicialAbelianGroup {
    /// The constant simplicial group on G with identity faces.
    pub fn constant(g: &FinAbGroup, top: usize) -> Result<Self> {
        let o = finite_orders(g)?;
        let k = o.len();
        Ok(SimplicialAbelianGroup {
            orders: vec![o; top + 1],
            faces: (0..=top)
                .map(|n| if n == 0 { vec![] } else { vec![identity(k); n + 1] })
                .collect(),
        })
    }

    pub fn top(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn level_size(&self, n: usize) -> f64 {
        self.orders[n].iter().map(|&o| o as f64).product()
    }

    /// The classifying construction: level m is A_{m-1} x ... x A_0,
    /// coordinates in that block order.
    pub fn classifying(&self) -> Self {
        let top = self.top() + 1;
        let mut orders = Vec::with_capacity(top + 1);
        // block offsets per level: offset of A_k inside level m
        let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
        for m in 0..=top {
            let mut o = Vec::new();
            let mut off = vec![0; m];
            for k in (0..m).rev() {
                off[k] = o.len();
                o.extend_from_slice(&self.orders[k]);
            }
            orders.push(o);
            offsets.push(off);
        }
        let mut faces = vec![Vec::new()];
        for m in 1..=top {
            let src = orders[m].len();
            let dst = orders[m - 1].len();
            let mut fm = Vec::with_capacity(m + 1);
            for i in 0..=m {
                let mut mat = vec![vec![0i64; src]; dst];
                let mut put = |k_dst: usize, k_src: usize, block: &Mat| {
                    let (r0, c0) = (offsets[m - 1][k_dst], offsets[m][k_src]);
                    for (r, row) in block.iter().enumerate() {
                        for (c, v) in row.iter().enumerate() {
                            mat[r0 + r][c0 + c] += v;
                        }
                    }
                };
                if i == 0 {
                    for k in 0..m - 1 {
                        put(k, k, &identity(self.orders[k].len()));
                    }
                } else {
                    for k in (m - i + 1)..m {
                        put(k - 1, k, &self.faces[k][i + k - m]);
                    }
                    if i < m {
                        let k = m - i;
                        put(k - 1, k, &self.faces[k][0]);
                        put(k - 1, k - 1, &identity(self.orders[k - 1].len()));
                        for k in 0..m - i - 1 {
                            put(k, k, &identity(self.orders[k].len()));
                        }
                    }
                }
                fm.push(mat);
            }
            faces.push(fm);
        }
        SimplicialAbelianGroup { orders, faces }
    }

    fn reduce(&self, level: usize, v: &mut [i64]) {
        for (x, &o) in v.iter_mut().zip(&self.orders[level]) {
            *x = x.rem_euclid(o as i64);
        }
    }

    /// d_i d_j = d_{j-1} d_i for i < j, as homomorphisms (entries compared
    /// modulo the target orders).
    pub fn check_identities(&self) -> Result<()> {
        for n in 2..=self.top() {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = mat_mul(&self.faces[n - 1][i], &self.faces[n][j], self.orders[n - 1].len());
                    let rhs = mat_mul(&self.faces[n - 1][j - 1], &self.faces[n][i], self.orders[n - 1].len());
                    for (r, (a, b)) in lhs.iter().zip(&rhs).enumerate() {
                        let o = self.orders[n - 2][r] as i64;
                        for (x, y) in a.iter().zip(b) {
                            if (x - y).rem_euclid(o) != 0 {
                                return Err(Error::MalformedComplex(format!(
                                    "simplicial identity d_{i} d_{j} = d_{} d_{i} fails at level {n}",
                                    j - 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn decode(&self, level: usize, mut idx: u64) -> Vec<i64> {
        let o = &self.orders[level];
        let mut v = vec![0i64; o.len()];
        for (x, &ord) in v.iter_mut().zip(o).rev() {
            *x = (idx % ord) as i64;
            idx /= ord;
        }
        v
    }

    fn encode(&self, level: usize, v: &[i64]) -> u64 {
        let mut idx = 0u64;
        for (x, &ord) in v.iter().zip(&self.orders[level]) {
            idx = idx * ord + *x as u64;
        }
        idx
    }

    /// Unnormalized chain complex Z[X_n], n = 0..=top, d = sum (-1)^i d_i.
    /// Elements of a level are indexed with the first coordinate most
    /// significant.
    pub fn chain_complex(&self, budget: &Budget) -> Result<ChainComplex> {
        for n in 0..=self.top() {
            if self.level_size(n) > budget.max_generators as f64 {
                return Err(Error::BudgetExceeded(format!(
                    "level {n} has {} simplices, above {}",
                    self.level_size(n),
                    budget.max_generators
                )));
            }
        }
        let ranks: Vec<usize> = (0..=self.top()).map(|n| self.level_size(n) as usize).collect();
        let diffs = (1..=self.top())
            .map(|n| {
                let cols = (0..ranks[n])
                    .into_par_iter()
                    .map(|idx| {
                        let x = self.decode(n, idx as u64);
                        let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
                        for (i, f) in self.faces[n].iter().enumerate() {
                            let mut y: Vec<i64> = f
                                .iter()
                                .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum())
                                .collect();
                            self.reduce(n - 1, &mut y);
                            let s = if i % 2 == 0 { 1 } else { -1 };
                            *terms.entry(self.encode(n - 1, &y) as usize).or_default() += s;
                        }
                        terms
                            .into_iter()
                            .filter(|e| e.1 != 0)
                            .map(|(j, v)| (j, BigInt::from(v)))
                            .collect()
                    })
                    .collect();
                IntMatrix::from_columns(ranks[n - 1], cols)
            })
            .collect();
        ChainComplex::homological(0, ranks, diffs)
    }
}

/// Homology of the n-fold classifying construction on G.
#[derive(Debug, Clone)]
pub struct KanModel {
    pub complex: ChainComplex,
    pub homology: BTreeMap<i64, FinAbGroup>,
    /// Degrees above this are emitted but not covered by verified claims.
    pub verified_through: i64,
}

/// K(G, n) as the n-fold classifying construction applied to the constant
/// simplicial group G, with homology through degree `bound`.
pub fn kan_classifying(g: &FinAbGroup, iterations: usize, bound: usize, budget: &Budget) -> Result<KanModel> {
    let top = bound + 1;
    if top < iterations {
        return Err(Error::InvalidArgument("bound below the connectivity range".into()));
    }
    let mut s = SimplicialAbelianGroup::constant(g, top - iterations)?;
    for _ in 0..iterations {
        // predict the next level sizes before building
        let next_top = s.top() + 1;
        let size: f64 = (0..next_top).map(|k| s.level_size(k)).product();
        if size > budget.max_generators as f64 {
            return Err(Error::BudgetExceeded(format!(
                "classifying level {next_top} would have {size} simplices"
            )));
        }
        s = s.classifying();
        s.check_identities()?;
    }
    let complex = s.chain_complex(budget)?;
    let degrees: Vec<i64> = (0..top as i64).collect();
    let homology = Homology::compute_degrees(&complex, &Coefficients::Integers, false, &degrees)?.groups();
    Ok(KanModel {
        complex,
        homology,
        verified_through: iterations as i64 + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barstack::bar_complex;

    #[test]
    fn one_iteration_is_the_bar_complex() {
        let g = FinAbGroup::cyclic(3);
        let k = kan_classifying(&g, 1, 3, &Budget::default()).unwrap();
        assert_eq!(k.complex, bar_complex(&g, 4).unwrap());
    }

    #[test]
    fn two_iterations_satisfy_identities() {
        let s = SimplicialAbelianGroup::constant(&FinAbGroup::cyclic(2), 3).unwrap();
        let w = s.classifying().classifying();
        w.check_identities().unwrap();
        assert_eq!(w.orders[3].len(), 3);
    }
}
