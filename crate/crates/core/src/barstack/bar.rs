use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::finite_orders;
use crate::error::{Error, Result};
use crate::homology::{ChainComplex, Coefficients, FinAbGroup, Homology, IntMatrix};

/// Size limits for bar-type constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_group_order: u64,
    pub max_degree: usize,
    pub max_generators: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_group_order: 16,
            max_degree: 5,
            max_generators: 1 << 20,
        }
    }
}

impl Budget {
    pub fn with_group_cap(mut self, cap: u64) -> Self {
        self.max_group_order = cap;
        self
    }
}

/// Elements of a finite abelian group, indexed in mixed radix over the
/// invariant factors with the first factor least significant.
#[derive(Debug, Clone)]
pub struct GroupElements {
    orders: Vec<u64>,
    size: u64,
    add: Vec<u32>,
}

impl GroupElements {
    pub fn new(g: &FinAbGroup) -> Result<Self> {
        let orders = finite_orders(g)?;
        let size: u64 = orders.iter().product();
        if size > 1 << 16 {
            return Err(Error::BudgetExceeded(format!("group of order {size}")));
        }
        let mut ge = GroupElements {
            orders,
            size,
            add: Vec::new(),
        };
        let n = size as usize;
        let mut add = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = ge.add_slow(a as u64, b as u64) as u32;
            }
        }
        ge.add = add;
        Ok(ge)
    }

    pub fn order(&self) -> u64 {
        self.size
    }

    pub fn coords(&self, mut x: u64) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&o| {
                let c = x % o;
                x /= o;
                c
            })
            .collect()
    }

    pub fn index(&self, coords: &[u64]) -> u64 {
        let mut x = 0;
        for (c, o) in coords.iter().zip(&self.orders).rev() {
            x = x * o + c % o;
        }
        x
    }

    fn add_slow(&self, a: u64, b: u64) -> u64 {
        let s: Vec<u64> = self.coords(a).iter().zip(self.coords(b)).map(|(x, y)| x + y).collect();
        self.index(&s)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.add[(a * self.size + b) as usize] as u64
    }
}

/// A bar complex request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarComplexSpec {
    pub group: FinAbGroup,
    pub degree_bound: usize,
    pub normalized: bool,
}

impl BarComplexSpec {
    pub fn new(group: FinAbGroup, degree_bound: usize) -> Self {
        BarComplexSpec {
            group,
            degree_bound,
            normalized: false,
        }
    }

    pub fn normalized(mut self, yes: bool) -> Self {
        self.normalized = yes;
        self
    }

    fn check(&self, budget: &Budget) -> Result<u64> {
        let orders = finite_orders(&self.group)?;
        let size: u64 = orders.iter().product();
        if size > budget.max_group_order {
            return Err(Error::BudgetExceeded(format!(
                "|G| = {size} exceeds the group cap {}",
                budget.max_group_order
            )));
        }
        if self.degree_bound > budget.max_degree {
            return Err(Error::BudgetExceeded(format!(
                "degree bound {} exceeds the cap {}",
                self.degree_bound, budget.max_degree
            )));
        }
        let gens = (size as f64).powi(self.degree_bound as i32);
        if gens > budget.max_generators as f64 {
            return Err(Error::BudgetExceeded(format!(
                "|G|^bound = {size}^{} exceeds {} generators",
                self.degree_bound, budget.max_generators
            )));
        }
        Ok(size)
    }

    /// C_n = Z[G^n] for n = 0..=bound with d = sum (-1)^i d_i.
    pub fn build(&self, budget: &Budget) -> Result<ChainComplex> {
        self.check(budget)?;
        let ge = GroupElements::new(&self.group)?;
        let q = ge.order();
        // basis of degree n: tuples over `alphabet` in lexicographic order
        let alphabet: Vec<u64> = if self.normalized {
            (1..q).collect()
        } else {
            (0..q).collect()
        };
        let base = alphabet.len() as u64;
        let mut pos = vec![u64::MAX; q as usize];
        for (i, &a) in alphabet.iter().enumerate() {
            pos[a as usize] = i as u64;
        }
        let ranks: Vec<usize> = (0..=self.degree_bound).map(|n| base.pow(n as u32) as usize).collect();
        let diffs: Vec<IntMatrix> = (1..=self.degree_bound)
            .into_par_iter()
            .map(|n| {
                let cols: Vec<Vec<(usize, BigInt)>> = (0..ranks[n])
                    .into_par_iter()
                    .map(|idx| {
                        let mut t = vec![0u64; n];
                        let mut r = idx as u64;
                        for slot in t.iter_mut().rev() {
                            *slot = alphabet[(r % base) as usize];
                            r /= base;
                        }
                        let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
                        for i in 0..=n {
                            let face: Vec<u64> = if i == 0 {
                                t[1..].to_vec()
                            } else if i == n {
                                t[..n - 1].to_vec()
                            } else {
                                let mut f = t[..i - 1].to_vec();
                                f.push(ge.add(t[i - 1], t[i]));
                                f.extend_from_slice(&t[i + 1..]);
                                f
                            };
                            let mut j = 0u64;
                            let mut degenerate = false;
                            for &a in &face {
                                let p = pos[a as usize];
                                if p == u64::MAX {
                                    degenerate = true;
                                    break;
                                }
                                j = j * base + p;
                            }
                            if degenerate {
                                continue;
                            }
                            let s = if i % 2 == 0 { 1 } else { -1 };
                            *terms.entry(j as usize).or_default() += s;
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

/// Unnormalized bar complex of G through degree `bound` under the default
/// budget.
pub fn bar_complex(g: &FinAbGroup, bound: usize) -> Result<ChainComplex> {
    BarComplexSpec::new(g.clone(), bound).build(&Budget::default())
}

/// H_0..H_max of G, computed from the bar complex through degree max + 1.
pub fn group_homology(
    g: &FinAbGroup,
    max_degree: usize,
    coefficients: &Coefficients,
    normalized: bool,
    budget: &Budget,
) -> Result<BTreeMap<i64, FinAbGroup>> {
    let c = BarComplexSpec::new(g.clone(), max_degree + 1)
        .normalized(normalized)
        .build(budget)?;
    let degrees: Vec<i64> = (0..=max_degree as i64).collect();
    Ok(Homology::compute_degrees(&c, coefficients, false, &degrees)?.groups())
}
