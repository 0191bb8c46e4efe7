use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::group::FinAbGroup;
use super::matrix::IntMatrix;
use super::snf::subquotient;
use crate::error::{Error, Result};

/// Default number of levels past the coefficient truncation.
pub const DEFAULT_EXTRA_LEVELS: usize = 3;

/// An inverse system A_1 <- A_2 <- ... of finite abelian groups.
///
/// Each level is given on generators with orders `orders[k]` (its cyclic
/// summands); `maps[k]` is the matrix of A_{k+2} -> A_{k+1} on those
/// generators.
#[derive(Debug, Clone)]
pub struct Tower {
    pub orders: Vec<Vec<BigInt>>,
    pub maps: Vec<IntMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerLimit {
    pub limit: FinAbGroup,
    pub lim1: FinAbGroup,
    pub lim1_reason: String,
    /// Level (1-based) from which the stable images no longer change.
    pub stable_from: usize,
    /// Orders of im(A_top -> A_n) for every level n.
    pub stable_image_orders: Vec<String>,
}

impl Tower {
    pub fn new(orders: Vec<Vec<BigInt>>, maps: Vec<IntMatrix>) -> Result<Self> {
        if orders.is_empty() || maps.len() + 1 != orders.len() {
            return Err(Error::InvalidArgument(format!(
                "tower with {} levels needs {} maps, got {}",
                orders.len(),
                orders.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.ncols() != orders[k + 1].len() || m.nrows() != orders[k].len() {
                return Err(Error::InvalidArgument(format!("tower map {k} has the wrong shape")));
            }
            // well defined: the order of each source generator kills its image
            for (j, o) in orders[k + 1].iter().enumerate() {
                for (i, v) in m.column(j) {
                    let t = &orders[k][*i];
                    if !o.is_zero() && !(v * o).mod_floor(t).is_zero() {
                        return Err(Error::InvalidArgument(format!(
                            "tower map {k} is not a homomorphism at generator {j}"
                        )));
                    }
                }
            }
        }
        Ok(Tower { orders, maps })
    }

    /// Constant tower with identity maps.
    pub fn constant(g: &FinAbGroup, levels: usize) -> Self {
        let orders: Vec<BigInt> = g.summand_orders();
        let k = orders.len();
        Tower {
            orders: vec![orders; levels],
            maps: vec![IntMatrix::identity(k); levels.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn level(&self, k: usize) -> FinAbGroup {
        FinAbGroup::from_diagonal(self.orders[k].iter().cloned())
    }

    fn reduce(&self, m: &IntMatrix, level: usize) -> IntMatrix {
        let cols = m
            .columns()
            .iter()
            .map(|col| {
                col.iter()
                    .filter_map(|(i, v)| {
                        let o = &self.orders[level][*i];
                        let r = if o.is_zero() { v.clone() } else { v.mod_floor(o) };
                        (!r.is_zero()).then_some((*i, r))
                    })
                    .collect()
            })
            .collect();
        IntMatrix::from_columns(m.nrows(), cols)
    }

    /// im(A_from -> A_level) as a subgroup, with its structure.
    fn image(&self, from: usize, level: usize) -> Result<FinAbGroup> {
        let mut m = IntMatrix::identity(self.orders[from].len());
        for k in (level..from).rev() {
            m = self.reduce(&self.maps[k].mul(&m)?, k);
        }
        let gens = self.orders[level].len();
        let rel = IntMatrix::from_columns(
            gens,
            self.orders[level]
                .iter()
                .enumerate()
                .map(|(i, o)| if o.is_zero() { vec![] } else { vec![(i, o.clone())] })
                .collect(),
        );
        let mut cols = m.columns().to_vec();
        cols.extend(rel.columns().iter().cloned());
        let span = IntMatrix::from_columns(gens, cols);
        subquotient(&span, &rel)
    }

    /// Inverse limit via stable images. Levels are finite, so the tower is
    /// Mittag-Leffler and lim^1 vanishes.
    ///
    /// The image of A_t in A_k is taken as stable once the two highest
    /// available sources give images of the same order. The limit is read
    /// off at the highest level with a stable image, and that stable image
    /// must have the same order on at least two consecutive levels.
    pub fn limit(&self) -> Result<TowerLimit> {
        let n = self.len();
        if n < 3 {
            return Err(Error::TowerBoundExceeded(n));
        }
        let top = n - 1;
        let mut from_top = Vec::with_capacity(n);
        let mut stable: Vec<Option<BigInt>> = Vec::with_capacity(n);
        for k in 0..n {
            let g = self.image(top, k)?;
            let order = g
                .order()
                .ok_or_else(|| Error::InvalidArgument(format!("tower level {} is not finite", k + 1)))?;
            let certified = k < top && self.image(top - 1, k)?.order() == Some(order.clone());
            stable.push(certified.then(|| order.clone()));
            from_top.push((g, order));
        }
        let Some(last) = (0..n).rev().find(|&k| stable[k].is_some()) else {
            return Err(Error::TowerBoundExceeded(n));
        };
        let mut from = last;
        while from > 0 && stable[from - 1].is_some() && stable[from - 1] == stable[last] {
            from -= 1;
        }
        if from == last {
            return Err(Error::TowerBoundExceeded(n));
        }
        Ok(TowerLimit {
            limit: from_top[last].0.clone(),
            lim1: FinAbGroup::trivial(),
            lim1_reason: "levelwise finite tower is Mittag-Leffler".into(),
            stable_from: from + 1,
            stable_image_orders: from_top.iter().map(|(_, o)| o.to_string()).collect(),
        })
    }
}

/// Inverse limit of a tower; see [`Tower::limit`].
pub fn tower_limit(t: &Tower) -> Result<TowerLimit> {
    t.limit()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn constant_tower() {
        let g = FinAbGroup::from_orders(&[2, 4]);
        let l = Tower::constant(&g, 4).limit().unwrap();
        assert_eq!(l.limit, g);
        assert!(l.lim1.is_trivial());
    }

    #[test]
    fn reduction_tower() {
        // Z/2^min(n,2), n = 1..5, reduction maps
        let orders: Vec<Vec<BigInt>> = (1..=5u32).map(|n| vec![b(2u64.pow(n.min(2)))]).collect();
        let maps = vec![IntMatrix::identity(1); 4];
        let l = Tower::new(orders, maps).unwrap().limit().unwrap();
        assert_eq!(l.limit, FinAbGroup::cyclic(4));
        assert_eq!(l.stable_from, 2);
    }

    #[test]
    fn multiplication_by_p_kills() {
        let orders = vec![vec![b(3)]; 4];
        let maps = vec![IntMatrix::from_rows(&[vec![3]]); 3];
        let l = Tower::new(orders, maps).unwrap().limit().unwrap();
        assert!(l.limit.is_trivial());
    }

    #[test]
    fn slow_multiplication_by_p_tower() {
        // Hom(Z/8, Z/2^n) with transitions multiplication by 2 once n >= 3
        let orders: Vec<Vec<BigInt>> = (1..=9u32).map(|n| vec![b(2u64.pow(n.min(3)))]).collect();
        let maps = (1..9u32)
            .map(|n| IntMatrix::from_rows(&[vec![if n >= 3 { 2 } else { 1 }]]))
            .collect();
        let l = Tower::new(orders, maps).unwrap().limit().unwrap();
        assert!(l.limit.is_trivial());
    }

    #[test]
    fn growing_tower_exceeds_bound() {
        let orders: Vec<Vec<BigInt>> = (1..=4u32).map(|n| vec![b(2u64.pow(n))]).collect();
        let maps = vec![IntMatrix::identity(1); 3];
        assert!(matches!(
            Tower::new(orders, maps).unwrap().limit(),
            Err(Error::TowerBoundExceeded(4))
        ));
    }
}
