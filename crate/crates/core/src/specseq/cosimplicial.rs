use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::homology::{ChainComplex, IntMatrix};

/// A truncated cosimplicial free module: ranks of levels 0..=top and the
/// coface maps delta^k : level i-1 -> level i, k = 0..=i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosimplicialModule {
    ranks: Vec<usize>,
    // cofaces[i][k] for i >= 1; cofaces[0] is empty
    cofaces: Vec<Vec<IntMatrix>>,
}

impl CosimplicialModule {
    /// Checks shapes and the identities delta^l delta^k = delta^k delta^{l-1}
    /// for k < l.
    pub fn new(ranks: Vec<usize>, cofaces: Vec<Vec<IntMatrix>>) -> Result<Self> {
        if ranks.is_empty() || cofaces.len() != ranks.len() {
            return Err(Error::MalformedComplex(format!(
                "{} levels need {} coface families, got {}",
                ranks.len(),
                ranks.len(),
                cofaces.len()
            )));
        }
        if !cofaces[0].is_empty() {
            return Err(Error::MalformedComplex("level 0 has no cofaces".into()));
        }
        for i in 1..ranks.len() {
            if cofaces[i].len() != i + 1 {
                return Err(Error::MalformedComplex(format!(
                    "level {i} needs {} cofaces, got {}",
                    i + 1,
                    cofaces[i].len()
                )));
            }
            for (k, m) in cofaces[i].iter().enumerate() {
                if m.nrows() != ranks[i] || m.ncols() != ranks[i - 1] {
                    return Err(Error::MalformedComplex(format!(
                        "coface {k} into level {i} is {}x{}, expected {}x{}",
                        m.nrows(),
                        m.ncols(),
                        ranks[i],
                        ranks[i - 1]
                    )));
                }
            }
        }
        let c = CosimplicialModule { ranks, cofaces };
        c.check_identities()?;
        Ok(c)
    }

    fn check_identities(&self) -> Result<()> {
        // level i-1 -> i -> i+1
        for i in 1..self.ranks.len().saturating_sub(1) {
            for l in 1..=i + 1 {
                for k in 0..l {
                    let lhs = self.cofaces[i + 1][l].mul(&self.cofaces[i][k])?;
                    let rhs = self.cofaces[i + 1][k].mul(&self.cofaces[i][l - 1])?;
                    if lhs != rhs {
                        return Err(Error::CosimplicialIdentity { level: i + 1, k, l });
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant cosimplicial module on Z^rank: every coface is the
    /// identity.
    pub fn constant(rank: usize, top: usize) -> Self {
        let cofaces = (0..=top)
            .map(|i| {
                if i == 0 {
                    Vec::new()
                } else {
                    vec![IntMatrix::identity(rank); i + 1]
                }
            })
            .collect();
        CosimplicialModule {
            ranks: vec![rank; top + 1],
            cofaces,
        }
    }

    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, level: usize) -> usize {
        self.ranks.get(level).copied().unwrap_or(0)
    }

    /// delta^k : level i-1 -> level i.
    pub fn coface(&self, level: usize, k: usize) -> Option<&IntMatrix> {
        self.cofaces.get(level)?.get(k)
    }

    /// Apply a functor levelwise: `f(level, coface)` maps each coface, `rank`
    /// gives the new level ranks. Identities are rechecked.
    pub fn map_levels(&self, rank: impl Fn(usize) -> usize, f: impl Fn(&IntMatrix) -> IntMatrix) -> Result<Self> {
        let ranks = self.ranks.iter().map(|&r| rank(r)).collect();
        let cofaces = self.cofaces.iter().map(|fam| fam.iter().map(&f).collect()).collect();
        Self::new(ranks, cofaces)
    }
}

/// d^i = sum_k (-1)^k delta^k on level i, as a cochain complex in degrees
/// 0..=top.
pub fn alternating_face_complex(c: &CosimplicialModule) -> Result<ChainComplex> {
    let mut diffs = Vec::with_capacity(c.top());
    for i in 1..=c.top() {
        let mut d = IntMatrix::zeros(c.rank(i), c.rank(i - 1));
        for (k, m) in c.cofaces[i].iter().enumerate() {
            let s = if k % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
            d = d.add(&m.scale(&s))?;
        }
        diffs.push(d);
    }
    ChainComplex::cohomological(0, c.ranks.clone(), diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{homology, Coefficients, FinAbGroup};

    #[test]
    fn constant_module_has_cohomology_in_degree_zero() {
        let c = CosimplicialModule::constant(2, 5);
        let h = homology(&alternating_face_complex(&c).unwrap(), &Coefficients::witt(2, 3)).unwrap();
        assert_eq!(h[&0], FinAbGroup::from_orders(&[8, 8]));
        for n in 1..5 {
            assert!(h[&n].is_trivial());
        }
    }

    #[test]
    fn identity_violation_is_reported() {
        // swap the two cofaces into level 1 of a rank-2 module with a
        // non-identity map; delta^1 delta^0 = delta^0 delta^0 then fails
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let id = IntMatrix::identity(2);
        let r = CosimplicialModule::new(
            vec![2, 2, 2],
            vec![vec![], vec![swap.clone(), id.clone()], vec![id.clone(), id.clone(), id]],
        );
        assert!(matches!(r, Err(Error::CosimplicialIdentity { level: 2, .. })));
    }
}
