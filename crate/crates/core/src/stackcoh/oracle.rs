use num_bigint::BigInt;

use crate::barstack::GroupElements;
use crate::error::{Error, Result};
use crate::homology::{ChainComplex, FinAbGroup, IntMatrix};
use crate::specseq::{alternating_face_complex, binomial, e1_row_cosimplicial, CosimplicialModule};

/// Coefficient cohomology of the Cech levels G^i of BG, with cofaces: the
/// E_1 page of the descent spectral sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientOracle {
    /// A constant group: H^0(G^i) = Maps(G^i, W_N), higher cohomology zero.
    ConstantGroup(FinAbGroup),
    /// An abelian variety model with H^1 free of rank r: H^j(A^i) =
    /// Lambda^j(V^{+i}).
    AbelianModel { rank: usize },
}

impl CoefficientOracle {
    /// Rank of H^j at level i.
    pub fn rank(&self, level: usize, j: usize) -> Result<usize> {
        match self {
            CoefficientOracle::ConstantGroup(g) => {
                let q = GroupElements::new(g)?.order() as usize;
                Ok(if j == 0 { q.pow(level as u32) } else { 0 })
            }
            CoefficientOracle::AbelianModel { rank } => Ok(binomial(rank * level, j)),
        }
    }

    /// Row j through level `top` as a cosimplicial module.
    pub fn row_cosimplicial(&self, j: usize, top: usize) -> Result<CosimplicialModule> {
        match self {
            CoefficientOracle::ConstantGroup(g) if j == 0 => group_cochains(g, top),
            CoefficientOracle::ConstantGroup(_) => {
                let cofaces = (0..=top)
                    .map(|i| {
                        if i == 0 {
                            vec![]
                        } else {
                            vec![IntMatrix::zeros(0, 0); i + 1]
                        }
                    })
                    .collect();
                CosimplicialModule::new(vec![0; top + 1], cofaces)
            }
            CoefficientOracle::AbelianModel { rank } => e1_row_cosimplicial(*rank, j, top),
        }
    }

    pub fn row(&self, j: usize, top: usize) -> Result<ChainComplex> {
        alternating_face_complex(&self.row_cosimplicial(j, top)?)
    }

    /// Kunneth multiplicativity of ranks: H^j at level a + b is the graded
    /// tensor of levels a and b, for a, b <= max_level and j <= max_j.
    pub fn check_kunneth(&self, max_level: usize, max_j: usize) -> Result<bool> {
        for a in 0..=max_level {
            for b in 0..=max_level {
                for j in 0..=max_j {
                    let mut sum = 0;
                    for s in 0..=j {
                        sum += self.rank(a, s)? * self.rank(b, j - s)?;
                    }
                    if sum != self.rank(a + b, j)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Maps(G^i, Z) with cofaces pulled back along the faces of the nerve of G:
/// d_0 drops the first entry, d_k adds entries k and k+1, d_i drops the
/// last. Tuples are ordered lexicographically, matching the bar complex.
pub fn group_cochains(g: &FinAbGroup, top: usize) -> Result<CosimplicialModule> {
    let ge = GroupElements::new(g)?;
    let q = ge.order() as usize;
    let size = |i: usize| -> Result<usize> {
        q.checked_pow(i as u32)
            .filter(|&s| s <= 1 << 22)
            .ok_or_else(|| Error::BudgetExceeded(format!("|G|^{i} cochains")))
    };
    let mut ranks = Vec::with_capacity(top + 1);
    for i in 0..=top {
        ranks.push(size(i)?);
    }
    let mut cofaces = vec![Vec::new()];
    for i in 1..=top {
        let mut fam = Vec::with_capacity(i + 1);
        for k in 0..=i {
            // row x in G^i, column d_k(x) in G^{i-1}
            let mut cols: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); ranks[i - 1]];
            let mut t = vec![0u64; i];
            for x in 0..ranks[i] {
                let mut r = x;
                for slot in t.iter_mut().rev() {
                    *slot = (r % q) as u64;
                    r /= q;
                }
                let face: Vec<u64> = if k == 0 {
                    t[1..].to_vec()
                } else if k == i {
                    t[..i - 1].to_vec()
                } else {
                    let mut f = t[..k - 1].to_vec();
                    f.push(ge.add(t[k - 1], t[k]));
                    f.extend_from_slice(&t[k + 1..]);
                    f
                };
                let y = face.iter().fold(0usize, |acc, &a| acc * q + a as usize);
                cols[y].push((x, BigInt::from(1)));
            }
            fam.push(IntMatrix::from_columns(ranks[i], cols));
        }
        cofaces.push(fam);
    }
    CosimplicialModule::new(ranks, cofaces)
}
