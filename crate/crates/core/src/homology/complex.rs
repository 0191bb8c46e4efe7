use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Direction of the differentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// d_n : C_n -> C_{n-1}
    Homological,
    /// d^n : C^n -> C^{n+1}
    Cohomological,
}

/// Coefficients for homology.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    /// Z/m, m >= 2. W_N(F_p) = Z/p^N is `Mod(p^N)`.
    Mod(BigInt),
}

impl Coefficients {
    pub fn witt(p: u64, n: usize) -> Self {
        Coefficients::Mod(BigInt::from(p).pow(n as u32))
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            Coefficients::Integers => None,
            Coefficients::Mod(m) => Some(m),
        }
    }
}

/// A bounded complex of finitely generated free abelian groups in degrees
/// lo..=hi. `diffs[k]` connects degrees lo+k and lo+k+1 in the direction
/// fixed by the grading. d o d = 0 is checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    ranks: Vec<usize>,
    diffs: Vec<IntMatrix>,
    grading: Grading,
}

impl ChainComplex {
    pub fn new(lo: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>, grading: Grading) -> Result<Self> {
        let c = ChainComplex {
            lo,
            ranks,
            diffs,
            grading,
        };
        c.validate()?;
        Ok(c)
    }

    /// Homological complex; `diffs[k]` is d_{lo+k+1}: C_{lo+k+1} -> C_{lo+k}.
    pub fn homological(lo: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self> {
        Self::new(lo, ranks, diffs, Grading::Homological)
    }

    /// Cochain complex; `diffs[k]` is d^{lo+k}: C^{lo+k} -> C^{lo+k+1}.
    pub fn cohomological(lo: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self> {
        Self::new(lo, ranks, diffs, Grading::Cohomological)
    }

    fn validate(&self) -> Result<()> {
        if self.ranks.is_empty() {
            return Err(Error::MalformedComplex("complex has no terms".into()));
        }
        if self.diffs.len() + 1 != self.ranks.len() {
            return Err(Error::MalformedComplex(format!(
                "{} terms need {} differentials, got {}",
                self.ranks.len(),
                self.ranks.len() - 1,
                self.diffs.len()
            )));
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let (src, dst) = match self.grading {
                Grading::Homological => (self.ranks[k + 1], self.ranks[k]),
                Grading::Cohomological => (self.ranks[k], self.ranks[k + 1]),
            };
            if d.ncols() != src || d.nrows() != dst {
                return Err(Error::MalformedComplex(format!(
                    "differential {k} has shape {}x{}, expected {dst}x{src}",
                    d.nrows(),
                    d.ncols()
                )));
            }
        }
        for k in 0..self.diffs.len().saturating_sub(1) {
            let comp = match self.grading {
                Grading::Homological => self.diffs[k].mul(&self.diffs[k + 1])?,
                Grading::Cohomological => self.diffs[k + 1].mul(&self.diffs[k])?,
            };
            if !comp.is_zero() {
                let deg = self.lo + k as i64 + 1;
                return Err(Error::MalformedComplex(format!("d o d != 0 through degree {deg}")));
            }
        }
        Ok(())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn diffs(&self) -> &[IntMatrix] {
        &self.diffs
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.lo && n <= self.hi()
    }

    pub fn rank(&self, n: i64) -> usize {
        if self.contains(n) {
            self.ranks[(n - self.lo) as usize]
        } else {
            0
        }
    }

    /// The differential leaving degree n (None at the end of the range).
    pub fn outgoing(&self, n: i64) -> Option<&IntMatrix> {
        if !self.contains(n) {
            return None;
        }
        let k = (n - self.lo) as usize;
        match self.grading {
            Grading::Homological => k.checked_sub(1).map(|i| &self.diffs[i]),
            Grading::Cohomological => self.diffs.get(k),
        }
    }

    /// The differential arriving in degree n.
    pub fn incoming(&self, n: i64) -> Option<&IntMatrix> {
        if !self.contains(n) {
            return None;
        }
        let k = (n - self.lo) as usize;
        match self.grading {
            Grading::Homological => self.diffs.get(k),
            Grading::Cohomological => k.checked_sub(1).map(|i| &self.diffs[i]),
        }
    }

    /// Degree the differential out of n lands in.
    pub fn next_degree(&self, n: i64) -> i64 {
        match self.grading {
            Grading::Homological => n - 1,
            Grading::Cohomological => n + 1,
        }
    }

    /// Shift all degrees by k.
    pub fn shift(&self, k: i64) -> Self {
        ChainComplex {
            lo: self.lo + k,
            ..self.clone()
        }
    }

    /// Hom(-, Z): transposed differentials, opposite grading, same degrees.
    pub fn dual(&self) -> Self {
        ChainComplex {
            lo: self.lo,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.transpose()).collect(),
            grading: match self.grading {
                Grading::Homological => Grading::Cohomological,
                Grading::Cohomological => Grading::Homological,
            },
        }
    }

    /// Truncate to degrees lo..=hi (intersected with the current range).
    pub fn truncate(&self, hi: i64) -> Self {
        let top = hi.min(self.hi());
        let len = (top - self.lo + 1).max(1) as usize;
        ChainComplex {
            lo: self.lo,
            ranks: self.ranks[..len].to_vec(),
            diffs: self.diffs[..len - 1].to_vec(),
            grading: self.grading,
        }
    }

    /// Tensor product with Koszul signs: d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy.
    /// Basis of (C (x) D)_n: pairs (i, j), i + j = n, ordered by i ascending,
    /// then lexicographically (x index major).
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.grading != other.grading {
            return Err(Error::Mismatch("tensor of complexes with different gradings".into()));
        }
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        let blocks = |n: i64| -> Vec<(i64, i64)> {
            (self.lo..=self.hi())
                .filter_map(|i| {
                    let j = n - i;
                    other.contains(j).then_some((i, j))
                })
                .collect()
        };
        let offsets = |n: i64| -> (Vec<(i64, i64, usize)>, usize) {
            let mut off = 0;
            let mut v = Vec::new();
            for (i, j) in blocks(n) {
                v.push((i, j, off));
                off += self.rank(i) * other.rank(j);
            }
            (v, off)
        };
        let ranks: Vec<usize> = (lo..=hi).map(|n| offsets(n).1).collect();
        let mut diffs = Vec::new();
        for n in lo..hi {
            // differential between degree n and n+1, in grading direction
            let (src_deg, dst_deg) = match self.grading {
                Grading::Homological => (n + 1, n),
                Grading::Cohomological => (n, n + 1),
            };
            let (src_blocks, src_dim) = offsets(src_deg);
            let (dst_blocks, dst_dim) = offsets(dst_deg);
            let find = |i: i64, j: i64| dst_blocks.iter().find(|b| b.0 == i && b.1 == j).map(|b| b.2);
            let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); src_dim];
            for &(i, j, off) in &src_blocks {
                let (ri, rj) = (self.rank(i), other.rank(j));
                let sign = if i.rem_euclid(2) == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                // dx (x) y
                if let (Some(dx), Some(doff)) = (self.outgoing(i), find(self.next_degree(i), j)) {
                    for a in 0..ri {
                        for (a2, v) in dx.column(a) {
                            for b in 0..rj {
                                columns[off + a * rj + b].push((doff + a2 * rj + b, v.clone()));
                            }
                        }
                    }
                }
                // (-1)^i x (x) dy
                let tj = other.next_degree(j);
                if let (Some(dy), Some(doff)) = (other.outgoing(j), find(i, tj)) {
                    let rj2 = other.rank(tj);
                    for a in 0..ri {
                        for b in 0..rj {
                            for (b2, v) in dy.column(b) {
                                columns[off + a * rj + b].push((doff + a * rj2 + b2, v * &sign));
                            }
                        }
                    }
                }
            }
            diffs.push(IntMatrix::from_columns(dst_dim, columns));
        }
        Self::new(lo, ranks, diffs, self.grading)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lo": self.lo,
            "hi": self.hi(),
            "grading": self.grading,
            "ranks": self.ranks,
            "differentials": self.diffs.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("complex JSON: {what}"));
        let lo = v.get("lo").and_then(Value::as_i64).ok_or_else(|| bad("missing lo"))?;
        let ranks: Vec<usize> = v
            .get("ranks")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing ranks"))?
            .iter()
            .map(|r| r.as_u64().map(|x| x as usize).ok_or_else(|| bad("rank")))
            .collect::<Result<_>>()?;
        if let Some(hi) = v.get("hi").and_then(Value::as_i64) {
            if hi != lo + ranks.len() as i64 - 1 {
                return Err(bad("hi inconsistent with ranks"));
            }
        }
        let grading = match v.get("grading") {
            None => Grading::Homological,
            Some(g) => serde_json::from_value(g.clone()).map_err(|_| bad("grading"))?,
        };
        let ds = v
            .get("differentials")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing differentials"))?;
        let mut diffs = Vec::new();
        for (k, d) in ds.iter().enumerate() {
            if k + 1 >= ranks.len() {
                return Err(bad("too many differentials"));
            }
            let (rows, cols) = match grading {
                Grading::Homological => (ranks[k], ranks[k + 1]),
                Grading::Cohomological => (ranks[k + 1], ranks[k]),
            };
            diffs.push(IntMatrix::from_json(d, rows, cols)?);
        }
        Self::new(lo, ranks, diffs, grading)
    }

    /// View a cochain complex C^n as the chain complex C_{-n}.
    pub fn reindex_as_homological(&self) -> Self {
        match self.grading {
            Grading::Homological => self.clone(),
            Grading::Cohomological => {
                let mut ranks = self.ranks.clone();
                ranks.reverse();
                let mut diffs = self.diffs.clone();
                diffs.reverse();
                ChainComplex {
                    lo: -self.hi(),
                    ranks,
                    diffs,
                    grading: Grading::Homological,
                }
            }
        }
    }

    /// Inverse of `reindex_as_homological`: C_n becomes C^{-n}.
    pub fn reindex_as_cohomological(&self) -> Self {
        match self.grading {
            Grading::Cohomological => self.clone(),
            Grading::Homological => {
                let mut ranks = self.ranks.clone();
                ranks.reverse();
                let mut diffs = self.diffs.clone();
                diffs.reverse();
                ChainComplex {
                    lo: -self.hi(),
                    ranks,
                    diffs,
                    grading: Grading::Cohomological,
                }
            }
        }
    }

    /// Whether every differential is zero.
    pub fn has_zero_differentials(&self) -> bool {
        self.diffs.iter().all(|d| d.is_zero())
    }

    /// Degreewise identity maps, a convenience for homotopy checks.
    pub fn identity_map(&self) -> Vec<IntMatrix> {
        self.ranks.iter().map(|&r| IntMatrix::identity(r)).collect()
    }

    /// Degreewise zero maps.
    pub fn zero_map(&self) -> Vec<IntMatrix> {
        self.ranks.iter().map(|&r| IntMatrix::zeros(r, r)).collect()
    }
}

/// A chain map between complexes with identical degree ranges: one matrix
/// per degree lo..=hi.
pub fn is_chain_map(src: &ChainComplex, dst: &ChainComplex, f: &[IntMatrix]) -> Result<bool> {
    if src.grading() != dst.grading() || src.lo() != dst.lo() || src.hi() != dst.hi() {
        return Err(Error::Mismatch("chain map between complexes of different shape".into()));
    }
    if f.len() != src.ranks().len() {
        return Err(Error::Mismatch("chain map needs one matrix per degree".into()));
    }
    for n in src.lo()..=src.hi() {
        let (Some(ds), Some(dd)) = (src.outgoing(n), dst.outgoing(n)) else {
            continue;
        };
        let k = (n - src.lo()) as usize;
        let m = (src.next_degree(n) - src.lo()) as usize;
        if dd.mul(&f[k])? != f[m].mul(ds)? {
            return Ok(false);
        }
    }
    Ok(true)
}
