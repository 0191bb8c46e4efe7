use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A finitely generated abelian group Z^r + Z/d_1 + ... + Z/d_k in invariant
/// factor normal form (d_1 | d_2 | ... | d_k, every d_i > 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Z/n (Z for n = 0, trivial for n = 1).
    pub fn cyclic(n: u64) -> Self {
        Self::from_diagonal([BigInt::from(n)])
    }

    /// Z/d_1 + Z/d_2 + ... for arbitrary d_i (0 means Z, +-1 means trivial),
    /// normalized to invariant factors.
    pub fn from_diagonal<I: IntoIterator<Item = BigInt>>(entries: I) -> Self {
        let mut free_rank = 0;
        let mut tors: Vec<BigInt> = Vec::new();
        for e in entries {
            let e = e.abs();
            if e.is_zero() {
                free_rank += 1;
            } else if !e.is_one() {
                tors.push(e);
            }
        }
        // Pairwise (gcd, lcm) sweeps produce the divisibility chain.
        let n = tors.len();
        for i in 0..n {
            for j in i + 1..n {
                let g = tors[i].gcd(&tors[j]);
                let l = tors[i].lcm(&tors[j]);
                tors[i] = g;
                tors[j] = l;
            }
        }
        tors.retain(|t| !t.is_one());
        FinAbGroup {
            free_rank,
            torsion: tors,
        }
    }

    pub fn from_orders(orders: &[u64]) -> Self {
        Self::from_diagonal(orders.iter().map(|&o| BigInt::from(o)))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Number of cyclic summands in the normal form.
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().product())
    }

    /// Exponent of the torsion subgroup (1 if torsion-free).
    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Whether n kills the group.
    pub fn is_killed_by(&self, n: &BigInt) -> bool {
        self.free_rank == 0 && self.torsion.iter().all(|d| (n % d).is_zero())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_diagonal(self.summand_orders().into_iter().chain(other.summand_orders()))
    }

    /// Orders of the cyclic summands, free summands as 0.
    pub fn summand_orders(&self) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self.torsion.clone();
        v.extend(std::iter::repeat(BigInt::zero()).take(self.free_rank));
        v
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in self.summand_orders() {
            for b in other.summand_orders() {
                out.push(a.gcd(&b));
            }
        }
        Self::from_diagonal(out)
    }

    pub fn tor(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.torsion {
            for b in &other.torsion {
                out.push(a.gcd(b));
            }
        }
        Self::from_diagonal(out)
    }

    /// G / nG = G (x) Z/n.
    pub fn mod_n(&self, n: &BigInt) -> Self {
        self.tensor(&Self::from_diagonal([n.clone()]))
    }

    /// Order of the n-torsion subgroup G[n] (infinite groups: only the
    /// torsion part is counted, free part contributes nothing).
    pub fn n_torsion_order(&self, n: &BigInt) -> BigInt {
        self.torsion.iter().map(|d| d.gcd(n)).product()
    }

    /// Keep only summands whose order is a power of p (useful after
    /// localizing).
    pub fn p_primary(&self, p: u64) -> Self {
        let pb = BigInt::from(p);
        let mut out = Vec::new();
        for d in &self.torsion {
            let mut q = BigInt::one();
            let mut r = d.clone();
            while (&r % &pb).is_zero() {
                r /= &pb;
                q *= &pb;
            }
            out.push(q);
        }
        let mut g = Self::from_diagonal(out);
        g.free_rank = self.free_rank;
        g
    }

    /// (Z/p^N)^r shorthand.
    pub fn power_of_cyclic(n: &BigInt, r: usize) -> Self {
        Self::from_diagonal(std::iter::repeat(n.clone()).take(r))
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == self.torsion[i] {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{}", self.torsion[i]));
            } else {
                parts.push(format!("(Z/{})^{}", self.torsion[i], j - i));
            }
            i = j;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[u64]) -> FinAbGroup {
        FinAbGroup::from_orders(orders)
    }

    #[test]
    fn normal_form() {
        assert_eq!(g(&[2, 3]), g(&[6]));
        assert_eq!(g(&[4, 2, 1]).torsion, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(g(&[6, 4]).torsion, vec![BigInt::from(2), BigInt::from(12)]);
        assert_eq!(g(&[0, 1, 0]).free_rank, 2);
        assert!(g(&[1, 1]).is_trivial());
    }

    #[test]
    fn tensor_and_tor() {
        assert_eq!(g(&[2]).tensor(&g(&[3])), FinAbGroup::trivial());
        assert_eq!(g(&[4]).tensor(&g(&[6])), g(&[2]));
        assert_eq!(g(&[0]).tensor(&g(&[5])), g(&[5]));
        assert_eq!(g(&[4, 0]).tor(&g(&[2, 0])), g(&[2]));
    }

    #[test]
    fn display() {
        assert_eq!(g(&[0, 2, 2, 4]).to_string(), "Z + (Z/2)^2 + Z/4");
        assert_eq!(FinAbGroup::trivial().to_string(), "0");
    }

    #[test]
    fn n_torsion() {
        assert_eq!(g(&[8]).n_torsion_order(&BigInt::from(4)), BigInt::from(4));
        assert_eq!(g(&[2, 8]).n_torsion_order(&BigInt::from(2)), BigInt::from(4));
    }
}
