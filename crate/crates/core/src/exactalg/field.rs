use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial division; all primes used here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Shipped moduli for F_{p^d}, p <= 7, d <= 3 (Conway polynomials),
/// coefficients listed from the constant term up, monic.
fn default_modulus(p: u64, d: usize) -> Option<Vec<u64>> {
    let m: &[u64] = match (p, d) {
        (2, 1) => &[1, 1],
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (3, 1) => &[1, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (5, 1) => &[3, 1],
        (5, 2) => &[2, 4, 1],
        (5, 3) => &[3, 3, 0, 1],
        (7, 1) => &[4, 1],
        (7, 2) => &[3, 6, 1],
        (7, 3) => &[4, 0, 6, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

/// Field parameters as they travel next to serialized values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldHeader {
    pub p: u64,
    pub d: usize,
    /// Monic modulus, constant term first.
    pub modulus: Vec<u64>,
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct FieldInner {
    p: u64,
    d: usize,
    modulus: Vec<u64>,
}

/// The finite field F_{p^d} = F_p[x]/(f) for a fixed monic irreducible f.
///
/// Cheap to clone; elements carry a handle to their field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Field(Arc<FieldInner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.d)
    }
}

impl Field {
    /// F_{p^d} with the shipped default modulus.
    pub fn new(p: u64, d: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let modulus = if d == 1 {
            vec![0, 1]
        } else {
            default_modulus(p, d).ok_or_else(|| {
                Error::InvalidField(format!(
                    "no shipped modulus for p = {p}, d = {d}; supply one explicitly"
                ))
            })?
        };
        Self::with_modulus(p, modulus)
    }

    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// F_p[x]/(f) for a caller-supplied monic modulus (constant term first).
    /// Irreducibility is checked by trial division.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(format!(
                "modulus coefficients must lie in [0, {p})"
            )));
        }
        if !poly_is_irreducible(p, &modulus) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let d = modulus.len() - 1;
        Ok(Field(Arc::new(FieldInner { p, d, modulus })))
    }

    pub fn from_header(h: &FieldHeader) -> Result<Self> {
        let f = Self::with_modulus(h.p, h.modulus.clone())?;
        if f.degree() != h.d {
            return Err(Error::InvalidField(format!(
                "header degree {} disagrees with modulus degree {}",
                h.d,
                f.degree()
            )));
        }
        Ok(f)
    }

    pub fn header(&self) -> FieldHeader {
        FieldHeader {
            p: self.0.p,
            d: self.0.d,
            modulus: self.0.modulus.clone(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.d
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn order(&self) -> u64 {
        self.0.p.pow(self.0.d as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![0; self.0.d],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> FieldElement {
        let mut coeffs = vec![0; self.0.d];
        coeffs[0] = n % self.0.p;
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    /// The class of x, a generator of the field over F_p (for d = 1 this is
    /// the root of the linear modulus).
    pub fn generator(&self) -> FieldElement {
        if self.0.d == 1 {
            let root = (self.0.p - self.0.modulus[0]) % self.0.p;
            return self.from_u64(root);
        }
        let mut coeffs = vec![0; self.0.d];
        coeffs[1] = 1;
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.0.d {
            return Err(Error::Mismatch(format!(
                "expected {} coordinates, got {}",
                self.0.d,
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {c} not in [0, {})",
                self.0.p
            )));
        }
        Ok(FieldElement {
            field: self.clone(),
            coeffs: coeffs.to_vec(),
        })
    }

    /// Element with the given index in base-p little-endian enumeration.
    pub fn element_from_index(&self, mut idx: u64) -> FieldElement {
        let mut coeffs = vec![0; self.0.d];
        for c in coeffs.iter_mut() {
            *c = idx % self.0.p;
            idx /= self.0.p;
        }
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.element_from_index(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let coeffs = (0..self.0.d).map(|_| rng.gen_range(0..self.0.p)).collect();
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }
}

/// An element of F_{p^d}, coordinates in the basis 1, x, ..., x^{d-1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs)
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn p(&self) -> u64 {
        self.field.0.p
    }

    fn check(&self, other: &Self) {
        assert!(
            self.field == other.field,
            "field mismatch: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.p();
        let coeffs = self.coeffs.iter().map(|a| (p - a) % p).collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.p();
        let d = self.coeffs.len();
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        let coeffs = reduce_mod(p, prod, &self.field.0.modulus);
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero field element".into()));
        }
        Ok(self.pow(self.field.order() - 2))
    }

    /// x -> x^p.
    pub fn frobenius(&self) -> Self {
        self.pow(self.p())
    }

    /// Inverse of the Frobenius, x -> x^{p^{d-1}}.
    pub fn frobenius_inv(&self) -> Self {
        let d = self.field.degree() as u32;
        self.pow(self.p().pow(d - 1))
    }
}

/// Reduce a polynomial over F_p modulo a monic polynomial; returns exactly
/// deg(modulus) coefficients.
fn reduce_mod(p: u64, mut a: Vec<u64>, modulus: &[u64]) -> Vec<u64> {
    let d = modulus.len() - 1;
    for k in (d..a.len()).rev() {
        let c = a[k] % p;
        if c == 0 {
            continue;
        }
        a[k] = 0;
        for i in 0..d {
            let t = c * modulus[i] % p;
            a[k - d + i] = (a[k - d + i] + p - t) % p;
        }
    }
    a.resize(d, 0);
    a.iter_mut().for_each(|c| *c %= p);
    a
}

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

/// Remainder of a by monic b over F_p.
fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bi) in b.iter().enumerate() {
                let t = lead * bi % p;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    poly_trim(r)
}

fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    // Try every monic divisor of degree 1..=d/2.
    for deg in 1..=d / 2 {
        let count = p.pow(deg as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut k = idx;
            for _ in 0..deg {
                g.push(k % p);
                k /= p;
            }
            g.push(1);
            let r = poly_rem(p, f, &g);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_moduli_are_irreducible() {
        for p in [2u64, 3, 5, 7] {
            for d in 1..=3 {
                let f = Field::new(p, d).unwrap();
                assert_eq!(f.degree(), d);
                assert!(poly_is_irreducible(p, f.modulus()));
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(Field::with_modulus(2, vec![1, 0, 1]).is_err()); // x^2+1 = (x+1)^2
        assert!(Field::new(11, 2).is_err());
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
        for (p, d) in [(2, 2), (3, 2), (2, 3), (5, 2)] {
            let f = Field::new(p, d).unwrap();
            let q = f.order();
            for x in f.elements().filter(|x| !x.is_zero()) {
                assert_eq!(x.pow(q - 1), f.one());
                assert_eq!(x.mul(&x.inverse().unwrap()), f.one());
            }
        }
    }

    #[test]
    fn frobenius_has_order_d() {
        for (p, d) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
            let f = Field::new(p, d).unwrap();
            for x in f.elements() {
                let mut y = x.clone();
                for _ in 0..d {
                    y = y.frobenius();
                }
                assert_eq!(y, x);
                assert_eq!(x.frobenius().frobenius_inv(), x);
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(a.add(&b).frobenius(), a.frobenius().add(&b.frobenius()));
            }
        }
    }
}
