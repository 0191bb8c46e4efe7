use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use serde_json::Value;

use super::field::{is_prime, Field, FieldElement, FieldHeader};
use crate::error::{Error, Result};

/// Ghost components w_n = sum_{i <= n} p^i x_i^{p^{n-i}} of an integer
/// coordinate vector.
pub fn ghost(x: &[BigInt], p: u64) -> Result<Vec<BigInt>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x.is_empty() {
        return Err(Error::InvalidArgument("ghost of an empty vector".into()));
    }
    let pb = BigInt::from(p);
    let mut out = Vec::with_capacity(x.len());
    for n in 0..x.len() {
        let mut w = BigInt::from(0);
        let mut pi = BigInt::from(1);
        for (i, xi) in x.iter().enumerate().take(n + 1) {
            let e = p.pow((n - i) as u32);
            w += &pi * xi.pow(e as u32);
            pi *= &pb;
        }
        out.push(w);
    }
    Ok(out)
}

/// Z[x]/(f~) reduced modulo p^N, where f~ is the modulus of the field
/// read as an integer polynomial. Reducing the Witt ring laws through this
/// torsion-free lift is what lets us solve the ghost equations numerically.
#[derive(Clone)]
struct LiftRing {
    p: u128,
    d: usize,
    modulus: u128,
    f: Vec<u128>,
}

type LiftElem = Vec<u128>;

impl LiftRing {
    fn new(field: &Field, len: usize) -> Self {
        let p = field.characteristic() as u128;
        LiftRing {
            p,
            d: field.degree(),
            modulus: p.pow(len as u32),
            f: field.modulus().iter().map(|&c| c as u128).collect(),
        }
    }

    fn lift(&self, x: &FieldElement) -> LiftElem {
        x.coeffs().iter().map(|&c| c as u128).collect()
    }

    fn add(&self, a: &LiftElem, b: &LiftElem) -> LiftElem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    fn sub(&self, a: &LiftElem, b: &LiftElem) -> LiftElem {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.modulus - y) % self.modulus)
            .collect()
    }

    fn scale(&self, a: &LiftElem, c: u128) -> LiftElem {
        a.iter().map(|x| x * c % self.modulus).collect()
    }

    fn mul(&self, a: &LiftElem, b: &LiftElem) -> LiftElem {
        let m = self.modulus;
        let d = self.d;
        let mut prod = vec![0u128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % m;
            }
        }
        for k in (d..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..d {
                let t = c * self.f[i] % m;
                prod[k - d + i] = (prod[k - d + i] + m - t) % m;
            }
        }
        prod.truncate(d);
        prod
    }

    fn one(&self) -> LiftElem {
        let mut v = vec![0; self.d];
        v[0] = 1 % self.modulus;
        v
    }

    fn pow(&self, a: &LiftElem, mut e: u128) -> LiftElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// A truncated Witt vector (x_0, ..., x_{N-1}) over F_{p^d}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WittVector {
    field: Field,
    coords: Vec<FieldElement>,
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{:?}", self.coords)
    }
}

impl WittVector {
    pub fn new(field: &Field, coords: Vec<FieldElement>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("Witt vectors need length >= 1".into()));
        }
        let bits = (coords.len() as f64) * (field.characteristic() as f64).log2();
        if bits > 60.0 {
            return Err(Error::InvalidArgument(format!(
                "p^N must stay below 2^60 (length {} too large)",
                coords.len()
            )));
        }
        if coords.iter().any(|c| c.field() != field) {
            return Err(Error::Mismatch("coordinate from a different field".into()));
        }
        Ok(WittVector {
            field: field.clone(),
            coords,
        })
    }

    /// Coordinates given as raw F_p-coefficient lists.
    pub fn from_coeffs(field: &Field, coords: &[Vec<u64>]) -> Result<Self> {
        let coords = coords.iter().map(|c| field.element(c)).collect::<Result<Vec<_>>>()?;
        Self::new(field, coords)
    }

    /// Convenience for prime fields: coordinates as residues mod p.
    pub fn from_residues(field: &Field, coords: &[u64]) -> Result<Self> {
        let raw: Vec<Vec<u64>> = coords
            .iter()
            .map(|&c| {
                let mut v = vec![0; field.degree()];
                v[0] = c;
                v
            })
            .collect();
        Self::from_coeffs(field, &raw)
    }

    pub fn zero(field: &Field, len: usize) -> Self {
        WittVector {
            field: field.clone(),
            coords: vec![field.zero(); len],
        }
    }

    pub fn one(field: &Field, len: usize) -> Self {
        Self::teichmuller(&field.one(), len)
    }

    /// [a] = (a, 0, ..., 0).
    pub fn teichmuller(a: &FieldElement, len: usize) -> Self {
        let field = a.field().clone();
        let mut coords = vec![field.zero(); len];
        coords[0] = a.clone();
        WittVector { field, coords }
    }

    /// The image of an integer under Z -> W_N(k).
    pub fn from_integer(field: &Field, len: usize, n: i64) -> Self {
        let ring = LiftRing::new(field, len);
        let m = ring.modulus as i128;
        let r = ((n as i128 % m + m) % m) as u128;
        let mut g = vec![0u128; field.degree()];
        g[0] = r;
        Self::from_ghosts(field, &ring, &vec![g; len])
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, len: usize, rng: &mut R) -> Self {
        WittVector {
            field: field.clone(),
            coords: (0..len).map(|_| field.random(rng)).collect(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !self.coords[0].is_zero()
    }

    /// p-adic valuation: index of the first nonzero coordinate (N for zero).
    pub fn valuation(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap_or(self.len())
    }

    fn same_params(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Mismatch(format!(
                "Witt vectors over {:?} and {:?}",
                self.field, other.field
            )));
        }
        if self.len() != other.len() {
            return Err(Error::Mismatch(format!(
                "Witt vectors of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    fn ghosts(&self, ring: &LiftRing) -> Vec<LiftElem> {
        let lifts: Vec<LiftElem> = self.coords.iter().map(|c| ring.lift(c)).collect();
        ghosts_of_lifts(ring, &lifts)
    }

    /// Recover coordinates from ghost components (mod p^N) of some lift.
    fn from_ghosts(field: &Field, ring: &LiftRing, ghosts: &[LiftElem]) -> Self {
        let n_len = ghosts.len();
        let p = ring.p;
        let mut lifts: Vec<LiftElem> = Vec::with_capacity(n_len);
        let mut coords = Vec::with_capacity(n_len);
        for n in 0..n_len {
            let mut s = ghosts[n].clone();
            let mut pi = 1u128;
            for (i, z) in lifts.iter().enumerate() {
                let term = ring.pow(z, p.pow((n - i) as u32));
                s = ring.sub(&s, &ring.scale(&term, pi));
                pi *= p;
            }
            let pn = p.pow(n as u32);
            let mut digits = Vec::with_capacity(ring.d);
            for c in &s {
                assert!(
                    c % pn == 0,
                    "ghost equation not integral at level {n}; Witt law violated"
                );
                digits.push(((c / pn) % p) as u64);
            }
            let elem = field.element(&digits).expect("digits reduced mod p");
            lifts.push(digits.iter().map(|&c| c as u128).collect());
            coords.push(elem);
        }
        WittVector {
            field: field.clone(),
            coords,
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(&LiftRing, &LiftElem, &LiftElem) -> LiftElem) -> Result<Self> {
        self.same_params(other)?;
        let ring = LiftRing::new(&self.field, self.len());
        let ga = self.ghosts(&ring);
        let gb = other.ghosts(&ring);
        let g: Vec<LiftElem> = ga.iter().zip(&gb).map(|(a, b)| op(&ring, a, b)).collect();
        Ok(Self::from_ghosts(&self.field, &ring, &g))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |r, a, b| r.add(a, b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |r, a, b| r.sub(a, b))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.combine(other, |r, a, b| r.mul(a, b))
    }

    pub fn neg(&self) -> Self {
        let ring = LiftRing::new(&self.field, self.len());
        let zero = vec![0u128; ring.d];
        let g: Vec<LiftElem> = self.ghosts(&ring).iter().map(|a| ring.sub(&zero, a)).collect();
        Self::from_ghosts(&self.field, &ring, &g)
    }

    /// Multiplication by an integer.
    pub fn scale(&self, n: i64) -> Self {
        &WittVector::from_integer(&self.field, self.len(), n) * self
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = WittVector::one(&self.field, self.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The Witt vector Frobenius; over a perfect field this is sigma, the
    /// coordinatewise p-th power.
    pub fn frobenius(&self) -> Self {
        WittVector {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c.frobenius()).collect(),
        }
    }

    pub fn frobenius_inv(&self) -> Self {
        WittVector {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c.frobenius_inv()).collect(),
        }
    }

    /// sigma^k for any integer k (negative powers use the inverse).
    pub fn sigma_pow(&self, k: i64) -> Self {
        let d = self.field.degree() as i64;
        let k = k.rem_euclid(d);
        let mut w = self.clone();
        for _ in 0..k {
            w = w.frobenius();
        }
        w
    }

    /// Verschiebung on W_N: shift right by one, prepend 0, drop the last
    /// coordinate.
    pub fn verschiebung(&self) -> Self {
        let mut coords = Vec::with_capacity(self.len());
        coords.push(self.field.zero());
        coords.extend(self.coords.iter().take(self.len() - 1).cloned());
        WittVector {
            field: self.field.clone(),
            coords,
        }
    }

    /// Reduction modulo p^e: zero out coordinates e..N.
    pub fn reduce_mod_p_pow(&self, e: usize) -> Self {
        let mut w = self.clone();
        for c in w.coords.iter_mut().skip(e) {
            *c = self.field.zero();
        }
        w
    }

    /// Some z with p^a z = self; requires valuation >= a. The top a
    /// coordinates of z are set to zero.
    pub fn div_p_pow(&self, a: usize) -> Result<Self> {
        if self.valuation() < a {
            return Err(Error::NotInvertible(format!("valuation {} < {a}", self.valuation())));
        }
        let mut coords: Vec<FieldElement> = self.coords[a..].to_vec();
        coords.resize(self.len(), self.field.zero());
        let shifted = WittVector {
            field: self.field.clone(),
            coords,
        };
        Ok(shifted.sigma_pow(-(a as i64)))
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotInvertible(format!("{self:?} is not a unit")));
        }
        let q = self.field.order();
        let n = self.len() as u32;
        let group_order = (q - 1) * q.pow(n - 1);
        Ok(self.pow(group_order - 1))
    }

    /// For k = F_p, the image under W_N(F_p) = Z/p^N, computed as
    /// sum_i p^i [x_i] with Teichmuller lifts [a] = a^{p^{N-1}} mod p^N.
    pub fn to_integer(&self) -> Result<u128> {
        if self.field.degree() != 1 {
            return Err(Error::Mismatch("integer form only exists over the prime field".into()));
        }
        let p = self.field.characteristic() as u128;
        let n = self.len() as u32;
        let m = p.pow(n);
        let mut acc = 0u128;
        let mut pi = 1u128;
        for c in &self.coords {
            let a = c.coeffs()[0] as u128;
            let t = pow_mod(a, p.pow(n - 1), m);
            acc = (acc + pi * t) % m;
            pi *= p;
        }
        Ok(acc)
    }

    /// Coordinates as JSON: one array of F_p-coefficients per coordinate.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coords
                .iter()
                .map(|c| Value::Array(c.coeffs().iter().map(|&x| Value::from(x)).collect()))
                .collect(),
        )
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidArgument("Witt vector must be a JSON array".into()))?;
        let coords = arr
            .iter()
            .map(|c| {
                let inner = c
                    .as_array()
                    .ok_or_else(|| Error::InvalidArgument("Witt coordinate must be an array".into()))?;
                inner
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .ok_or_else(|| Error::InvalidArgument("coefficient must be a non-negative integer".into()))
                    })
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(field, &coords)
    }

    pub fn header(&self) -> FieldHeader {
        self.field.header()
    }
}

fn ghosts_of_lifts(ring: &LiftRing, lifts: &[LiftElem]) -> Vec<LiftElem> {
    let p = ring.p;
    (0..lifts.len())
        .map(|n| {
            let mut w = vec![0u128; ring.d];
            let mut pi = 1u128;
            for (i, x) in lifts.iter().enumerate().take(n + 1) {
                let term = ring.pow(x, p.pow((n - i) as u32));
                w = ring.add(&w, &ring.scale(&term, pi));
                pi *= p;
            }
            w
        })
        .collect()
}

fn pow_mod(mut a: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    acc
}

impl std::ops::Add for &WittVector {
    type Output = WittVector;
    /// Panics on mismatched parameters; use `checked_add` to get an error.
    fn add(self, rhs: Self) -> WittVector {
        self.checked_add(rhs).expect("Witt parameters must agree")
    }
}

impl std::ops::Sub for &WittVector {
    type Output = WittVector;
    fn sub(self, rhs: Self) -> WittVector {
        self.checked_sub(rhs).expect("Witt parameters must agree")
    }
}

impl std::ops::Mul for &WittVector {
    type Output = WittVector;
    fn mul(self, rhs: Self) -> WittVector {
        self.checked_mul(rhs).expect("Witt parameters must agree")
    }
}

impl std::ops::Neg for &WittVector {
    type Output = WittVector;
    fn neg(self) -> WittVector {
        WittVector::neg(self)
    }
}

/// Which structure map to apply in [`witt_structure_map`].
#[derive(Debug, Clone)]
pub enum StructureMap {
    Frobenius,
    Verschiebung,
    Teichmuller(FieldElement),
}

/// F, V, or the Teichmuller lift of a field element (at the length of `w`).
pub fn witt_structure_map(w: &WittVector, which: &StructureMap) -> Result<WittVector> {
    match which {
        StructureMap::Frobenius => Ok(w.frobenius()),
        StructureMap::Verschiebung => Ok(w.verschiebung()),
        StructureMap::Teichmuller(a) => {
            if a.field() != w.field() {
                return Err(Error::Mismatch("Teichmuller input from another field".into()));
            }
            Ok(WittVector::teichmuller(a, w.len()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(field: &Field, c: &[u64]) -> WittVector {
        WittVector::from_residues(field, c).unwrap()
    }

    #[test]
    fn ghost_examples() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        for p in [2u64, 3, 5] {
            let a = 7i64;
            let g = ghost(&b(&[a, 0, 0]), p).unwrap();
            let pp = p as u32;
            assert_eq!(
                g,
                vec![BigInt::from(a), BigInt::from(a).pow(pp), BigInt::from(a).pow(pp * pp)]
            );
        }
        assert_eq!(ghost(&b(&[0, 1, 0]), 2).unwrap(), b(&[0, 2, 2]));
        assert_eq!(ghost(&b(&[1, 1]), 3).unwrap(), b(&[1, 4]));
        assert_eq!(ghost(&b(&[1]), 6).unwrap_err(), Error::NotPrime(6));
    }

    #[test]
    fn addition_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(&w(&f3, &[1, 0]) + &w(&f3, &[2, 0]), w(&f3, &[0, 0]));
        let f2 = Field::prime(2).unwrap();
        assert_eq!(&w(&f2, &[1, 0]) + &w(&f2, &[1, 0]), w(&f2, &[0, 1]));
        let x = w(&f3, &[2, 1, 1]);
        assert_eq!(&x + &WittVector::zero(&f3, 3), x);
    }

    #[test]
    fn multiplication_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(&w(&f3, &[2, 0]) * &w(&f3, &[2, 0]), w(&f3, &[1, 0]));
        for p in [2u64, 3, 5] {
            let f = Field::prime(p).unwrap();
            assert_eq!(&w(&f, &[0, 1]) * &w(&f, &[0, 1]), w(&f, &[0, 0]));
        }
        let f4 = Field::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = WittVector::random(&f4, 3, &mut rng);
        assert_eq!(&x * &WittVector::one(&f4, 3), x);
    }

    #[test]
    fn mismatched_parameters_are_rejected() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert!(matches!(
            w(&f2, &[1, 0]).checked_add(&w(&f3, &[1, 0])),
            Err(Error::Mismatch(_))
        ));
        assert!(matches!(
            w(&f2, &[1, 0]).checked_mul(&w(&f2, &[1, 0, 0])),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn verschiebung_is_multiplication_by_p_over_prime_field() {
        let f2 = Field::prime(2).unwrap();
        let one = w(&f2, &[1, 0, 0]);
        assert_eq!(one.verschiebung(), w(&f2, &[0, 1, 0]));
        assert_eq!(one.scale(2), w(&f2, &[0, 1, 0]));
    }

    #[test]
    fn teichmuller_equivariance() {
        let f9 = Field::new(3, 2).unwrap();
        for a in f9.elements() {
            let t = WittVector::teichmuller(&a, 3);
            assert_eq!(t.frobenius(), WittVector::teichmuller(&a.frobenius(), 3));
        }
    }

    #[test]
    fn fv_equals_p_on_random_vectors_over_f4() {
        let f4 = Field::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = WittVector::random(&f4, 3, &mut rng);
            let px = x.scale(2);
            assert_eq!(x.verschiebung().frobenius(), px);
            assert_eq!(x.frobenius().verschiebung(), px);
        }
    }

    #[test]
    fn integer_form_matches_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(w(&f3, &[2, 0]).to_integer().unwrap(), 8);
        assert_eq!(WittVector::from_integer(&f3, 2, 5).to_integer().unwrap(), 5);
        assert_eq!(WittVector::from_integer(&f3, 3, -1).to_integer().unwrap(), 26);
    }

    #[test]
    fn inverse_and_division() {
        let f9 = Field::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut x = WittVector::random(&f9, 3, &mut rng);
            if !x.is_unit() {
                x = &x + &WittVector::one(&f9, 3);
            }
            if x.is_unit() {
                assert_eq!(&x * &x.inverse().unwrap(), WittVector::one(&f9, 3));
            }
            let y = WittVector::random(&f9, 3, &mut rng);
            let py = y.scale(9);
            let z = py.div_p_pow(2).unwrap();
            assert_eq!(z.scale(9), py);
        }
    }

    #[test]
    fn json_round_trip() {
        let f4 = Field::new(2, 2).unwrap();
        let x = WittVector::from_coeffs(&f4, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let j = x.to_json();
        assert_eq!(j.to_string(), "[[1,0],[0,1],[1,1]]");
        assert_eq!(WittVector::from_json(&f4, &j).unwrap(), x);
    }
}
