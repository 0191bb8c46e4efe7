use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{Field, WittVector};

/// An element of the Dieudonne ring over W_N(k):
/// sum_{i>0} a_{-i} V^i + a_0 + sum_{i>0} a_i F^i.
///
/// Keys are signed exponents: k > 0 means F^k, k < 0 means V^{-k}.
/// Coefficients stand to the left of the monomial.
#[derive(Clone, PartialEq, Eq)]
pub struct DieudonneElement {
    field: Field,
    len: usize,
    terms: BTreeMap<i64, WittVector>,
}

impl fmt::Debug for DieudonneElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DieudonneElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => "F".into(),
                    -1 => "V".into(),
                    k if *k > 0 => format!("F^{k}"),
                    k => format!("V^{}", -k),
                };
                if mono.is_empty() {
                    format!("{c:?}")
                } else {
                    format!("{c:?}*{mono}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl DieudonneElement {
    pub fn zero(field: &Field, len: usize) -> Self {
        DieudonneElement {
            field: field.clone(),
            len,
            terms: BTreeMap::new(),
        }
    }

    /// c * F^k (k > 0), c * V^{-k} (k < 0) or the scalar c (k = 0).
    pub fn monomial(c: WittVector, k: i64) -> Self {
        let mut e = DieudonneElement::zero(c.field(), c.len());
        if !c.is_zero() {
            e.terms.insert(k, c);
        }
        e
    }

    pub fn scalar(c: WittVector) -> Self {
        Self::monomial(c, 0)
    }

    pub fn f(field: &Field, len: usize) -> Self {
        Self::monomial(WittVector::one(field, len), 1)
    }

    pub fn v(field: &Field, len: usize) -> Self {
        Self::monomial(WittVector::one(field, len), -1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn truncation(&self) -> usize {
        self.len
    }

    pub fn terms(&self) -> &BTreeMap<i64, WittVector> {
        &self.terms
    }

    pub fn coefficient(&self, k: i64) -> WittVector {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| WittVector::zero(&self.field, self.len))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field || self.len != other.len {
            return Err(Error::Mismatch("Dieudonne elements over different rings".into()));
        }
        Ok(())
    }

    fn add_term(&mut self, k: i64, c: &WittVector) {
        let s = match self.terms.get(&k) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if s.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, s);
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        DieudonneElement {
            field: self.field.clone(),
            len: self.len,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Closed-form product: (a X^i)(b X^j) = a sigma^i(b) X^i X^j, where
    /// F^i V^j and V^i F^j collapse to p^{min(i,j)} times the leftover power.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = DieudonneElement::zero(&self.field, self.len);
        let p = WittVector::from_integer(&self.field, self.len, self.field.characteristic() as i64);
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                let mut c = a * &b.sigma_pow(i);
                let k = if (i > 0 && j < 0) || (i < 0 && j > 0) {
                    let m = i.abs().min(j.abs());
                    c = &c * &p.pow(m as u64);
                    i + j
                } else {
                    i + j
                };
                if !c.is_zero() {
                    out.add_term(k, &c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = Self::scalar(WittVector::one(&self.field, self.len));
        for _ in 0..e {
            out = out.checked_mul(self)?;
        }
        Ok(out)
    }

    /// The element as a formal sum of words (one word per term).
    pub fn to_expression(&self) -> Expression {
        Expression {
            field: self.field.clone(),
            len: self.len,
            words: self
                .terms
                .iter()
                .map(|(&k, c)| {
                    let mut w = vec![Letter::Scalar(c.clone())];
                    let l = if k > 0 { Letter::F } else { Letter::V };
                    w.extend(std::iter::repeat(l).take(k.unsigned_abs() as usize));
                    w
                })
                .collect(),
        }
    }
}

impl std::ops::Add for &DieudonneElement {
    type Output = DieudonneElement;
    fn add(self, o: &DieudonneElement) -> DieudonneElement {
        self.checked_add(o).expect("Dieudonne ring mismatch")
    }
}

impl std::ops::Sub for &DieudonneElement {
    type Output = DieudonneElement;
    fn sub(self, o: &DieudonneElement) -> DieudonneElement {
        self.checked_sub(o).expect("Dieudonne ring mismatch")
    }
}

impl std::ops::Mul for &DieudonneElement {
    type Output = DieudonneElement;
    fn mul(self, o: &DieudonneElement) -> DieudonneElement {
        self.checked_mul(o).expect("Dieudonne ring mismatch")
    }
}

/// A letter of a word in the Dieudonne ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter {
    F,
    V,
    Scalar(WittVector),
}

/// A formal sum of words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    pub field: Field,
    pub len: usize,
    pub words: Vec<Vec<Letter>>,
}

impl Expression {
    pub fn new(field: &Field, len: usize) -> Self {
        Expression {
            field: field.clone(),
            len,
            words: Vec::new(),
        }
    }

    pub fn word(field: &Field, len: usize, w: Vec<Letter>) -> Self {
        Expression {
            field: field.clone(),
            len,
            words: vec![w],
        }
    }

    pub fn plus(mut self, other: Expression) -> Self {
        self.words.extend(other.words);
        self
    }

    /// Formal product: concatenate every pair of words.
    pub fn times(&self, other: &Expression) -> Self {
        let mut words = Vec::new();
        for a in &self.words {
            for b in &other.words {
                let mut w = a.clone();
                w.extend(b.iter().cloned());
                words.push(w);
            }
        }
        Expression {
            field: self.field.clone(),
            len: self.len,
            words,
        }
    }
}

/// Reduce a single word by rewriting: scalars move left past F and V
/// (F c = sigma(c) F, V c = sigma^{-1}(c) V), and adjacent FV or VF become
/// the scalar p. The result is c * F^a or c * V^b.
fn reduce_word(field: &Field, len: usize, word: &[Letter]) -> Result<(WittVector, i64)> {
    let p = WittVector::from_integer(field, len, field.characteristic() as i64);
    let mut letters: Vec<Letter> = word.to_vec();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < letters.len() {
            let rewrite = match (&letters[i], &letters[i + 1]) {
                (Letter::F, Letter::Scalar(c)) => Some(vec![Letter::Scalar(c.frobenius()), Letter::F]),
                (Letter::V, Letter::Scalar(c)) => Some(vec![Letter::Scalar(c.frobenius_inv()), Letter::V]),
                (Letter::F, Letter::V) | (Letter::V, Letter::F) => Some(vec![Letter::Scalar(p.clone())]),
                (Letter::Scalar(a), Letter::Scalar(b)) => {
                    if a.field() != field || b.field() != field || a.len() != len || b.len() != len {
                        return Err(Error::Mismatch("scalar from another Witt ring".into()));
                    }
                    Some(vec![Letter::Scalar(a * b)])
                }
                _ => None,
            };
            if let Some(r) = rewrite {
                letters.splice(i..i + 2, r);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    let mut coeff = WittVector::one(field, len);
    let mut k = 0i64;
    for l in letters {
        match l {
            Letter::Scalar(c) => coeff = &coeff * &c,
            Letter::F => k += 1,
            Letter::V => k -= 1,
        }
    }
    Ok((coeff, k))
}

/// Canonical form of a formal expression, computed by rewriting.
pub fn canonical_form(expr: &Expression) -> Result<DieudonneElement> {
    let mut out = DieudonneElement::zero(&expr.field, expr.len);
    for w in &expr.words {
        let (c, k) = reduce_word(&expr.field, expr.len, w)?;
        if !c.is_zero() {
            out.add_term(k, &c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fv_is_p() {
        let k = Field::prime(3).unwrap();
        let e = Expression::word(&k, 3, vec![Letter::F, Letter::V]);
        let cf = canonical_form(&e).unwrap();
        assert_eq!(cf, DieudonneElement::scalar(WittVector::from_integer(&k, 3, 3)));
        assert_eq!(cf.coefficient(0), WittVector::one(&k, 3).verschiebung());
    }

    #[test]
    fn f_moves_past_scalars() {
        let k = Field::new(2, 2).unwrap();
        let c = WittVector::teichmuller(&k.generator(), 2);
        let e = Expression::word(&k, 2, vec![Letter::F, Letter::Scalar(c.clone())]);
        let cf = canonical_form(&e).unwrap();
        assert_eq!(cf, DieudonneElement::monomial(c.frobenius(), 1));
        assert_ne!(c.frobenius(), c);
    }
}
