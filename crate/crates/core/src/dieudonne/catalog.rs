use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use super::local::{local_smith, mat_mul, sigma_matrix};
use super::module::{module_from_presentation, DieudonneModule, WittMatrix};
use crate::error::{Error, Result};
use crate::exactalg::{Field, WittVector};

/// Dieudonne module of a p-divisible group: F on a free W_N(k)-module of
/// rank h, F(x) = Fmat * sigma(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDivisibleModule {
    field: Field,
    truncation: usize,
    f: WittMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PDivisibleReport {
    pub height: usize,
    /// Valuations of the elementary divisors of F.
    pub f_valuations: Vec<usize>,
    /// pD is contained in F(D), i.e. coker F is killed by p.
    pub p_in_image: bool,
    /// Dimension of the kernel of F mod p (the dimension of the group).
    pub dimension: usize,
}

impl PDivisibleModule {
    pub fn new(field: &Field, truncation: usize, f: WittMatrix) -> Result<Self> {
        let h = f.len();
        if f.iter().any(|r| r.len() != h) {
            return Err(Error::InvalidArgument("F must be square".into()));
        }
        if f.iter().flatten().any(|w| w.field() != field || w.len() != truncation) {
            return Err(Error::Mismatch("F entry over another Witt ring".into()));
        }
        Ok(PDivisibleModule {
            field: field.clone(),
            truncation,
            f,
        })
    }

    pub fn height(&self) -> usize {
        self.f.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn f_matrix(&self) -> &WittMatrix {
        &self.f
    }

    pub fn check(&self) -> Result<PDivisibleReport> {
        let s = local_smith(&self.f, &self.field, self.truncation)?;
        let p_in_image = s.valuations.iter().all(|&v| v <= 1);
        Ok(PDivisibleReport {
            height: self.height(),
            dimension: s.valuations.iter().filter(|&&v| v >= 1).count(),
            f_valuations: s.valuations,
            p_in_image,
        })
    }

    /// Vmat with F V = V F = p, V(x) = Vmat * sigma^{-1}(x). Exists exactly
    /// when pD is contained in F(D).
    pub fn v_matrix(&self) -> Result<WittMatrix> {
        let (k, n) = (&self.field, self.truncation);
        let s = local_smith(&self.f, k, n)?;
        if s.valuations.iter().any(|&v| v > 1) {
            return Err(Error::NotInvertible("pD is not contained in F(D)".into()));
        }
        let p = WittVector::from_integer(k, n, k.characteristic() as i64);
        // A X = p: X = W diag(p^{1-v} u^{-1}) U
        let h = self.height();
        let mut d = vec![vec![WittVector::zero(k, n); h]; h];
        for i in 0..h {
            let v = s.valuations[i];
            let unit = s.diagonal[i].div_p_pow(v)?.inverse()?;
            d[i][i] = if v == 0 { &p * &unit } else { unit };
        }
        let x = mat_mul(&mat_mul(&s.w, &d, k, n), &s.u, k, n);
        // F(V(y)) = A sigma(B) y = p y with sigma(B) = X
        Ok(sigma_matrix(&x, -1))
    }

    /// Truncation to level n: the finite module D / p^n D of G[p^n].
    pub fn truncate(&self, n: usize) -> Result<DieudonneModule> {
        if n == 0 || n > self.truncation {
            return Err(Error::InvalidArgument(format!(
                "level {n} outside 1..={}",
                self.truncation
            )));
        }
        let v = self.v_matrix()?;
        DieudonneModule::new(&self.field, self.truncation, vec![n; self.height()], self.f.clone(), v)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.field.characteristic(),
            "d": self.field.degree(),
            "N": self.truncation,
            "height": self.height(),
            "F": self.f.iter().map(|r| r.iter().map(|w| w.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Entries of the module catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogEntry {
    /// Z/p^n
    Constant(usize),
    /// mu_{p^n}
    Mu(usize),
    AlphaP,
    /// W_n^m: kernel of F^m on the length-n Witt group scheme.
    WittKernel {
        n: usize,
        m: usize,
    },
    /// Q_p/Z_p
    QpZp,
    /// mu_{p^infinity}
    MuInfinity,
    /// (Q_p/Z_p)^h
    Etale(usize),
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogEntry::Constant(n) => write!(f, "constant(p^{n})"),
            CatalogEntry::Mu(n) => write!(f, "mu(p^{n})"),
            CatalogEntry::AlphaP => write!(f, "alpha_p"),
            CatalogEntry::WittKernel { n, m } => write!(f, "W({n},{m})"),
            CatalogEntry::QpZp => write!(f, "Qp/Zp"),
            CatalogEntry::MuInfinity => write!(f, "mu(p^inf)"),
            CatalogEntry::Etale(h) => write!(f, "height_{h}_etale"),
        }
    }
}

fn parse_power(arg: &str) -> Option<usize> {
    let arg = arg.trim();
    match arg.strip_prefix("p^") {
        Some(e) => e.parse().ok(),
        None if arg == "p" => Some(1),
        None => None,
    }
}

impl std::str::FromStr for CatalogEntry {
    type Err = Error;

    /// Accepts `constant(p^n)`, `mu(p^n)`, `alpha_p`, `W(n,m)`, `Qp/Zp`,
    /// `mu(p^inf)`, `height_h_etale` (also `etale(h)`).
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let unknown = || Error::UnknownCatalogEntry(s.to_string());
        let inner = |prefix: &str| -> Option<&str> { t.strip_prefix(prefix)?.strip_suffix(')') };
        if t == "alpha_p" {
            return Ok(CatalogEntry::AlphaP);
        }
        if t == "Qp/Zp" || t == "QpZp" {
            return Ok(CatalogEntry::QpZp);
        }
        if t == "mu(p^inf)" || t == "mu(p^∞)" || t == "mu_p_inf" {
            return Ok(CatalogEntry::MuInfinity);
        }
        if let Some(a) = inner("constant(") {
            return parse_power(a)
                .filter(|&n| n > 0)
                .map(CatalogEntry::Constant)
                .ok_or_else(unknown);
        }
        if let Some(a) = inner("mu(") {
            return parse_power(a)
                .filter(|&n| n > 0)
                .map(CatalogEntry::Mu)
                .ok_or_else(unknown);
        }
        if let Some(a) = inner("W(") {
            let parts: Vec<&str> = a.split(',').collect();
            if let [n, m] = parts[..] {
                let (n, m) = (n.parse().map_err(|_| unknown())?, m.parse().map_err(|_| unknown())?);
                if n > 0 && m > 0 {
                    return Ok(CatalogEntry::WittKernel { n, m });
                }
            }
            return Err(unknown());
        }
        if let Some(a) = inner("etale(") {
            return a
                .parse()
                .ok()
                .filter(|&h| h > 0)
                .map(CatalogEntry::Etale)
                .ok_or_else(unknown);
        }
        if let Some(h) = t.strip_prefix("height_").and_then(|r| r.strip_suffix("_etale")) {
            return h
                .parse()
                .ok()
                .filter(|&h| h > 0)
                .map(CatalogEntry::Etale)
                .ok_or_else(unknown);
        }
        Err(unknown())
    }
}

impl CatalogEntry {
    /// Whether the entry is étale (constant or a tower of constant groups).
    pub fn is_etale(&self) -> bool {
        matches!(
            self,
            CatalogEntry::Constant(_) | CatalogEntry::QpZp | CatalogEntry::Etale(_)
        )
    }

    pub fn is_p_divisible(&self) -> bool {
        matches!(
            self,
            CatalogEntry::QpZp | CatalogEntry::MuInfinity | CatalogEntry::Etale(_)
        )
    }
}

/// A catalog module: finite length or p-divisible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogModule {
    Finite(DieudonneModule),
    PDivisible(PDivisibleModule),
}

impl CatalogModule {
    pub fn to_json(&self) -> Value {
        match self {
            CatalogModule::Finite(m) => m.to_json(),
            CatalogModule::PDivisible(m) => m.to_json(),
        }
    }
}

fn scalar_matrix(field: &Field, len: usize, h: usize, c: i64) -> WittMatrix {
    (0..h)
        .map(|i| {
            (0..h)
                .map(|j| WittVector::from_integer(field, len, if i == j { c } else { 0 }))
                .collect()
        })
        .collect()
}

/// The standard module of a catalog entry at truncation N.
pub fn catalog(entry: &CatalogEntry, field: &Field, truncation: usize) -> Result<CatalogModule> {
    let p = field.characteristic() as i64;
    let one = |h| scalar_matrix(field, truncation, h, 1);
    let pm = |h| scalar_matrix(field, truncation, h, p);
    let need = |n: usize| {
        if n > truncation {
            Err(Error::TruncationTooSmall {
                needed: n,
                actual: truncation,
            })
        } else {
            Ok(())
        }
    };
    Ok(match entry {
        CatalogEntry::Constant(n) => {
            need(*n)?;
            CatalogModule::Finite(DieudonneModule::new(field, truncation, vec![*n], one(1), pm(1))?)
        }
        CatalogEntry::Mu(n) => {
            need(*n)?;
            CatalogModule::Finite(DieudonneModule::new(field, truncation, vec![*n], pm(1), one(1))?)
        }
        CatalogEntry::AlphaP => CatalogModule::Finite(module_from_presentation(field, 1, 1, truncation.max(2))?),
        CatalogEntry::WittKernel { n, m } => {
            CatalogModule::Finite(module_from_presentation(field, *m, *n, truncation)?)
        }
        CatalogEntry::QpZp => CatalogModule::PDivisible(PDivisibleModule::new(field, truncation, one(1))?),
        CatalogEntry::MuInfinity => CatalogModule::PDivisible(PDivisibleModule::new(field, truncation, pm(1))?),
        CatalogEntry::Etale(h) => CatalogModule::PDivisible(PDivisibleModule::new(field, truncation, one(*h))?),
    })
}

/// How a comparison treats the Frobenius twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaTwist {
    /// Over F_p the twist is the identity; comparison is exact.
    Identity,
    /// Over F_{p^d}, d > 1: equal up to sigma^*, direction not fixed.
    UpToSigma,
}

impl SigmaTwist {
    pub fn for_field(field: &Field) -> Self {
        if field.degree() == 1 {
            SigmaTwist::Identity
        } else {
            SigmaTwist::UpToSigma
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in [
            CatalogEntry::Constant(2),
            CatalogEntry::Mu(1),
            CatalogEntry::AlphaP,
            CatalogEntry::WittKernel { n: 2, m: 3 },
            CatalogEntry::QpZp,
            CatalogEntry::MuInfinity,
            CatalogEntry::Etale(2),
        ] {
            assert_eq!(e.to_string().parse::<CatalogEntry>().unwrap(), e);
        }
        assert!(matches!(
            "frobnicate".parse::<CatalogEntry>(),
            Err(Error::UnknownCatalogEntry(_))
        ));
    }

    #[test]
    fn mu_infinity_has_dimension_one() {
        let k = Field::prime(2).unwrap();
        let CatalogModule::PDivisible(m) = catalog(&CatalogEntry::MuInfinity, &k, 3).unwrap() else {
            panic!("expected p-divisible module")
        };
        let r = m.check().unwrap();
        assert!(r.p_in_image);
        assert_eq!(r.dimension, 1);
        assert!(m.truncate(2).unwrap().check_axioms().pass);
    }
}
