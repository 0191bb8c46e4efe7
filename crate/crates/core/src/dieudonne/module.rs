use serde::Serialize;
use serde_json::{json, Value};

use super::ring::DieudonneElement;
use crate::error::{Error, Result};
use crate::exactalg::{Field, FieldHeader, WittVector};

pub type WittMatrix = Vec<Vec<WittVector>>;

/// A finite-length Dieudonne module: generators g_1..g_r of a
/// W_N(k)-module with relations p^{e_i} g_i = 0, and sigma-semilinear F,
/// sigma^{-1}-semilinear V given by matrices on the generators
/// (columns are images of generators):
/// F(x) = Fmat * sigma(x), V(x) = Vmat * sigma^{-1}(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DieudonneModule {
    field: Field,
    truncation: usize,
    exponents: Vec<usize>,
    f: WittMatrix,
    v: WittMatrix,
}

/// First failing check of [`DieudonneModule::check_axioms`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomWitness {
    pub check: String,
    pub generator: usize,
    pub scalar: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub pass: bool,
    pub checks: Vec<String>,
    pub witness: Option<AxiomWitness>,
}

fn show(v: &[WittVector]) -> String {
    let parts: Vec<String> = v.iter().map(|w| format!("{w:?}")).collect();
    format!("[{}]", parts.join(", "))
}

impl DieudonneModule {
    pub fn new(field: &Field, truncation: usize, exponents: Vec<usize>, f: WittMatrix, v: WittMatrix) -> Result<Self> {
        let r = exponents.len();
        if let Some(&e) = exponents.iter().find(|&&e| e > truncation || e == 0) {
            return Err(Error::InvalidArgument(format!(
                "relation exponent {e} outside 1..={truncation}"
            )));
        }
        for (name, m) in [("F", &f), ("V", &v)] {
            if m.len() != r || m.iter().any(|row| row.len() != r) {
                return Err(Error::InvalidArgument(format!("{name} matrix must be {r}x{r}")));
            }
            for w in m.iter().flatten() {
                if w.field() != field || w.len() != truncation {
                    return Err(Error::Mismatch(format!("{name} entry over another Witt ring")));
                }
            }
        }
        let mut module = DieudonneModule {
            field: field.clone(),
            truncation,
            exponents,
            f,
            v,
        };
        module.f = module.reduce_matrix(&module.f);
        module.v = module.reduce_matrix(&module.v);
        Ok(module)
    }

    fn reduce_matrix(&self, m: &WittMatrix) -> WittMatrix {
        m.iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|w| w.reduce_mod_p_pow(self.exponents[i])).collect())
            .collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn f_matrix(&self) -> &WittMatrix {
        &self.f
    }

    pub fn v_matrix(&self) -> &WittMatrix {
        &self.v
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Length as a W(k)-module: sum of the relation exponents.
    pub fn w_length(&self) -> usize {
        self.exponents.iter().sum()
    }

    fn zero(&self) -> WittVector {
        WittVector::zero(&self.field, self.truncation)
    }

    pub fn scalar(&self, n: i64) -> WittVector {
        WittVector::from_integer(&self.field, self.truncation, n)
    }

    /// Reduce coordinates modulo the relations.
    pub fn normalize(&self, x: &[WittVector]) -> Vec<WittVector> {
        x.iter()
            .zip(&self.exponents)
            .map(|(w, &e)| w.reduce_mod_p_pow(e))
            .collect()
    }

    pub fn basis_vector(&self, j: usize) -> Vec<WittVector> {
        (0..self.rank())
            .map(|i| if i == j { self.scalar(1) } else { self.zero() })
            .collect()
    }

    fn apply(&self, m: &WittMatrix, twist: i64, x: &[WittVector]) -> Vec<WittVector> {
        let tx: Vec<WittVector> = x.iter().map(|w| w.sigma_pow(twist)).collect();
        let out = m
            .iter()
            .map(|row| row.iter().zip(&tx).fold(self.zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect::<Vec<_>>();
        self.normalize(&out)
    }

    pub fn apply_f(&self, x: &[WittVector]) -> Vec<WittVector> {
        self.apply(&self.f, 1, x)
    }

    pub fn apply_v(&self, x: &[WittVector]) -> Vec<WittVector> {
        self.apply(&self.v, -1, x)
    }

    pub fn scale(&self, c: &WittVector, x: &[WittVector]) -> Vec<WittVector> {
        self.normalize(&x.iter().map(|w| c * w).collect::<Vec<_>>())
    }

    pub fn add(&self, x: &[WittVector], y: &[WittVector]) -> Vec<WittVector> {
        self.normalize(&x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    /// Action of a Dieudonne ring element: sum of a_k * F^k(x) (V for k < 0).
    pub fn act(&self, e: &DieudonneElement, x: &[WittVector]) -> Result<Vec<WittVector>> {
        if e.field() != &self.field || e.truncation() != self.truncation {
            return Err(Error::Mismatch("ring element over another Witt ring".into()));
        }
        let mut out: Vec<WittVector> = vec![self.zero(); self.rank()];
        for (&k, a) in e.terms() {
            let mut y = self.normalize(x);
            for _ in 0..k.unsigned_abs() {
                y = if k > 0 { self.apply_f(&y) } else { self.apply_v(&y) };
            }
            out = self.add(&out, &self.scale(a, &y));
        }
        Ok(out)
    }

    /// FV = VF = p and semilinearity, checked on every generator times 1
    /// and times a Teichmuller scalar that sigma moves when k != F_p;
    /// also that F and V respect the relations p^{e_j} g_j = 0.
    pub fn check_axioms(&self) -> AxiomReport {
        let mut checks = Vec::new();
        let p = self.scalar(self.field.characteristic() as i64);
        let mut scalars = vec![self.scalar(1)];
        if self.field.degree() > 1 {
            scalars.push(WittVector::teichmuller(&self.field.generator(), self.truncation));
        }
        let fail =
            |checks: Vec<String>, check: &str, j: usize, c: &WittVector, exp: &[WittVector], act: &[WittVector]| {
                AxiomReport {
                    pass: false,
                    checks,
                    witness: Some(AxiomWitness {
                        check: check.to_string(),
                        generator: j,
                        scalar: format!("{c:?}"),
                        expected: show(exp),
                        actual: show(act),
                    }),
                }
            };
        // well defined on the relations
        checks.push("F and V respect relations".into());
        for j in 0..self.rank() {
            let pe = p.pow(self.exponents[j] as u64);
            let g = self.basis_vector(j);
            let zero = vec![self.zero(); self.rank()];
            for (name, m) in [("F", &self.f), ("V", &self.v)] {
                let col: Vec<WittVector> = m.iter().map(|row| row[j].clone()).collect();
                let killed = self.scale(&pe, &col);
                if killed != zero {
                    return fail(checks, &format!("p^e_j * {name}(g_j) = 0"), j, &pe, &zero, &killed);
                }
            }
            let _ = g;
        }
        checks.push("FV = p".into());
        checks.push("VF = p".into());
        checks.push("F(c m) = sigma(c) F(m)".into());
        checks.push("V(sigma(c) m) = c V(m)".into());
        for j in 0..self.rank() {
            let g = self.basis_vector(j);
            for c in &scalars {
                let cg = self.scale(c, &g);
                let expected = self.scale(&p, &cg);
                let fv = self.apply_f(&self.apply_v(&cg));
                if fv != expected {
                    return fail(checks, "FV - p = 0", j, c, &expected, &fv);
                }
                let vf = self.apply_v(&self.apply_f(&cg));
                if vf != expected {
                    return fail(checks, "VF - p = 0", j, c, &expected, &vf);
                }
                let lhs = self.apply_f(&cg);
                let rhs = self.scale(&c.frobenius(), &self.apply_f(&g));
                if lhs != rhs {
                    return fail(checks, "F(c m) - sigma(c) F(m) = 0", j, c, &rhs, &lhs);
                }
                let lhs = self.apply_v(&self.scale(&c.frobenius(), &g));
                let rhs = self.scale(c, &self.apply_v(&g));
                if lhs != rhs {
                    return fail(checks, "V(sigma(c) m) - c V(m) = 0", j, c, &rhs, &lhs);
                }
            }
        }
        AxiomReport {
            pass: true,
            checks,
            witness: None,
        }
    }

    /// Direct sum (block diagonal matrices).
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.field != other.field || self.truncation != other.truncation {
            return Err(Error::Mismatch("direct sum over different Witt rings".into()));
        }
        let r = self.rank() + other.rank();
        let block = |a: &WittMatrix, b: &WittMatrix| -> WittMatrix {
            (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| {
                            let (ra, rb) = (self.rank(), other.rank());
                            if i < ra && j < ra {
                                a[i][j].clone()
                            } else if i >= ra && j >= ra && i - ra < rb {
                                b[i - ra][j - ra].clone()
                            } else {
                                self.zero()
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let mut exps = self.exponents.clone();
        exps.extend_from_slice(&other.exponents);
        DieudonneModule::new(
            &self.field,
            self.truncation,
            exps,
            block(&self.f, &other.f),
            block(&self.v, &other.v),
        )
    }

    pub fn to_json(&self) -> Value {
        let p = self.field.characteristic();
        let mat = |m: &WittMatrix| -> Value {
            Value::Array(
                m.iter()
                    .map(|row| Value::Array(row.iter().map(|w| w.to_json()).collect()))
                    .collect(),
            )
        };
        json!({
            "p": p,
            "d": self.field.degree(),
            "modulus": self.field.modulus(),
            "N": self.truncation,
            "exponents": self.exponents,
            "invariant_factors": self.exponents.iter().map(|&e| p.pow(e as u32)).collect::<Vec<_>>(),
            "F": mat(&self.f),
            "V": mat(&self.v),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("module JSON: {what}"));
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing p"))?;
        let d = v.get("d").and_then(Value::as_u64).unwrap_or(1) as usize;
        let field = match v.get("modulus") {
            Some(m) => {
                let modulus: Vec<u64> = serde_json::from_value(m.clone()).map_err(|_| bad("modulus"))?;
                Field::from_header(&FieldHeader { p, d, modulus })?
            }
            None => Field::new(p, d)?,
        };
        let n = v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("missing N"))? as usize;
        let exponents: Vec<usize> = match v.get("exponents") {
            Some(e) => serde_json::from_value(e.clone()).map_err(|_| bad("exponents"))?,
            None => {
                let f: Vec<u64> = serde_json::from_value(
                    v.get("invariant_factors")
                        .cloned()
                        .ok_or_else(|| bad("missing invariant_factors"))?,
                )
                .map_err(|_| bad("invariant_factors"))?;
                f.iter()
                    .map(|&x| {
                        let mut e = 0;
                        let mut y = x;
                        while y > 1 && y % p == 0 {
                            y /= p;
                            e += 1;
                        }
                        if y == 1 {
                            Ok(e)
                        } else {
                            Err(bad("invariant factor is not a power of p"))
                        }
                    })
                    .collect::<Result<_>>()?
            }
        };
        let mat = |key: &str| -> Result<WittMatrix> {
            let rows = v.get(key).and_then(Value::as_array).ok_or_else(|| bad(key))?;
            rows.iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad(key))?
                        .iter()
                        .map(|w| WittVector::from_json(&field, w))
                        .collect()
                })
                .collect()
        };
        DieudonneModule::new(&field, n, exponents, mat("F")?, mat("V")?)
    }
}

/// The quotient D/(D F^m + D V^n) on generators V^{n-1}, ..., V, 1, F, ...,
/// F^{m-1}. Needs N >= m + n.
pub fn module_from_presentation(field: &Field, m: usize, n: usize, truncation: usize) -> Result<DieudonneModule> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("m and n must be positive".into()));
    }
    if truncation < m + n {
        return Err(Error::TruncationTooSmall {
            needed: m + n,
            actual: truncation,
        });
    }
    let r = m + n - 1;
    // generator index of the monomial with signed exponent s
    let idx = |s: i64| (s + n as i64 - 1) as usize;
    let exponents: Vec<usize> = (-(n as i64 - 1)..m as i64)
        .map(|s| {
            if s >= 0 {
                (m - s as usize).min(n)
            } else {
                (n - (-s) as usize).min(m)
            }
        })
        .collect();
    let zero = WittVector::zero(field, truncation);
    let one = WittVector::one(field, truncation);
    let p = WittVector::from_integer(field, truncation, field.characteristic() as i64);
    let mut f = vec![vec![zero.clone(); r]; r];
    let mut v = vec![vec![zero; r]; r];
    for s in -(n as i64 - 1)..m as i64 {
        let j = idx(s);
        // F g_s
        if s >= 0 {
            if s + 1 < m as i64 {
                f[idx(s + 1)][j] = one.clone();
            }
        } else {
            f[idx(s + 1)][j] = p.clone();
        }
        // V g_s
        if s <= 0 {
            if s - 1 > -(n as i64) {
                v[idx(s - 1)][j] = one.clone();
            }
        } else {
            v[idx(s - 1)][j] = p.clone();
        }
    }
    DieudonneModule::new(field, truncation, exponents, f, v)
}

/// Whether the module built at N agrees with the one built at N + 1
/// (same exponents; matrices agree after truncating to N).
pub fn is_truncation_stable(field: &Field, m: usize, n: usize, truncation: usize) -> Result<bool> {
    let a = module_from_presentation(field, m, n, truncation)?;
    let b = module_from_presentation(field, m, n, truncation + 1)?;
    if a.exponents != b.exponents {
        return Ok(false);
    }
    let shrink = |w: &WittVector| -> Result<WittVector> { WittVector::new(field, w.coords()[..truncation].to_vec()) };
    for (ma, mb) in [(&a.f, &b.f), (&a.v, &b.v)] {
        for (ra, rb) in ma.iter().zip(mb) {
            for (x, y) in ra.iter().zip(rb) {
                if *x != shrink(y)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// W-length of a module.
pub fn w_length(m: &DieudonneModule) -> usize {
    m.w_length()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_p_is_d11() {
        let k = Field::prime(2).unwrap();
        let m = module_from_presentation(&k, 1, 1, 2).unwrap();
        assert_eq!(m.w_length(), 1);
        assert!(m.f_matrix()[0][0].is_zero());
        assert!(m.v_matrix()[0][0].is_zero());
        assert!(m.check_axioms().pass);
    }

    #[test]
    fn small_truncation_is_refused() {
        let k = Field::prime(3).unwrap();
        assert!(matches!(
            module_from_presentation(&k, 2, 2, 3),
            Err(Error::TruncationTooSmall { needed: 4, actual: 3 })
        ));
    }

    #[test]
    fn identity_f_and_v_fail_for_odd_p() {
        let k = Field::prime(3).unwrap();
        let one = WittVector::one(&k, 1);
        let m = DieudonneModule::new(&k, 1, vec![1], vec![vec![one.clone()]], vec![vec![one]]).unwrap();
        let r = m.check_axioms();
        assert!(!r.pass);
        assert!(r.witness.unwrap().check.starts_with("FV"));
    }

    #[test]
    fn json_round_trip() {
        let k = Field::new(2, 2).unwrap();
        let m = module_from_presentation(&k, 2, 1, 3).unwrap();
        assert_eq!(DieudonneModule::from_json(&m.to_json()).unwrap(), m);
    }
}
