use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::homology::{
    homology, kernel_basis, subquotient, ChainComplex, Coefficients, FinAbGroup, Grading, Homology, IntMatrix,
};

/// A first-quadrant double complex: free modules C^{i,j} with horizontal
/// d_h : (i, j) -> (i+1, j) and vertical d_v : (i, j) -> (i, j+1).
/// Missing differentials are zero.
#[derive(Debug, Clone)]
pub struct DoubleComplex {
    /// ranks[i][j]
    ranks: Vec<Vec<usize>>,
    dh: BTreeMap<(usize, usize), IntMatrix>,
    dv: BTreeMap<(usize, usize), IntMatrix>,
}

impl DoubleComplex {
    pub fn new(
        ranks: Vec<Vec<usize>>,
        dh: BTreeMap<(usize, usize), IntMatrix>,
        dv: BTreeMap<(usize, usize), IntMatrix>,
    ) -> Result<Self> {
        let dc = DoubleComplex { ranks, dh, dv };
        for (&(i, j), m) in &dc.dh {
            if m.ncols() != dc.rank(i, j) || m.nrows() != dc.rank(i + 1, j) {
                return Err(Error::MalformedComplex(format!(
                    "d_h at ({i}, {j}) has the wrong shape"
                )));
            }
        }
        for (&(i, j), m) in &dc.dv {
            if m.ncols() != dc.rank(i, j) || m.nrows() != dc.rank(i, j + 1) {
                return Err(Error::MalformedComplex(format!(
                    "d_v at ({i}, {j}) has the wrong shape"
                )));
            }
        }
        for i in 0..dc.width() {
            for j in 0..dc.height() {
                let h2 = dc.h(i + 1, j).mul(&dc.h(i, j))?;
                let v2 = dc.v(i, j + 1).mul(&dc.v(i, j))?;
                let a = dc
                    .v(i + 1, j)
                    .mul(&dc.h(i, j))?
                    .add(&dc.h(i, j + 1).mul(&dc.v(i, j))?)?;
                for (what, m) in [("d_h^2", h2), ("d_v^2", v2), ("d_h d_v + d_v d_h", a)] {
                    if !m.is_zero() {
                        return Err(Error::MalformedComplex(format!("{what} != 0 at ({i}, {j})")));
                    }
                }
            }
        }
        Ok(dc)
    }

    pub fn width(&self) -> usize {
        self.ranks.len()
    }

    pub fn height(&self) -> usize {
        self.ranks.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn rank(&self, i: usize, j: usize) -> usize {
        self.ranks.get(i).and_then(|c| c.get(j)).copied().unwrap_or(0)
    }

    fn h(&self, i: usize, j: usize) -> IntMatrix {
        self.dh
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.rank(i + 1, j), self.rank(i, j)))
    }

    fn v(&self, i: usize, j: usize) -> IntMatrix {
        self.dv
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.rank(i, j + 1), self.rank(i, j)))
    }

    fn max_total(&self) -> usize {
        (self.width() + self.height()).saturating_sub(2)
    }

    /// Blocks (i, j) of total degree n, i ascending, with their offsets.
    fn blocks(&self, n: usize) -> Vec<(usize, usize, usize)> {
        let mut off = 0;
        let mut out = Vec::new();
        for i in 0..=n.min(self.width().saturating_sub(1)) {
            let j = n - i;
            let r = self.rank(i, j);
            out.push((i, j, off));
            off += r;
        }
        out
    }

    fn total_rank(&self, n: usize) -> usize {
        self.blocks(n).iter().map(|&(i, j, _)| self.rank(i, j)).sum()
    }

    /// Total complex with d = d_h + d_v, degrees 0..=width + height - 2.
    pub fn total_complex(&self) -> Result<ChainComplex> {
        let top = self.max_total();
        let ranks: Vec<usize> = (0..=top).map(|n| self.total_rank(n)).collect();
        let mut diffs = Vec::new();
        for n in 0..top {
            let src = self.blocks(n);
            let dst = self.blocks(n + 1);
            let off = |i: usize| dst.iter().find(|b| b.0 == i).map(|b| b.2);
            let mut cols = vec![Vec::new(); ranks[n]];
            for &(i, j, so) in &src {
                for (m, ti) in [(self.h(i, j), i + 1), (self.v(i, j), i)] {
                    let Some(to) = off(ti) else { continue };
                    for c in 0..m.ncols() {
                        for (r, x) in m.column(c) {
                            cols[so + c].push((to + r, x.clone()));
                        }
                    }
                }
            }
            for c in cols.iter_mut() {
                c.sort_by_key(|e| e.0);
            }
            diffs.push(IntMatrix::from_columns(ranks[n + 1], cols));
        }
        ChainComplex::cohomological(0, ranks, diffs)
    }

    /// Coordinates (within total degree n) of the blocks with i >= p.
    fn filtration_coords(&self, n: usize, p: usize) -> Vec<usize> {
        self.blocks(n)
            .into_iter()
            .filter(|b| b.0 >= p)
            .flat_map(|(i, j, o)| o..o + self.rank(i, j))
            .collect()
    }

    /// x in F^p (total degree n) with d x in F^q, as columns in total
    /// coordinates. Z_r^p is the case q = p + r.
    fn z(&self, total: &ChainComplex, n: usize, p: usize, q: usize) -> Result<Vec<Vec<(usize, BigInt)>>> {
        let fp = self.filtration_coords(n, p);
        let unit = |k: usize| vec![(k, BigInt::one())];
        let Some(d) = total.outgoing(n as i64) else {
            return Ok(fp.into_iter().map(unit).collect());
        };
        let keep: Vec<usize> = self
            .filtration_coords(n + 1, 0)
            .into_iter()
            .filter(|c| !self.filtration_coords(n + 1, q).contains(c))
            .collect();
        if keep.is_empty() || fp.is_empty() {
            return Ok(fp.into_iter().map(unit).collect());
        }
        // d restricted to F^p, projected off F^{p+r}
        let dense = d.to_dense();
        let rows: Vec<Vec<BigInt>> = keep
            .iter()
            .map(|&i| fp.iter().map(|&j| dense[i][j].clone()).collect())
            .collect();
        let m = IntMatrix::from_dense(keep.len(), fp.len(), &rows);
        Ok(kernel_basis(&m)
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (fp[k], x))
                    .collect()
            })
            .collect())
    }

    /// E_r^{p, n-p} = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}), r >= 1.
    fn page_entry(&self, total: &ChainComplex, p: usize, q: usize, r: usize) -> Result<FinAbGroup> {
        let n = p + q;
        let dim = self.total_rank(n);
        let a = self.z(total, n, p, p + r)?;
        let mut b = self.z(total, n, p + 1, p + r)?;
        if n > 0 {
            let lower = (p + 1).saturating_sub(r);
            if let Some(d) = total.outgoing(n as i64 - 1) {
                for col in self.z(total, n - 1, lower, p)? {
                    let mut img: BTreeMap<usize, BigInt> = BTreeMap::new();
                    for (k, x) in col {
                        for (i, y) in d.column(k) {
                            *img.entry(*i).or_default() += &x * y;
                        }
                    }
                    b.push(img.into_iter().filter(|e| !e.1.is_zero()).collect());
                }
            }
        }
        let mut span = a;
        span.extend(b.iter().cloned());
        subquotient(&IntMatrix::from_columns(dim, span), &IntMatrix::from_columns(dim, b))
    }

    /// The page E_r over Z, entries with i + j <= max_total.
    pub fn page(&self, r: usize, max_total: usize) -> Result<BTreeMap<(usize, usize), FinAbGroup>> {
        let total = self.total_complex()?;
        let mut out = BTreeMap::new();
        for n in 0..=max_total {
            for i in 0..=n {
                out.insert((i, n - i), self.page_entry(&total, i, n - i, r.max(1))?);
            }
        }
        Ok(out)
    }
}

/// One page: E_r^{i,j} for i + j within the computed range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSequencePage {
    pub r: usize,
    pub entries: BTreeMap<(usize, usize), FinAbGroup>,
}

impl SpectralSequencePage {
    pub fn entry(&self, i: usize, j: usize) -> FinAbGroup {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(FinAbGroup::trivial)
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Map::new();
        for ((i, j), g) in &self.entries {
            entries.insert(
                format!("{i},{j}"),
                json!({
                    "free_rank": g.free_rank,
                    "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                }),
            );
        }
        json!({ "r": self.r, "entries": entries, "differentials": Value::Null })
    }
}

/// Bidegree certificate that every d_r (r >= 2) vanishes: for each source
/// (i, j) and r, E_2^{i,j} = 0 or E_2^{i+r, j-r+1} = 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerationCertificate {
    pub holds: bool,
    pub pairs_checked: usize,
    /// First (r, i, j) with both ends nonzero.
    pub witness: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    /// E_2 = E_infinity by the bidegree certificate.
    Degenerate,
    /// Higher pages computed from the supplied double complex.
    DoubleComplex,
    /// The certificate fails and no double complex was supplied.
    HigherDifferentialsUndetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbutmentDegree {
    pub degree: usize,
    /// Nonzero graded pieces E_infinity^{i, n-i}.
    pub graded: Vec<(usize, usize, FinAbGroup)>,
    /// H^n, when determined (at most one graded piece, or computed from a
    /// total complex).
    pub group: Option<FinAbGroup>,
}

#[derive(Debug, Clone)]
pub struct SpectralSequenceRun {
    pub max_total: usize,
    pub pages: Vec<SpectralSequencePage>,
    pub certificate: DegenerationCertificate,
    pub status: RunStatus,
    pub abutment: BTreeMap<usize, AbutmentDegree>,
}

impl SpectralSequenceRun {
    pub fn e2(&self) -> &SpectralSequencePage {
        &self.pages[0]
    }

    pub fn to_json(&self) -> Value {
        let abut: Map<String, Value> = self
            .abutment
            .iter()
            .map(|(n, a)| {
                (
                    n.to_string(),
                    json!({
                        "graded": a.graded.iter().map(|(i, j, g)| json!({"i": i, "j": j, "group": g.to_string()})).collect::<Vec<_>>(),
                        "group": a.group.as_ref().map(|g| g.to_string()),
                    }),
                )
            })
            .collect();
        json!({
            "max_total": self.max_total,
            "status": self.status,
            "certificate": self.certificate,
            "pages": self.pages.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "abutment": abut,
        })
    }
}

fn certificate(e2: &SpectralSequencePage, max_total: usize) -> DegenerationCertificate {
    let mut pairs = 0;
    for n in 0..=max_total {
        for i in 0..=n {
            let j = n - i;
            for r in 2..=j + 1 {
                pairs += 1;
                if !e2.entry(i, j).is_trivial() && !e2.entry(i + r, j + 1 - r).is_trivial() {
                    return DegenerationCertificate {
                        holds: false,
                        pairs_checked: pairs,
                        witness: Some((r, i, j)),
                    };
                }
            }
        }
    }
    DegenerationCertificate {
        holds: true,
        pairs_checked: pairs,
        witness: None,
    }
}

/// Run the first-quadrant spectral sequence whose E_1 rows are `rows`
/// (cochain complexes in degrees 0..; row j is E_1^{*,j}, missing rows are
/// zero), through total degree `max_total`. E_2^{i,j} = H^i(row j).
pub fn run_spectral_sequence(
    rows: &[ChainComplex],
    coefficients: &Coefficients,
    max_total: usize,
    double: Option<&DoubleComplex>,
) -> Result<SpectralSequenceRun> {
    let need = max_total + 1;
    for (j, row) in rows.iter().enumerate() {
        if row.grading() != Grading::Cohomological || row.lo() != 0 {
            return Err(Error::MalformedComplex(format!(
                "row {j} must be a cochain complex starting in degree 0"
            )));
        }
        if j <= need && row.hi() < (need - j + 1) as i64 && !row.has_zero_differentials() {
            return Err(Error::MalformedComplex(format!(
                "row {j} stops at degree {}, need {}",
                row.hi(),
                need - j + 1
            )));
        }
    }
    let groups: Vec<BTreeMap<i64, FinAbGroup>> = rows
        .par_iter()
        .enumerate()
        .map(|(j, row)| {
            if j > need {
                return Ok(BTreeMap::new());
            }
            let hi = (need - j) as i64;
            let degrees: Vec<i64> = (0..=hi.min(row.hi())).collect();
            if row.hi() > hi {
                Ok(Homology::compute_degrees(row, coefficients, false, &degrees)?.groups())
            } else {
                homology(row, coefficients)
            }
        })
        .collect::<Result<_>>()?;
    let mut e2 = BTreeMap::new();
    for n in 0..=need {
        for i in 0..=n {
            let j = n - i;
            let g = groups
                .get(j)
                .and_then(|h| h.get(&(i as i64)))
                .cloned()
                .unwrap_or_else(FinAbGroup::trivial);
            e2.insert((i, j), g);
        }
    }
    let e2 = SpectralSequencePage { r: 2, entries: e2 };
    let cert = certificate(&e2, max_total);
    let mut pages = vec![e2.clone()];
    let mut abutment = BTreeMap::new();
    let status = if cert.holds {
        for n in 0..=max_total {
            let graded: Vec<(usize, usize, FinAbGroup)> = (0..=n)
                .map(|i| (i, n - i, e2.entry(i, n - i)))
                .filter(|e| !e.2.is_trivial())
                .collect();
            let group = match graded.len() {
                0 => Some(FinAbGroup::trivial()),
                1 => Some(graded[0].2.clone()),
                _ => None,
            };
            abutment.insert(
                n,
                AbutmentDegree {
                    degree: n,
                    graded,
                    group,
                },
            );
        }
        RunStatus::Degenerate
    } else if let Some(dc) = double {
        if *coefficients != Coefficients::Integers {
            return Err(Error::InvalidArgument(
                "double-complex pages are computed over Z".into(),
            ));
        }
        if dc.page(2, need)? != e2.entries {
            return Err(Error::Mismatch(
                "E_2 of the double complex differs from the supplied rows".into(),
            ));
        }
        let last = dc.width() + 1;
        for r in 3..=last {
            pages.push(SpectralSequencePage {
                r,
                entries: dc.page(r, need)?,
            });
        }
        let total = dc.total_complex()?;
        let th = homology(&total, coefficients)?;
        let einf = &pages[pages.len() - 1];
        for n in 0..=max_total {
            let graded = (0..=n)
                .map(|i| (i, n - i, einf.entry(i, n - i)))
                .filter(|e| !e.2.is_trivial())
                .collect();
            let group = Some(th.get(&(n as i64)).cloned().unwrap_or_else(FinAbGroup::trivial));
            abutment.insert(
                n,
                AbutmentDegree {
                    degree: n,
                    graded,
                    group,
                },
            );
        }
        RunStatus::DoubleComplex
    } else {
        for n in 0..=max_total {
            abutment.insert(
                n,
                AbutmentDegree {
                    degree: n,
                    graded: Vec::new(),
                    group: None,
                },
            );
        }
        RunStatus::HigherDifferentialsUndetermined
    };
    Ok(SpectralSequenceRun {
        max_total,
        pages,
        certificate: cert,
        status,
        abutment,
    })
}

/// The two-row double complex with a nonzero d_2: x at (0,1), b at (1,0),
/// a at (1,1), c at (2,0), with d_h x = a, d_h b = c and d_v b = -a. The
/// total complex is acyclic while E_2 has Z at (0,1) and (2,0).
pub fn synthetic_double_complex() -> DoubleComplex {
    let one = || IntMatrix::from_rows(&[vec![1]]);
    let ranks = vec![vec![0, 1], vec![1, 1], vec![1, 0]];
    let dh = BTreeMap::from([((0, 1), one()), ((1, 0), one())]);
    let dv = BTreeMap::from([((1, 0), IntMatrix::from_rows(&[vec![-1]]))]);
    DoubleComplex::new(ranks, dh, dv).expect("synthetic double complex is valid")
}

/// The E_1 rows of [`synthetic_double_complex`]: Z in degree 2 of row 0
/// and Z in degree 0 of row 1, zero differentials.
pub fn synthetic_rows() -> Vec<ChainComplex> {
    let row = |ranks: Vec<usize>| {
        let diffs = ranks.windows(2).map(|w| IntMatrix::zeros(w[1], w[0])).collect();
        ChainComplex::cohomological(0, ranks, diffs).expect("zero differentials")
    };
    vec![row(vec![0, 0, 1, 0, 0]), row(vec![1, 0, 0, 0])]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_d2_is_detected() {
        let rows = synthetic_rows();
        let run = run_spectral_sequence(&rows, &Coefficients::Integers, 2, None).unwrap();
        assert!(!run.certificate.holds);
        assert_eq!(run.status, RunStatus::HigherDifferentialsUndetermined);
        let dc = synthetic_double_complex();
        let run = run_spectral_sequence(&rows, &Coefficients::Integers, 2, Some(&dc)).unwrap();
        assert_eq!(run.status, RunStatus::DoubleComplex);
        assert_eq!(run.pages[0].entry(0, 1), FinAbGroup::free(1));
        assert_eq!(run.pages[0].entry(2, 0), FinAbGroup::free(1));
        assert!(run.pages[1].entries.values().all(|g| g.is_trivial()));
        for a in run.abutment.values() {
            assert_eq!(a.group, Some(FinAbGroup::trivial()));
        }
    }

    #[test]
    fn one_row_degenerates() {
        let row = ChainComplex::cohomological(
            0,
            vec![1; 5],
            vec![
                IntMatrix::from_rows(&[vec![0]]),
                IntMatrix::from_rows(&[vec![2]]),
                IntMatrix::from_rows(&[vec![0]]),
                IntMatrix::from_rows(&[vec![2]]),
            ],
        )
        .unwrap();
        let run = run_spectral_sequence(&[row], &Coefficients::Integers, 2, None).unwrap();
        assert!(run.certificate.holds);
        assert_eq!(run.abutment[&2].group, Some(FinAbGroup::cyclic(2)));
    }
}
