use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use super::complex::{ChainComplex, Coefficients};
use super::group::FinAbGroup;
use super::matrix::IntMatrix;
use super::reduce::ReducedComplex;
use super::snf::{smith_normal_form, span_basis};
use crate::error::{Error, Result};

type Dense = Vec<Vec<BigInt>>;

fn mat_vec(m: &Dense, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// One homology group of a complex with explicit generators.
///
/// Generators and the coordinate map refer to the reduced complex held by
/// the owning [`Homology`].
#[derive(Debug, Clone)]
pub struct HomologyGroup {
    pub degree: i64,
    pub group: FinAbGroup,
    /// false when the degree lies outside the complex.
    pub in_range: bool,
    /// Order of each generator (0 = infinite), same order as `generators`.
    pub orders: Vec<BigInt>,
    pub generators: Vec<Vec<BigInt>>,
    // cycle lattice: U, diagonal (rank r); relation coordinates: U2
    lat_u: Dense,
    lat_diag: Vec<BigInt>,
    rel_u: Dense,
    // indices into U2 rows kept as generators
    kept: Vec<usize>,
}

impl HomologyGroup {
    fn empty(degree: i64, in_range: bool) -> Self {
        HomologyGroup {
            degree,
            group: FinAbGroup::trivial(),
            in_range,
            orders: Vec::new(),
            generators: Vec::new(),
            lat_u: Vec::new(),
            lat_diag: Vec::new(),
            rel_u: Vec::new(),
            kept: Vec::new(),
        }
    }

    /// Coordinates of a cycle (in reduced coordinates) on the generators,
    /// reduced modulo each generator's order.
    pub fn coordinates(&self, cycle: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.generators.is_empty() {
            return Ok(Vec::new());
        }
        let ux = mat_vec(&self.lat_u, cycle);
        let r = self.lat_diag.len();
        let mut c = Vec::with_capacity(r);
        for (i, v) in ux.iter().enumerate() {
            if i < r {
                let (q, rem) = v.div_rem(&self.lat_diag[i]);
                if !rem.is_zero() {
                    return Err(Error::Mismatch(format!(
                        "vector is not a cycle in degree {}",
                        self.degree
                    )));
                }
                c.push(q);
            } else if !v.is_zero() {
                return Err(Error::Mismatch(format!(
                    "vector is not a cycle in degree {}",
                    self.degree
                )));
            }
        }
        let h = mat_vec(&self.rel_u, &c);
        Ok(self
            .kept
            .iter()
            .zip(&self.orders)
            .map(|(&i, o)| if o.is_zero() { h[i].clone() } else { h[i].mod_floor(o) })
            .collect())
    }
}

/// Homology of a complex, computed on a reduced model.
#[derive(Debug, Clone)]
pub struct Homology {
    pub complex: ReducedComplex,
    pub coefficients: Coefficients,
    pub groups: BTreeMap<i64, HomologyGroup>,
}

impl Homology {
    /// Homology in every degree of the complex. With `track`, generators
    /// can be moved to and from the original complex.
    pub fn compute(c: &ChainComplex, coefficients: &Coefficients, track: bool) -> Result<Self> {
        let red = ReducedComplex::new(c, track)?;
        Self::from_reduced(red, coefficients)
    }

    /// Homology in the given degrees only (degrees outside the complex are
    /// skipped). Useful when the top degree of a truncated complex is not
    /// wanted: there the cycle module is large and meaningless.
    pub fn compute_degrees(
        c: &ChainComplex,
        coefficients: &Coefficients,
        track: bool,
        degrees: &[i64],
    ) -> Result<Self> {
        let red = ReducedComplex::new(c, track)?;
        Self::from_reduced_degrees(red, coefficients, degrees)
    }

    pub fn from_reduced(red: ReducedComplex, coefficients: &Coefficients) -> Result<Self> {
        let degrees: Vec<i64> = (red.reduced().lo()..=red.reduced().hi()).collect();
        Self::from_reduced_degrees(red, coefficients, &degrees)
    }

    pub fn from_reduced_degrees(red: ReducedComplex, coefficients: &Coefficients, degrees: &[i64]) -> Result<Self> {
        let mut groups = BTreeMap::new();
        let small = red.reduced();
        for &n in degrees {
            if small.contains(n) {
                groups.insert(n, homology_group(small, n, coefficients)?);
            }
        }
        Ok(Homology {
            complex: red,
            coefficients: coefficients.clone(),
            groups,
        })
    }

    /// Same reduced complex and degrees, other coefficients.
    pub fn with_coefficients(&self, coefficients: &Coefficients) -> Result<Self> {
        let degrees: Vec<i64> = self.groups.keys().copied().collect();
        Self::from_reduced_degrees(self.complex.clone(), coefficients, &degrees)
    }

    pub fn group(&self, n: i64) -> FinAbGroup {
        self.groups
            .get(&n)
            .map(|g| g.group.clone())
            .unwrap_or_else(FinAbGroup::trivial)
    }

    pub fn at(&self, n: i64) -> HomologyGroup {
        self.groups
            .get(&n)
            .cloned()
            .unwrap_or_else(|| HomologyGroup::empty(n, false))
    }

    pub fn groups(&self) -> BTreeMap<i64, FinAbGroup> {
        self.groups.iter().map(|(k, g)| (*k, g.group.clone())).collect()
    }

    /// Generator i in degree n as a vector of the original complex.
    pub fn generator_in_original(&self, n: i64, i: usize) -> Option<Vec<BigInt>> {
        let g = self.groups.get(&n)?.generators.get(i)?;
        self.complex.include(n, g)
    }

    /// Coordinates of a cycle of the original complex.
    pub fn coordinates_of_original(&self, n: i64, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let g = self
            .groups
            .get(&n)
            .ok_or_else(|| Error::InvalidArgument(format!("degree {n} outside complex")))?;
        let w = self
            .complex
            .project(n, v)
            .ok_or_else(|| Error::InvalidArgument("reduction was built without tracking".into()))?;
        g.coordinates(&w)
    }

    pub fn report(&self) -> Value {
        report_json(&self.groups())
    }
}

/// {degree: {free_rank, torsion}} with string keys.
pub fn report_json(groups: &BTreeMap<i64, FinAbGroup>) -> Value {
    let mut m = Map::new();
    for (k, g) in groups {
        m.insert(
            k.to_string(),
            json!({
                "free_rank": g.free_rank,
                "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            }),
        );
    }
    Value::Object(m)
}

/// Homology groups of a complex (no generators kept).
pub fn homology(c: &ChainComplex, coefficients: &Coefficients) -> Result<BTreeMap<i64, FinAbGroup>> {
    Ok(Homology::compute(c, coefficients, false)?.groups())
}

/// Homology in a single degree; degrees outside the range give an empty
/// answer with `in_range = false`.
pub fn homology_at(c: &ChainComplex, n: i64, coefficients: &Coefficients) -> Result<HomologyGroup> {
    if !c.contains(n) {
        return Ok(HomologyGroup::empty(n, false));
    }
    homology_group(c, n, coefficients)
}

fn homology_group(c: &ChainComplex, n: i64, coefficients: &Coefficients) -> Result<HomologyGroup> {
    let dim = c.rank(n);
    if dim == 0 {
        return Ok(HomologyGroup::empty(n, true));
    }
    // cycle lattice
    let mut cycle_cols: Vec<Vec<(usize, BigInt)>> = Vec::new();
    match c.outgoing(n) {
        Some(a) if !a.is_zero() => {
            let s = smith_normal_form(a);
            for j in 0..dim {
                let scale = if j < s.rank {
                    match coefficients.modulus() {
                        None => continue,
                        Some(m) => m / s.diagonal[j].abs().gcd(m),
                    }
                } else {
                    BigInt::one()
                };
                let col: Vec<(usize, BigInt)> = (0..dim)
                    .filter(|&i| !s.v[i][j].is_zero())
                    .map(|i| (i, &s.v[i][j] * &scale))
                    .collect();
                cycle_cols.push(col);
            }
        }
        _ => {
            for j in 0..dim {
                cycle_cols.push(vec![(j, BigInt::one())]);
            }
        }
    }
    let lattice = IntMatrix::from_columns(dim, cycle_cols);
    // boundaries plus m * e_j, compressed to at most dim generators
    let incoming: &[Vec<(usize, BigInt)>] = match c.incoming(n) {
        Some(b) => b.columns(),
        None => &[],
    };
    let rel_cols = span_basis(incoming, dim, coefficients.modulus());
    let relations = IntMatrix::from_columns(dim, rel_cols);
    let ls = smith_normal_form(&lattice);
    let r = ls.rank;
    let lat_diag: Vec<BigInt> = ls.diagonal[..r].to_vec();
    // coordinates of relations in the lattice basis
    let mut coord_cols: Vec<Vec<(usize, BigInt)>> = Vec::with_capacity(relations.ncols());
    for j in 0..relations.ncols() {
        let mut v = vec![BigInt::zero(); dim];
        for (i, x) in relations.column(j) {
            v[*i] = x.clone();
        }
        let ux = mat_vec(&ls.u, &v);
        let mut col = Vec::new();
        for (i, x) in ux.iter().enumerate().take(r) {
            let (q, rem) = x.div_rem(&lat_diag[i]);
            if !rem.is_zero() {
                return Err(Error::MalformedComplex(format!(
                    "boundaries are not cycles in degree {n}"
                )));
            }
            if !q.is_zero() {
                col.push((i, q));
            }
        }
        coord_cols.push(col);
    }
    let rel_coords = IntMatrix::from_columns(r, coord_cols);
    let rs = smith_normal_form(&rel_coords);
    // H = Z^r / image; generator i = column i of U2^{-1} in lattice coordinates
    let mut orders = Vec::new();
    let mut kept = Vec::new();
    let mut generators = Vec::new();
    for i in 0..r {
        let d = if i < rs.rank {
            rs.diagonal[i].abs()
        } else {
            BigInt::zero()
        };
        if d.is_one() {
            continue;
        }
        // lattice basis vector b_k = d_k * (U^{-1} e_k)
        let mut g = vec![BigInt::zero(); dim];
        for k in 0..r {
            let coef = &rs.u_inv[k][i];
            if coef.is_zero() {
                continue;
            }
            let f = coef * &lat_diag[k];
            for (row, gi) in g.iter_mut().enumerate() {
                let e = &ls.u_inv[row][k];
                if !e.is_zero() {
                    *gi += &f * e;
                }
            }
        }
        if let Some(m) = coefficients.modulus() {
            for x in g.iter_mut() {
                *x = x.mod_floor(m);
            }
        }
        orders.push(d);
        kept.push(i);
        generators.push(g);
    }
    let group = FinAbGroup::from_diagonal(orders.iter().cloned());
    Ok(HomologyGroup {
        degree: n,
        group,
        in_range: true,
        orders,
        generators,
        lat_u: ls.u,
        lat_diag,
        rel_u: rs.u,
        kept,
    })
}

/// Matrix of the map H(C) -> H(D) induced by a chain map f (original
/// bases), in degree n. Columns: source generators; rows: target
/// generators.
pub fn induced_map(src: &Homology, dst: &Homology, f: &IntMatrix, n: i64) -> Result<IntMatrix> {
    let hs = src.at(n);
    let hd = dst.at(n);
    let mut cols = Vec::with_capacity(hs.generators.len());
    for i in 0..hs.generators.len() {
        let g = src
            .generator_in_original(n, i)
            .ok_or_else(|| Error::InvalidArgument("source reduction was built without tracking".into()))?;
        let image = f.apply(&g);
        let coords = dst.coordinates_of_original(n, &image)?;
        cols.push(coords.into_iter().enumerate().filter(|e| !e.1.is_zero()).collect());
    }
    Ok(IntMatrix::from_columns(hd.generators.len(), cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn times_two() -> ChainComplex {
        ChainComplex::homological(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap()
    }

    #[test]
    fn multiplication_by_two() {
        let h = homology(&times_two(), &Coefficients::Integers).unwrap();
        assert_eq!(h[&0], FinAbGroup::cyclic(2));
        assert!(h[&1].is_trivial());
        let h = homology(&times_two(), &Coefficients::Mod(BigInt::from(4))).unwrap();
        assert_eq!(h[&0], FinAbGroup::cyclic(2));
        assert_eq!(h[&1], FinAbGroup::cyclic(2));
    }

    #[test]
    fn out_of_range_is_flagged() {
        let g = homology_at(&times_two(), 5, &Coefficients::Integers).unwrap();
        assert!(!g.in_range);
        assert!(g.group.is_trivial());
    }

    #[test]
    fn coordinates_recover_generators() {
        let c =
            ChainComplex::homological(0, vec![2, 2], vec![IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]])]).unwrap();
        let h = Homology::compute(&c, &Coefficients::Integers, true).unwrap();
        let g0 = h.at(0);
        for (i, gen) in g0.generators.iter().enumerate() {
            let co = g0.coordinates(gen).unwrap();
            for (j, x) in co.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
            }
        }
    }
}
