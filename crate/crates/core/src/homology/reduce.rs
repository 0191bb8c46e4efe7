//! Sparse elimination of unit entries in a complex of free modules.
//!
//! Each elimination of a pivot c = +-1 between cells x (source) and y
//! (target) is a chain homotopy equivalence onto the complex with x and y
//! removed. The projection to the small complex and the inclusion back are
//! kept as event logs so cycles can be moved in both directions.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::complex::{ChainComplex, Grading};
use super::matrix::IntMatrix;
use crate::error::Result;

type SparseCol = Vec<(usize, i64)>;

#[derive(Debug, Clone)]
enum Forward {
    Drop(usize),
    /// y -> -c * gamma
    Replace(usize, i64, SparseCol),
}

#[derive(Debug, Clone)]
struct Lift {
    x: usize,
    c: i64,
    beta: SparseCol,
}

struct Link {
    src: usize,
    dst: usize,
    cols: Vec<SparseCol>,
    rows: Vec<HashSet<usize>>,
}

/// A complex together with a homotopy equivalent smaller complex.
#[derive(Debug, Clone)]
pub struct ReducedComplex {
    original: ChainComplex,
    reduced: ChainComplex,
    kept: Vec<Vec<usize>>,
    position: Vec<HashMap<usize, usize>>,
    forward: Option<Vec<Vec<Forward>>>,
    lifts: Option<Vec<Vec<Lift>>>,
}

fn entry(col: &SparseCol, y: usize) -> i64 {
    col.iter().find(|(i, _)| *i == y).map(|e| e.1).unwrap_or(0)
}

/// col - q * other, sorted merge; None on overflow.
fn axpy(col: &SparseCol, other: &SparseCol, q: i64) -> Option<SparseCol> {
    let mut out = Vec::with_capacity(col.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < col.len() || j < other.len() {
        let take_left = j >= other.len() || (i < col.len() && col[i].0 < other[j].0);
        let take_right = i >= col.len() || (j < other.len() && other[j].0 < col[i].0);
        if take_left {
            out.push(col[i]);
            i += 1;
        } else if take_right {
            let v = other[j].1.checked_mul(q)?.checked_neg()?;
            out.push((other[j].0, v));
            j += 1;
        } else {
            let v = col[i].1.checked_sub(other[j].1.checked_mul(q)?)?;
            if v != 0 {
                out.push((col[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

struct Eliminator {
    links: Vec<Link>,
    alive: Vec<Vec<bool>>,
    track: bool,
    forward: Vec<Vec<Forward>>,
    lifts: Vec<Vec<Lift>>,
}

impl Eliminator {
    fn link_into(&self, pos: usize) -> Option<usize> {
        self.links.iter().position(|l| l.dst == pos)
    }

    fn link_out_of(&self, pos: usize) -> Option<usize> {
        self.links.iter().position(|l| l.src == pos)
    }

    fn eliminate(&mut self, k: usize, x: usize, y: usize, c: i64) -> bool {
        let link = &self.links[k];
        let colx = link.cols[x].clone();
        let mut zs: Vec<usize> = link.rows[y].iter().copied().filter(|&z| z != x).collect();
        zs.sort_unstable();
        let mut updates = Vec::with_capacity(zs.len());
        for &z in &zs {
            let a = entry(&link.cols[z], y);
            let Some(q) = a.checked_mul(c) else { return false };
            let Some(nc) = axpy(&link.cols[z], &colx, q) else {
                return false;
            };
            updates.push((z, nc, a));
        }
        let (s, t) = (link.src, link.dst);
        let link = &mut self.links[k];
        for (z, nc, _) in &updates {
            let old: HashSet<usize> = link.cols[*z].iter().map(|e| e.0).collect();
            let new: HashSet<usize> = nc.iter().map(|e| e.0).collect();
            for w in old.difference(&new) {
                link.rows[*w].remove(z);
            }
            for w in new.difference(&old) {
                link.rows[*w].insert(*z);
            }
            link.cols[*z] = nc.clone();
        }
        for (w, _) in &colx {
            link.rows[*w].remove(&x);
        }
        link.cols[x].clear();
        debug_assert!(link.rows[y].is_empty());
        if let Some(kin) = self.link_into(s) {
            let l = &mut self.links[kin];
            let zs: Vec<usize> = l.rows[x].drain().collect();
            for z in zs {
                l.cols[z].retain(|e| e.0 != x);
            }
        }
        if let Some(kout) = self.link_out_of(t) {
            let l = &mut self.links[kout];
            let col = std::mem::take(&mut l.cols[y]);
            for (w, _) in col {
                l.rows[w].remove(&y);
            }
        }
        self.alive[s][x] = false;
        self.alive[t][y] = false;
        if self.track {
            let gamma: SparseCol = colx.into_iter().filter(|e| e.0 != y).collect();
            self.forward[s].push(Forward::Drop(x));
            self.forward[t].push(Forward::Replace(y, c, gamma));
            let beta = updates.into_iter().map(|(z, _, a)| (z, a)).collect();
            self.lifts[s].push(Lift { x, c, beta });
        }
        true
    }

    fn reduce_link(&mut self, k: usize) {
        let mut blocked: HashSet<(usize, usize)> = HashSet::new();
        loop {
            let mut progress = false;
            let link = &self.links[k];
            let mut order: Vec<(usize, usize)> = link
                .cols
                .iter()
                .enumerate()
                .filter(|(x, col)| !col.is_empty() && self.alive[link.src][*x])
                .map(|(x, col)| (col.len(), x))
                .collect();
            order.sort_unstable();
            for (_, x) in order {
                let link = &self.links[k];
                if !self.alive[link.src][x] {
                    continue;
                }
                let best = link.cols[x]
                    .iter()
                    .filter(|(y, a)| a.abs() == 1 && !blocked.contains(&(x, *y)))
                    .map(|&(y, a)| (link.rows[y].len(), y, a))
                    .min();
                let Some((_, y, a)) = best else { continue };
                if self.eliminate(k, x, y, a) {
                    progress = true;
                } else {
                    blocked.insert((x, y));
                }
            }
            if !progress {
                break;
            }
        }
    }
}

impl ReducedComplex {
    /// Reduce `c`. With `track` the projection and inclusion maps are
    /// recorded; without it only the small complex is kept.
    pub fn new(c: &ChainComplex, track: bool) -> Result<Self> {
        let len = c.ranks().len();
        let mut links = Vec::with_capacity(c.diffs().len());
        let mut fits = true;
        for (k, d) in c.diffs().iter().enumerate() {
            let (src, dst) = match c.grading() {
                Grading::Homological => (k + 1, k),
                Grading::Cohomological => (k, k + 1),
            };
            let mut cols = Vec::with_capacity(d.ncols());
            let mut rows = vec![HashSet::new(); d.nrows()];
            for j in 0..d.ncols() {
                let mut col: SparseCol = Vec::with_capacity(d.column(j).len());
                for (i, v) in d.column(j) {
                    match v.to_i64() {
                        Some(x) => col.push((*i, x)),
                        None => fits = false,
                    }
                    rows[*i].insert(j);
                }
                col.sort_unstable();
                cols.push(col);
            }
            links.push(Link { src, dst, cols, rows });
        }
        let mut el = Eliminator {
            links,
            alive: c.ranks().iter().map(|&r| vec![true; r]).collect(),
            track,
            forward: vec![Vec::new(); len],
            lifts: vec![Vec::new(); len],
        };
        if fits {
            for k in 0..el.links.len() {
                el.reduce_link(k);
            }
        }
        let kept: Vec<Vec<usize>> = el
            .alive
            .iter()
            .map(|a| a.iter().enumerate().filter(|e| *e.1).map(|e| e.0).collect())
            .collect();
        let position: Vec<HashMap<usize, usize>> = kept
            .iter()
            .map(|k| k.iter().enumerate().map(|(i, &x)| (x, i)).collect())
            .collect();
        let reduced = if fits {
            let mut diffs = Vec::with_capacity(el.links.len());
            for link in &el.links {
                let cols = kept[link.src]
                    .iter()
                    .map(|&x| {
                        link.cols[x]
                            .iter()
                            .map(|&(y, v)| (position[link.dst][&y], BigInt::from(v)))
                            .collect()
                    })
                    .collect();
                diffs.push(IntMatrix::from_columns(kept[link.dst].len(), cols));
            }
            let ranks = kept.iter().map(|k| k.len()).collect();
            ChainComplex::new(c.lo(), ranks, diffs, c.grading())?
        } else {
            c.clone()
        };
        Ok(ReducedComplex {
            original: c.clone(),
            reduced,
            kept,
            position,
            forward: track.then_some(el.forward),
            lifts: track.then_some(el.lifts),
        })
    }

    pub fn original(&self) -> &ChainComplex {
        &self.original
    }

    pub fn reduced(&self) -> &ChainComplex {
        &self.reduced
    }

    pub fn is_tracked(&self) -> bool {
        self.forward.is_some()
    }

    fn pos(&self, n: i64) -> Option<usize> {
        self.original.contains(n).then(|| (n - self.original.lo()) as usize)
    }

    /// Map a vector of the original complex in degree n to the small complex.
    /// Requires tracking.
    pub fn project(&self, n: i64, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let pos = self.pos(n)?;
        let forward = self.forward.as_ref()?;
        let mut cur: HashMap<usize, BigInt> = v
            .iter()
            .enumerate()
            .filter(|e| !e.1.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        for ev in &forward[pos] {
            match ev {
                Forward::Drop(x) => {
                    cur.remove(x);
                }
                Forward::Replace(y, c, gamma) => {
                    if let Some(a) = cur.remove(y) {
                        let f = -(&a * c);
                        for (w, g) in gamma {
                            *cur.entry(*w).or_default() += &f * g;
                        }
                    }
                }
            }
        }
        let mut out = vec![BigInt::zero(); self.kept[pos].len()];
        for (i, x) in cur {
            if x.is_zero() {
                continue;
            }
            out[self.position[pos][&i]] = x;
        }
        Some(out)
    }

    /// Map a vector of the small complex in degree n back to the original.
    /// Requires tracking.
    pub fn include(&self, n: i64, w: &[BigInt]) -> Option<Vec<BigInt>> {
        let pos = self.pos(n)?;
        let lifts = self.lifts.as_ref()?;
        let mut out = vec![BigInt::zero(); self.original.rank(n)];
        for (i, x) in w.iter().enumerate() {
            out[self.kept[pos][i]] = x.clone();
        }
        for l in lifts[pos].iter().rev() {
            let mut s = BigInt::zero();
            for (z, b) in &l.beta {
                if !out[*z].is_zero() {
                    s += &out[*z] * b;
                }
            }
            if !s.is_zero() {
                out[l.x] = -(s * l.c);
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ChainComplex {
        // Z^2 -> Z^3 -> Z^2 with a mix of unit and non-unit entries
        let d2 = IntMatrix::from_rows(&[vec![1, 0], vec![-1, 2], vec![1, -2]]);
        let d1 = IntMatrix::from_rows(&[vec![0, 1, 1], vec![0, 0, 0]]);
        ChainComplex::homological(0, vec![2, 3, 2], vec![d1, d2]).unwrap()
    }

    #[test]
    fn reduced_complex_is_smaller_and_valid() {
        let r = ReducedComplex::new(&sample(), true).unwrap();
        let total: usize = r.reduced().ranks().iter().sum();
        assert!(total < 7);
    }

    #[test]
    fn include_gives_chain_map() {
        let c = sample();
        let r = ReducedComplex::new(&c, true).unwrap();
        // inclusion commutes with differentials
        for n in 1..=2 {
            let small = r.reduced();
            for i in 0..small.rank(n) {
                let mut e = vec![BigInt::zero(); small.rank(n)];
                e[i] = BigInt::from(1);
                let up = r.include(n, &e).unwrap();
                let lhs = c.outgoing(n).unwrap().apply(&up);
                let down = small.outgoing(n).unwrap().apply(&e);
                let rhs = r.include(n - 1, &down).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn project_after_include_is_identity() {
        let c = sample();
        let r = ReducedComplex::new(&c, true).unwrap();
        for n in 0..=2 {
            for i in 0..r.reduced().rank(n) {
                let mut e = vec![BigInt::zero(); r.reduced().rank(n)];
                e[i] = BigInt::from(1);
                let back = r.project(n, &r.include(n, &e).unwrap()).unwrap();
                assert_eq!(back, e);
            }
        }
    }
}
