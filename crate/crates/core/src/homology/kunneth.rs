use std::collections::BTreeMap;

use super::complex::Grading;
use super::group::FinAbGroup;

/// Graded homology, degree -> group; missing degrees are zero.
pub type Graded = BTreeMap<i64, FinAbGroup>;

fn get(h: &Graded, i: i64) -> Option<&FinAbGroup> {
    h.get(&i).filter(|g| !g.is_trivial())
}

/// Künneth formula for complexes of free abelian groups:
/// sum over i+j=n of H_i (x) H_j plus Tor terms from total degree n-1
/// (homological) or n+1 (cohomological).
pub fn kunneth_graded(hc: &Graded, hd: &Graded, n: i64, grading: Grading) -> FinAbGroup {
    let tor_total = match grading {
        Grading::Homological => n - 1,
        Grading::Cohomological => n + 1,
    };
    let mut out = FinAbGroup::trivial();
    for (&i, a) in hc {
        if let Some(b) = get(hd, n - i) {
            out = out.direct_sum(&a.tensor(b));
        }
        if let Some(b) = get(hd, tor_total - i) {
            out = out.direct_sum(&a.tor(b));
        }
    }
    out
}

/// Homological Künneth formula.
pub fn kunneth(hc: &Graded, hd: &Graded, n: i64) -> FinAbGroup {
    kunneth_graded(hc, hd, n, Grading::Homological)
}
