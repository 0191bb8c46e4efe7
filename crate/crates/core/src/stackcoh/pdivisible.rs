use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::result::{homology_tower, Check, StackCohomologyResult, TowerData};
use crate::barstack::{periodic_model, periodic_model_inclusion};
use crate::dieudonne::SigmaTwist;
use crate::error::{Error, Result};
use crate::homology::{Coefficients, FinAbGroup, Homology, IntMatrix};
use crate::specseq::sym_rank;

/// Number of group levels n used for the tower of (Z/p^n)^h at truncation
/// N.
pub fn group_levels(truncation: usize) -> usize {
    2 * truncation + 3
}

/// H^*(BG; W_N) for the etale p-divisible group (Q_p/Z_p)^h through degree
/// `bound`, as the limit over n of H^*(B(Z/p^n)^h; W_N) with transitions
/// induced by the inclusions G_n -> G_{n+1}.
pub fn pdivisible_stack_cohomology(h: usize, p: u64, truncation: usize, bound: usize) -> Result<StackCohomologyResult> {
    if h == 0 || truncation == 0 {
        return Err(Error::InvalidArgument("h and N must be positive".into()));
    }
    if h > 3 || bound > 8 {
        return Err(Error::BudgetExceeded(format!(
            "height {h}, bound {bound}: limits are h <= 3, bound <= 8"
        )));
    }
    let levels = group_levels(truncation);
    let top = bound + 1;
    let coeffs = Coefficients::witt(p, truncation);
    let degrees: Vec<i64> = (0..=bound as i64).collect();
    let pn = |n: usize| -> Result<u64> {
        p.checked_pow(n as u32)
            .ok_or_else(|| Error::BudgetExceeded(format!("{p}^{n} overflows")))
    };
    let mut orders = Vec::with_capacity(levels);
    for n in 1..=levels {
        orders.push(vec![pn(n)?; h]);
    }
    // cochains Hom(P(G_n), Z): the dual of the periodic model
    let cochains: Vec<_> = orders
        .par_iter()
        .map(|o| Ok(periodic_model(o, top)?.dual()))
        .collect::<Result<_>>()?;
    let homs: Vec<Homology> = cochains
        .par_iter()
        .map(|c| Homology::compute_degrees(c, &coeffs, true, &degrees))
        .collect::<Result<_>>()?;
    // restriction along G_n -> G_{n+1}: transpose of the inclusion
    let restrictions: Vec<Vec<IntMatrix>> = (0..levels - 1)
        .map(|k| {
            Ok(periodic_model_inclusion(&orders[k], &orders[k + 1], top)?
                .iter()
                .map(|m| m.transpose())
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut groups = BTreeMap::new();
    let mut towers = BTreeMap::new();
    let mut stable = BTreeMap::new();
    for &n in &degrees {
        groups.insert(n, homs[levels - 1].group(n));
        let maps: Vec<IntMatrix> = restrictions.iter().map(|r| r[n as usize].clone()).collect();
        let t = homology_tower(&homs, &maps, n)?;
        let data = TowerData::from_tower("n", &t);
        if let Some(l) = &data.limit {
            stable.insert(n, l.limit.clone());
        }
        towers.insert(n, data);
    }
    let modulus = BigInt::from(p).pow(truncation as u32);
    let mut checks = Vec::new();
    let all_limits = towers.values().all(|t| t.limit.is_some());
    checks.push(Check::new(
        "lim^1 = 0",
        all_limits
            && towers
                .values()
                .all(|t| t.limit.as_ref().is_some_and(|l| l.lim1.is_trivial())),
        "levelwise finite towers are Mittag-Leffler",
    ));
    let mut structure = all_limits;
    let mut detail = Vec::new();
    for &n in &degrees {
        let expected = if n % 2 == 0 {
            FinAbGroup::power_of_cyclic(&modulus, sym_rank(h, n as usize / 2))
        } else {
            FinAbGroup::trivial()
        };
        let got = stable.get(&n);
        structure &= got == Some(&expected);
        detail.push(format!(
            "lim H^{n} = {}",
            got.map_or("undetermined".into(), |g| g.to_string())
        ));
    }
    checks.push(Check::new(
        "H^2j = Sym^j (W_N)^h, odd zero",
        structure,
        detail.join(", "),
    ));
    Ok(StackCohomologyResult {
        kind: format!("(Qp/Zp)^{h}"),
        p,
        truncation,
        groups,
        towers,
        stable,
        sigma_twist: Some(SigmaTwist::Identity),
        certificate: None,
        checks,
    })
}
