use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use super::oracle::group_cochains;
use super::result::{homology_tower, Check, StackCohomologyResult, TowerData};
use crate::barstack::{finite_orders, Budget};
use crate::error::{Error, Result};
use crate::homology::{Coefficients, FinAbGroup, Homology, IntMatrix, ReducedComplex};
use crate::specseq::alternating_face_complex;

/// log_p of n when n is a power of p.
pub(crate) fn p_log(n: u64, p: u64) -> Option<usize> {
    let (mut n, mut e) = (n, 0);
    while n > 1 {
        if n % p != 0 {
            return None;
        }
        n /= p;
        e += 1;
    }
    Some(e)
}

/// Number of coefficient levels used for the tower limits of a group of
/// exponent p^e at truncation N.
pub fn coefficient_levels(exponent_log: usize, truncation: usize) -> usize {
    truncation.max(exponent_log) + exponent_log + 2
}

/// H^i(BG; W_N) for a constant p-group G from the group cochain complex
/// (the only nonzero row of E_1), i <= bound, with the coefficient tower
/// over N' = 1, 2, ... and its limit.
pub fn constant_group_stack_cohomology(
    g: &FinAbGroup,
    p: u64,
    truncation: usize,
    bound: usize,
    budget: &Budget,
) -> Result<StackCohomologyResult> {
    if truncation == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let orders = finite_orders(g)?;
    let size: u64 = orders.iter().product();
    let Some(size_log) = p_log(size, p) else {
        return Err(Error::InvalidArgument(format!("|G| = {size} is not a power of {p}")));
    };
    if size > budget.max_group_order {
        return Err(Error::BudgetExceeded(format!(
            "|G| = {size} exceeds the group cap {}",
            budget.max_group_order
        )));
    }
    if bound + 1 > budget.max_degree {
        return Err(Error::BudgetExceeded(format!(
            "cochains through degree {} exceed the degree cap {}",
            bound + 1,
            budget.max_degree
        )));
    }
    if (size as f64).powi(bound as i32 + 1) > budget.max_generators as f64 {
        return Err(Error::BudgetExceeded(format!(
            "|G|^{} cochains exceed the budget",
            bound + 1
        )));
    }
    let exp_log = orders.iter().map(|&o| p_log(o, p).unwrap_or(0)).max().unwrap_or(0);
    let cochains = alternating_face_complex(&group_cochains(g, bound + 1)?)?;
    let red = ReducedComplex::new(&cochains, true)?;
    let degrees: Vec<i64> = (0..=bound as i64).collect();
    let levels = coefficient_levels(exp_log, truncation);
    let homs: Vec<Homology> = (1..=levels)
        .into_par_iter()
        .map(|n| Homology::from_reduced_degrees(red.clone(), &Coefficients::witt(p, n), &degrees))
        .collect::<Result<_>>()?;
    let id = cochains.identity_map();
    let mut groups = BTreeMap::new();
    let mut towers = BTreeMap::new();
    let mut stable = BTreeMap::new();
    for &n in &degrees {
        groups.insert(n, homs[truncation - 1].group(n));
        let maps = vec![id[n as usize].clone(); levels - 1];
        let t = homology_tower(&homs, &maps, n)?;
        let data = TowerData::from_tower("N", &t);
        if let Some(l) = &data.limit {
            stable.insert(n, l.limit.clone());
        }
        towers.insert(n, data);
    }
    let mut checks = Vec::new();
    let wn = FinAbGroup::from_diagonal([BigInt::from(p).pow(truncation as u32)]);
    checks.push(Check::new(
        "H0 = W_N",
        groups.get(&0) == Some(&wn),
        format!("H^0 = {}", groups[&0]),
    ));
    if bound >= 1 {
        let h1 = stable.get(&1);
        checks.push(Check::new(
            "H1 limit = 0",
            h1.is_some_and(|g| g.is_trivial()),
            format!("lim H^1 = {}", h1.map_or("undetermined".into(), |g| g.to_string())),
        ));
    }
    // every positive degree is killed by |G|
    let order = BigInt::from(size);
    let killed = groups
        .iter()
        .filter(|(n, _)| **n > 0)
        .all(|(_, g)| g.is_killed_by(&order));
    checks.push(Check::new(
        "killed by |G|",
        killed,
        format!("|G| = {size}, log_p = {size_log}"),
    ));
    // reduction maps compose: (N'+2 -> N') = (N'+1 -> N') o (N'+2 -> N'+1)
    let mut composes = true;
    for &n in &degrees {
        for k in 0..levels.saturating_sub(2) {
            let direct = crate::homology::induced_map(&homs[k + 2], &homs[k], &id[n as usize], n)?;
            let a = crate::homology::induced_map(&homs[k + 1], &homs[k], &id[n as usize], n)?;
            let b = crate::homology::induced_map(&homs[k + 2], &homs[k + 1], &id[n as usize], n)?;
            if !same_mod_orders(&direct, &a.mul(&b)?, &homs[k].at(n).orders) {
                composes = false;
            }
        }
    }
    checks.push(Check::new("reduction maps compose", composes, ""));
    if bound >= 2 {
        if let Some(h2) = stable.get(&2) {
            let mut ok = true;
            let mut detail = Vec::new();
            for n in 1..=3usize.min(levels) {
                let lhs = homs[n - 1].group(1).order().unwrap_or_default();
                let rhs = h2.n_torsion_order(&BigInt::from(p).pow(n as u32));
                ok &= lhs == rhs;
                detail.push(format!("n={n}: |H^1(W_n)| = {lhs}, |H^2[p^n]| = {rhs}"));
            }
            checks.push(Check::new("Bockstein", ok, detail.join("; ")));
        } else {
            checks.push(Check::new("Bockstein", false, "H^2 limit undetermined"));
        }
    }
    Ok(StackCohomologyResult {
        kind: format!("constant group {g}"),
        p,
        truncation,
        groups,
        towers,
        stable,
        sigma_twist: None,
        certificate: None,
        checks,
    })
}

fn same_mod_orders(a: &IntMatrix, b: &IntMatrix, orders: &[BigInt]) -> bool {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return false;
    }
    for j in 0..a.ncols() {
        for (i, o) in orders.iter().enumerate() {
            let d = a.get(i, j) - b.get(i, j);
            let r = if o.is_zero() { d } else { d.mod_floor(o) };
            if !r.is_zero() {
                return false;
            }
        }
    }
    true
}
