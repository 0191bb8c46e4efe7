use num_bigint::BigInt;
use serde::Serialize;

use super::constant::constant_group_stack_cohomology;
use super::pdivisible::pdivisible_stack_cohomology;
use crate::barstack::Budget;
use crate::dieudonne::{catalog, CatalogEntry, CatalogModule, SigmaTwist};
use crate::error::{Error, Result};
use crate::exactalg::Field;
use crate::homology::FinAbGroup;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DieudonneComparison {
    pub entry: String,
    pub p: u64,
    pub truncation: usize,
    /// Stable H^2 of BG from the stack side.
    pub stack_h2: Option<FinAbGroup>,
    /// Underlying W_N-module of the catalog module.
    pub dieudonne: FinAbGroup,
    pub equal: bool,
    pub sigma_twist: SigmaTwist,
}

/// Compare the stable H^2 of BG with the catalog Dieudonne module of G at
/// truncation N. Only etale entries are accepted.
pub fn compare_with_dieudonne(entry: &CatalogEntry, field: &Field, truncation: usize) -> Result<DieudonneComparison> {
    if !entry.is_etale() {
        return Err(Error::OutOfScope(format!(
            "{entry} is not etale; its crystalline cohomology is not computed here"
        )));
    }
    let p = field.characteristic();
    let module = catalog(entry, field, truncation)?;
    let dieudonne = match &module {
        CatalogModule::Finite(m) => {
            FinAbGroup::from_diagonal(m.exponents().iter().map(|&e| BigInt::from(p).pow(e as u32)))
        }
        CatalogModule::PDivisible(m) => {
            FinAbGroup::power_of_cyclic(&BigInt::from(p).pow(truncation as u32), m.height())
        }
    };
    let stack_h2 = match entry {
        CatalogEntry::Constant(n) => {
            let order = p.pow(*n as u32);
            let budget = Budget::default().with_group_cap(order.max(16));
            let r = constant_group_stack_cohomology(&FinAbGroup::cyclic(order), p, truncation, 2, &budget)?;
            r.stable.get(&2).cloned()
        }
        CatalogEntry::QpZp => pdivisible_stack_cohomology(1, p, truncation, 2)?
            .stable
            .get(&2)
            .cloned(),
        CatalogEntry::Etale(h) => pdivisible_stack_cohomology(*h, p, truncation, 2)?
            .stable
            .get(&2)
            .cloned(),
        _ => unreachable!("non-etale entries are refused above"),
    };
    Ok(DieudonneComparison {
        entry: entry.to_string(),
        p,
        truncation,
        equal: stack_h2.as_ref() == Some(&dieudonne),
        stack_h2,
        dieudonne,
        sigma_twist: SigmaTwist::for_field(field),
    })
}
