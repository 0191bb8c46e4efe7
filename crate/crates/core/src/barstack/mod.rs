//! Bar complexes of finite abelian groups, the periodic resolution of a
//! cyclic group, exterior squares and iterated classifying constructions.

mod bar;
mod cyclic;
mod simplicial;

pub use bar::{bar_complex, group_homology, BarComplexSpec, Budget, GroupElements};
pub use cyclic::{
    cyclic_coinvariants, cyclic_resolution, cyclic_resolution_homology, periodic_inclusion_map, periodic_model,
    periodic_model_inclusion,
};
pub use simplicial::{kan_classifying, KanModel, SimplicialAbelianGroup};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::homology::FinAbGroup;

/// Invariant factors of a finite group as machine integers.
pub fn finite_orders(g: &FinAbGroup) -> Result<Vec<u64>> {
    if !g.is_finite() {
        return Err(Error::InvalidArgument(format!("{g} is not finite")));
    }
    g.torsion
        .iter()
        .map(|d| u64::try_from(d).map_err(|_| Error::BudgetExceeded(format!("group order {d} too large"))))
        .collect()
}

/// Exterior square of a finite abelian group: sum over i < j of
/// Z/gcd(d_i, d_j).
pub fn exterior_square(g: &FinAbGroup) -> FinAbGroup {
    let t = &g.torsion;
    let mut out = Vec::new();
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            out.push(t[i].gcd(&t[j]));
        }
    }
    FinAbGroup::from_diagonal(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_squares() {
        assert!(exterior_square(&FinAbGroup::cyclic(2)).is_trivial());
        assert_eq!(
            exterior_square(&FinAbGroup::from_orders(&[2, 4])),
            FinAbGroup::cyclic(2)
        );
        assert_eq!(
            exterior_square(&FinAbGroup::from_orders(&[2, 2, 2])),
            FinAbGroup::from_orders(&[2, 2, 2])
        );
    }
}
