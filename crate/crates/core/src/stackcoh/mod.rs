//! Cohomology of classifying stacks BG assembled from coefficient oracles:
//! constant p-groups through group cochains and coefficient towers, the
//! abelian-variety model through the descent spectral sequence, etale
//! p-divisible groups through limits over their finite levels, and the
//! comparison with Dieudonne modules.

mod abelian;
mod compare;
mod constant;
mod oracle;
mod pdivisible;
mod result;

pub use abelian::{abelian_model_stack_cohomology, cup};
pub use compare::{compare_with_dieudonne, DieudonneComparison};
pub use constant::{coefficient_levels, constant_group_stack_cohomology};
pub use oracle::{group_cochains, CoefficientOracle};
pub use pdivisible::{group_levels, pdivisible_stack_cohomology};
pub use result::{Check, StackCohomologyResult, TowerData};
