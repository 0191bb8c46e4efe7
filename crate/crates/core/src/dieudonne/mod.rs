//! The Dieudonne ring over W_N(k), finite-length Dieudonne modules given by
//! generators, relations and F/V matrices, the quotients D/(D F^m + D V^n)
//! and a catalog of standard modules.

mod catalog;
mod local;
mod module;
mod ring;

pub use catalog::{catalog, CatalogEntry, CatalogModule, PDivisibleModule, PDivisibleReport, SigmaTwist};
pub use local::{local_smith, LocalSmith};
pub use module::{
    is_truncation_stable, module_from_presentation, w_length, AxiomReport, AxiomWitness, DieudonneModule, WittMatrix,
};
pub use ring::{canonical_form, DieudonneElement, Expression, Letter};
