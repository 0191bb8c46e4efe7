//! Cosimplicial modules, their alternating face complexes, the exterior
//! power rows of the abelian-variety model with explicit contractions, and
//! a first-quadrant spectral sequence runner.

mod cosimplicial;
mod exterior;
mod rows;
mod runner;

pub use cosimplicial::{alternating_face_complex, CosimplicialModule};
pub use exterior::{binomial, exterior_power, multisets, subset_rank, subsets, symmetric_power};
pub use rows::{
    closed_form_differential, contraction_homotopy, decalage_check, e1_row, e1_row_cosimplicial, h1_coface,
    hom_complex_and_contraction, sym_rank, ContractionReport, DecalageReport,
};
pub use runner::{
    run_spectral_sequence, synthetic_double_complex, synthetic_rows, AbutmentDegree, DegenerationCertificate,
    DoubleComplex, RunStatus, SpectralSequencePage, SpectralSequenceRun,
};
