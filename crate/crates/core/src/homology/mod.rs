//! Exact linear algebra over Z: Smith normal form, homology of bounded
//! complexes (with Z or Z/m coefficients), Künneth, homotopy checks and
//! limits of towers of finite abelian groups.

mod complex;
mod compute;
mod group;
mod homotopy;
mod kunneth;
mod matrix;
mod reduce;
mod snf;
mod tower;

pub use complex::{is_chain_map, ChainComplex, Coefficients, Grading};
pub use compute::{homology, homology_at, induced_map, report_json, Homology, HomologyGroup};
pub use group::FinAbGroup;
pub use homotopy::{verify_homotopy, verify_homotopy_through, zero_homotopy, HomotopyReport, HomotopyWitness};
pub use kunneth::{kunneth, kunneth_graded, Graded};
pub use matrix::IntMatrix;
pub use reduce::ReducedComplex;
pub use snf::{
    cokernel, invariant_factors, kernel_basis, lattice_coordinates, rank, smith_normal_form, subquotient, SmithForm,
};
pub use tower::{tower_limit, Tower, TowerLimit, DEFAULT_EXTRA_LEVELS};
