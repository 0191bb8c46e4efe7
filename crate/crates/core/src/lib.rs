//! Exact computational homological algebra for classifying stacks of
//! finite and p-divisible group schemes over perfect fields of
//! characteristic p.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactalg`]: finite fields and truncated Witt vectors.
//! - [`dieudonne`]: the Dieudonne ring, semilinear module presentations and
//!   a catalog of standard modules.
//! - [`homology`]: Smith normal form, chain complexes, homology with
//!   coefficients, Kunneth, homotopy checks and inverse limits of towers.
//! - [`barstack`]: bar complexes of finite abelian groups, periodic
//!   resolutions and iterated classifying constructions.
//! - [`specseq`]: cosimplicial modules, exterior-power rows, explicit
//!   contractions and a first-quadrant spectral sequence runner.
//! - [`stackcoh`]: cohomology of classifying stacks assembled from
//!   coefficient oracles, tower limits and comparison with Dieudonne modules.
//! - [`verify`]: the end-to-end verification suite used by the CLI.

pub mod barstack;
pub mod dieudonne;
pub mod error;
pub mod exactalg;
pub mod homology;
pub mod specseq;
pub mod stackcoh;
pub mod verify;

pub use error::{Error, Result};
