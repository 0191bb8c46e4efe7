//! Finite fields F_{p^d} and truncated Witt vectors W_N(F_{p^d}).
//!
//! Witt addition and multiplication are computed by solving the ghost
//! equations on a torsion-free lift Z[x]/(f) of the residue field, reduced
//! modulo p^N; the reduced coordinates are exact because the n-th ghost
//! equation only needs the earlier coordinates modulo p.

mod field;
mod witt;

pub use field::{is_prime, Field, FieldElement, FieldHeader};
pub use witt::{ghost, witt_structure_map, StructureMap, WittVector};
