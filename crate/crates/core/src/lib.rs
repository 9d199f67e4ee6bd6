//! Exact homological algebra workbench.
//!
//! Computes with finitely generated abelian groups, chain complexes, and
//! group homology via the normalized bar construction, entirely in exact
//! integer arithmetic. On top of this sit the number-theoretic applications:
//! scissors-congruence style groups over finite fields and explicit witness
//! chains over cyclotomic torus groups.
//!
//! Module map:
//! - [`matrix`]: arbitrary-precision integer matrices and Smith normal form
//! - [`abgroup`]: finitely generated abelian groups and their functors
//! - [`complex`]: chain complexes of free Z-modules, homology, cycle classes
//! - [`groups`]: small finite groups as multiplication tables
//! - [`bar`]: normalized bar complex with trivial integral coefficients
//! - [`cyclichom`]: homology of cyclic groups and Σ₂-modules, E² pages
//! - [`bloch`]: finite fields, pre-Bloch and Bloch groups, K₂ checks
//! - [`witness`]: explicit cyclotomic witness chains and their identities

pub mod abgroup;
pub mod bar;
pub mod bloch;
pub mod witness;
pub mod complex;
pub mod cyclichom;
pub mod groups;
pub mod matrix;

#[cfg(test)]
pub(crate) mod testhelp;
