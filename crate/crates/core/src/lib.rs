//! Finite-scale workbench for splittings, expansion and rank gradient of
//! finitely presented groups.
//!
//! Each finite-index subgroup is realized as a [`coset::CosetTable`]. From a
//! table the crate builds the Cayley multigraph of the quotient
//! ([`cayley`]), its Laplacian spectrum ([`spectral`]), a
//! Reidemeister–Schreier presentation with abelian invariants and a rank
//! interval ([`rewriting`]), and the covering 2-complex with cut
//! decompositions and splitting certificates ([`complex`]). [`gradient`]
//! assembles per-subgroup records into series and evidence reports, and
//! [`families`] generates the standard example families.

pub mod cayley;
pub mod cli;
pub mod complex;
pub mod coset;
pub mod families;
pub mod gradient;
pub mod presentation;
pub mod rational;
pub mod rewriting;
pub mod spectral;
