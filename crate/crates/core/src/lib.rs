//! Matroids over idylls and the categories built from them.
//!
//! * [`idyll`]: idylls and null-set membership.
//! * [`matroid`]: pointed matroids as Grassmann-Plücker functions, minors,
//!   duality, direct sums, circuits and vectors.
//! * [`flats`]: the lattice of flats and modularity.
//! * [`morphism`]: submonomial morphisms, kernels, cokernels, admissible
//!   factorizations and biCartesian completions.
//! * [`hall`]: isomorphism classes, Hall products and K₀ classes.
//! * [`trs`]: tropical toric reflexive sheaves, slopes and
//!   Harder-Narasimhan filtrations.
//! * [`io`] and [`cli`]: text formats and the command-line driver.
//! * [`corpus`] and [`selftest`]: shipped examples and the acceptance
//!   suites behind `fmat selftest`.

pub mod idyll;
pub mod io;
pub mod cli;
pub mod corpus;
pub mod flats;
pub mod hall;
pub mod matroid;
pub mod morphism;
pub mod par;
pub mod selftest;
pub mod subset;
pub mod trs;
