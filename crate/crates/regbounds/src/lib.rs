//! Weil heights, S-regulators, and relative regulators, together with
//! constructive verification of the determinant and successive-minima
//! bounds that sandwich a regulator between products of unit heights.
//!
//! The crate is organised around the objects the bounds talk about:
//!
//! * [`exact`] — arbitrary-precision integer linear algebra (determinants,
//!   Hermite/Smith normal forms, kernels, unimodular certificates);
//! * [`hp`] — the high-precision real carrier and tolerance discipline;
//! * [`delta`] — the δ-norm, Schinzel's determinant inequality, and the
//!   unit-ball volume (2N)!/(N!)³ with a Monte Carlo cross-check;
//! * [`lattice`] — successive minima of a lattice under δ by enumeration,
//!   Minkowski's product bound, and basis extraction from independent
//!   vectors with controlled norm growth;
//! * [`sunit`] — number-field place data, heights, S-regulators, subgroup
//!   indices, and the upper/lower bound pipeline connecting them;
//! * [`relative`] — relative units, relative regulators, and the
//!   Costa–Friedman factorisation check for an extension l/k;
//! * [`files`], [`report`], [`suite`] — input parsing, the check-line
//!   report format, and the corpus runner behind the CLI.

pub mod delta;
pub mod error;
pub mod exact;
pub mod files;
pub mod hp;
pub mod lattice;
pub mod relative;
pub mod report;
pub mod rng;
pub mod suite;
pub mod sunit;

pub use error::{Error, Result};
pub use hp::{Ctx, HPReal, DEFAULT_PRECISION};
