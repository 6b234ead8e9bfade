//! Exact and empirical analysis of the two-color necklace process.
//!
//! A necklace starts as one white and one black bead. Each step inserts a
//! bead into a uniformly chosen gap; the new bead is white iff both its
//! neighbours are black. This crate computes the exact law of the number of
//! white beads through several independent routes (Markov recurrence, PGF
//! recurrence, integer process counts, the generating-function corollary),
//! checks them against brute-force enumeration and the closed-form bivariate
//! generating function, counts distinct necklaces, and simulates the process.

pub mod counting;
pub mod error;
pub mod exactdist;
pub mod montecarlo;
pub mod necklace;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use necklace::{BeadColor, Necklace};
pub use series::{RPoly, Rational, TruncSeries, Var};
