//! Totally monotone capacities on finite frames.
//!
//! The crate covers the pieces needed to study empirical averages under a
//! belief function:
//!
//! - [`capacity`]: frames, subset masks, mass functions, Möbius inversion,
//!   axiom checks and independent products.
//! - [`choquet`]: lower and upper Choquet integrals of simple random variables.
//! - [`representation`]: the focal-set correspondence whose lower distribution
//!   is a given capacity, and its composition with random variables.
//! - [`random_sets`]: finite compact subsets of the reals, Minkowski sums,
//!   Hausdorff distance, Aumann integrals and a brute-force selection oracle.
//! - [`slln`]: sampling of i.i.d. focal sequences, exact independence
//!   verifiers and the Monte Carlo strong-law harness.
//! - [`document`] and [`output`]: the JSON input format and the JSON/CSV
//!   result files used by the command-line tool in [`cli`].

// `!(x <= tol)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod choquet;
pub mod cli;
pub mod document;
pub mod error;
pub mod output;
pub mod random_sets;
pub mod representation;
pub mod slln;

pub use error::{Error, Result};
