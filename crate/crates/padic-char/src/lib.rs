//! Exact computer algebra for characters of p-adic representations.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic_core`] — exact rationals, p-adic valuations, residue splitting;
//! * [`formal_characters`] — formal sums of characters in `Z[[X]]`, evaluation
//!   through localization certificates, smooth traces;
//! * [`pro_p_groups`] — nilpotent `Log`/`Exp`, elementary divisors of
//!   `Z_(p)`-lattices, powerful lattices, coset representatives;
//! * [`dist_algebra`] — norms on completed distribution algebras, the `ε(r)`
//!   invariant, binomial identities, Amice classes, straightening of mixed
//!   enveloping-algebra / group-ring words;
//! * [`principal_series`] — explicit torus actions on finite quotients of the
//!   duals of principal series, their traces and the resulting characters.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod dist_algebra;
pub mod error;
pub mod formal_characters;
pub mod linalg;
pub mod padic_core;
pub mod principal_series;
pub mod pro_p_groups;

pub use error::{Error, Result};
