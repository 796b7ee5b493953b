//! Norm combinatorics on completed distribution algebras.
//!
//! * [`norms`] — the invariant `ε(r)`, Mahler-type series and their norms
//!   `sup |d_α| r^α` with dominant indices;
//! * [`binomial`] — the alternating binomial identities and the dominance
//!   computation for re-expansion along a subgroup `b' = (1+b)^{p^γ} − 1`;
//! * [`amice`] — growth classes of Mahler coefficients;
//! * [`straighten`] — normal forms of words mixing Lie-algebra generators and
//!   group elements.

pub mod amice;
pub mod binomial;
pub mod norms;
pub mod straighten;

pub use amice::{amice_class_check, AmiceClass, AmiceRule, AmiceVerdict};
pub use binomial::{
    binom_identity_checks, binom_sum_i, binom_sum_ii, reexpand_subgroup_series,
    subgroup_expansion_dominance, t_coefficient, BinomVerdicts, DominanceReport,
};
pub use norms::{epsilon_r, log_series, norm_and_dominant, MahlerSeries, NormParams, NormReport};
pub use straighten::{
    normal_form_words, oracle_canonical, straighten, EnvElement, FiltrationReport, LieData,
    NormalForm, Token, Word,
};
