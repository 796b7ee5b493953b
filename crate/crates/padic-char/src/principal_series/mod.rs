//! Torus actions on finite quotients of the duals of principal series.
//!
//! * [`sl2`] — `SL_2(Q_p)`: the two Bruhat charts (`+` and `−`), the base
//!   change between the bases `T_{n,z}` and `T̃_{n,z}`, action matrices,
//!   traces and the closed character formulas;
//! * [`iwahori`] — general root data over `Q_p` restricted to the Iwahori
//!   subgroup;
//! * [`sweep`] — the formal-character pipeline: traces → formal characters
//!   `Θ_k` → limit in `k` → certified evaluation at `s^{-1}`, swept over
//!   levels and cutoffs until it stabilizes.
//!
//! Character conventions: a torus element of `SL_2` is `s = diag(a, a^{-1})`
//! with coordinate `a`; the character is `χ(a) = a^c`; the generator `ε` is
//! `s ↦ a^{-1}` and `e(χ)` denotes `s ↦ χ(a^{-1}) = a^{-c}`, so that
//! `e(χ^{-1})(s) = a^c`.

pub mod iwahori;
pub mod sl2;
pub mod sweep;

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::padic_core::ExactScalar;

pub use iwahori::{
    fixpoint_count_brute, fixpoint_count_closed, iwahori_action_matrix, iwahori_basis,
    iwahori_block_closed_form, iwahori_diagonal, iwahori_trace, theta_iwahori, RootDatum,
};
pub use sl2::{
    base_change_matrices, c_coeff, d_coeff, minus_diagonal_closed_form, sl2_action_matrix,
    sl2_basis, sl2_formal_theta, sl2_generators, sl2_partial_closed_form, sl2_trace,
    t_filtration_minus_trace, theta_sl2, theta_sl2_smooth, weyl_char_sl2, FormalTheta, SL2Config,
    Side,
};
pub use sweep::{ncharacter_sweep, Family, Grid, SweepReport, SweepRow};

/// A label of a basis vector: `(n, i)` for `SL_2`, `(α, β)` flattened for
/// root data.
pub type Label = Vec<i64>;

/// Sparse square matrix of a torus element on a labelled basis; columns are
/// images of basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionMatrix {
    pub labels: Vec<Label>,
    pub columns: Vec<BTreeMap<usize, ExactScalar>>,
}

impl ActionMatrix {
    pub fn zero(labels: Vec<Label>) -> Self {
        let n = labels.len();
        ActionMatrix {
            labels,
            columns: vec![BTreeMap::new(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self) -> HashMap<Label, usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect()
    }

    /// Adds `v` to the entry `(row, col)`.
    pub fn add_entry(&mut self, row: usize, col: usize, v: ExactScalar) {
        if v.is_zero() {
            return;
        }
        let e = self.columns[col]
            .entry(row)
            .or_insert_with(ExactScalar::zero);
        *e += v;
        if e.is_zero() {
            self.columns[col].remove(&row);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> ExactScalar {
        self.columns[col]
            .get(&row)
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn trace(&self) -> ExactScalar {
        (0..self.dim()).fold(ExactScalar::zero(), |acc, i| acc + self.get(i, i))
    }

    /// `self · other`; both must act on the same labelled basis.
    pub fn mul(&self, other: &ActionMatrix) -> Result<ActionMatrix> {
        if self.labels != other.labels {
            return Err(Error::Domain("matrices act on different bases".into()));
        }
        let mut out = ActionMatrix::zero(self.labels.clone());
        for (j, col) in other.columns.iter().enumerate() {
            for (k, b) in col {
                for (i, a) in &self.columns[*k] {
                    out.add_entry(i.to_owned(), j, a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.columns
            .iter()
            .enumerate()
            .all(|(j, col)| col.len() == 1 && col.get(&j).is_some_and(|v| v.is_one()))
    }

    pub fn to_dense(&self) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zeros(n, n);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m.set(*i, j, v.clone());
            }
        }
        m
    }

    /// Nonzero entries `(row label, column label, value)`.
    pub fn entries(&self) -> Vec<(Label, Label, ExactScalar)> {
        let mut out = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out.push((self.labels[*i].clone(), self.labels[j].clone(), v.clone()));
            }
        }
        out
    }
}
