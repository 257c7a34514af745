//! Unary languages `L_q`: atoms, state descriptions, symmetries and
//! quantifier-free sentences.

pub mod atoms;
pub mod formula;
pub mod state;

pub use atoms::{enumerate_atoms, AtomTable, MAX_LEVEL};
pub use formula::{parse_formula, satisfying_descriptions, QfFormula};
pub use state::{apply_const_perm, apply_pred_perm, PredPermutation, StateDescription};
