//! Exact probability functions on unary languages `L_q`.
//!
//! Values are [`Rational`]s throughout. The pieces:
//!
//! - [`logic`]: atoms, state descriptions, permutations, sentences;
//! - [`prob`]: product, symmetrized and mixture functions, restriction;
//! - [`check`]: exhaustive checks of Ex, Px, IP, WIP and additivity;
//! - [`invariance`]: the compressed form of Px points, level transfer,
//!   Bernstein points and extendability certificates;
//! - [`nabla`]: row-pick functions of big state descriptions;
//! - [`decompose`]: `y_c = (1+λ)w₁ - λw₂` with ∇ mixtures `w₁, w₂`.

pub mod check;
pub mod combinatorics;
pub mod decompose;
pub mod descriptor;
pub mod error;
pub mod invariance;
pub mod linalg;
pub mod logic;
pub mod lp;
pub mod nabla;
pub mod prob;
pub mod rational;

pub use error::{Error, Result};
pub use logic::{QfFormula, StateDescription};
pub use prob::{ProbabilityFunction, SimplexPoint, Valuation};
pub use rational::Rational;
