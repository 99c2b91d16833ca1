//! Exact calculus for q-difference analogues of the Stothers-Mason theorem.
//!
//! Everything works over the Gaussian rationals Q(i) with a concrete value
//! of `q`. The modules build on each other:
//!
//! - [`field`]: the number type and its canonical text form
//! - [`poly`]: dense and factored univariate polynomials
//! - [`qcore`]: q-numbers, q-binomials, the Jackson operator
//! - [`radical`]: q-weights, chain decompositions, q-difference radicals
//! - [`casorati`]: q-Casorati determinants and independence checks
//! - [`theorems`]: premise-checking verifiers and the q-Fermat search

pub mod casorati;
pub mod error;
pub mod field;
pub mod poly;
pub mod qcore;
pub mod radical;
pub mod theorems;

pub use error::{Error, Result};
pub use field::{GaussianRational, Rational};
pub use poly::{DensePoly, FactoredPoly, Operand};
pub use qcore::QContext;
