//! Higher discriminants of binary forms.
//!
//! For a degree `k` and a root-multiplicity partition `k = k1 + ... + kp`,
//! [`generator::higher_discriminant_system`] produces polynomial equations in
//! the coefficients of a binary form whose common zeros (with nonzero leading
//! coefficient) are exactly the forms with that coincidence of roots.
//!
//! The pipeline: a logical definition over root equalities ([`coincidence`]),
//! its conjunctive normal form, one product of squared root differences per
//! clause, elementary-symmetric combinations of those products, a rewrite in
//! elementary symmetric polynomials ([`symmetric`]) and Vieta substitution.
//! [`classify`] and [`generator::resultant_discriminant`] are independent exact
//! oracles; [`sl2`] handles the group action on forms.

pub mod classify;
pub mod cli;
pub mod coincidence;
mod error;
pub mod generator;
pub mod polyring;
pub mod sl2;
pub mod symmetric;

pub use error::{Error, Result};
