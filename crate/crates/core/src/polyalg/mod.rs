//! Polynomial utilities: exponent matrices modulo `q^k - 1`, univariate
//! polynomials over the tower levels, and resultants of bivariate quadratics.

mod expmat;
mod resultant;
mod upoly;

use thiserror::Error;

pub use expmat::{exp_matrix_inverse, mod_inverse, ExpMatrix};
pub use resultant::{resultant_eliminate, BiPoly, Var};
pub use upoly::{has_root, upoly_gcd, upoly_roots, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("exponent matrix is not invertible modulo {0}")]
    NotInvertible(String),
    #[error("resultant vanishes identically: the polynomials share a factor")]
    DegenerateSystem,
}
