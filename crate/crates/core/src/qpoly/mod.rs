//! Exact polynomial arithmetic over Q and Q(i).
//!
//! [`QPoly`] is the dense workhorse, [`FactoredPoly`] keeps high-degree
//! products unexpanded and [`GPoly`] carries Gaussian-rational coefficients.
//! Integer kernels (Karatsuba products, primitive remainder sequences,
//! Sturm sequences) live in a private module and are shared by `certify`.

mod dense;
mod factored;
mod gaussian;
mod gpoly;
pub(crate) mod intpoly;
pub(crate) mod lazy;
pub mod rational;
pub mod serial;

pub use dense::{Degree, QPoly};
pub(crate) use dense::falling_factorial;
pub use factored::{root_multiplicity, taylor_coefficients, Factor, FactoredPoly};
pub(crate) use factored::factorial;
pub use gaussian::GaussianRational;
pub use gpoly::GPoly;
pub(crate) use gpoly::GaussIntPoly;
pub use rational::{ParseNumberError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("divisor does not divide the dividend")]
    NonDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

#[cfg(test)]
mod tests;
