//! Special functions backing the correlation kernel.
//!
//! Everything here is a pure function of its arguments. The only stateful
//! piece is [`QuadratureRule`], which is immutable once built.

mod bessel;
mod gamma;
mod quadrature;

pub use bessel::{bessel_j, spherical_j, BESSEL_MAX_ARG, BESSEL_MAX_ORDER};
pub use gamma::gamma_fn;
pub use quadrature::{poisson_integral, QuadratureRule};

pub(crate) use bessel::bessel_j_unchecked;
