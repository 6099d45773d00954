//! Wiener functionals `Z`, their Malliavin derivatives and difference
//! quotients, in two forms: polynomial cylindrical functionals
//! `f(W(h₁), ..., W(hₙ))` and scalar functionals `f(W_T)`.

mod cylindrical;
mod polynomial;
mod scalar;

pub use cylindrical::{mc_difference_quotient, CylindricalFunctional, MalliavinDerivative};
pub use polynomial::Polynomial;
pub use scalar::{
    difference_quotient_1d, log_difference_quotient, log_reduced_difference_quotient, Abscissa, Breakpoint, Function1D,
    PolynomialFn, ScalarFunctional, ZeroFn, GLUING_TOLERANCE, LOG_OVERFLOW_SWITCH,
};

use crate::error::Result;
use crate::wiener::{BrownianPath, CameronMartinDirection};

/// The number `⟨∇Z, h⟩_H(ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingValue(pub f64);

/// A functional that can be evaluated on a path and differentiated along
/// Cameron–Martin directions.
pub trait WienerFunctional {
    fn eval(&self, path: &BrownianPath) -> Result<f64>;

    /// `⟨∇Z, h⟩_H(ω)`.
    fn pairing_with_h(&self, h: &CameronMartinDirection, path: &BrownianPath) -> Result<PairingValue>;
}
