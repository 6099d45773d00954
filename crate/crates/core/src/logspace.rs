//! Signed log-magnitude arithmetic.
//!
//! Integrands such as `|f(x+εc) - f(x)|^2 φ(x)` with `f ~ e^{x²/4}` overflow
//! long before their product with the Gaussian weight does. Every value that
//! can leave the `f64` range travels as `sign · e^{ln_abs}`.

use std::fmt;
use std::ops::{Mul, Neg};

/// `sign · exp(ln_abs)`, with `sign ∈ {-1, 0, 1}`.
///
/// Zero is canonical: `sign == 0` and `ln_abs == -inf`.
#[derive(Clone, Copy, PartialEq)]
pub struct LogValue {
    sign: i8,
    ln_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue { sign: 1, ln_abs: 0.0 };

    /// Builds from an explicit sign and log-magnitude. A `-inf` magnitude or a
    /// zero sign yields [`LogValue::ZERO`].
    pub fn new(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue {
                sign: sign.signum(),
                ln_abs,
            }
        }
    }

    /// A positive value given by its natural logarithm.
    pub fn from_ln(ln_abs: f64) -> Self {
        Self::new(1, ln_abs)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x.is_nan() {
            LogValue {
                sign: 1,
                ln_abs: f64::NAN,
            }
        } else {
            LogValue {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn ln_abs(self) -> f64 {
        self.ln_abs
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn is_nan(self) -> bool {
        self.ln_abs.is_nan()
    }

    /// Converts back to `f64`, saturating to `±inf` / `0`.
    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }

    pub fn abs(self) -> Self {
        LogValue {
            sign: self.sign.abs(),
            ln_abs: self.ln_abs,
        }
    }

    /// `|self|^q` for `q > 0`.
    pub fn abs_powf(self, q: f64) -> Self {
        if self.sign == 0 {
            Self::ZERO
        } else {
            LogValue {
                sign: 1,
                ln_abs: q * self.ln_abs,
            }
        }
    }

    /// Multiplies by `e^{c}`.
    pub fn scale_ln(self, c: f64) -> Self {
        if self.sign == 0 {
            Self::ZERO
        } else {
            LogValue {
                sign: self.sign,
                ln_abs: self.ln_abs + c,
            }
        }
    }

    /// `self - other`, evaluated without leaving log-space.
    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: LogValue) -> LogValue {
        if other.sign == 0 {
            return self;
        }
        if self.sign == 0 {
            return -other;
        }
        if self.sign != other.sign {
            let (hi, lo) = max_min(self.ln_abs, other.ln_abs);
            return LogValue {
                sign: self.sign,
                ln_abs: hi + (lo - hi).exp().ln_1p(),
            };
        }
        let d = other.ln_abs - self.ln_abs;
        if d == 0.0 {
            return Self::ZERO;
        }
        if d < 0.0 {
            LogValue::new(self.sign, self.ln_abs + (-d.exp_m1()).ln())
        } else {
            LogValue::new(-self.sign, other.ln_abs + (-(-d).exp_m1()).ln())
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: LogValue) -> LogValue {
        self.sub(-other)
    }
}

fn max_min(a: f64, b: f64) -> (f64, f64) {
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            Self::ZERO
        } else {
            LogValue {
                sign: self.sign * rhs.sign,
                ln_abs: self.ln_abs + rhs.ln_abs,
            }
        }
    }
}

impl From<f64> for LogValue {
    fn from(x: f64) -> Self {
        LogValue::from_f64(x)
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}e^{}", if s > 0 { "+" } else { "-" }, self.ln_abs),
        }
    }
}

/// `ln φ(x)` for the standard normal density.
pub fn ln_gaussian_density(x: f64) -> f64 {
    const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
    -0.5 * x * x - HALF_LN_2PI
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn round_trip() {
        for x in [-3.5, -1e-300, 0.0, 2.0, 7e250] {
            assert!(close(LogValue::from_f64(x).to_f64(), x, 1e-13));
        }
    }

    #[test]
    fn subtraction_matches_linear_arithmetic() {
        let cases = [(3.0, 1.0), (1.0, 3.0), (-2.0, 5.0), (5.0, -2.0), (-1.0, -4.0), (2.0, 2.0)];
        for (a, b) in cases {
            let got = LogValue::from(a).sub(LogValue::from(b)).to_f64();
            assert!(close(got, a - b, 1e-14), "{a} - {b} = {got}");
            let got = LogValue::from(a).add(LogValue::from(b)).to_f64();
            assert!(close(got, a + b, 1e-14), "{a} + {b} = {got}");
        }
    }

    #[test]
    fn subtraction_beyond_overflow() {
        // e^1000 (e^1 - 1)
        let a = LogValue::from_ln(1001.0);
        let b = LogValue::from_ln(1000.0);
        let d = a.sub(b);
        assert_eq!(d.sign(), 1);
        assert!(close(d.ln_abs(), 1000.0 + (1f64.exp() - 1.0).ln(), 1e-15));
    }

    #[test]
    fn zero_is_absorbing() {
        assert!((LogValue::ZERO * LogValue::from(4.0)).is_zero());
        assert!(LogValue::ZERO.abs_powf(2.0).is_zero());
        assert!(LogValue::ZERO.scale_ln(5.0).is_zero());
    }

    #[test]
    fn gaussian_density() {
        let phi0 = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!(close(ln_gaussian_density(0.0).exp(), phi0, 1e-15));
        assert!(close(ln_gaussian_density(1.0).exp(), phi0 * (-0.5f64).exp(), 1e-15));
    }
}
