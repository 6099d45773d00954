use super::{PairingValue, Polynomial, WienerFunctional};
use crate::error::{Error, Result};
use crate::wiener::{cm_inner, shift_path, wiener_integral, BrownianPath, CameronMartinDirection};

/// `Z = f(W(h₁), ..., W(hₙ))` with `f` a real polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct CylindricalFunctional {
    directions: Vec<CameronMartinDirection>,
    poly: Polynomial,
}

impl CylindricalFunctional {
    pub fn new(directions: Vec<CameronMartinDirection>, poly: Polynomial) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::domain("a cylindrical functional needs at least one direction"));
        }
        if poly.vars() != directions.len() {
            return Err(Error::domain(format!(
                "polynomial has {} variables but {} directions were given",
                poly.vars(),
                directions.len()
            )));
        }
        let t = directions[0].horizon();
        if directions.iter().any(|h| h.horizon() != t) {
            return Err(Error::domain("all directions must share the horizon"));
        }
        Ok(CylindricalFunctional { directions, poly })
    }

    /// `W(h)^k` for a single direction.
    pub fn power_of(h: CameronMartinDirection, k: u32) -> Self {
        Self::new(vec![h], Polynomial::from_terms(1, [(vec![k], 1.0)]))
            .expect("one direction, one variable")
    }

    pub fn directions(&self) -> &[CameronMartinDirection] {
        &self.directions
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    /// `(W(h₁)(ω), ..., W(hₙ)(ω))`.
    pub fn coordinates(&self, path: &BrownianPath) -> Result<Vec<f64>> {
        self.directions
            .iter()
            .map(|h| wiener_integral(h, path))
            .collect()
    }

    pub fn malliavin_derivative(&self) -> MalliavinDerivative {
        MalliavinDerivative {
            directions: self.directions.clone(),
            partials: self.poly.gradient(),
        }
    }
}

/// `∇Z = Σᵢ f_{xᵢ}(W(h₁), ..., W(hₙ)) hᵢ`, kept as the partial-derivative
/// polynomials attached to each `hᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MalliavinDerivative {
    directions: Vec<CameronMartinDirection>,
    partials: Vec<Polynomial>,
}

impl MalliavinDerivative {
    pub fn partials(&self) -> &[Polynomial] {
        &self.partials
    }

    /// The coefficients of `∇Z(ω)` on `h₁, ..., hₙ`.
    pub fn coefficients(&self, path: &BrownianPath) -> Result<Vec<f64>> {
        let x: Vec<f64> = self
            .directions
            .iter()
            .map(|h| wiener_integral(h, path))
            .collect::<Result<_>>()?;
        Ok(self.partials.iter().map(|p| p.eval(&x)).collect())
    }

    /// `⟨∇Z, h⟩_H(ω) = Σᵢ f_{xᵢ}(...)(ω) ⟨hᵢ, h⟩_H`.
    pub fn pairing(&self, h: &CameronMartinDirection, path: &BrownianPath) -> Result<f64> {
        let coeffs = self.coefficients(path)?;
        let mut acc = 0.0;
        for (c, hi) in coeffs.iter().zip(&self.directions) {
            acc += c * cm_inner(hi, h)?;
        }
        Ok(acc)
    }

    /// `‖∇Z(ω)‖_H`.
    pub fn h_norm(&self, path: &BrownianPath) -> Result<f64> {
        let c = self.coefficients(path)?;
        let mut acc = 0.0;
        for (i, hi) in self.directions.iter().enumerate() {
            for (j, hj) in self.directions.iter().enumerate() {
                acc += c[i] * c[j] * cm_inner(hi, hj)?;
            }
        }
        Ok(acc.max(0.0).sqrt())
    }
}

impl WienerFunctional for CylindricalFunctional {
    fn eval(&self, path: &BrownianPath) -> Result<f64> {
        Ok(self.poly.eval(&self.coordinates(path)?))
    }

    fn pairing_with_h(&self, h: &CameronMartinDirection, path: &BrownianPath) -> Result<PairingValue> {
        self.malliavin_derivative().pairing(h, path).map(PairingValue)
    }
}

/// `X_ε(ω) = (Z(τ_{εh}ω) - Z(ω)) / ε`.
pub fn mc_difference_quotient<Z: WienerFunctional + ?Sized>(
    z: &Z,
    h: &CameronMartinDirection,
    eps: f64,
    path: &BrownianPath,
) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::param("eps", "must be positive"));
    }
    let shifted = shift_path(path, h, eps)?;
    Ok((z.eval(&shifted)? - z.eval(path)?) / eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wiener::{sample_path, TimeGrid};

    fn one() -> CameronMartinDirection {
        CameronMartinDirection::constant(1.0, 1.0).unwrap()
    }

    fn grid() -> TimeGrid {
        TimeGrid::uniform(1.0, 4).unwrap()
    }

    #[test]
    fn linear_and_constant_evaluation() {
        let p = sample_path(&grid(), 2);
        let z = CylindricalFunctional::power_of(one(), 1);
        assert!((z.eval(&p).unwrap() - p.terminal()).abs() < 1e-15);
        let c = CylindricalFunctional::new(vec![one()], Polynomial::constant(1, 1.0)).unwrap();
        assert_eq!(c.eval(&p).unwrap(), 1.0);
    }

    #[test]
    fn derivative_of_linear_is_direction() {
        let z = CylindricalFunctional::power_of(one(), 1);
        let d = z.malliavin_derivative();
        for seed in 0..5 {
            let p = sample_path(&grid(), seed);
            assert_eq!(d.coefficients(&p).unwrap(), vec![1.0]);
        }
    }

    #[test]
    fn chain_rule_for_square() {
        let z = CylindricalFunctional::power_of(one(), 2);
        let p = sample_path(&grid(), 8);
        let w = wiener_integral(&one(), &p).unwrap();
        let pair = z.pairing_with_h(&one(), &p).unwrap();
        assert!((pair.0 - 2.0 * w).abs() < 1e-14);
    }

    #[test]
    fn product_rule() {
        let h1 = CameronMartinDirection::uniform_cells(1.0, vec![1.0, 0.0]).unwrap();
        let h2 = CameronMartinDirection::uniform_cells(1.0, vec![0.0, 2.0]).unwrap();
        let z = CylindricalFunctional::new(vec![h1.clone(), h2.clone()], "x1*x2".parse().unwrap()).unwrap();
        let p = sample_path(&grid(), 4);
        let c = z.malliavin_derivative().coefficients(&p).unwrap();
        assert_eq!(c[0], wiener_integral(&h2, &p).unwrap());
        assert_eq!(c[1], wiener_integral(&h1, &p).unwrap());
    }

    #[test]
    fn construction_checks() {
        assert!(CylindricalFunctional::new(vec![], Polynomial::constant(1, 1.0)).is_err());
        assert!(CylindricalFunctional::new(vec![one()], "x1*x2".parse().unwrap()).is_err());
        let other = CameronMartinDirection::constant(2.0, 1.0).unwrap();
        assert!(CylindricalFunctional::new(vec![one(), other], "x1*x2".parse().unwrap()).is_err());
    }

    #[test]
    fn difference_quotient_of_linear_functional_is_inner_product() {
        let h = CameronMartinDirection::uniform_cells(1.0, vec![1.0, -1.0, 0.5, 2.0]).unwrap();
        let z = CylindricalFunctional::power_of(h.clone(), 1);
        let hh = cm_inner(&h, &h).unwrap();
        for (seed, eps) in [(1, 0.5), (2, 1e-3), (3, 1e-6)] {
            let x = mc_difference_quotient(&z, &h, eps, &sample_path(&grid(), seed)).unwrap();
            assert!((x - hh).abs() < 1e-8, "{x} vs {hh}");
        }
        let c = CylindricalFunctional::new(vec![h.clone()], Polynomial::constant(1, 3.0)).unwrap();
        assert_eq!(mc_difference_quotient(&c, &h, 0.1, &sample_path(&grid(), 0)).unwrap(), 0.0);
        assert!(mc_difference_quotient(&c, &h, 0.0, &sample_path(&grid(), 0)).is_err());
    }
}
