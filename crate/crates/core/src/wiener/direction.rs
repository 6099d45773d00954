use std::sync::Arc;

use super::TimeGrid;
use crate::error::{Error, Result};

/// An element `h` of the Cameron–Martin space, stored through its density
/// `ḣ`, piecewise constant on the cells of a [`TimeGrid`].
///
/// `h(t) = ∫₀ᵗ ḣ(s) ds` is absolutely continuous with `h(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CameronMartinDirection {
    grid: TimeGrid,
    density: Arc<[f64]>,
    /// `h` at every grid node.
    primitive: Arc<[f64]>,
}

impl CameronMartinDirection {
    pub fn new(grid: TimeGrid, density: Vec<f64>) -> Result<Self> {
        if density.len() != grid.cells() {
            return Err(Error::domain(format!(
                "expected {} density values, got {}",
                grid.cells(),
                density.len()
            )));
        }
        if density.iter().any(|d| !d.is_finite()) {
            return Err(Error::domain("density values must be finite"));
        }
        let mut primitive = Vec::with_capacity(grid.nodes().len());
        let mut acc = 0.0;
        primitive.push(0.0);
        for (i, d) in density.iter().enumerate() {
            let (a, b) = grid.cell(i);
            acc += d * (b - a);
            primitive.push(acc);
        }
        Ok(CameronMartinDirection {
            grid,
            density: density.into(),
            primitive: primitive.into(),
        })
    }

    /// `ḣ ≡ value` on `[0, horizon]`.
    pub fn constant(horizon: f64, value: f64) -> Result<Self> {
        Self::new(TimeGrid::uniform(horizon, 1)?, vec![value])
    }

    /// The unit-norm direction `ḣ ≡ T^{-1/2}` used to identify `∇f(W_T)`.
    pub fn unit_terminal(horizon: f64) -> Result<Self> {
        Self::constant(horizon, horizon.sqrt().recip())
    }

    /// Piecewise constant density on `cells` equal cells.
    pub fn uniform_cells(horizon: f64, density: Vec<f64>) -> Result<Self> {
        Self::new(TimeGrid::uniform(horizon, density.len())?, density)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn horizon(&self) -> f64 {
        self.grid.horizon()
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// `ḣ` on the cell containing `t` (right-continuous, `T` in the last cell).
    pub fn density_at(&self, t: f64) -> f64 {
        self.density[self.grid.locate(t)]
    }

    /// `h(t)`.
    pub fn value_at(&self, t: f64) -> f64 {
        let nodes = self.grid.nodes();
        let i = self.grid.locate(t);
        if t == nodes[i] {
            self.primitive[i]
        } else if t == nodes[i + 1] {
            self.primitive[i + 1]
        } else {
            self.primitive[i] + self.density[i] * (t - nodes[i])
        }
    }

    /// `h(T)`.
    pub fn terminal_value(&self) -> f64 {
        *self.primitive.last().unwrap()
    }

    /// Same direction multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self::new(self.grid.clone(), self.density.iter().map(|d| c * d).collect())
            .expect("scaling preserves finiteness for finite c")
    }
}

/// `⟨h₁, h₂⟩_H = ∫₀ᵀ ḣ₁ ḣ₂ dt`, exact for piecewise-constant densities.
pub fn cm_inner(h1: &CameronMartinDirection, h2: &CameronMartinDirection) -> Result<f64> {
    let common = h1.grid.common_refinement(&h2.grid)?;
    let mut acc = 0.0;
    for i in 0..common.cells() {
        let (a, b) = common.cell(i);
        let mid = 0.5 * (a + b);
        acc += h1.density_at(mid) * h2.density_at(mid) * (b - a);
    }
    Ok(acc)
}

/// `‖h‖_H`.
pub fn cm_norm(h: &CameronMartinDirection) -> f64 {
    let sq: f64 = h
        .density
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let (a, b) = h.grid.cell(i);
            d * d * (b - a)
        })
        .sum();
    sq.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn half_indicator() -> CameronMartinDirection {
        CameronMartinDirection::uniform_cells(1.0, vec![1.0, 0.0]).unwrap()
    }

    #[test]
    fn inner_products_of_constants() {
        let one = CameronMartinDirection::constant(1.0, 1.0).unwrap();
        let minus = CameronMartinDirection::constant(1.0, -1.0).unwrap();
        assert_eq!(cm_inner(&one, &one).unwrap(), 1.0);
        assert_eq!(cm_inner(&one, &minus).unwrap(), -1.0);
    }

    #[test]
    fn inner_product_on_refined_grid() {
        let one = CameronMartinDirection::constant(1.0, 1.0).unwrap();
        assert_eq!(cm_inner(&half_indicator(), &one).unwrap(), 0.5);
    }

    #[test]
    fn norms() {
        assert_eq!(cm_norm(&CameronMartinDirection::constant(1.0, 1.0).unwrap()), 1.0);
        assert_eq!(cm_norm(&CameronMartinDirection::constant(1.0, 2.0).unwrap()), 2.0);
        let quarter = CameronMartinDirection::uniform_cells(1.0, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(cm_norm(&quarter), 0.5);
        let unit = CameronMartinDirection::unit_terminal(4.0).unwrap();
        assert!((cm_norm(&unit) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mismatched_horizons_are_rejected() {
        let a = CameronMartinDirection::constant(1.0, 1.0).unwrap();
        let b = CameronMartinDirection::constant(2.0, 1.0).unwrap();
        assert!(matches!(cm_inner(&a, &b), Err(Error::Domain(_))));
    }

    #[test]
    fn primitive_is_piecewise_linear() {
        let h = CameronMartinDirection::uniform_cells(1.0, vec![2.0, -1.0]).unwrap();
        assert_eq!(h.value_at(0.0), 0.0);
        assert_eq!(h.value_at(0.25), 0.5);
        assert_eq!(h.value_at(0.5), 1.0);
        assert_eq!(h.value_at(1.0), 0.5);
        assert_eq!(h.terminal_value(), 0.5);
    }

    #[test]
    fn wrong_density_length() {
        assert!(CameronMartinDirection::new(TimeGrid::uniform(1.0, 3).unwrap(), vec![1.0]).is_err());
    }

    fn direction(cells: usize) -> impl Strategy<Value = CameronMartinDirection> {
        prop::collection::vec(-3.0f64..3.0, cells)
            .prop_map(|d| CameronMartinDirection::uniform_cells(1.0, d).unwrap())
    }

    proptest! {
        #[test]
        fn inner_is_symmetric_and_bilinear(
            h1 in direction(4), h2 in direction(3), h3 in direction(6), alpha in -2.0f64..2.0
        ) {
            let s12 = cm_inner(&h1, &h2).unwrap();
            let s21 = cm_inner(&h2, &h1).unwrap();
            prop_assert!((s12 - s21).abs() <= 4.0 * f64::EPSILON * (1.0 + s12.abs()));

            // ⟨αh₁ + h₃, h₂⟩ = α⟨h₁,h₂⟩ + ⟨h₃,h₂⟩ on the refinement of h₁ and h₃
            let grid = h1.grid().common_refinement(h3.grid()).unwrap();
            let combo: Vec<f64> = (0..grid.cells())
                .map(|i| {
                    let (a, b) = grid.cell(i);
                    let m = 0.5 * (a + b);
                    alpha * h1.density_at(m) + h3.density_at(m)
                })
                .collect();
            let combo = CameronMartinDirection::new(grid, combo).unwrap();
            let lhs = cm_inner(&combo, &h2).unwrap();
            let rhs = alpha * s12 + cm_inner(&h3, &h2).unwrap();
            prop_assert!((lhs - rhs).abs() <= 64.0 * f64::EPSILON * (1.0 + lhs.abs()));
        }
    }
}
