use std::sync::Arc;

use super::{cm_norm, CameronMartinDirection, TimeGrid};
use crate::error::{Error, Result};

/// A Brownian path observed on the nodes of a [`TimeGrid`].
///
/// The sampled values and the accumulated Cameron–Martin drift are stored
/// separately; a node value is `base[i] + drift[i]`. Shifting by `εh` and then
/// by `-εh` therefore restores the stored values bit for bit.
#[derive(Debug, Clone)]
pub struct BrownianPath {
    grid: TimeGrid,
    base: Arc<[f64]>,
    drift: Option<Arc<[f64]>>,
}

impl BrownianPath {
    /// A path from its node values; `values[0]` must be `0`.
    pub fn from_values(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes().len() {
            return Err(Error::domain(format!(
                "expected {} path values, got {}",
                grid.nodes().len(),
                values.len()
            )));
        }
        if values[0] != 0.0 {
            return Err(Error::domain("a Brownian path starts at 0"));
        }
        Ok(BrownianPath {
            grid,
            base: values.into(),
            drift: None,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn value(&self, i: usize) -> f64 {
        match &self.drift {
            Some(d) => self.base[i] + d[i],
            None => self.base[i],
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.base.len()).map(|i| self.value(i)).collect()
    }

    /// `W_T(ω)`.
    pub fn terminal(&self) -> f64 {
        self.value(self.base.len() - 1)
    }

    fn increment(&self, i: usize) -> f64 {
        self.value(i + 1) - self.value(i)
    }
}

impl PartialEq for BrownianPath {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values() == other.values()
    }
}

/// `τ_{εh}(ω) = ω + εh`.
pub fn shift_path(path: &BrownianPath, h: &CameronMartinDirection, eps: f64) -> Result<BrownianPath> {
    if path.grid.horizon() != h.horizon() {
        return Err(Error::domain(format!(
            "path horizon {} differs from direction horizon {}",
            path.grid.horizon(),
            h.horizon()
        )));
    }
    let drift: Vec<f64> = path
        .grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let prev = path.drift.as_ref().map_or(0.0, |d| d[i]);
            prev + eps * h.value_at(t)
        })
        .collect();
    Ok(BrownianPath {
        grid: path.grid.clone(),
        base: Arc::clone(&path.base),
        drift: Some(drift.into()),
    })
}

/// `W(h)(ω) = Σᵢ ḣᵢ (W_{t_{i+1}} - W_{t_i})`.
///
/// Exact when `ḣ` is constant on every cell of the path grid; a density that
/// changes inside a path cell is a domain error rather than a silent
/// approximation.
pub fn wiener_integral(h: &CameronMartinDirection, path: &BrownianPath) -> Result<f64> {
    let grid = &path.grid;
    if grid.horizon() != h.horizon() {
        return Err(Error::domain(format!(
            "path horizon {} differs from direction horizon {}",
            grid.horizon(),
            h.horizon()
        )));
    }
    let h_nodes = h.grid().nodes();
    let mut acc = 0.0;
    for i in 0..grid.cells() {
        let (a, b) = grid.cell(i);
        let first = h.grid().locate(a);
        let mut j = first + 1;
        while j < h_nodes.len() - 1 && h_nodes[j] < b {
            if h.density()[j] != h.density()[first] {
                return Err(Error::domain(format!(
                    "direction density changes at t = {} inside path cell [{a}, {b}]",
                    h_nodes[j]
                )));
            }
            j += 1;
        }
        acc += h.density()[first] * path.increment(i);
    }
    Ok(acc)
}

/// `ln` of the Cameron–Martin density `exp(W(h) - ½‖h‖²_H)`.
pub fn log_girsanov_weight(h: &CameronMartinDirection, path: &BrownianPath) -> Result<f64> {
    let n = cm_norm(h);
    Ok(wiener_integral(h, path)? - 0.5 * n * n)
}

/// `exp(W(h) - ½‖h‖²_H)`; see [`log_girsanov_weight`] when this may overflow.
pub fn girsanov_weight(h: &CameronMartinDirection, path: &BrownianPath) -> Result<f64> {
    log_girsanov_weight(h, path).map(f64::exp)
}
