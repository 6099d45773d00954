use std::sync::Arc;

use crate::error::{Error, Result};

/// Nodes `0 = t_0 < t_1 < ... < t_m = T` of the time interval `[0, T]`.
///
/// Cheap to clone: the node vector is shared.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    nodes: Arc<[f64]>,
}

impl TimeGrid {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::domain("a time grid needs at least two nodes"));
        }
        if nodes[0] != 0.0 {
            return Err(Error::domain("a time grid must start at 0"));
        }
        if nodes.iter().any(|t| !t.is_finite()) {
            return Err(Error::domain("time grid nodes must be finite"));
        }
        if let Some(w) = nodes.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::domain(format!(
                "time grid nodes must be strictly increasing ({} >= {})",
                w[0], w[1]
            )));
        }
        let horizon = *nodes.last().unwrap();
        Ok(TimeGrid {
            horizon,
            nodes: nodes.into(),
        })
    }

    /// `cells` equal cells on `[0, horizon]`; the last node is `horizon` exactly.
    pub fn uniform(horizon: f64, cells: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::param("horizon", "must be positive and finite"));
        }
        if cells == 0 {
            return Err(Error::param("cells", "must be at least 1"));
        }
        let mut nodes: Vec<f64> = (0..cells)
            .map(|i| horizon * i as f64 / cells as f64)
            .collect();
        nodes.push(horizon);
        Self::new(nodes)
    }

    /// `[0, 1]` with a single cell.
    pub fn unit() -> Self {
        Self::uniform(1.0, 1).expect("unit grid")
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.nodes[i], self.nodes[i + 1])
    }

    /// Index of the cell containing `t`, with `T` mapped to the last cell.
    pub(crate) fn locate(&self, t: f64) -> usize {
        let idx = self.nodes.partition_point(|&n| n <= t);
        idx.saturating_sub(1).min(self.cells() - 1)
    }

    /// Sorted union of both node sets. Both grids must share the horizon.
    pub fn common_refinement(&self, other: &TimeGrid) -> Result<TimeGrid> {
        if self.horizon != other.horizon {
            return Err(Error::domain(format!(
                "mismatched horizons {} and {}",
                self.horizon, other.horizon
            )));
        }
        if Arc::ptr_eq(&self.nodes, &other.nodes) || self.nodes == other.nodes {
            return Ok(self.clone());
        }
        let mut merged: Vec<f64> = Vec::with_capacity(self.nodes.len() + other.nodes.len());
        let (a, b) = (&self.nodes[..], &other.nodes[..]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    x
                }
                (Some(&x), Some(&y)) if y < x => {
                    j += 1;
                    y
                }
                (Some(&x), Some(_)) => {
                    i += 1;
                    j += 1;
                    x
                }
                (Some(&x), None) => {
                    i += 1;
                    x
                }
                (None, Some(&y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            merged.push(next);
        }
        TimeGrid::new(merged)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_ends_exactly_at_horizon() {
        let g = TimeGrid::uniform(0.7, 3).unwrap();
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(*g.nodes().last().unwrap(), 0.7);
        assert_eq!(g.cells(), 3);
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(TimeGrid::new(vec![0.0]).is_err());
        assert!(TimeGrid::new(vec![0.1, 1.0]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(TimeGrid::uniform(-1.0, 2).is_err());
    }

    #[test]
    fn refinement_merges_and_dedups() {
        let a = TimeGrid::new(vec![0.0, 0.5, 1.0]).unwrap();
        let b = TimeGrid::new(vec![0.0, 0.25, 0.5, 1.0]).unwrap();
        let r = a.common_refinement(&b).unwrap();
        assert_eq!(r.nodes(), &[0.0, 0.25, 0.5, 1.0]);
        let c = TimeGrid::uniform(2.0, 1).unwrap();
        assert!(a.common_refinement(&c).is_err());
    }

    #[test]
    fn locate_maps_horizon_to_last_cell() {
        let g = TimeGrid::uniform(1.0, 4).unwrap();
        assert_eq!(g.locate(0.0), 0);
        assert_eq!(g.locate(0.3), 1);
        assert_eq!(g.locate(0.5), 2);
        assert_eq!(g.locate(1.0), 3);
    }
}
