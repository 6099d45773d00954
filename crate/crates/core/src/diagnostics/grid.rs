use crate::error::{Error, Result};

/// Strictly decreasing step sizes in `(0, 1)` standing in for `ε → 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonGrid {
    values: Vec<f64>,
}

impl Default for EpsilonGrid {
    /// `{2^{-k} : k = 1..8}`.
    fn default() -> Self {
        Self::dyadic(1, 8).expect("valid range")
    }
}

impl EpsilonGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("eps-grid", "needs at least one value"));
        }
        if values.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
            return Err(Error::param("eps-grid", "values must lie in (0, 1)"));
        }
        if values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::param("eps-grid", "values must be strictly decreasing"));
        }
        Ok(EpsilonGrid { values })
    }

    /// `{2^{-k} : k = k1..=k2}`.
    pub fn dyadic(k1: u32, k2: u32) -> Result<Self> {
        if k1 == 0 || k1 > k2 || k2 > 1000 {
            return Err(Error::param("eps-grid", format!("need 1 <= k1 <= k2 <= 1000, got {k1}..{k2}")));
        }
        Self::new((k1..=k2).map(|k| 0.5f64.powi(k as i32)).collect())
    }

    /// The `n` largest dyadic values `2^{-k} < cap`.
    pub fn dyadic_below(cap: f64, n: u32) -> Result<Self> {
        if !(cap > 0.0) || n == 0 {
            return Err(Error::param("eps cap", "must be positive with n >= 1"));
        }
        let mut k1 = 1u32;
        while 0.5f64.powi(k1 as i32) >= cap {
            k1 += 1;
        }
        Self::dyadic(k1, k1 + n - 1)
    }

    /// The values in `(0, cap)`, or `None` when none are left.
    pub fn capped(&self, cap: f64) -> Option<Self> {
        let values: Vec<f64> = self.values.iter().copied().filter(|&e| e < cap).collect();
        (!values.is_empty()).then_some(EpsilonGrid { values })
    }

    /// [`EpsilonGrid::capped`], falling back to the dyadic values just below
    /// `cap` when the grid lies entirely above it.
    pub fn capped_or_below(&self, cap: f64) -> Result<Self> {
        match self.capped(cap) {
            Some(g) => Ok(g),
            None => Self::dyadic_below(cap, self.values.len() as u32),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_dyadic_one_to_eight() {
        let g = EpsilonGrid::default();
        assert_eq!(g.len(), 8);
        assert_eq!(g.values()[0], 0.5);
        assert_eq!(g.values()[7], 1.0 / 256.0);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(EpsilonGrid::new(vec![0.5, 0.5]).is_err());
        assert!(EpsilonGrid::new(vec![0.1, 0.2]).is_err());
        assert!(EpsilonGrid::new(vec![1.0]).is_err());
        assert!(EpsilonGrid::new(vec![]).is_err());
        assert!(EpsilonGrid::dyadic(0, 3).is_err());
        assert!(EpsilonGrid::dyadic(4, 3).is_err());
    }

    #[test]
    fn capping() {
        let g = EpsilonGrid::default();
        assert_eq!(g.capped(0.1).unwrap().values()[0], 1.0 / 16.0);
        assert!(g.capped(1e-4).is_none());
        let below = g.capped_or_below(1e-4).unwrap();
        assert_eq!(below.len(), 8);
        assert_eq!(below.values()[0], 0.5f64.powi(14));
        assert!(below.values()[0] < 1e-4 && 0.5f64.powi(13) > 1e-4);
    }
}
