//! The two counterexample functionals and the catalog that names them.

mod exploding_tail;
mod log_singular;

pub use exploding_tail::{
    build_exploding_tail, smooth_completion_g, quotient_lower_bound, BumpCompletion, ExplodingTail,
    ExplodingTailParams,
};
pub use log_singular::{
    build_log_singular, smooth_completion_big_g, validate_eta_mu, CutoffCompletion, EtaMuCondition,
    LogSingularParams, RootOverLogCube,
};

use crate::error::{Error, Result};
use crate::functional::ScalarFunctional;

/// Names accepted by [`catalog_functional`].
pub const CATALOG: [&str; 4] = ["linear", "square", "thm31", "thm33"];

/// Parameters for catalog lookups; unused ones are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogParams {
    pub a: f64,
    pub eta: f64,
    pub mu: f64,
}

impl Default for CatalogParams {
    fn default() -> Self {
        let e = ExplodingTailParams::default();
        let l = LogSingularParams::default();
        CatalogParams {
            a: e.a(),
            eta: l.eta(),
            mu: l.mu(),
        }
    }
}

/// `linear` is `f(x) = x`, `square` is `f(x) = x²`, `thm31` the exploding
/// tail and `thm33` the log-singular functional.
pub fn catalog_functional(name: &str, params: &CatalogParams) -> Result<ScalarFunctional> {
    match name {
        "linear" => Ok(ScalarFunctional::linear()),
        "square" => Ok(ScalarFunctional::polynomial("square", vec![0.0, 0.0, 1.0])),
        "thm31" => build_exploding_tail(ExplodingTailParams::new(params.a)?),
        "thm33" => build_log_singular(LogSingularParams::new(params.eta, params.mu)?),
        other => Err(Error::param(
            "functional",
            format!("unknown name '{other}', expected one of {}", CATALOG.join(", ")),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_lookup() {
        let p = CatalogParams::default();
        for name in CATALOG {
            assert!(catalog_functional(name, &p).is_ok(), "{name}");
        }
        assert!(catalog_functional("nope", &p).is_err());
        let bad = CatalogParams { a: 1.0, ..p };
        assert!(catalog_functional("thm31", &bad).is_err());
    }
}
