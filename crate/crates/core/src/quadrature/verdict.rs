use std::fmt;

/// Which rule certified a divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceRule {
    /// Increments grew for `K` consecutive domain extensions.
    GrowingIncrements,
    /// The partial integral passed the divergence threshold while still growing.
    Threshold,
}

/// The monotone-growth record behind a `Diverged` verdict.
///
/// `limits[k]` is the far end of the `k`-th extension, `partials[k]` the
/// integral up to it.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceEvidence {
    pub rule: DivergenceRule,
    pub limits: Vec<f64>,
    pub partials: Vec<f64>,
}

impl DivergenceEvidence {
    pub fn last_partial(&self) -> f64 {
        self.partials.last().copied().unwrap_or(f64::INFINITY)
    }
}

/// Outcome of an improper integration.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegralVerdict {
    Converged { value: f64, abs_error: f64 },
    Diverged { evidence: DivergenceEvidence },
    Inconclusive { partials: Vec<f64>, reason: String },
}

impl IntegralVerdict {
    pub fn is_converged(&self) -> bool {
        matches!(self, IntegralVerdict::Converged { .. })
    }

    pub fn is_diverged(&self) -> bool {
        matches!(self, IntegralVerdict::Diverged { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, IntegralVerdict::Inconclusive { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            IntegralVerdict::Converged { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn abs_error(&self) -> Option<f64> {
        match self {
            IntegralVerdict::Converged { abs_error, .. } => Some(*abs_error),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            IntegralVerdict::Converged { .. } => "converged",
            IntegralVerdict::Diverged { .. } => "diverged",
            IntegralVerdict::Inconclusive { .. } => "inconclusive",
        }
    }

    /// Scales a converged value by `alpha`; other verdicts are unchanged.
    pub fn scaled(self, alpha: f64) -> Self {
        match self {
            IntegralVerdict::Converged { value, abs_error } => IntegralVerdict::Converged {
                value: alpha * value,
                abs_error: alpha.abs() * abs_error,
            },
            v => v,
        }
    }

    /// Combines verdicts of the pieces of a split domain: any `Diverged`
    /// wins, all `Converged` sum, anything else is `Inconclusive`.
    pub fn combine(parts: impl IntoIterator<Item = IntegralVerdict>) -> IntegralVerdict {
        let mut value = 0.0;
        let mut abs_error = 0.0;
        let mut partials = Vec::new();
        let mut reason: Option<String> = None;
        for part in parts {
            match part {
                IntegralVerdict::Diverged { evidence } => return IntegralVerdict::Diverged { evidence },
                IntegralVerdict::Converged { value: v, abs_error: e } => {
                    value += v;
                    abs_error += e;
                    partials.push(v);
                }
                IntegralVerdict::Inconclusive { partials: p, reason: r } => {
                    partials.push(p.last().copied().unwrap_or(f64::NAN));
                    reason.get_or_insert(r);
                }
            }
        }
        match reason {
            None => IntegralVerdict::Converged { value, abs_error },
            Some(reason) => IntegralVerdict::Inconclusive { partials, reason },
        }
    }
}

impl fmt::Display for IntegralVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralVerdict::Converged { value, abs_error } => {
                write!(f, "converged {value:.6e} ± {abs_error:.1e}")
            }
            IntegralVerdict::Diverged { evidence } => write!(
                f,
                "diverged ({:?}, partial {:.3e} at {:.3e})",
                evidence.rule,
                evidence.last_partial(),
                evidence.limits.last().copied().unwrap_or(f64::NAN)
            ),
            IntegralVerdict::Inconclusive { reason, .. } => write!(f, "inconclusive ({reason})"),
        }
    }
}
