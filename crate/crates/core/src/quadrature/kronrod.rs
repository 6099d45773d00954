use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{DivergenceEvidence, DivergenceRule, Integrand, IntegralVerdict};
use crate::error::{Error, Result};

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Evaluation allowance shared by every sub-integration of one verdict.
#[derive(Debug)]
pub(crate) struct Budget {
    remaining: usize,
}

impl Budget {
    pub(crate) fn new(evaluations: usize) -> Self {
        Budget { remaining: evaluations }
    }

    fn take(&mut self, n: usize) -> bool {
        if self.remaining < n {
            false
        } else {
            self.remaining -= n;
            true
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    // Largest error first; ties broken by position so the refinement order
    // never depends on anything but the integrand.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// `sign(m) · e^{ln_scale} · |m|`, without forming `e^{ln_scale}` alone.
fn rescale(m: f64, ln_scale: f64) -> f64 {
    if m == 0.0 {
        0.0
    } else {
        m.signum() * (ln_scale + m.abs().ln()).exp()
    }
}

/// One 15-point Kronrod cell, evaluated relative to the largest
/// log-magnitude among its nodes.
fn gk15(g: &Integrand, a: f64, b: f64) -> Result<Cell> {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let mut nodes = [0.0; 15];
    nodes[0] = c;
    for j in 0..7 {
        nodes[1 + 2 * j] = c - hw * XGK[j];
        nodes[2 + 2 * j] = c + hw * XGK[j];
    }
    let mut logs = [crate::logspace::LogValue::ZERO; 15];
    let mut m = f64::NEG_INFINITY;
    for (x, l) in nodes.iter().zip(logs.iter_mut()) {
        let v = g.eval_at(*x);
        if v.is_nan() {
            return Err(Error::Evaluation { x: *x });
        }
        if !v.is_zero() {
            m = m.max(v.ln_abs());
        }
        *l = v;
    }
    if m == f64::NEG_INFINITY {
        return Ok(Cell { a, b, value: 0.0, error: 0.0 });
    }
    if m == f64::INFINITY {
        return Ok(Cell { a, b, value: f64::INFINITY, error: f64::INFINITY });
    }
    let f: Vec<f64> = logs
        .iter()
        .map(|v| if v.is_zero() { 0.0 } else { f64::from(v.sign()) * (v.ln_abs() - m).exp() })
        .collect();

    let mut resk = WGK[7] * f[0];
    let mut resg = WG[3] * f[0];
    let mut resabs = WGK[7] * f[0].abs();
    for j in 0..7 {
        let (l, r) = (f[1 + 2 * j], f[2 + 2 * j]);
        resk += WGK[j] * (l + r);
        resabs += WGK[j] * (l.abs() + r.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (l + r);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (f[0] - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((f[1 + 2 * j] - mean).abs() + (f[2 + 2 * j] - mean).abs());
    }
    let (resk, resabs, resasc) = (resk * hw, resabs * hw, resasc * hw);
    let mut err = (resk - resg * hw).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    err = err.max(50.0 * f64::EPSILON * resabs);
    Ok(Cell {
        a,
        b,
        value: rescale(resk, m),
        error: rescale(err, m),
    })
}

fn sum_cells<'c>(cells: impl Iterator<Item = &'c Cell>) -> (f64, f64) {
    let mut v: Vec<&Cell> = cells.collect();
    v.sort_by(|x, y| x.a.total_cmp(&y.a));
    v.iter().fold((0.0, 0.0), |(s, e), c| (s + c.value, e + c.error))
}

/// Globally adaptive G7K15 on a finite interval.
pub(crate) fn adaptive(
    g: &Integrand,
    a: f64,
    b: f64,
    atol: f64,
    rtol: f64,
    budget: &mut Budget,
) -> Result<IntegralVerdict> {
    if !budget.take(15) {
        return Ok(inconclusive(Vec::new(), "evaluation budget exhausted"));
    }
    let first = gk15(g, a, b)?;
    let mut heap = BinaryHeap::from([first]);
    let mut frozen: Vec<Cell> = Vec::new();
    let (mut total, mut err) = (first.value, first.error);
    let mut iter = 0usize;
    loop {
        if !total.is_finite() {
            return Ok(IntegralVerdict::Diverged {
                evidence: DivergenceEvidence {
                    rule: DivergenceRule::Threshold,
                    limits: vec![b],
                    partials: vec![total.abs()],
                },
            });
        }
        if err <= atol.max(rtol * total.abs()) {
            let (value, abs_error) = sum_cells(heap.iter().chain(frozen.iter()));
            if abs_error <= atol.max(rtol * value.abs()) {
                return Ok(IntegralVerdict::Converged { value, abs_error });
            }
            total = value;
            err = abs_error;
        }
        let Some(worst) = heap.pop() else {
            return Ok(inconclusive(vec![total], "interval cannot be refined further"));
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) || worst.b - worst.a <= 4.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()) {
            frozen.push(worst);
            continue;
        }
        if !budget.take(30) {
            return Ok(inconclusive(vec![total], "evaluation budget exhausted"));
        }
        let l = gk15(g, worst.a, mid)?;
        let r = gk15(g, mid, worst.b)?;
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        iter += 1;
        if iter.is_multiple_of(32) {
            (total, err) = sum_cells(heap.iter().chain(frozen.iter()));
        }
    }
}

fn inconclusive(partials: Vec<f64>, reason: &str) -> IntegralVerdict {
    IntegralVerdict::Inconclusive {
        partials,
        reason: reason.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_cell_is_exact_for_low_degree() {
        let g = Integrand::new(|x| x.powi(5) - 2.0 * x);
        let c = gk15(&g, 0.0, 2.0).unwrap();
        assert!((c.value - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn huge_magnitudes_are_rescaled() {
        let g = Integrand::from_log(|at| crate::logspace::LogValue::from_ln(1000.0 + at.x()));
        let c = gk15(&g, 0.0, 1.0).unwrap();
        assert!(c.value.is_infinite());
        let mut b = Budget::new(1000);
        let v = adaptive(&g, 0.0, 1.0, 0.0, 1e-10, &mut b).unwrap();
        assert!(v.is_diverged(), "{v:?}");
        let scaled = Integrand::from_log(|at| crate::logspace::LogValue::from_ln(-700.0 + at.x()));
        let c = gk15(&scaled, 0.0, 1.0).unwrap();
        let expect = -700.0 + (std::f64::consts::E - 1.0).ln();
        assert!((c.value.ln() - expect).abs() < 1e-12);
    }
}
