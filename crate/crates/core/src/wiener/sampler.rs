//! Reproducible Brownian sampling.
//!
//! Paths are generated in fixed-size batches; batch `b` draws from ChaCha8
//! stream `b` of the run seed. Which thread computes a batch therefore never
//! affects the numbers, and batch results are merged in index order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{BrownianPath, TimeGrid};

/// Paths per deterministic substream.
pub const BATCH_SIZE: usize = 4096;

/// Draws path number 0 of the run identified by `seed`.
pub fn sample_path(grid: &TimeGrid, seed: u64) -> BrownianPath {
    PathSampler::new(grid.clone(), seed).path(0)
}

/// Sample mean with its estimated standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl MeanEstimate {
    /// `|self - value| ≤ k · SE`.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

#[derive(Debug, Clone)]
pub struct PathSampler {
    grid: TimeGrid,
    seed: u64,
    sqrt_dt: Vec<f64>,
}

impl PathSampler {
    pub fn new(grid: TimeGrid, seed: u64) -> Self {
        let sqrt_dt = (0..grid.cells())
            .map(|i| {
                let (a, b) = grid.cell(i);
                (b - a).sqrt()
            })
            .collect();
        PathSampler { grid, seed, sqrt_dt }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    fn batch_rng(&self, batch: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(batch as u64);
        rng
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> BrownianPath {
        let mut values = Vec::with_capacity(self.sqrt_dt.len() + 1);
        let mut w = 0.0;
        values.push(w);
        for s in &self.sqrt_dt {
            let z: f64 = StandardNormal.sample(rng);
            w += s * z;
            values.push(w);
        }
        BrownianPath::from_values(self.grid.clone(), values).expect("sampled path is well formed")
    }

    /// Path number `index` of this run.
    pub fn path(&self, index: usize) -> BrownianPath {
        let mut rng = self.batch_rng(index / BATCH_SIZE);
        for _ in 0..index % BATCH_SIZE {
            self.draw(&mut rng);
        }
        self.draw(&mut rng)
    }

    /// Applies `f` to paths `0..n`, in parallel, returning results in path order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&BrownianPath) -> T + Sync,
    {
        let batches = n.div_ceil(BATCH_SIZE);
        let per_batch: Vec<Vec<T>> = (0..batches)
            .into_par_iter()
            .map(|b| {
                let mut rng = self.batch_rng(b);
                let len = BATCH_SIZE.min(n - b * BATCH_SIZE);
                (0..len).map(|_| f(&self.draw(&mut rng))).collect()
            })
            .collect();
        per_batch.into_iter().flatten().collect()
    }

    /// Sample means and standard errors of the `K` statistics returned by `f`
    /// over paths `0..n`.
    pub fn mean_estimates<const K: usize, F>(&self, n: usize, f: F) -> [MeanEstimate; K]
    where
        F: Fn(&BrownianPath) -> [f64; K] + Sync,
    {
        let v = self.mean_vector(n, K, |p| f(p).to_vec());
        std::array::from_fn(|i| v[i])
    }

    /// As [`PathSampler::mean_estimates`] for `dim` statistics known at run time.
    pub fn mean_vector<F>(&self, n: usize, dim: usize, f: F) -> Vec<MeanEstimate>
    where
        F: Fn(&BrownianPath) -> Vec<f64> + Sync,
    {
        let batches = n.div_ceil(BATCH_SIZE);
        let partial: Vec<Vec<Moments>> = (0..batches)
            .into_par_iter()
            .map(|b| {
                let mut rng = self.batch_rng(b);
                let len = BATCH_SIZE.min(n - b * BATCH_SIZE);
                let mut acc = vec![Moments::default(); dim];
                for _ in 0..len {
                    let stats = f(&self.draw(&mut rng));
                    assert_eq!(stats.len(), dim, "statistic count changed between paths");
                    for (m, x) in acc.iter_mut().zip(stats) {
                        m.push(x);
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![Moments::default(); dim];
        for batch in partial {
            for (t, m) in total.iter_mut().zip(&batch) {
                t.merge(m);
            }
        }
        total.iter().map(Moments::estimate).collect()
    }
}

/// Welford accumulator with Chan's pairwise merge.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    fn estimate(&self) -> MeanEstimate {
        let var = if self.n > 1 {
            self.m2 / (self.n - 1) as f64
        } else {
            f64::INFINITY
        };
        MeanEstimate {
            mean: self.mean,
            std_error: (var / self.n as f64).sqrt(),
            samples: self.n,
        }
    }
}
