//! Feynman–Kac Monte Carlo estimate of the radius.
//!
//! Simulates independent 3-d Brownian paths started at the origin, weights
//! each by `exp(β·∫₀ᵗ v(ω(s)) ds)` with the occupation integral taken as a
//! left-endpoint Riemann sum, and forms the self-normalized ratio estimator
//! `r² = Σ W·|ω(t)|² / Σ W`.
//!
//! Streams are splittable and counter-based: path `i` draws from the ChaCha
//! stream `(seed, i)`, so results are independent of thread scheduling, and
//! the reduction runs in fixed path order with compensated summation, making
//! the estimate bit-reproducible for a given configuration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::Kahan;
use crate::radius::{classify_regime, Method, RadiusEstimate};
use crate::spectral::Coupling;

/// Longest chain the sampler accepts before the weight variance and the
/// step budget become unmanageable.
const MAX_TIME: f64 = 50.0;

/// Minimum effective sample size before the ratio estimator is declared
/// degenerate.
const MIN_ESS: f64 = 100.0;

#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub n_paths: usize,
    /// Time step; discretization bias for the indicator potential is O(√dt).
    pub dt: f64,
    pub seed: u64,
    /// Pair each path with its mirror-image (negated increments) partner.
    pub antithetic: bool,
    /// Cap on `n_paths · (t/dt)` total path-steps.
    pub work_budget: f64,
}

impl McConfig {
    /// Defaults for chain length `t`: 1e5 paths, `dt = 1e-3·min(t, 1)`.
    pub fn for_time(t: f64) -> Self {
        Self {
            n_paths: 100_000,
            dt: 1e-3 * t.min(1.0),
            seed: 0,
            antithetic: false,
            work_budget: 4e9,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_paths(mut self, n_paths: usize) -> Self {
        self.n_paths = n_paths;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    fn validate(&self, t: f64) -> Result<usize> {
        if self.n_paths < 1000 {
            return Err(Error::InvalidParams(format!(
                "need at least 1000 paths, got {}",
                self.n_paths
            )));
        }
        if !(self.dt > 0.0) || self.dt > t / 100.0 {
            return Err(Error::InvalidParams(format!(
                "dt must satisfy 0 < dt <= t/100, got {}",
                self.dt
            )));
        }
        let n_steps = (t / self.dt).ceil() as usize;
        let work = self.n_paths as f64 * n_steps as f64;
        if work > self.work_budget {
            return Err(Error::WorkBudgetExceeded {
                required: work,
                budget: self.work_budget,
            });
        }
        Ok(n_steps)
    }
}

/// Per-path result: Gibbs weight and squared endpoint distance.
#[derive(Clone, Copy)]
struct PathSample {
    weight: f64,
    r2: f64,
}

fn simulate_path(beta: f64, n_steps: usize, dt: f64, seed: u64, stream: u64, mirror: bool) -> PathSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let sqrt_dt = dt.sqrt();
    let sign = if mirror { -1.0 } else { 1.0 };
    let (mut x, mut y, mut z) = (0.0f64, 0.0, 0.0);
    let mut occupation = 0usize;
    for _ in 0..n_steps {
        // left endpoint: test the position before stepping
        if x * x + y * y + z * z <= 1.0 {
            occupation += 1;
        }
        x += sign * sqrt_dt * rng.sample::<f64, _>(StandardNormal);
        y += sign * sqrt_dt * rng.sample::<f64, _>(StandardNormal);
        z += sign * sqrt_dt * rng.sample::<f64, _>(StandardNormal);
    }
    PathSample {
        weight: (beta * occupation as f64 * dt).exp(),
        r2: x * x + y * y + z * z,
    }
}

/// Monte Carlo radius with a delta-method standard error on the ratio
/// estimator.
pub fn mc_radius(c: &Coupling, t: f64, cfg: &McConfig) -> Result<RadiusEstimate> {
    if !(t > 0.0) || t > MAX_TIME {
        return Err(Error::InvalidParams(format!(
            "mc_radius supports 0 < t <= {MAX_TIME}, got {t}"
        )));
    }
    let n_steps = cfg.validate(t)?;
    let dt = t / n_steps as f64;
    let beta = c.beta();

    // a "unit" is one path, or an antithetic pair averaged into one sample
    let n_units = if cfg.antithetic {
        cfg.n_paths.div_ceil(2)
    } else {
        cfg.n_paths
    };
    let samples: Vec<PathSample> = (0..n_units as u64)
        .into_par_iter()
        .map(|i| {
            let s = simulate_path(beta, n_steps, dt, cfg.seed, i, false);
            if cfg.antithetic {
                let m = simulate_path(beta, n_steps, dt, cfg.seed, i, true);
                PathSample {
                    weight: 0.5 * (s.weight + m.weight),
                    r2: if s.weight + m.weight > 0.0 {
                        (s.weight * s.r2 + m.weight * m.r2) / (s.weight + m.weight)
                    } else {
                        0.0
                    },
                }
            } else {
                s
            }
        })
        .collect();

    // fixed-order compensated reduction
    let mut sum_w = Kahan::new();
    let mut sum_w2 = Kahan::new();
    let mut sum_y = Kahan::new(); // y = W·r²
    let mut sum_y2 = Kahan::new();
    let mut sum_wy = Kahan::new();
    for s in &samples {
        let y = s.weight * s.r2;
        sum_w.add(s.weight);
        sum_w2.add(s.weight * s.weight);
        sum_y.add(y);
        sum_y2.add(y * y);
        sum_wy.add(s.weight * y);
    }
    let n = samples.len() as f64;
    let (w, w2, y, y2, wy) = (sum_w.sum(), sum_w2.sum(), sum_y.sum(), sum_y2.sum(), sum_wy.sum());

    let ess = w * w / w2;
    if ess < MIN_ESS {
        return Err(Error::DegenerateWeights { ess, min_ess: MIN_ESS });
    }

    let ratio = y / w;
    let mean_w = w / n;
    let var_y = (y2 / n - (y / n) * (y / n)).max(0.0);
    let var_w = (w2 / n - mean_w * mean_w).max(0.0);
    let cov_yw = wy / n - (y / n) * mean_w;
    let var_ratio = ((var_y - 2.0 * ratio * cov_yw + ratio * ratio * var_w) / (n * mean_w * mean_w)).max(0.0);
    let r = ratio.sqrt();
    let stderr = if r > 0.0 { var_ratio.sqrt() / (2.0 * r) } else { 0.0 };

    Ok(RadiusEstimate {
        beta,
        t,
        radius: r,
        regime: classify_regime(c, t),
        method: Method::MonteCarlo,
        stderr,
        imag_residual: 0.0,
    })
}
