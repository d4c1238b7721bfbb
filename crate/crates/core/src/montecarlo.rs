//! Exact sampling of the short rate at a fixed horizon.
//!
//! Path `i` draws from its own ChaCha8 stream `i` under the configured seed,
//! so samples do not depend on how paths are spread over worker threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, Poisson, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{CirParams, GammaOuParams, JcirParams, NamedModel, VasicekParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub model: NamedModel,
    pub r0: f64,
    pub horizon: f64,
    pub n_paths: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn check(&self) -> Result<()> {
        self.model.check()?;
        if self.n_paths == 0 {
            return Err(Error::Parameter("n_paths must be >= 1".into()));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::Parameter(format!("horizon must be finite and > 0, got {}", self.horizon)));
        }
        if !self.model.state_space().contains(self.r0) {
            return Err(Error::Parameter(format!("r0 = {} outside the model's state space", self.r0)));
        }
        Ok(())
    }
}

/// Samples `r_horizon` on `n_paths` independent paths using the global thread pool.
pub fn simulate_terminal(cfg: &SimConfig) -> Result<Vec<f64>> {
    simulate_terminal_with_workers(cfg, 0)
}

/// As [`simulate_terminal`] on a dedicated pool of `workers` threads (0 = global pool).
pub fn simulate_terminal_with_workers(cfg: &SimConfig, workers: usize) -> Result<Vec<f64>> {
    cfg.check()?;
    let run = || -> Vec<f64> {
        (0..cfg.n_paths)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(i as u64);
                sample_path(&cfg.model, cfg.r0, cfg.horizon, &mut rng)
            })
            .collect()
    };
    if workers == 0 {
        return Ok(run());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    Ok(pool.install(run))
}

fn sample_path<G: Rng>(model: &NamedModel, r0: f64, t: f64, rng: &mut G) -> f64 {
    match *model {
        NamedModel::Vasicek(p) => vasicek_step(&p, r0, t, rng),
        NamedModel::Cir(CirParams { a, theta, sigma }) => cir_step(a, theta, sigma, r0, t, rng),
        NamedModel::Jcir(p) => jcir_path(&p, r0, t, rng),
        NamedModel::GammaOu(p) => gamma_ou_path(&p, r0, t, rng),
    }
}

fn vasicek_step<G: Rng>(p: &VasicekParams, r: f64, t: f64, rng: &mut G) -> f64 {
    let decay = (-p.lambda * t).exp();
    let mean = p.theta + (r - p.theta) * decay;
    let var = p.sigma * p.sigma * (-(-2.0 * p.lambda * t).exp_m1()) / (2.0 * p.lambda);
    let z: f64 = StandardNormal.sample(rng);
    mean + var.sqrt() * z
}

// Noncentral chi-square transition as a Poisson mixture of gammas.
fn cir_step<G: Rng>(a: f64, theta: f64, sigma: f64, r: f64, t: f64, rng: &mut G) -> f64 {
    let s2 = sigma * sigma;
    let one_minus = -(-a * t).exp_m1();
    let scale = s2 * one_minus / (4.0 * a);
    let dof = 4.0 * a * theta / s2;
    let noncentrality = 4.0 * a * (-a * t).exp() * r / (s2 * one_minus);
    let n = if noncentrality > 0.0 {
        Poisson::new(noncentrality / 2.0).expect("finite positive mean").sample(rng)
    } else {
        0.0
    };
    let g: f64 = Gamma::new(dof / 2.0 + n, 1.0).expect("positive shape").sample(rng);
    scale * 2.0 * g
}

fn exp_sample<G: Rng>(rate: f64, rng: &mut G) -> f64 {
    let e: f64 = Exp1.sample(rng);
    e / rate
}

fn jcir_path<G: Rng>(p: &JcirParams, r0: f64, horizon: f64, rng: &mut G) -> f64 {
    let mut t = 0.0;
    let mut r = r0;
    loop {
        let wait = exp_sample(p.c, rng);
        if t + wait >= horizon {
            return cir_step(p.a, p.theta, p.sigma, r, horizon - t, rng);
        }
        r = cir_step(p.a, p.theta, p.sigma, r, wait, rng) + exp_sample(p.nu, rng);
        t += wait;
    }
}

fn gamma_ou_path<G: Rng>(p: &GammaOuParams, r0: f64, t: f64, rng: &mut G) -> f64 {
    let intensity = p.lambda * p.k * t;
    let n = Poisson::new(intensity).expect("finite positive mean").sample(rng) as u64;
    let mut r = r0 * (-p.lambda * t).exp();
    for _ in 0..n {
        let tau = rng.random::<f64>() * t;
        let jump = exp_sample(1.0 / p.theta, rng);
        r += jump * (-p.lambda * (t - tau)).exp();
    }
    r
}

/// Log of the sample mean of `exp(u r)` with its delta-method standard error.
pub fn empirical_log_mgf(samples: &[f64], u: f64) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::Parameter("empty sample".into()));
    }
    if !(u <= 0.0) {
        return Err(Error::Domain(format!("u must be <= 0, got {u}")));
    }
    if u == 0.0 {
        return Ok((0.0, 0.0));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().map(|r| (u * r).exp()).sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|r| ((u * r).exp() - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok((mean.ln(), (var / n).sqrt() / mean))
}

/// Sample mean and variance with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
    pub variance_se: f64,
}

impl SampleSummary {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Parameter("empty sample".into()));
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let (m2, m4) = samples.iter().fold((0.0, 0.0), |(m2, m4), x| {
            let d2 = (x - mean) * (x - mean);
            (m2 + d2, m4 + d2 * d2)
        });
        let (m2, m4) = (m2 / n, m4 / n);
        let variance = if samples.len() > 1 { m2 * n / (n - 1.0) } else { 0.0 };
        Ok(SampleSummary {
            n: samples.len(),
            mean,
            variance,
            mean_se: (variance / n).sqrt(),
            variance_se: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
        })
    }
}
