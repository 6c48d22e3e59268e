//! Monte Carlo oracle for the smallest claim.
//!
//! Archimedean copulas are sampled through their frailty (Marshall–Olkin)
//! representation: draw `V` with Laplace transform `psi`, draw i.i.d.
//! `E_i ~ Exp(1)` and set `U_i = psi(E_i / V)`.
//!
//! The copula of the model couples the *survival* functions, so severities
//! are obtained as `X_i = S_i^{-1}(U_i)`. Using `F_i^{-1}` instead would
//! silently sample the reflected copula.
//!
//! Work is split into fixed-size shards. Shard `k` draws its copula uniforms
//! from ChaCha8 stream `2k` and its claim indicators from stream `2k + 1` of
//! the same seed, and shards are concatenated in order, so results do not
//! depend on the thread schedule.

use std::f64::consts::PI;

use minclaim_core::{CopulaSpec, Error as CoreError, Family, Portfolio, SurvivalCurve};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, Open01};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fingerprint;

/// Rows per shard.
pub const SHARD_SIZE: usize = 1 << 16;

/// Row-major matrix of copula draws.
#[derive(Debug, Clone, PartialEq)]
pub struct CopulaSample {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl CopulaSample {
    pub fn rows(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }
}

/// Draws of `Y_{1:n}` for one portfolio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub y_min: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
    pub fingerprint: String,
}

/// Empirical survival with binomial standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSurvival {
    pub curve: SurvivalCurve,
    pub se: Vec<f64>,
    pub n_samples: usize,
}

/// Frailty sampler with the per-family state built once.
#[derive(Debug, Clone)]
enum Frailty {
    Independence,
    Clayton { theta: f64, gamma: Gamma<f64> },
    Gumbel { alpha: f64 },
    Frank { theta: f64, p: f64, cdf: Vec<f64> },
}

const LOGSERIES_TABLE_MAX: usize = 1 << 20;

impl Frailty {
    fn new(c: &CopulaSpec) -> Result<Self> {
        let theta = c.theta();
        Ok(match c.family() {
            Family::Independence => Frailty::Independence,
            Family::Clayton => Frailty::Clayton {
                theta,
                gamma: Gamma::new(1.0 / theta, 1.0)
                    .map_err(|e| Error::Sampling(format!("gamma frailty: {e}")))?,
            },
            Family::GumbelHougaard => Frailty::Gumbel { alpha: 1.0 / theta },
            Family::Frank => {
                // logarithmic series: P(V = k) = p^k / (k theta), p = 1 - e^-theta
                let p = -(-theta).exp_m1();
                let mut cdf = Vec::new();
                let mut term = p / theta;
                let mut total = 0.0;
                let mut k = 1.0;
                while cdf.len() < LOGSERIES_TABLE_MAX {
                    total += term;
                    cdf.push(total);
                    if 1.0 - total < 1e-16 || term == 0.0 {
                        break;
                    }
                    term *= p * k / (k + 1.0);
                    k += 1.0;
                }
                Frailty::Frank { theta, p, cdf }
            }
            Family::LowerFrechet | Family::UpperFrechet => {
                return Err(CoreError::Unsupported(format!(
                    "no frailty sampler for the {} copula",
                    c.family().name()
                ))
                .into())
            }
        })
    }

    fn draw_v(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Frailty::Independence => 1.0,
            Frailty::Clayton { gamma, .. } => gamma.sample(rng),
            Frailty::Gumbel { alpha } => positive_stable(*alpha, rng),
            Frailty::Frank { p, cdf, .. } => logseries(*p, cdf, rng),
        }
    }

    fn psi(&self, s: f64) -> f64 {
        match *self {
            Frailty::Independence => (-s).exp(),
            Frailty::Clayton { theta, .. } => (1.0 + s).powf(-1.0 / theta),
            Frailty::Gumbel { alpha } => (-s.powf(alpha)).exp(),
            Frailty::Frank { theta, .. } => -((-theta).exp_m1() * (-s).exp()).ln_1p() / theta,
        }
    }

    fn fill(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        let v = self.draw_v(rng);
        for u in out.iter_mut() {
            let e: f64 = Exp1.sample(rng);
            *u = self.psi(e / v).clamp(0.0, 1.0);
        }
    }
}

/// Kanter's representation of a positive stable variable with Laplace
/// transform `exp(-s^alpha)`, `0 < alpha <= 1`.
fn positive_stable(alpha: f64, rng: &mut ChaCha8Rng) -> f64 {
    if alpha >= 1.0 {
        return 1.0;
    }
    let w = PI * rng.sample::<f64, _>(Open01);
    let e: f64 = Exp1.sample(rng);
    let a = (alpha * w).sin() / w.sin().powf(1.0 / alpha);
    let b = ((1.0 - alpha) * w).sin() / e;
    a * b.powf((1.0 - alpha) / alpha)
}

/// Inversion of the logarithmic-series CDF; the cached table covers all but
/// a `1e-16` tail, which is walked term by term.
fn logseries(p: f64, cdf: &[f64], rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.random();
    let idx = cdf.partition_point(|&c| c <= u);
    if idx < cdf.len() {
        return (idx + 1) as f64;
    }
    let mut k = cdf.len() as f64;
    let mut total = cdf[cdf.len() - 1];
    let theta = -(-p).ln_1p();
    let mut term = p.powf(k) / (k * theta);
    while total <= u && term > 0.0 {
        term *= p * k / (k + 1.0);
        k += 1.0;
        total += term;
    }
    k
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn shard_ranges(n: usize) -> Vec<(u64, usize)> {
    (0..n.div_ceil(SHARD_SIZE))
        .map(|k| (k as u64, SHARD_SIZE.min(n - k * SHARD_SIZE)))
        .collect()
}

fn check_count(n_samples: usize) -> Result<()> {
    if n_samples == 0 {
        return Err(CoreError::Domain {
            name: "n_samples",
            value: 0.0,
            expected: "n_samples >= 1",
        }
        .into());
    }
    Ok(())
}

/// `n_samples` i.i.d. rows with copula `c`.
pub fn sample_archimedean(c: &CopulaSpec, n_samples: usize, seed: u64) -> Result<CopulaSample> {
    check_count(n_samples)?;
    let frailty = Frailty::new(c)?;
    let dim = c.dim();
    let shards: Vec<Vec<f64>> = shard_ranges(n_samples)
        .into_par_iter()
        .map(|(k, rows)| {
            let mut rng = stream_rng(seed, 2 * k);
            let mut out = vec![0.0; rows * dim];
            for row in out.chunks_mut(dim) {
                frailty.fill(&mut rng, row);
            }
            out
        })
        .collect();
    Ok(CopulaSample {
        dim,
        values: shards.concat(),
    })
}

/// `n_samples` draws of `min_i I_i X_i`.
pub fn sample_smallest_claim(p: &Portfolio, n_samples: usize, seed: u64) -> Result<SampleBatch> {
    check_count(n_samples)?;
    let frailty = Frailty::new(p.copula())?;
    let dim = p.dim();
    let marginal = *p.marginal();
    let lambdas = p.lambdas();
    let probs = p.probs();
    let shards: Vec<Vec<f64>> = shard_ranges(n_samples)
        .into_par_iter()
        .map(|(k, rows)| -> Result<Vec<f64>> {
            let mut copula_rng = stream_rng(seed, 2 * k);
            let mut claim_rng = stream_rng(seed, 2 * k + 1);
            let mut u = vec![0.0; dim];
            let mut out = Vec::with_capacity(rows);
            for _ in 0..rows {
                frailty.fill(&mut copula_rng, &mut u);
                let mut y = f64::INFINITY;
                for i in 0..dim {
                    let claims = claim_rng.random::<f64>() < probs[i];
                    let x = if !claims {
                        0.0
                    } else if u[i] == 0.0 {
                        f64::INFINITY
                    } else {
                        marginal.inverse_survival(u[i], lambdas[i])?
                    };
                    y = y.min(x);
                }
                out.push(y);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(SampleBatch {
        y_min: shards.concat(),
        n_samples,
        seed,
        fingerprint: fingerprint(p)?,
    })
}

/// Fraction of samples strictly above each `x`, with standard errors
/// `sqrt(s (1 - s) / N)` from the empirical value.
pub fn empirical_survival(batch: &SampleBatch, xs: &[f64]) -> Result<EmpiricalSurvival> {
    if batch.y_min.is_empty() {
        return Err(CoreError::EmptyGrid.into());
    }
    let mut sorted = batch.y_min.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let values: Vec<f64> = xs
        .iter()
        .map(|&x| (sorted.len() - sorted.partition_point(|&y| y <= x)) as f64 / n)
        .collect();
    let se = values.iter().map(|&s| (s * (1.0 - s) / n).sqrt()).collect();
    Ok(EmpiricalSurvival {
        curve: SurvivalCurve {
            xs: xs.to_vec(),
            values,
        },
        se,
        n_samples: sorted.len(),
    })
}

/// One row of a Monte Carlo comparison against the exact survival.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationRow {
    pub x: f64,
    pub empirical: f64,
    /// Binomial standard error under the exact value, `sqrt(G (1 - G) / N)`.
    pub se: f64,
    pub analytic: f64,
    pub abs_err: f64,
    pub within_3se: bool,
}

impl SimulationRow {
    /// Standardized error; zero when both the error and the standard error
    /// vanish.
    pub fn z(&self) -> f64 {
        if self.abs_err == 0.0 {
            0.0
        } else {
            self.abs_err / self.se
        }
    }
}

/// Compares a batch with the exact survival of `p` at `xs`.
pub fn compare_with_exact(
    p: &Portfolio,
    batch: &SampleBatch,
    xs: &[f64],
) -> Result<Vec<SimulationRow>> {
    let emp = empirical_survival(batch, xs)?;
    let exact = p.survival_curve(xs)?;
    let n = batch.y_min.len() as f64;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let g = exact.values[i];
            let e = emp.curve.values[i];
            let se = (g * (1.0 - g) / n).sqrt();
            let abs_err = (e - g).abs();
            SimulationRow {
                x,
                empirical: e,
                se,
                analytic: g,
                abs_err,
                within_3se: abs_err <= 3.0 * se,
            }
        })
        .collect())
}

/// `n` equispaced points from zero to where the exact survival has fallen
/// to one percent of `prod p_i`.
pub fn oracle_grid(p: &Portfolio, n: usize) -> Result<Vec<f64>> {
    Ok(minclaim_core::linspace(0.0, p.tail_horizon(1e-2)?, n))
}
