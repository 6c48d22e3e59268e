//! Archimedean survival copulas and the Fréchet–Hoeffding bounds.
//!
//! Every Archimedean family has two evaluation routes: the explicit closed
//! form, used in production, and the generator composition
//! `phi^{-1}(sum phi(u_i))`, kept as an independent check. The two must agree
//! to round-off.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::certificate::GridCertificate;
use crate::error::{Error, Result};
use crate::majorization::robin_hood_transfer;
use crate::math::{exp, exp_m1, ln, ln_1p, powf};
use crate::{rng, GRID_EPS};

/// Copula family tag. Serialized lowercase (`"gumbel_hougaard"` also accepts
/// `"gumbel"`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Family {
    Independence,
    Frank,
    Clayton,
    #[cfg_attr(feature = "serde", serde(alias = "gumbel"))]
    GumbelHougaard,
    LowerFrechet,
    UpperFrechet,
}

impl Family {
    pub fn is_archimedean(self) -> bool {
        !matches!(self, Family::LowerFrechet | Family::UpperFrechet)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Independence => "independence",
            Family::Frank => "frank",
            Family::Clayton => "clayton",
            Family::GumbelHougaard => "gumbel_hougaard",
            Family::LowerFrechet => "lower_frechet",
            Family::UpperFrechet => "upper_frechet",
        }
    }
}

/// Unvalidated wire form of [`CopulaSpec`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CopulaDef {
    pub family: Family,
    #[cfg_attr(feature = "serde", serde(default))]
    pub theta: f64,
    pub dim: usize,
}

/// A validated copula: family, dependence parameter and dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "CopulaDef", into = "CopulaDef"))]
pub struct CopulaSpec {
    family: Family,
    theta: f64,
    dim: usize,
}

impl TryFrom<CopulaDef> for CopulaSpec {
    type Error = Error;

    fn try_from(def: CopulaDef) -> Result<Self> {
        CopulaSpec::new(def.family, def.theta, def.dim)
    }
}

impl From<CopulaSpec> for CopulaDef {
    fn from(c: CopulaSpec) -> Self {
        CopulaDef {
            family: c.family,
            theta: c.theta,
            dim: c.dim,
        }
    }
}

/// Result of a randomized Schur-concavity probe.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SchurProbe {
    pub verdict: bool,
    /// Largest observed `C(u) - C(v)` with `v` majorized by `u`; positive
    /// values are violations.
    pub worst_violation: f64,
    pub trials: usize,
    pub seed: u64,
}

impl CopulaSpec {
    /// Validates the parameter range of `family`. `theta` is ignored (stored
    /// as zero) for the independence and Fréchet copulas.
    pub fn new(family: Family, theta: f64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dim", 0.0, "dim >= 1"));
        }
        let theta = match family {
            Family::Frank | Family::Clayton => {
                if !(theta.is_finite() && theta > 0.0) {
                    return Err(Error::domain("theta", theta, "theta > 0"));
                }
                theta
            }
            Family::GumbelHougaard => {
                if !(theta.is_finite() && theta >= 1.0) {
                    return Err(Error::domain("theta", theta, "theta >= 1"));
                }
                theta
            }
            _ => 0.0,
        };
        Ok(Self { family, theta, dim })
    }

    pub fn independence(dim: usize) -> Result<Self> {
        Self::new(Family::Independence, 0.0, dim)
    }

    pub fn frank(theta: f64, dim: usize) -> Result<Self> {
        Self::new(Family::Frank, theta, dim)
    }

    pub fn clayton(theta: f64, dim: usize) -> Result<Self> {
        Self::new(Family::Clayton, theta, dim)
    }

    pub fn gumbel_hougaard(theta: f64, dim: usize) -> Result<Self> {
        Self::new(Family::GumbelHougaard, theta, dim)
    }

    pub fn lower_frechet(dim: usize) -> Result<Self> {
        Self::new(Family::LowerFrechet, 0.0, dim)
    }

    pub fn upper_frechet(dim: usize) -> Result<Self> {
        Self::new(Family::UpperFrechet, 0.0, dim)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Same family and parameter in another dimension.
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(self.family, self.theta, dim)
    }

    fn require_archimedean(&self, op: &str) -> Result<()> {
        if self.family.is_archimedean() {
            Ok(())
        } else {
            Err(Error::unsupported(format!(
                "{op} is undefined for the {} copula",
                self.family.name()
            )))
        }
    }

    /// Generator `phi(t)`; `phi(0) = +inf`, `phi(1) = 0`.
    pub fn generator(&self, t: f64) -> Result<f64> {
        self.require_archimedean("generator")?;
        check_unit("t", t)?;
        if t == 0.0 {
            return Ok(f64::INFINITY);
        }
        let theta = self.theta;
        let value = match self.family {
            Family::Independence => -ln(t),
            Family::GumbelHougaard => powf(-ln(t), theta),
            // (t^-theta - 1) / theta
            Family::Clayton => exp_m1(-theta * ln(t)) / theta,
            Family::Frank => {
                let denom = exp_m1(-theta);
                if t < 0.5 {
                    -ln(exp_m1(-theta * t) / denom)
                } else {
                    // ratio - 1 = -e^{-theta t} expm1(-theta (1 - t)) / expm1(-theta),
                    // which keeps precision as t -> 1.
                    let shifted = -exp(-theta * t) * exp_m1(-theta * (1.0 - t)) / denom;
                    -ln_1p(shifted)
                }
            }
            Family::LowerFrechet | Family::UpperFrechet => unreachable!(),
        };
        Ok(value.max(0.0))
    }

    /// Inverse generator on `[0, +inf]`; maps `+inf` to exactly zero.
    pub fn generator_inverse(&self, s: f64) -> Result<f64> {
        self.require_archimedean("generator inverse")?;
        if s.is_nan() || s < 0.0 {
            return Err(Error::domain("s", s, "s >= 0"));
        }
        if s == f64::INFINITY {
            return Ok(0.0);
        }
        let theta = self.theta;
        let value = match self.family {
            Family::Independence => exp(-s),
            Family::GumbelHougaard => exp(-powf(s, 1.0 / theta)),
            Family::Clayton => powf(1.0 + theta * s, -1.0 / theta),
            Family::Frank => {
                let e = exp(-s);
                let tail = -e * exp_m1(-theta);
                if tail < 0.5 {
                    -ln_1p(-tail) / theta
                } else {
                    -ln(-exp_m1(-s) + exp(-s - theta)) / theta
                }
            }
            Family::LowerFrechet | Family::UpperFrechet => unreachable!(),
        };
        Ok(value.clamp(0.0, 1.0))
    }

    fn check_point(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.len(),
            });
        }
        u.iter().try_for_each(|&ui| check_unit("u", ui))
    }

    /// Evaluates `C(u)` through the closed form of the family.
    pub fn eval(&self, u: &[f64]) -> Result<f64> {
        self.check_point(u)?;
        Ok(self.eval_unchecked(u))
    }

    pub(crate) fn eval_unchecked(&self, u: &[f64]) -> f64 {
        if u.contains(&0.0) {
            return 0.0;
        }
        // unit coordinates drop out exactly, so C(1, ..., 1) = 1 without rounding
        if u.contains(&1.0) {
            let rest: Vec<f64> = u.iter().copied().filter(|&ui| ui < 1.0).collect();
            return match rest.len() {
                0 => 1.0,
                1 => rest[0],
                _ => self.eval_unchecked(&rest),
            };
        }
        let n = u.len() as f64;
        let theta = self.theta;
        let value = match self.family {
            Family::Independence => u.iter().product(),
            Family::UpperFrechet => u.iter().copied().fold(1.0, f64::min),
            Family::LowerFrechet => (u.iter().sum::<f64>() - n + 1.0).max(0.0),
            Family::Clayton => {
                // (sum u_i^-theta - n + 1)^(-1/theta), written via expm1 for
                // accuracy near u = 1.
                let s: f64 = u.iter().map(|&ui| exp_m1(-theta * ln(ui))).sum();
                powf(1.0 + s, -1.0 / theta)
            }
            Family::GumbelHougaard => {
                let s: f64 = u.iter().map(|&ui| powf(-ln(ui), theta)).sum();
                exp(-powf(s, 1.0 / theta))
            }
            Family::Frank if u.len() <= 3 => {
                let denom = exp_m1(-theta);
                let mut ratio = 1.0;
                for (i, &ui) in u.iter().enumerate() {
                    ratio *= exp_m1(-theta * ui);
                    if i > 0 {
                        ratio /= denom;
                    }
                }
                -ln_1p(ratio) / theta
            }
            Family::Frank => self.compose_unchecked(u),
        };
        value.clamp(0.0, 1.0) + 0.0
    }

    /// Evaluates `C(u) = phi^{-1}(sum phi(u_i))` by generator composition.
    pub fn eval_generator(&self, u: &[f64]) -> Result<f64> {
        self.require_archimedean("generator composition")?;
        self.check_point(u)?;
        Ok(self.compose_unchecked(u))
    }

    fn compose_unchecked(&self, u: &[f64]) -> f64 {
        let mut s = 0.0;
        for &ui in u {
            // Inputs are validated; generator cannot fail here.
            s += self.generator(ui).unwrap_or(f64::INFINITY);
        }
        self.generator_inverse(s).unwrap_or(0.0)
    }

    /// Diagonal section `delta(u) = C(u, ..., u)`.
    pub fn diagonal(&self, u: f64) -> Result<f64> {
        check_unit("u", u)?;
        Ok(self.diagonal_unchecked(u))
    }

    pub(crate) fn diagonal_unchecked(&self, u: f64) -> f64 {
        let point = vec![u; self.dim];
        self.eval_unchecked(&point)
    }

    /// Scans `C(u) - prod u_i` over the interior lattice
    /// `{1/r, ..., (r-1)/r}^n`.
    pub fn is_puod_on_grid(&self, resolution: usize) -> Result<GridCertificate> {
        scan_lattice(self.dim, resolution, |u| {
            self.eval_unchecked(u) - u.iter().product::<f64>()
        })
    }

    /// Randomized check that `C(v) >= C(u)` whenever `v` is obtained from `u`
    /// by a Robin Hood transfer (so `v` is majorized by `u`).
    pub fn schur_concavity_probe(&self, trials: usize, seed: u64) -> Result<SchurProbe> {
        let mut rng = rng::seeded(seed);
        let n = self.dim;
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..trials {
            let u: Vec<f64> = (0..n).map(|_| rng::open_unit(&mut rng)).collect();
            let violation = if n < 2 {
                0.0
            } else {
                let i = rng::below(&mut rng, n);
                let mut j = rng::below(&mut rng, n - 1);
                if j >= i {
                    j += 1;
                }
                let (rich, poor) = if u[i] >= u[j] { (i, j) } else { (j, i) };
                let delta = rng::unit(&mut rng) * (u[rich] - u[poor]);
                let v = robin_hood_transfer(&u, rich, poor, delta)?;
                self.eval_unchecked(&u) - self.eval_unchecked(&v)
            };
            worst = worst.max(violation);
        }
        if trials == 0 {
            worst = 0.0;
        }
        Ok(SchurProbe {
            verdict: worst <= GRID_EPS,
            worst_violation: worst,
            trials,
            seed,
        })
    }
}

/// Fréchet–Hoeffding bounds `(max(sum u - n + 1, 0), min u)`.
pub fn frechet_bounds(u: &[f64]) -> Result<(f64, f64)> {
    u.iter().try_for_each(|&ui| check_unit("u", ui))?;
    let n = u.len() as f64;
    let lower = (u.iter().sum::<f64>() - n + 1.0).max(0.0);
    let upper = u.iter().copied().fold(1.0, f64::min);
    Ok((lower, upper))
}

/// Lattice certificate for `small(u) <= large(u)`.
pub fn copula_dominates_on_grid(
    small: &CopulaSpec,
    large: &CopulaSpec,
    resolution: usize,
) -> Result<GridCertificate> {
    if small.dim != large.dim {
        return Err(Error::DimensionMismatch {
            expected: small.dim,
            found: large.dim,
        });
    }
    scan_lattice(small.dim, resolution, |u| {
        large.eval_unchecked(u) - small.eval_unchecked(u)
    })
}

fn scan_lattice(
    dim: usize,
    resolution: usize,
    mut slack: impl FnMut(&[f64]) -> f64,
) -> Result<GridCertificate> {
    if resolution < 2 {
        return Err(Error::domain(
            "resolution",
            resolution as f64,
            "resolution >= 2",
        ));
    }
    let step = 1.0 / resolution as f64;
    let mut index = vec![1usize; dim];
    let mut point = vec![step; dim];
    let mut min_slack = f64::INFINITY;
    let mut witness = point.clone();
    let mut checked = 0usize;
    loop {
        let s = slack(&point);
        checked += 1;
        if s < min_slack {
            min_slack = s;
            witness.copy_from_slice(&point);
        }
        // odometer increment over {1, ..., resolution - 1}^dim
        let mut k = 0;
        loop {
            if k == dim {
                return Ok(GridCertificate {
                    verdict: min_slack >= -GRID_EPS,
                    min_slack,
                    witness,
                    resolution,
                    tolerance: GRID_EPS,
                    points_checked: checked,
                });
            }
            if index[k] + 1 < resolution {
                index[k] += 1;
                point[k] = index[k] as f64 * step;
                break;
            }
            index[k] = 1;
            point[k] = step;
            k += 1;
        }
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(name, x, "value in [0, 1]"))
    }
}
