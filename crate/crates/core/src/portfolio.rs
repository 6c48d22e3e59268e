//! The claim model `Y_i = I_i X_i` and the survival function of its minimum.
//!
//! For `x >= 0`,
//!
//! ```text
//! P(Y_{1:n} > x) = (prod p_i) C(S(x; l_1), ..., S(x; l_n))
//! ```
//!
//! where `C` is the survival copula of the severities. The atom at zero has
//! mass `1 - prod p_i`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::certificate::{first_failure, Condition, PremiseCheck};
use crate::copula::{copula_dominates_on_grid, CopulaDef, CopulaSpec, Family};
use crate::error::{Error, Result};
use crate::marginals::{certify_lambda_concave_increasing, Baseline, MarginalFamily, MarginalSpec};
use crate::math::{exp, powf};
use crate::{linspace, GRID_EPS};

/// Tolerance of the pointwise sandwich `lower <= exact <= upper`.
pub const SANDWICH_TOL: f64 = 1e-10;

/// Unvalidated wire form of [`Portfolio`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PortfolioDef {
    pub lambdas: Vec<f64>,
    pub probs: Vec<f64>,
    pub marginal: MarginalFamily,
    pub copula: CopulaDef,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "PortfolioDef", into = "PortfolioDef"))]
pub struct Portfolio {
    lambdas: Vec<f64>,
    probs: Vec<f64>,
    marginal: MarginalFamily,
    copula: CopulaSpec,
}

impl TryFrom<PortfolioDef> for Portfolio {
    type Error = Error;

    fn try_from(def: PortfolioDef) -> Result<Self> {
        let copula = CopulaSpec::try_from(def.copula)?;
        Portfolio::new(def.lambdas, def.probs, def.marginal, copula)
    }
}

impl From<Portfolio> for PortfolioDef {
    fn from(p: Portfolio) -> Self {
        PortfolioDef {
            lambdas: p.lambdas,
            probs: p.probs,
            marginal: p.marginal,
            copula: p.copula.into(),
        }
    }
}

/// Survival values of `Y_{1:n}` on a grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SurvivalCurve {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

/// Mixed law of `Y_{1:n}`: an atom at zero plus a density on `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MixedDensity {
    pub atom_mass_at_zero: f64,
    pub density_at_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BoundsMethod {
    /// Diagonal-section bounds for Schur-concave copulas.
    Thm4,
    /// Power bounds for PUOD copulas.
    Thm5,
    Cor7,
    Cor8,
    Cor10,
    Cor11,
    Cor13,
    Cor14,
}

impl BoundsMethod {
    pub const ALL: [BoundsMethod; 8] = [
        BoundsMethod::Thm4,
        BoundsMethod::Thm5,
        BoundsMethod::Cor7,
        BoundsMethod::Cor8,
        BoundsMethod::Cor10,
        BoundsMethod::Cor11,
        BoundsMethod::Cor13,
        BoundsMethod::Cor14,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundsMethod::Thm4 => "thm4",
            BoundsMethod::Thm5 => "thm5",
            BoundsMethod::Cor7 => "cor7",
            BoundsMethod::Cor8 => "cor8",
            BoundsMethod::Cor10 => "cor10",
            BoundsMethod::Cor11 => "cor11",
            BoundsMethod::Cor13 => "cor13",
            BoundsMethod::Cor14 => "cor14",
        }
    }

    /// The general bound a family-specific method specializes.
    pub fn general(self) -> BoundsMethod {
        if self.uses_diagonal() {
            BoundsMethod::Thm4
        } else {
            BoundsMethod::Thm5
        }
    }

    /// Diagonal-section (Schur-concave) variants as opposed to PUOD variants.
    pub fn uses_diagonal(self) -> bool {
        matches!(
            self,
            BoundsMethod::Thm4 | BoundsMethod::Cor7 | BoundsMethod::Cor10 | BoundsMethod::Cor13
        )
    }

    /// The marginal family a closed-form method is written for.
    pub fn family_name(self) -> Option<&'static str> {
        match self {
            BoundsMethod::Cor7 | BoundsMethod::Cor8 => Some("prhr"),
            BoundsMethod::Cor10 | BoundsMethod::Cor11 => Some("harris"),
            BoundsMethod::Cor13 | BoundsMethod::Cor14 => Some("lomax_exponential"),
            BoundsMethod::Thm4 | BoundsMethod::Thm5 => None,
        }
    }

    /// The (Schur-concave, PUOD) closed-form pair for a marginal family.
    pub fn family_methods(family: &MarginalFamily) -> Option<(BoundsMethod, BoundsMethod)> {
        match family {
            MarginalFamily::Prhr { .. } => Some((BoundsMethod::Cor7, BoundsMethod::Cor8)),
            MarginalFamily::Harris { .. } => Some((BoundsMethod::Cor10, BoundsMethod::Cor11)),
            MarginalFamily::LomaxExponential { .. } => {
                Some((BoundsMethod::Cor13, BoundsMethod::Cor14))
            }
            MarginalFamily::Phr { .. } => None,
        }
    }
}

impl fmt::Display for BoundsMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundsMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundsMethod::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::unsupported(format!("unknown bounds method `{s}`")))
    }
}

/// How premises are checked before bounds are emitted.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BoundsOptions {
    /// Lattice resolution for PUOD scans; `0` picks the finest resolution up
    /// to 20 whose lattice has at most 200k points.
    pub puod_resolution: usize,
    pub schur_trials: usize,
    pub seed: u64,
    /// Number of `lambda` values between `min lambda` and `max lambda` at which
    /// the marginal condition is certified.
    pub lambda_points: usize,
    /// Emit bounds even when a premise fails; the curve is then marked as
    /// unverified.
    pub force: bool,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        Self {
            puod_resolution: 0,
            schur_trials: 2000,
            seed: 0x5eed,
            lambda_points: 9,
            force: false,
        }
    }
}

impl BoundsOptions {
    pub fn resolution_for(&self, dim: usize) -> usize {
        if self.puod_resolution >= 2 {
            return self.puod_resolution;
        }
        auto_resolution(dim)
    }
}

pub(crate) fn auto_resolution(dim: usize) -> usize {
    let mut r: usize = 20;
    while r > 2 && (r - 1).checked_pow(dim as u32).is_none_or(|v| v > 200_000) {
        r -= 1;
    }
    r
}

/// Lower and upper bound curves together with the exact survival.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BoundsCurve {
    pub xs: Vec<f64>,
    pub exact: Option<Vec<f64>>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub method: BoundsMethod,
    pub premises: Vec<PremiseCheck>,
    /// False when the curve was forced despite a failed premise.
    pub premises_verified: bool,
}

impl BoundsCurve {
    /// First grid index where `lower <= exact <= upper` fails, with the
    /// signed violation.
    pub fn sandwich_violation(&self, tol: f64) -> Option<(usize, f64)> {
        let exact = self.exact.as_ref()?;
        (0..self.xs.len()).find_map(|i| {
            let below = self.lower[i] - exact[i];
            let above = exact[i] - self.upper[i];
            let worst = below.max(above);
            (worst > tol).then_some((i, worst))
        })
    }
}

fn check_grid(xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(&x) = xs.iter().find(|&&x| !(x >= 0.0)) {
        return Err(Error::domain("x", x, "x >= 0"));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::UnsortedGrid);
    }
    Ok(())
}

impl Portfolio {
    pub fn new(
        lambdas: Vec<f64>,
        probs: Vec<f64>,
        marginal: MarginalFamily,
        copula: CopulaSpec,
    ) -> Result<Self> {
        let n = lambdas.len();
        if n == 0 {
            return Err(Error::domain("n", 0.0, "at least one policy"));
        }
        if probs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: probs.len(),
            });
        }
        if copula.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: copula.dim(),
            });
        }
        for &l in &lambdas {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::domain("lambda", l, "finite and > 0"));
            }
        }
        for &p in &probs {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::domain("p", p, "0 < p <= 1"));
            }
        }
        marginal.validate()?;
        Ok(Self {
            lambdas,
            probs,
            marginal,
            copula,
        })
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn marginal(&self) -> &MarginalFamily {
        &self.marginal
    }

    pub fn copula(&self) -> &CopulaSpec {
        &self.copula
    }

    pub fn marginal_spec(&self, i: usize) -> MarginalSpec {
        // lambdas and family were validated at construction
        MarginalSpec::new(self.marginal, self.lambdas[i]).expect("validated portfolio")
    }

    pub fn with_copula(&self, copula: CopulaSpec) -> Result<Self> {
        Self::new(self.lambdas.clone(), self.probs.clone(), self.marginal, copula)
    }

    pub fn with_probs(&self, probs: Vec<f64>) -> Result<Self> {
        Self::new(self.lambdas.clone(), probs, self.marginal, self.copula)
    }

    pub fn with_lambdas(&self, lambdas: Vec<f64>) -> Result<Self> {
        Self::new(lambdas, self.probs.clone(), self.marginal, self.copula)
    }

    /// `prod p_i`, the probability that every policy claims.
    pub fn prob_product(&self) -> f64 {
        self.probs.iter().product()
    }

    /// Smallest `lambda` (the first order statistic of the vector).
    pub fn lambda_min(&self) -> f64 {
        self.lambdas.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn lambda_mean(&self) -> f64 {
        self.lambdas.iter().sum::<f64>() / self.dim() as f64
    }

    /// `P(Y_{1:n} > x)`.
    pub fn smallest_claim_survival(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::domain("x", x, "x >= 0"));
        }
        Ok(self.survival_unchecked(x))
    }

    fn survival_unchecked(&self, x: f64) -> f64 {
        let u: Vec<f64> = self
            .lambdas
            .iter()
            .map(|&l| self.marginal.survival_unchecked(x, l))
            .collect();
        self.prob_product() * self.copula.eval_unchecked(&u)
    }

    pub fn survival_curve(&self, xs: &[f64]) -> Result<SurvivalCurve> {
        check_grid(xs)?;
        Ok(SurvivalCurve {
            xs: xs.to_vec(),
            values: xs.iter().map(|&x| self.survival_unchecked(x)).collect(),
        })
    }

    /// Baseline and `Lambda = (sum l_i^theta)^(1/theta)` for a PHR portfolio
    /// under a Gumbel–Hougaard copula.
    pub fn phr_gumbel_parts(&self) -> Result<(Baseline, f64)> {
        let baseline = match self.marginal {
            MarginalFamily::Phr { baseline } => baseline,
            _ => {
                return Err(Error::unsupported(format!(
                    "closed form needs PHR marginals, found {}",
                    self.marginal.name()
                )))
            }
        };
        if self.copula.family() != Family::GumbelHougaard {
            return Err(Error::unsupported(format!(
                "closed form needs a Gumbel-Hougaard copula, found {}",
                self.copula.family().name()
            )));
        }
        Ok((baseline, gumbel_phr_exponent(&self.lambdas, self.copula.theta())))
    }

    /// `(prod p_i) S0(x)^Lambda`, the PHR + Gumbel–Hougaard closed form.
    pub fn phr_gumbel_survival(&self, x: f64) -> Result<f64> {
        let (baseline, big_lambda) = self.phr_gumbel_parts()?;
        if !(x >= 0.0) {
            return Err(Error::domain("x", x, "x >= 0"));
        }
        Ok(self.prob_product() * exp(big_lambda * baseline.ln_survival(x)))
    }

    /// Atom at zero and density of `Y_{1:n}` at `x` (the right limit when
    /// `x = 0`). Only the PHR + Gumbel–Hougaard case has a closed form.
    pub fn smallest_claim_density(&self, x: f64) -> Result<MixedDensity> {
        let (baseline, big_lambda) = self.phr_gumbel_parts()?;
        if !(x >= 0.0) {
            return Err(Error::domain("x", x, "x >= 0"));
        }
        let prod = self.prob_product();
        let density =
            prod * big_lambda * baseline.hazard(x) * exp(big_lambda * baseline.ln_survival(x));
        Ok(MixedDensity {
            atom_mass_at_zero: 1.0 - prod,
            density_at_x: if density.is_finite() { density } else { 0.0 },
        })
    }

    /// Smallest `x` (to bisection precision) with
    /// `P(Y_{1:n} > x) < fraction * prod p_i`.
    pub fn tail_horizon(&self, fraction: f64) -> Result<f64> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::domain("fraction", fraction, "0 < fraction < 1"));
        }
        let target = fraction * self.prob_product();
        let mut hi = 1.0;
        let mut steps = 0;
        while self.survival_unchecked(hi) >= target {
            hi *= 2.0;
            steps += 1;
            if steps > 1000 {
                return Err(Error::domain("fraction", fraction, "tail never reaches target"));
            }
        }
        let mut lo = 0.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.survival_unchecked(mid) >= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }

    /// 201 points on `[0, x_max]` where the exact survival at `x_max` has
    /// fallen below `1e-4 prod p_i`.
    pub fn figure_grid(&self) -> Result<Vec<f64>> {
        Ok(linspace(0.0, self.tail_horizon(1e-4)?, 201))
    }

    fn lambda_grid(&self, points: usize) -> Vec<f64> {
        let (lo, hi) = (self.lambda_min(), self.lambda_max());
        if hi - lo <= 0.0 || points < 2 {
            vec![lo]
        } else {
            linspace(lo, hi, points)
        }
    }

    /// General bounds: diagonal-section bounds (`Thm4`) or power
    /// bounds (`Thm5`). Premises are certified first.
    pub fn bounds_general(
        &self,
        xs: &[f64],
        method: BoundsMethod,
        opts: &BoundsOptions,
    ) -> Result<BoundsCurve> {
        check_grid(xs)?;
        if !matches!(method, BoundsMethod::Thm4 | BoundsMethod::Thm5) {
            return Err(Error::unsupported(format!(
                "{method} is a family bound; use bounds_family"
            )));
        }
        let mut premises = vec![check_lambda_condition(
            &self.marginal,
            xs,
            &self.lambda_grid(opts.lambda_points),
        )?];
        premises.push(if method.uses_diagonal() {
            check_schur(&self.copula, opts.schur_trials, opts.seed)?
        } else {
            check_puod(&self.copula, opts.resolution_for(self.dim()))?
        });
        let verified = gate(&premises, opts.force)?;

        let prod = self.prob_product();
        let lmin = self.lambda_min();
        let lmean = self.lambda_mean();
        let n = self.dim();
        let mut lower = Vec::with_capacity(xs.len());
        let mut upper = Vec::with_capacity(xs.len());
        for &x in xs {
            let s_min = self.marginal.survival_unchecked(x, lmin);
            if method == BoundsMethod::Thm4 {
                let s_mean = self.marginal.survival_unchecked(x, lmean);
                lower.push(prod * self.copula.diagonal_unchecked(s_min));
                upper.push(prod * self.copula.diagonal_unchecked(s_mean));
            } else {
                lower.push(prod * (0..n).fold(1.0, |acc, _| acc * s_min));
                upper.push(prod * s_min);
            }
        }
        Ok(self.finish(xs, method, lower, upper, premises, verified))
    }

    /// Closed-form bounds for a specific marginal family (PRHR: 7/8, Harris:
    /// 10/11, Lomax-exponential: 13/14). They coincide with the general
    /// bounds they specialize.
    pub fn bounds_family(
        &self,
        xs: &[f64],
        method: BoundsMethod,
        opts: &BoundsOptions,
    ) -> Result<BoundsCurve> {
        check_grid(xs)?;
        let Some(want) = method.family_name() else {
            return Err(Error::unsupported(format!(
                "{method} is a general bound; use bounds_general"
            )));
        };
        if self.marginal.name() != want {
            return Err(Error::Precondition {
                condition: Condition::FamilyMatch,
                detail: format!("{method} needs {want} marginals, found {}", self.marginal.name()),
            });
        }
        let mut premises = vec![family_parameter_check(&self.marginal)];
        premises.push(if method.uses_diagonal() {
            check_schur(&self.copula, opts.schur_trials, opts.seed)?
        } else {
            check_puod(&self.copula, opts.resolution_for(self.dim()))?
        });
        let verified = gate(&premises, opts.force)?;

        let prod = self.prob_product();
        let lmin = self.lambda_min();
        let lmean = self.lambda_mean();
        let n = self.dim() as f64;
        let diag = |u: f64| self.copula.diagonal_unchecked(u);
        let mut lower = Vec::with_capacity(xs.len());
        let mut upper = Vec::with_capacity(xs.len());
        for &x in xs {
            let (lo, hi) = match (method, self.marginal) {
                (BoundsMethod::Cor7, MarginalFamily::Prhr { baseline }) => {
                    let cdf = baseline.cdf(x);
                    (
                        prod * diag(1.0 - powf(cdf, lmin)),
                        prod * diag(1.0 - powf(cdf, lmean)),
                    )
                }
                (BoundsMethod::Cor8, MarginalFamily::Prhr { baseline }) => {
                    let s = 1.0 - powf(baseline.cdf(x), lmin);
                    (prod * powf(s, n), prod * s)
                }
                (BoundsMethod::Cor10, MarginalFamily::Harris { baseline, theta_h }) => (
                    prod * diag(harris_closed(baseline, theta_h, lmin, x, 1.0)),
                    prod * diag(harris_closed(baseline, theta_h, lmean, x, 1.0)),
                ),
                (BoundsMethod::Cor11, MarginalFamily::Harris { baseline, theta_h }) => (
                    prod * harris_closed(baseline, theta_h, lmin, x, n),
                    prod * harris_closed(baseline, theta_h, lmin, x, 1.0),
                ),
                (BoundsMethod::Cor13, MarginalFamily::LomaxExponential { alpha, beta }) => (
                    prod * diag(lomax_closed(alpha, beta, lmin, x, 1.0)),
                    prod * diag(lomax_closed(alpha, beta, lmean, x, 1.0)),
                ),
                (BoundsMethod::Cor14, MarginalFamily::LomaxExponential { alpha, beta }) => (
                    prod * lomax_closed(alpha, beta, lmin, x, n),
                    // carries prod p_i like the power bound it specializes
                    prod * lomax_closed(alpha, beta, lmin, x, 1.0),
                ),
                _ => unreachable!("family checked above"),
            };
            lower.push(lo);
            upper.push(hi);
        }
        Ok(self.finish(xs, method, lower, upper, premises, verified))
    }

    /// Dispatches to [`bounds_general`](Self::bounds_general) or
    /// [`bounds_family`](Self::bounds_family).
    pub fn bounds(&self, xs: &[f64], method: BoundsMethod, opts: &BoundsOptions) -> Result<BoundsCurve> {
        match method {
            BoundsMethod::Thm4 | BoundsMethod::Thm5 => self.bounds_general(xs, method, opts),
            _ => self.bounds_family(xs, method, opts),
        }
    }

    fn finish(
        &self,
        xs: &[f64],
        method: BoundsMethod,
        lower: Vec<f64>,
        upper: Vec<f64>,
        premises: Vec<PremiseCheck>,
        premises_verified: bool,
    ) -> BoundsCurve {
        BoundsCurve {
            xs: xs.to_vec(),
            exact: Some(xs.iter().map(|&x| self.survival_unchecked(x)).collect()),
            lower,
            upper,
            method,
            premises,
            premises_verified,
        }
    }
}

/// `(sum l_i^theta)^(1/theta)`.
pub fn gumbel_phr_exponent(lambdas: &[f64], theta: f64) -> f64 {
    powf(lambdas.iter().map(|&l| powf(l, theta)).sum::<f64>(), 1.0 / theta)
}

// (l S0^t / (1 - (1 - l) S0^t))^(power / t), straight from the textbook form.
fn harris_closed(baseline: Baseline, theta: f64, lambda: f64, x: f64, power: f64) -> f64 {
    let s = powf(baseline.survival(x), theta);
    powf(lambda * s / (1.0 - (1.0 - lambda) * s), power / theta)
}

// (l / (e^{bx} + l - 1))^(power * a)
fn lomax_closed(alpha: f64, beta: f64, lambda: f64, x: f64, power: f64) -> f64 {
    powf(lambda / (exp(beta * x) + lambda - 1.0), power * alpha)
}

fn gate(premises: &[PremiseCheck], force: bool) -> Result<bool> {
    match first_failure(premises) {
        None => Ok(true),
        Some(_) if force => Ok(false),
        Some(c) => Err(Error::Precondition {
            condition: c.condition,
            detail: c.detail.clone(),
        }),
    }
}

fn family_parameter_check(family: &MarginalFamily) -> PremiseCheck {
    match *family {
        MarginalFamily::Harris { theta_h, .. } => PremiseCheck::new(
            Condition::FamilyParameter,
            theta_h >= 1.0,
            theta_h - 1.0,
            format!("harris theta_h = {theta_h} (needs theta_h >= 1)"),
        ),
        MarginalFamily::LomaxExponential { alpha, .. } => PremiseCheck::new(
            Condition::FamilyParameter,
            alpha <= 1.0,
            1.0 - alpha,
            format!("lomax-exponential alpha = {alpha} (needs alpha <= 1)"),
        ),
        MarginalFamily::Prhr { .. } => PremiseCheck::new(
            Condition::FamilyParameter,
            true,
            0.0,
            "prhr survival 1 - F^lambda is increasing and concave in lambda",
        ),
        MarginalFamily::Phr { .. } => PremiseCheck::new(
            Condition::FamilyParameter,
            false,
            -1.0,
            "phr survival is decreasing in lambda",
        ),
    }
}

/// Certifies that the marginal survival is increasing and concave in
/// `lambda` over `xs x lambdas`.
pub fn check_lambda_condition(
    family: &MarginalFamily,
    xs: &[f64],
    lambdas: &[f64],
) -> Result<PremiseCheck> {
    let cert = certify_lambda_concave_increasing(family, xs, lambdas)?;
    let margin = (-cert.max_second).min(cert.min_first);
    let mut detail = format!(
        "{} x-points by {} lambda-points in [{}, {}]: min dS/dl = {:e}, max d2S/dl2 = {:e}",
        xs.len(),
        lambdas.len(),
        lambdas[0],
        lambdas[lambdas.len() - 1],
        cert.min_first,
        cert.max_second,
    );
    if cert.closed_form_checked {
        detail.push_str(&format!(
            ", closed-form partials max rel err {:e}",
            cert.max_closed_form_rel_err
        ));
    }
    if let (false, Some(w)) = (cert.verdict, cert.worst_point) {
        detail.push_str(&format!(", worst at x = {}, lambda = {}", w.x, w.lambda));
    }
    Ok(PremiseCheck::new(
        Condition::LambdaIncreasingConcave,
        cert.verdict,
        margin,
        detail,
    ))
}

pub fn check_schur(copula: &CopulaSpec, trials: usize, seed: u64) -> Result<PremiseCheck> {
    let probe = copula.schur_concavity_probe(trials, seed)?;
    Ok(PremiseCheck::new(
        Condition::SchurConcave,
        probe.verdict,
        -probe.worst_violation,
        format!(
            "{} random transfers (seed {}), worst violation {:e}",
            trials, seed, probe.worst_violation
        ),
    ))
}

pub fn check_puod(copula: &CopulaSpec, resolution: usize) -> Result<PremiseCheck> {
    let cert = copula.is_puod_on_grid(resolution)?;
    Ok(PremiseCheck::new(
        Condition::Puod,
        cert.verdict,
        cert.min_slack,
        lattice_detail(&cert),
    ))
}

pub fn check_dominance(
    small: &CopulaSpec,
    large: &CopulaSpec,
    resolution: usize,
) -> Result<PremiseCheck> {
    let cert = copula_dominates_on_grid(small, large, resolution)?;
    Ok(PremiseCheck::new(
        Condition::CopulaDominance,
        cert.verdict,
        cert.min_slack,
        lattice_detail(&cert),
    ))
}

fn lattice_detail(cert: &crate::certificate::GridCertificate) -> String {
    format!(
        "lattice resolution {} ({} points, tol {:e}): min slack {:e} at {:?}",
        cert.resolution, cert.points_checked, GRID_EPS, cert.min_slack, cert.witness
    )
}
