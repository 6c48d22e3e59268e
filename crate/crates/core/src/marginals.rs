//! Parametric claim-severity families indexed by a scalar `lambda`.
//!
//! * PHR: `S(x; l) = S0(x)^l`
//! * PRHR: `F(x; l) = F0(x)^l`, so `S(x; l) = 1 - F0(x)^l`
//! * Harris: `S(x; l) = (l S0^t / (1 - (1 - l) S0^t))^(1/t)` with `t = theta_h`
//! * Lomax-exponential: `S(x; l) = (l / (e^{bx} + l - 1))^a`
//!
//! Formulas are evaluated in log space where the naive form cancels. The
//! Harris exponent `theta_h` is a marginal parameter and is unrelated to the
//! copula parameter.

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{exp, exp_m1, ln, ln_1p, powf, saturate};
use crate::GRID_EPS;

/// Baseline survival function `S0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Baseline {
    /// `S0(x) = exp(-rate x)`
    Exponential { rate: f64 },
    /// `S0(x) = exp(-c x^k)`
    StretchedExponential { c: f64, k: f64 },
}

impl Baseline {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Baseline::Exponential { rate } => positive("rate", rate),
            Baseline::StretchedExponential { c, k } => {
                positive("c", c)?;
                positive("k", k)
            }
        }
    }

    /// `log S0(x)`, always `<= 0`.
    pub fn ln_survival(&self, x: f64) -> f64 {
        match *self {
            Baseline::Exponential { rate } => -rate * x,
            Baseline::StretchedExponential { c, k } => -c * powf(x, k),
        }
    }

    pub fn survival(&self, x: f64) -> f64 {
        exp(self.ln_survival(x))
    }

    pub fn cdf(&self, x: f64) -> f64 {
        -exp_m1(self.ln_survival(x))
    }

    pub fn hazard(&self, x: f64) -> f64 {
        match *self {
            Baseline::Exponential { rate } => rate,
            Baseline::StretchedExponential { c, k } => c * k * powf(x, k - 1.0),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        self.hazard(x) * self.survival(x)
    }

    /// Solves `log S0(x) = l` for `l <= 0`.
    pub fn inverse_ln_survival(&self, l: f64) -> f64 {
        let t = (-l).max(0.0);
        match *self {
            Baseline::Exponential { rate } => t / rate,
            Baseline::StretchedExponential { c, k } => powf(t / c, 1.0 / k),
        }
    }
}

/// A marginal family with `lambda` left free.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "model", rename_all = "snake_case"))]
pub enum MarginalFamily {
    Phr { baseline: Baseline },
    /// The baseline is stored through its survival function; the model acts
    /// on the CDF `F0 = 1 - S0`.
    Prhr { baseline: Baseline },
    Harris { baseline: Baseline, theta_h: f64 },
    LomaxExponential { alpha: f64, beta: f64 },
}

impl MarginalFamily {
    pub fn name(&self) -> &'static str {
        match self {
            MarginalFamily::Phr { .. } => "phr",
            MarginalFamily::Prhr { .. } => "prhr",
            MarginalFamily::Harris { .. } => "harris",
            MarginalFamily::LomaxExponential { .. } => "lomax_exponential",
        }
    }

    /// Checks that every parameter defines a proper distribution. The
    /// stricter restrictions some bounds need (`theta_h >= 1`, `alpha <= 1`)
    /// are premises of those bounds and are checked there.
    pub fn validate(&self) -> Result<()> {
        match *self {
            MarginalFamily::Phr { baseline } | MarginalFamily::Prhr { baseline } => {
                baseline.validate()
            }
            MarginalFamily::Harris { baseline, theta_h } => {
                baseline.validate()?;
                positive("theta_h", theta_h)
            }
            MarginalFamily::LomaxExponential { alpha, beta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)
            }
        }
    }

    pub fn baseline(&self) -> Option<Baseline> {
        match *self {
            MarginalFamily::Phr { baseline }
            | MarginalFamily::Prhr { baseline }
            | MarginalFamily::Harris { baseline, .. } => Some(baseline),
            MarginalFamily::LomaxExponential { .. } => None,
        }
    }

    pub fn with_lambda(self, lambda: f64) -> Result<MarginalSpec> {
        MarginalSpec::new(self, lambda)
    }

    /// `S(x; lambda)`; tails below `1e-300` are flushed to zero.
    pub fn survival(&self, x: f64, lambda: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::domain("x", x, "x >= 0"));
        }
        Ok(self.survival_unchecked(x, lambda))
    }

    pub(crate) fn survival_unchecked(&self, x: f64, lambda: f64) -> f64 {
        if x == f64::INFINITY {
            return 0.0;
        }
        let value = match *self {
            MarginalFamily::Phr { baseline } => exp(lambda * baseline.ln_survival(x)),
            MarginalFamily::Prhr { baseline } => {
                let ln_cdf = ln_1p(-baseline.survival(x));
                -exp_m1(lambda * ln_cdf)
            }
            MarginalFamily::Harris { baseline, theta_h } => {
                let ln_s = theta_h * baseline.ln_survival(x);
                let one_minus_s = -exp_m1(ln_s);
                let d = one_minus_s + lambda * exp(ln_s);
                exp((ln(lambda) + ln_s - ln(d)) / theta_h)
            }
            MarginalFamily::LomaxExponential { alpha, beta } => {
                exp(-alpha * ln_1p(exp_m1(beta * x) / lambda))
            }
        };
        saturate(value)
    }

    /// `-dS/dx` for `x > 0`.
    pub fn density(&self, x: f64, lambda: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain("x", x, "x > 0"));
        }
        let value = match *self {
            MarginalFamily::Phr { baseline } => {
                lambda * baseline.hazard(x) * self.survival_unchecked(x, lambda)
            }
            MarginalFamily::Prhr { baseline } => {
                let ln_cdf = ln_1p(-baseline.survival(x));
                lambda * exp((lambda - 1.0) * ln_cdf) * baseline.density(x)
            }
            MarginalFamily::Harris { baseline, theta_h } => {
                let ln_s = theta_h * baseline.ln_survival(x);
                let d = -exp_m1(ln_s) + lambda * exp(ln_s);
                self.survival_unchecked(x, lambda) * baseline.hazard(x) / d
            }
            MarginalFamily::LomaxExponential { alpha, beta } => {
                let em1 = exp_m1(beta * x);
                alpha * beta * (1.0 + em1) / (lambda + em1) * self.survival_unchecked(x, lambda)
            }
        };
        Ok(if value.is_finite() { value } else { 0.0 })
    }

    /// Closed-form `x` with `S(x; lambda) = q` for `q` in `(0, 1]`.
    pub fn inverse_survival(&self, q: f64, lambda: f64) -> Result<f64> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::domain("q", q, "0 < q <= 1"));
        }
        if q == 1.0 {
            return Ok(0.0);
        }
        let x = match *self {
            MarginalFamily::Phr { baseline } => baseline.inverse_ln_survival(ln(q) / lambda),
            MarginalFamily::Prhr { baseline } => {
                let ln_cdf = ln_1p(-q) / lambda;
                baseline.inverse_ln_survival(ln(-exp_m1(ln_cdf)))
            }
            MarginalFamily::Harris { baseline, theta_h } => {
                let ln_g = theta_h * ln(q);
                let one_minus_g = -exp_m1(ln_g);
                let ln_s = ln_g - ln_1p((lambda - 1.0) * one_minus_g);
                baseline.inverse_ln_survival(ln_s / theta_h)
            }
            MarginalFamily::LomaxExponential { alpha, beta } => {
                ln_1p(lambda * exp_m1(-ln(q) / alpha)) / beta
            }
        };
        Ok(x.max(0.0))
    }

    /// Root of `S(x; lambda) = q` by bisection with a doubling upper bracket.
    /// Slower than [`inverse_survival`](Self::inverse_survival) but needs
    /// nothing beyond monotonicity.
    pub fn inverse_survival_bisect(&self, q: f64, lambda: f64) -> Result<f64> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::domain("q", q, "0 < q <= 1"));
        }
        if q == 1.0 {
            return Ok(0.0);
        }
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut doublings = 0;
        while self.survival_unchecked(hi, lambda) >= q {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > 1100 {
                return Err(Error::domain("q", q, "q above the representable tail"));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.survival_unchecked(mid, lambda) > q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Closed-form `(dS/dlambda, d2S/dlambda2)` at `(x, lambda)`.
    pub fn lambda_partials(&self, x: f64, lambda: f64) -> Result<(f64, f64)> {
        if !(x >= 0.0) {
            return Err(Error::domain("x", x, "x >= 0"));
        }
        let sv = self.survival_unchecked(x, lambda);
        let out = match *self {
            MarginalFamily::Phr { baseline } => {
                let l = baseline.ln_survival(x);
                (sv * l, sv * l * l)
            }
            MarginalFamily::Prhr { baseline } => {
                let ln_cdf = ln_1p(-baseline.survival(x));
                let pow = exp(lambda * ln_cdf);
                (-pow * ln_cdf, -pow * ln_cdf * ln_cdf)
            }
            MarginalFamily::Harris { baseline, theta_h } => {
                let ln_s = theta_h * baseline.ln_survival(x);
                let s = exp(ln_s);
                let one_minus_s = -exp_m1(ln_s);
                let d = one_minus_s + lambda * s;
                let a = one_minus_s / theta_h;
                let first = a * sv / (lambda * d);
                let second = a * sv / (lambda * lambda * d * d)
                    * (one_minus_s * (1.0 / theta_h - 1.0) - 2.0 * lambda * s);
                (first, second)
            }
            MarginalFamily::LomaxExponential { alpha, beta } => {
                let em1 = exp_m1(beta * x);
                let k = lambda + em1;
                let first = alpha * em1 / (lambda * k) * sv;
                let second =
                    alpha * em1 / (lambda * lambda * k * k) * sv * ((alpha - 1.0) * em1 - 2.0 * lambda);
                (first, second)
            }
        };
        Ok(out)
    }

    /// Whether the family carries hand-derived `lambda` partials that the
    /// certifier must cross-check against finite differences.
    fn checks_closed_form_partials(&self) -> bool {
        matches!(
            self,
            MarginalFamily::Harris { .. } | MarginalFamily::LomaxExponential { .. }
        )
    }
}

/// One member of a [`MarginalFamily`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(try_from = "MarginalSpecDef", into = "MarginalSpecDef")
)]
pub struct MarginalSpec {
    family: MarginalFamily,
    lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MarginalSpecDef {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub family: MarginalFamily,
    pub lambda: f64,
}

impl TryFrom<MarginalSpecDef> for MarginalSpec {
    type Error = Error;

    fn try_from(def: MarginalSpecDef) -> Result<Self> {
        MarginalSpec::new(def.family, def.lambda)
    }
}

impl From<MarginalSpec> for MarginalSpecDef {
    fn from(m: MarginalSpec) -> Self {
        MarginalSpecDef {
            family: m.family,
            lambda: m.lambda,
        }
    }
}

impl MarginalSpec {
    pub fn new(family: MarginalFamily, lambda: f64) -> Result<Self> {
        family.validate()?;
        positive("lambda", lambda)?;
        Ok(Self { family, lambda })
    }

    pub fn family(&self) -> &MarginalFamily {
        &self.family
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn survival(&self, x: f64) -> Result<f64> {
        self.family.survival(x, self.lambda)
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        self.family.density(x, self.lambda)
    }

    pub fn inverse_survival(&self, q: f64) -> Result<f64> {
        self.family.inverse_survival(q, self.lambda)
    }
}

/// Where the certifier found its worst case.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LambdaWitness {
    pub x: f64,
    pub lambda: f64,
    pub first: f64,
    pub second: f64,
}

/// Grid evidence that `S(x; lambda)` is increasing and concave in `lambda`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LambdaCertificate {
    pub verdict: bool,
    /// Point with the largest sign violation, or the largest concavity
    /// value when nothing is violated.
    pub worst_point: Option<LambdaWitness>,
    pub min_first: f64,
    pub max_second: f64,
    /// Whether closed-form partials were compared with finite differences.
    pub closed_form_checked: bool,
    pub closed_form_agrees: bool,
    pub max_closed_form_rel_err: f64,
    pub points_checked: usize,
}

/// Relative agreement required between closed-form and finite-difference
/// `lambda` partials.
pub const PARTIAL_REL_TOL: f64 = 1e-5;

/// Finite-difference step in `lambda`.
pub fn lambda_step(lambda: f64) -> f64 {
    (1e-4 * lambda).max(1e-6)
}

/// Central differences `(dS/dl, d2S/dl2)` plus round-off bounds for each.
pub fn lambda_finite_differences(
    family: &MarginalFamily,
    x: f64,
    lambda: f64,
) -> ((f64, f64), (f64, f64)) {
    let h = lambda_step(lambda);
    let up = family.survival_unchecked(x, lambda + h);
    let mid = family.survival_unchecked(x, lambda);
    let down = family.survival_unchecked(x, lambda - h);
    let first = (up - down) / (2.0 * h);
    let second = (up - 2.0 * mid + down) / (h * h);
    // a few ulps of error per survival evaluation
    let eval_err = 16.0 * f64::EPSILON * up.max(mid).max(down);
    ((first, second), (eval_err / h, 4.0 * eval_err / (h * h)))
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::UnsortedGrid);
    }
    Ok(())
}

/// Certifies `dS/dlambda >= 0` and `d2S/dlambda2 <= 0` on `x_grid x lambda_grid`
/// by central differences. For the Harris and Lomax-exponential families the
/// closed-form partials are also compared with the differences.
pub fn certify_lambda_concave_increasing(
    family: &MarginalFamily,
    x_grid: &[f64],
    lambda_grid: &[f64],
) -> Result<LambdaCertificate> {
    family.validate()?;
    check_grid(x_grid)?;
    check_grid(lambda_grid)?;
    if let Some(&x) = x_grid.iter().find(|&&x| !(x >= 0.0)) {
        return Err(Error::domain("x", x, "x >= 0"));
    }
    for &lambda in lambda_grid {
        if !(lambda.is_finite() && lambda - lambda_step(lambda) > 0.0) {
            return Err(Error::domain(
                "lambda",
                lambda,
                "lambda > 0 with room for a central difference",
            ));
        }
    }
    let closed = family.checks_closed_form_partials();
    let mut verdict = true;
    let mut agrees = true;
    let mut min_first = f64::INFINITY;
    let mut max_second = f64::NEG_INFINITY;
    let mut max_rel = 0.0f64;
    let mut worst: Option<(f64, LambdaWitness)> = None;
    let mut checked = 0;
    for &x in x_grid {
        for &lambda in lambda_grid {
            let ((first, second), (r1, r2)) = lambda_finite_differences(family, x, lambda);
            checked += 1;
            min_first = min_first.min(first);
            max_second = max_second.max(second);
            let excess = (-(first) - (GRID_EPS + r1)).max(second - (GRID_EPS + r2));
            if excess > 0.0 {
                verdict = false;
            }
            let witness = LambdaWitness {
                x,
                lambda,
                first,
                second,
            };
            if worst.is_none_or(|(e, _)| excess > e) {
                worst = Some((excess, witness));
            }
            if closed {
                let (cf1, cf2) = family.lambda_partials(x, lambda)?;
                for (cf, fd, r) in [(cf1, first, r1), (cf2, second, r2)] {
                    let diff = (cf - fd).abs();
                    if diff > PARTIAL_REL_TOL * cf.abs() + r {
                        agrees = false;
                    }
                    if cf != 0.0 {
                        max_rel = max_rel.max(diff / cf.abs());
                    }
                }
            }
        }
    }
    Ok(LambdaCertificate {
        verdict: verdict && agrees,
        worst_point: worst.map(|(_, w)| w),
        min_first,
        max_second,
        closed_form_checked: closed,
        closed_form_agrees: agrees,
        max_closed_form_rel_err: max_rel,
        points_checked: checked,
    })
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, value, "finite and > 0"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linspace;
    use proptest::prelude::*;
    use std::vec::Vec;

    const EXP1: Baseline = Baseline::Exponential { rate: 1.0 };
    const STRETCHED: Baseline = Baseline::StretchedExponential { c: 3.0, k: 2.0 };

    fn families() -> Vec<MarginalFamily> {
        let mut out = Vec::new();
        for b in [EXP1, STRETCHED, Baseline::Exponential { rate: 0.4 }] {
            out.push(MarginalFamily::Phr { baseline: b });
            out.push(MarginalFamily::Prhr { baseline: b });
            out.push(MarginalFamily::Harris {
                baseline: b,
                theta_h: 1.0,
            });
            out.push(MarginalFamily::Harris {
                baseline: b,
                theta_h: 3.0,
            });
        }
        out.push(MarginalFamily::LomaxExponential {
            alpha: 0.1,
            beta: 3.0,
        });
        out.push(MarginalFamily::LomaxExponential {
            alpha: 0.8,
            beta: 0.5,
        });
        out
    }

    // Independent Harris survival straight from the textbook formula.
    fn harris_reference(base_survival: f64, lambda: f64, theta: f64) -> f64 {
        let s = base_survival.powf(theta);
        (lambda * s / (1.0 - (1.0 - lambda) * s)).powf(1.0 / theta)
    }

    #[test]
    fn unit_survival_at_zero() {
        for f in families() {
            for lambda in [0.3, 1.0, 2.0, 7.5] {
                assert_eq!(f.survival(0.0, lambda).unwrap(), 1.0, "{f:?}");
            }
        }
    }

    #[test]
    fn negative_x_is_rejected() {
        let f = MarginalFamily::Phr { baseline: EXP1 };
        assert!(matches!(f.survival(-1.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(f.density(0.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(f.inverse_survival(0.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(f.inverse_survival(1.5, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn lomax_collapses_at_unit_lambda() {
        let f = MarginalFamily::LomaxExponential {
            alpha: 0.1,
            beta: 3.0,
        };
        for x in [0.0, 0.01, 0.5, 2.0, 17.0] {
            let expect = (-0.3f64 * x).exp();
            assert!((f.survival(x, 1.0).unwrap() - expect).abs() < 1e-15);
            if x > 0.0 {
                let d = f.density(x, 1.0).unwrap();
                assert!((d - 0.3 * expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn harris_example_value() {
        let f = MarginalFamily::Harris {
            baseline: EXP1,
            theta_h: 1.0,
        };
        let e = (-1.0f64).exp();
        let expect = 2.0 * e / (1.0 - (1.0 - 2.0) * e);
        let got = f.survival(1.0, 2.0).unwrap();
        assert!((got - expect).abs() < 1e-15);
        assert!((got - harris_reference(e, 2.0, 1.0)).abs() < 1e-15);
        let stretched = MarginalFamily::Harris {
            baseline: STRETCHED,
            theta_h: 3.0,
        };
        for x in [0.1, 0.4, 1.0] {
            let base = (-3.0f64 * x * x).exp();
            let want = harris_reference(base, 3.0, 3.0);
            assert!((stretched.survival(x, 3.0).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn phr_exponential_collapse() {
        let f = MarginalFamily::Phr {
            baseline: Baseline::Exponential { rate: 1.7 },
        };
        for x in [0.0, 0.3, 1.1, 6.0] {
            for lambda in [0.5, 2.0, 3.3] {
                let expect = (-1.7f64 * x * lambda).exp();
                let got = f.survival(x, lambda).unwrap();
                assert!((got - expect).abs() <= 2.0 * f64::EPSILON * expect);
            }
        }
        let unit = MarginalFamily::Phr { baseline: EXP1 };
        let d = unit.density(0.7, 2.0).unwrap();
        assert!((d - 2.0 * (-1.4f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn density_matches_finite_differences() {
        let h = 1e-6;
        for f in families() {
            for lambda in [0.4, 1.0, 3.0] {
                for x in [0.05, 0.3, 1.0, 2.0] {
                    let s = |t: f64| f.survival(t, lambda).unwrap();
                    let fd = (s(x - h) - s(x + h)) / (2.0 * h);
                    let d = f.density(x, lambda).unwrap();
                    assert!(d >= 0.0);
                    assert!(
                        (d - fd).abs() <= 1e-6 * d.abs().max(1e-3),
                        "{f:?} l={lambda} x={x}: {d} vs {fd}"
                    );
                }
            }
        }
    }

    // Adaptive Simpson on [0, upper] as an independent quadrature oracle.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, depth)
    }

    #[test]
    fn densities_integrate_to_one() {
        for f in families() {
            for lambda in [0.5, 2.0] {
                // truncate where the survival is negligible
                let upper = f.inverse_survival(1e-12, lambda).unwrap();
                let g = |x: f64| if x <= 0.0 { f.density(1e-300, lambda).unwrap_or(0.0) } else { f.density(x, lambda).unwrap() };
                // split at a small point to tame integrable singularities at zero
                let cut = upper * 1e-6;
                let head = 1.0 - f.survival(cut, lambda).unwrap();
                let mass = head + simpson(&g, cut, upper, 1e-10, 40);
                assert!((mass - 1.0).abs() < 1e-6, "{f:?} l={lambda}: {mass}");
            }
        }
    }

    #[test]
    fn inverse_round_trip_and_bisection() {
        for f in families() {
            for lambda in [0.4, 1.0, 3.0] {
                for q in [0.999, 0.9, 0.5, 0.1, 1e-3] {
                    let x = f.inverse_survival(q, lambda).unwrap();
                    assert!((f.survival(x, lambda).unwrap() - q).abs() < 1e-10, "{f:?}");
                    let xb = f.inverse_survival_bisect(q, lambda).unwrap();
                    assert!((f.survival(xb, lambda).unwrap() - q).abs() < 1e-10, "{f:?}");
                }
                assert_eq!(f.inverse_survival(1.0, lambda).unwrap(), 0.0);
            }
        }
        let phr = MarginalFamily::Phr { baseline: EXP1 };
        let x = phr.inverse_survival((-2.0f64).exp(), 2.0).unwrap();
        assert!((x - 1.0).abs() < 1e-15);
        let harris = MarginalFamily::Harris {
            baseline: EXP1,
            theta_h: 2.0,
        };
        let x = harris.inverse_survival_bisect(0.5, 3.0).unwrap();
        assert!((harris.survival(x, 3.0).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn prhr_certifies_everywhere() {
        for baseline in [EXP1, STRETCHED] {
            let f = MarginalFamily::Prhr { baseline };
            let cert = certify_lambda_concave_increasing(
                &f,
                &linspace(0.0, 4.0, 25),
                &linspace(0.2, 8.0, 25),
            )
            .unwrap();
            assert!(cert.verdict, "{cert:?}");
            assert!(!cert.closed_form_checked);
        }
    }

    #[test]
    fn phr_is_not_increasing_in_lambda() {
        let f = MarginalFamily::Phr { baseline: EXP1 };
        let cert =
            certify_lambda_concave_increasing(&f, &linspace(0.1, 2.0, 5), &[1.0, 2.0]).unwrap();
        assert!(!cert.verdict);
        assert!(cert.min_first < 0.0);
    }

    #[test]
    fn harris_certifies_for_theta_at_least_one() {
        let f = MarginalFamily::Harris {
            baseline: EXP1,
            theta_h: 3.0,
        };
        let cert = certify_lambda_concave_increasing(
            &f,
            &linspace(0.01, 5.0, 20),
            &linspace(0.5, 6.0, 20),
        )
        .unwrap();
        assert!(cert.verdict, "{cert:?}");
        assert!(cert.closed_form_checked && cert.closed_form_agrees);
    }

    #[test]
    fn lomax_with_alpha_above_one_fails() {
        let f = MarginalFamily::LomaxExponential {
            alpha: 2.0,
            beta: 3.0,
        };
        let cert = certify_lambda_concave_increasing(
            &f,
            &linspace(0.05, 3.0, 20),
            &linspace(0.5, 6.0, 20),
        )
        .unwrap();
        assert!(!cert.verdict);
        assert!(cert.closed_form_agrees);
        let w = cert.worst_point.unwrap();
        assert!(w.second > 0.0);
        // the sign of (alpha - 1)(e^{bx} - 1) - 2 lambda decides concavity
        assert!((3.0 * w.x).exp_m1() > 2.0 * w.lambda);
    }

    #[test]
    fn certifier_rejects_bad_grids() {
        let f = MarginalFamily::Prhr { baseline: EXP1 };
        assert!(matches!(
            certify_lambda_concave_increasing(&f, &[], &[1.0]),
            Err(Error::EmptyGrid)
        ));
        assert!(matches!(
            certify_lambda_concave_increasing(&f, &[1.0, 0.5], &[1.0]),
            Err(Error::UnsortedGrid)
        ));
        assert!(matches!(
            certify_lambda_concave_increasing(&f, &[1.0], &[-1.0]),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn validation() {
        assert!(MarginalSpec::new(MarginalFamily::Phr { baseline: EXP1 }, 0.0).is_err());
        assert!(MarginalSpec::new(
            MarginalFamily::Phr {
                baseline: Baseline::Exponential { rate: -1.0 }
            },
            1.0
        )
        .is_err());
        assert!(MarginalSpec::new(
            MarginalFamily::LomaxExponential {
                alpha: 0.0,
                beta: 1.0
            },
            1.0
        )
        .is_err());
        let m = MarginalSpec::new(MarginalFamily::Phr { baseline: EXP1 }, 2.0).unwrap();
        assert_eq!(m.lambda(), 2.0);
        assert!((m.survival(1.0).unwrap() - (-2.0f64).exp()).abs() < 1e-16);
    }

    fn family_strategy() -> impl Strategy<Value = MarginalFamily> {
        let baseline = prop_oneof![
            (0.1f64..5.0).prop_map(|rate| Baseline::Exponential { rate }),
            (0.1f64..5.0, 0.5f64..3.0).prop_map(|(c, k)| Baseline::StretchedExponential { c, k }),
        ];
        prop_oneof![
            baseline.clone().prop_map(|baseline| MarginalFamily::Phr { baseline }),
            baseline.clone().prop_map(|baseline| MarginalFamily::Prhr { baseline }),
            (baseline, 1.0f64..5.0)
                .prop_map(|(baseline, theta_h)| MarginalFamily::Harris { baseline, theta_h }),
            (0.05f64..1.0, 0.1f64..5.0)
                .prop_map(|(alpha, beta)| MarginalFamily::LomaxExponential { alpha, beta }),
        ]
    }

    proptest! {
        #[test]
        fn strictly_decreasing(f in family_strategy(), lambda in 0.1f64..8.0, a in 0.0f64..3.0, b in 0.0f64..3.0) {
            prop_assume!((a - b).abs() > 1e-6);
            let (x1, x2) = if a < b { (a, b) } else { (b, a) };
            let s1 = f.survival(x1, lambda).unwrap();
            let s2 = f.survival(x2, lambda).unwrap();
            prop_assert!(s1 >= s2);
            if s2 > 1e-300 {
                prop_assert!(s1 > s2, "{} <= {}", s1, s2);
            }
        }

        #[test]
        fn closed_form_partials_match_differences(f in family_strategy(), lambda in 0.3f64..6.0, x in 0.1f64..3.0) {
            // deep in the tail the step is no longer small against 1 / ln S
            prop_assume!(f.survival(x, lambda).unwrap() > 1e-12);
            let (cf1, cf2) = f.lambda_partials(x, lambda).unwrap();
            let ((fd1, fd2), (r1, r2)) = lambda_finite_differences(&f, x, lambda);
            prop_assert!((cf1 - fd1).abs() <= PARTIAL_REL_TOL * cf1.abs() + r1, "{} vs {}", cf1, fd1);
            prop_assert!((cf2 - fd2).abs() <= PARTIAL_REL_TOL * cf2.abs() + r2, "{} vs {}", cf2, fd2);
        }
    }
}
