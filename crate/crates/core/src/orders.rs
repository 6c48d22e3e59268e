//! Stochastic-order verdicts between the smallest claims of two portfolios.
//!
//! Every function compares a portfolio `a` against a portfolio `b`.
//! [`Direction::ALeqB`] means `Y_a <= Y_b` in the relation at hand. In the
//! algebraic characterizations the starred parameters play the role of `a`,
//! so `A_leq_B` reads `Y* <= Y`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::certificate::{first_failure, Condition, PremiseCheck};
use crate::error::{Error, Result};
use crate::majorization::weakly_supermajorized;
use crate::portfolio::{
    auto_resolution, check_dominance, check_lambda_condition, check_schur, Portfolio,
};
use crate::linspace;
use crate::math::powf;

/// Absolute tolerance of the grid comparison of survival curves.
pub const ST_TOL: f64 = 1e-10;
/// Relative tolerance of the numeric hazard and density-ratio checks.
pub const RATIO_TOL: f64 = 1e-10;
/// Relative tolerance of the algebraic equality gates.
pub const EQ_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Relation {
    /// Usual stochastic order.
    St,
    /// Hazard rate order.
    Hr,
    /// Likelihood ratio order.
    Lr,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::St => "st",
            Relation::Hr => "hr",
            Relation::Lr => "lr",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "st" => Ok(Relation::St),
            "hr" => Ok(Relation::Hr),
            "lr" => Ok(Relation::Lr),
            _ => Err(Error::unsupported(format!("unknown relation `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Direction {
    #[cfg_attr(feature = "serde", serde(rename = "A_leq_B"))]
    ALeqB,
    #[cfg_attr(feature = "serde", serde(rename = "B_leq_A"))]
    BLeqA,
    #[cfg_attr(feature = "serde", serde(rename = "equal"))]
    Equal,
    #[cfg_attr(feature = "serde", serde(rename = "incomparable"))]
    Incomparable,
    #[cfg_attr(feature = "serde", serde(rename = "inconclusive"))]
    Inconclusive,
}

impl Direction {
    fn from_pair(a_leq_b: bool, b_leq_a: bool) -> Self {
        match (a_leq_b, b_leq_a) {
            (true, true) => Direction::Equal,
            (true, false) => Direction::ALeqB,
            (false, true) => Direction::BLeqA,
            (false, false) => Direction::Incomparable,
        }
    }

    /// Whether `Y_a <= Y_b` holds under this verdict.
    pub fn a_leq_b(self) -> bool {
        matches!(self, Direction::ALeqB | Direction::Equal)
    }

    pub fn b_leq_a(self) -> bool {
        matches!(self, Direction::BLeqA | Direction::Equal)
    }

    /// The verdict with the roles of `a` and `b` exchanged.
    pub fn reversed(self) -> Self {
        match self {
            Direction::ALeqB => Direction::BLeqA,
            Direction::BLeqA => Direction::ALeqB,
            d => d,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::ALeqB => "A_leq_B",
            Direction::BLeqA => "B_leq_A",
            Direction::Equal => "equal",
            Direction::Incomparable => "incomparable",
            Direction::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A point of the comparison and the signed margin observed there.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Witness {
    pub x: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct OrderVerdict {
    pub relation: Relation,
    pub direction: Direction,
    /// For grid verdicts: where `b` dominates `a` the most. For incomparable
    /// numeric verdicts: the worst violation of `A_leq_B`.
    pub witness: Option<Witness>,
    /// Where `a` dominates `b` the most, or the worst violation of `B_leq_A`.
    pub counter_witness: Option<Witness>,
    /// What was checked, and on which grid with which tolerance.
    pub certificate: String,
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

fn grid_label(xs: &[f64]) -> String {
    format!("{} points on [{}, {}]", xs.len(), xs[0], xs[xs.len() - 1])
}

/// Usual stochastic order on a grid: compares `P(Y_a > x)` and `P(Y_b > x)`
/// pointwise with absolute tolerance [`ST_TOL`].
pub fn check_st_on_grid(a: &Portfolio, b: &Portfolio, xs: &[f64]) -> Result<OrderVerdict> {
    check_grid(xs)?;
    let sa = a.survival_curve(xs)?.values;
    let sb = b.survival_curve(xs)?.values;
    let mut hi = Witness {
        x: xs[0],
        margin: f64::NEG_INFINITY,
    };
    let mut lo = Witness {
        x: xs[0],
        margin: f64::INFINITY,
    };
    for (i, &x) in xs.iter().enumerate() {
        let d = sb[i] - sa[i];
        if d > hi.margin {
            hi = Witness { x, margin: d };
        }
        if d < lo.margin {
            lo = Witness { x, margin: d };
        }
    }
    let direction = Direction::from_pair(lo.margin >= -ST_TOL, hi.margin <= ST_TOL);
    let (witness, counter_witness) = match direction {
        Direction::Equal => (None, None),
        Direction::ALeqB => (Some(hi), None),
        Direction::BLeqA => (None, Some(lo)),
        _ => (Some(hi), Some(lo)),
    };
    Ok(OrderVerdict {
        relation: Relation::St,
        direction,
        witness,
        counter_witness,
        certificate: format!(
            "survival curves compared at {} (abs tol {:e}); max S_b - S_a = {:e}, min = {:e}",
            grid_label(xs),
            ST_TOL,
            hi.margin,
            lo.margin
        ),
    })
}

fn le_rel(a: f64, b: f64) -> bool {
    a <= b + EQ_TOL * a.abs().max(b.abs())
}

fn eq_rel(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQ_TOL * a.abs().max(b.abs())
}

struct Characterized {
    prod_a: f64,
    prod_b: f64,
    sum_a: f64,
    sum_b: f64,
}

fn characterize(
    lambda_b: &[f64],
    lambda_a: &[f64],
    p_b: &[f64],
    p_a: &[f64],
    theta: f64,
) -> Result<Characterized> {
    let n = lambda_b.len();
    if n == 0 {
        return Err(Error::domain("n", 0.0, "at least one policy"));
    }
    for len in [lambda_a.len(), p_b.len(), p_a.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    if !(theta >= 1.0 && theta.is_finite()) {
        return Err(Error::domain("theta", theta, "finite and >= 1"));
    }
    for &l in lambda_a.iter().chain(lambda_b) {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::domain("lambda", l, "finite and > 0"));
        }
    }
    for &p in p_a.iter().chain(p_b) {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain("p", p, "0 < p <= 1"));
        }
    }
    let sum = |v: &[f64]| v.iter().map(|&l| powf(l, theta)).sum::<f64>();
    Ok(Characterized {
        prod_a: p_a.iter().product(),
        prod_b: p_b.iter().product(),
        sum_a: sum(lambda_a),
        sum_b: sum(lambda_b),
    })
}

/// Hazard rate order of PHR portfolios under a common Gumbel–Hougaard
/// copula: `Y* <= Y` in hazard rate exactly when `prod p* <= prod p` and
/// `sum l^theta <= sum l*^theta`.
///
/// The witnesses report the two conditions: the product condition at
/// `x = 0` (the jump of the survival ratio at the atom) and the exponent
/// condition, which does not depend on `x`, at `x = 1`. Margins are signed
/// slacks of `A_leq_B`.
pub fn hr_characterization_gumbel_phr(
    lambda: &[f64],
    lambda_star: &[f64],
    p: &[f64],
    p_star: &[f64],
    theta: f64,
) -> Result<OrderVerdict> {
    let c = characterize(lambda, lambda_star, p, p_star, theta)?;
    let a_leq_b = le_rel(c.prod_a, c.prod_b) && le_rel(c.sum_b, c.sum_a);
    let b_leq_a = le_rel(c.prod_b, c.prod_a) && le_rel(c.sum_a, c.sum_b);
    let direction = Direction::from_pair(a_leq_b, b_leq_a);
    let atom = Witness {
        x: 0.0,
        margin: c.prod_b - c.prod_a,
    };
    let tail = Witness {
        x: 1.0,
        margin: c.sum_a - c.sum_b,
    };
    let (witness, counter_witness) = if direction == Direction::Incomparable {
        (Some(atom), Some(tail))
    } else {
        (None, None)
    };
    Ok(OrderVerdict {
        relation: Relation::Hr,
        direction,
        witness,
        counter_witness,
        certificate: format!(
            "algebraic: prod p* = {}, prod p = {}, sum l*^theta = {}, sum l^theta = {} (theta = {theta}, rel tol {:e})",
            c.prod_a, c.prod_b, c.sum_a, c.sum_b, EQ_TOL
        ),
    })
}

/// Likelihood ratio order of PHR portfolios under a common Gumbel–Hougaard
/// copula, decided only where a closed characterization exists.
///
/// * equal claim-probability products (below one): `lr` holds, in both
///   directions, exactly when the exponent sums agree;
/// * equal exponent sums: `Y* <= Y` in `lr` exactly when `prod p* <= prod p`.
///
/// Anywhere else the verdict is [`Direction::Inconclusive`]. With both
/// products equal to one there is no atom and the first rule does not apply.
pub fn lr_characterization(
    lambda: &[f64],
    lambda_star: &[f64],
    p: &[f64],
    p_star: &[f64],
    theta: f64,
) -> Result<OrderVerdict> {
    let c = characterize(lambda, lambda_star, p, p_star, theta)?;
    let prods_equal = eq_rel(c.prod_a, c.prod_b);
    let sums_equal = eq_rel(c.sum_a, c.sum_b);
    let (direction, regime) = if sums_equal {
        (
            Direction::from_pair(le_rel(c.prod_a, c.prod_b), le_rel(c.prod_b, c.prod_a)),
            "equal exponent sums",
        )
    } else if prods_equal && c.prod_a < 1.0 {
        (Direction::Incomparable, "equal probability products")
    } else {
        (Direction::Inconclusive, "no characterization applies")
    };
    let (witness, counter_witness) = if direction == Direction::Incomparable {
        // the density ratio steps at the atom one way and drifts the other way
        (
            Some(Witness {
                x: 0.0,
                margin: c.sum_b - c.sum_a,
            }),
            Some(Witness {
                x: 1.0,
                margin: c.sum_a - c.sum_b,
            }),
        )
    } else {
        (None, None)
    };
    Ok(OrderVerdict {
        relation: Relation::Lr,
        direction,
        witness,
        counter_witness,
        certificate: format!(
            "algebraic ({regime}): prod p* = {}, prod p = {}, sum l*^theta = {}, sum l^theta = {} (theta = {theta}, rel tol {:e})",
            c.prod_a, c.prod_b, c.sum_a, c.sum_b, EQ_TOL
        ),
    })
}

/// `num_k / den_k` is non-decreasing along the sequence. Pairs with both
/// parts zero carry no information and are skipped. Returns the worst
/// relative violation and where it occurred.
fn ratio_nondecreasing(terms: &[(f64, f64, f64)]) -> (bool, Option<Witness>) {
    let mut worst: Option<Witness> = None;
    let mut prev: Option<(f64, f64)> = None;
    for &(x, num, den) in terms {
        if !(num.is_finite() && den.is_finite()) || (num == 0.0 && den == 0.0) {
            continue;
        }
        if let Some((pn, pd)) = prev {
            let left = pn * den;
            let right = num * pd;
            let scale = left.abs().max(right.abs());
            if scale > 0.0 {
                let v = (left - right) / scale;
                if worst.is_none_or(|w| v > w.margin) {
                    worst = Some(Witness { x, margin: v });
                }
            }
        }
        prev = Some((num, den));
    }
    let holds = worst.is_none_or(|w| w.margin <= RATIO_TOL);
    (holds, worst)
}

fn numeric_verdict(
    relation: Relation,
    ab: (bool, Option<Witness>),
    ba: (bool, Option<Witness>),
    certificate: String,
) -> OrderVerdict {
    let direction = Direction::from_pair(ab.0, ba.0);
    let witness = (!ab.0).then_some(ab.1).flatten();
    let counter_witness = (!ba.0).then_some(ba.1).flatten();
    OrderVerdict {
        relation,
        direction,
        witness,
        counter_witness,
        certificate,
    }
}

/// Likelihood ratio order on a grid for PHR + Gumbel–Hougaard portfolios.
///
/// The law of `Y` has an atom `1 - prod p` at zero and a density on
/// `(0, inf)`, so `Y_a <= Y_b` in `lr` asks that the sequence
/// `(1 - P_b)/(1 - P_a), g_b(x_1)/g_a(x_1), g_b(x_2)/g_a(x_2), ...` be
/// non-decreasing. Consecutive ratios are compared by cross-multiplication
/// with relative tolerance [`RATIO_TOL`].
pub fn numeric_lr_check(a: &Portfolio, b: &Portfolio, xs: &[f64]) -> Result<OrderVerdict> {
    check_grid(xs)?;
    a.phr_gumbel_parts()?;
    b.phr_gumbel_parts()?;
    let mut ga = Vec::with_capacity(xs.len());
    let mut gb = Vec::with_capacity(xs.len());
    for &x in xs {
        ga.push(a.smallest_claim_density(x)?.density_at_x);
        gb.push(b.smallest_claim_density(x)?.density_at_x);
    }
    let atom_a = 1.0 - a.prob_product();
    let atom_b = 1.0 - b.prob_product();
    let seq = |num: &[f64], den: &[f64], an: f64, ad: f64| {
        let mut t = Vec::with_capacity(xs.len() + 1);
        t.push((0.0, an, ad));
        t.extend(xs.iter().enumerate().map(|(i, &x)| (x, num[i], den[i])));
        ratio_nondecreasing(&t)
    };
    let ab = seq(&gb, &ga, atom_b, atom_a);
    let ba = seq(&ga, &gb, atom_a, atom_b);
    Ok(numeric_verdict(
        Relation::Lr,
        ab,
        ba,
        format!(
            "density ratio with atom at 0 checked at {} (rel tol {:e})",
            grid_label(xs),
            RATIO_TOL
        ),
    ))
}

/// Hazard rate order on a grid for PHR + Gumbel–Hougaard portfolios.
///
/// `Y_a <= Y_b` in `hr` asks that `P(Y_b > x)/P(Y_a > x)` be non-decreasing.
/// Across the atom this is `prod p_a <= prod p_b`; on `(0, inf)` it is
/// `r_b(x) <= r_a(x)` for the hazard `r = g / S`, both evaluated in closed
/// form.
pub fn numeric_hr_check(a: &Portfolio, b: &Portfolio, xs: &[f64]) -> Result<OrderVerdict> {
    check_grid(xs)?;
    let pa = a.prob_product();
    let pb = b.prob_product();
    let mut ra = Vec::with_capacity(xs.len());
    let mut rb = Vec::with_capacity(xs.len());
    for &x in xs {
        let hazard = |p: &Portfolio| -> Result<f64> {
            let g = p.smallest_claim_density(x)?.density_at_x;
            let s = p.phr_gumbel_survival(x)?;
            Ok(if s > 0.0 { g / s } else { f64::NAN })
        };
        ra.push(hazard(a)?);
        rb.push(hazard(b)?);
    }
    let check = |p_lo: f64, p_hi: f64, r_lo: &[f64], r_hi: &[f64]| {
        // r_hi is the hazard that must stay smaller
        let mut worst = Witness {
            x: 0.0,
            margin: (p_lo - p_hi) / p_lo.max(p_hi),
        };
        for (i, &x) in xs.iter().enumerate() {
            let (lo, hi) = (r_lo[i], r_hi[i]);
            if !(lo.is_finite() && hi.is_finite()) {
                continue;
            }
            let scale = lo.abs().max(hi.abs());
            if scale > 0.0 {
                let v = (hi - lo) / scale;
                if v > worst.margin {
                    worst = Witness { x, margin: v };
                }
            }
        }
        (worst.margin <= RATIO_TOL, Some(worst))
    };
    let ab = check(pa, pb, &ra, &rb);
    let ba = check(pb, pa, &rb, &ra);
    Ok(numeric_verdict(
        Relation::Hr,
        ab,
        ba,
        format!(
            "atom products {pa} vs {pb} and analytic hazards at {} (rel tol {:e})",
            grid_label(xs),
            RATIO_TOL
        ),
    ))
}

/// Outcome of [`predict_st_from_premises`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StPrediction {
    pub prediction: OrderVerdict,
    /// Premises of `Y_a <= Y_b`.
    pub premises: Vec<PremiseCheck>,
    /// Premises of `Y_b <= Y_a`.
    pub reverse_premises: Vec<PremiseCheck>,
    pub grid: OrderVerdict,
    /// False when the prediction contradicts the grid verdict.
    pub consistent: bool,
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Premises under which `Y_small <= Y_large` in the usual stochastic order.
fn st_premises(
    small: &Portfolio,
    large: &Portfolio,
    xs: &[f64],
    resolution: usize,
    schur_trials: usize,
) -> Result<Vec<PremiseCheck>> {
    let (ps, pl) = (small.prob_product(), large.prob_product());
    let mut out = Vec::with_capacity(5);
    out.push(PremiseCheck::new(
        Condition::ProbabilityProduct,
        le_rel(ps, pl),
        pl - ps,
        format!("prod p = {ps} vs {pl}"),
    ));
    out.push(PremiseCheck::new(
        Condition::WeakSupermajorization,
        weakly_supermajorized(large.lambdas(), small.lambdas())?,
        0.0,
        format!("{:?} against {:?}", large.lambdas(), small.lambdas()),
    ));
    out.push(check_dominance(small.copula(), large.copula(), resolution)?);
    if sorted(small.lambdas()) == sorted(large.lambdas()) {
        out.push(PremiseCheck::new(
            Condition::LambdaIncreasingConcave,
            true,
            0.0,
            "vacuous: lambda vectors agree up to order",
        ));
        out.push(PremiseCheck::new(
            Condition::SchurConcave,
            true,
            0.0,
            "vacuous: lambda vectors agree up to order",
        ));
    } else {
        let lo = small.lambda_min().min(large.lambda_min());
        let hi = small.lambda_max().max(large.lambda_max());
        let lambdas = if hi > lo { linspace(lo, hi, 9) } else { alloc::vec![lo] };
        out.push(check_lambda_condition(small.marginal(), xs, &lambdas)?);
        out.push(check_schur(small.copula(), schur_trials, 0x5eed)?);
    }
    Ok(out)
}

/// Predicts the usual stochastic order from the structural premises
/// (probability products, weak supermajorization of the `lambda` vectors,
/// copula dominance, the marginal `lambda` condition and Schur-concavity)
/// and cross-checks the prediction against [`check_st_on_grid`].
///
/// `xs` is used both for the marginal certificate and the grid comparison.
/// A `resolution` of `0` picks the lattice size automatically.
pub fn predict_st_from_premises(
    a: &Portfolio,
    b: &Portfolio,
    xs: &[f64],
    resolution: usize,
) -> Result<StPrediction> {
    check_grid(xs)?;
    let grid = check_st_on_grid(a, b, xs)?;
    let common = a.dim() == b.dim() && a.marginal() == b.marginal();
    if !common {
        let premise = PremiseCheck::new(
            Condition::CommonSetup,
            false,
            -1.0,
            format!(
                "dimensions {} and {}, marginals {} and {}",
                a.dim(),
                b.dim(),
                a.marginal().name(),
                b.marginal().name()
            ),
        );
        return Ok(StPrediction {
            prediction: OrderVerdict {
                relation: Relation::St,
                direction: Direction::Inconclusive,
                witness: None,
                counter_witness: None,
                certificate: String::from("portfolios do not share a marginal family and size"),
            },
            premises: alloc::vec![premise.clone()],
            reverse_premises: alloc::vec![premise],
            grid,
            consistent: true,
        });
    }
    let resolution = if resolution >= 2 {
        resolution
    } else {
        auto_resolution(a.dim())
    };
    let premises = st_premises(a, b, xs, resolution, 2000)?;
    let reverse_premises = st_premises(b, a, xs, resolution, 2000)?;
    let forward = first_failure(&premises).is_none();
    let backward = first_failure(&reverse_premises).is_none();
    let direction = match Direction::from_pair(forward, backward) {
        Direction::Incomparable => Direction::Inconclusive,
        d => d,
    };
    let consistent = match direction {
        Direction::ALeqB => grid.direction.a_leq_b(),
        Direction::BLeqA => grid.direction.b_leq_a(),
        Direction::Equal => grid.direction == Direction::Equal,
        _ => true,
    };
    let failed = |v: &[PremiseCheck]| {
        first_failure(v).map_or(String::from("all hold"), |c| format!("{} fails", c.condition))
    };
    Ok(StPrediction {
        prediction: OrderVerdict {
            relation: Relation::St,
            direction,
            witness: None,
            counter_witness: None,
            certificate: format!(
                "premises of A_leq_B: {}; of B_leq_A: {}; lattice resolution {resolution}",
                failed(&premises),
                failed(&reverse_premises)
            ),
        },
        premises,
        reverse_premises,
        grid,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::CopulaSpec;
    use crate::marginals::{Baseline, MarginalFamily};
    use crate::rng;
    use alloc::vec;
    use alloc::vec::Vec;

    const EXP1: Baseline = Baseline::Exponential { rate: 1.0 };

    fn frank_prhr(lambdas: Vec<f64>, probs: Vec<f64>) -> Portfolio {
        let n = lambdas.len();
        Portfolio::new(
            lambdas,
            probs,
            MarginalFamily::Prhr { baseline: EXP1 },
            CopulaSpec::frank(5.0, n).unwrap(),
        )
        .unwrap()
    }

    fn phr_gumbel(lambdas: Vec<f64>, probs: Vec<f64>, theta: f64) -> Portfolio {
        let n = lambdas.len();
        Portfolio::new(
            lambdas,
            probs,
            MarginalFamily::Phr { baseline: EXP1 },
            CopulaSpec::gumbel_hougaard(theta, n).unwrap(),
        )
        .unwrap()
    }

    fn grid() -> Vec<f64> {
        linspace(0.0, 4.0, 81)
    }

    #[test]
    fn st_identical_is_equal() {
        let a = frank_prhr(vec![3.0, 6.0, 2.0], vec![0.5, 0.6, 0.1]);
        let v = check_st_on_grid(&a, &a, &grid()).unwrap();
        assert_eq!(v.direction, Direction::Equal);
        assert!(v.witness.is_none());
    }

    #[test]
    fn st_monotone_in_p() {
        let a = frank_prhr(vec![3.0, 6.0, 2.0], vec![0.5, 0.6, 0.1]);
        let b = frank_prhr(vec![3.0, 6.0, 2.0], vec![0.6, 0.6, 0.1]);
        let v = check_st_on_grid(&a, &b, &grid()).unwrap();
        assert_eq!(v.direction, Direction::ALeqB);
        let w = v.witness.unwrap();
        assert_eq!(w.x, 0.0);
        assert!((w.margin - (0.036 - 0.03)).abs() < 1e-15);
        assert_eq!(check_st_on_grid(&b, &a, &grid()).unwrap().direction, Direction::BLeqA);
    }

    #[test]
    fn st_weak_supermajorization_instance() {
        let star = frank_prhr(vec![3.0, 6.0, 2.0], vec![0.5, 0.6, 0.1]);
        let plain = frank_prhr(vec![4.0, 4.0, 3.0], vec![0.5, 0.6, 0.1]);
        assert!(weakly_supermajorized(plain.lambdas(), star.lambdas()).unwrap());
        let v = check_st_on_grid(&star, &plain, &grid()).unwrap();
        assert!(v.direction.a_leq_b(), "{v:?}");
        let p = predict_st_from_premises(&star, &plain, &grid(), 0).unwrap();
        assert_eq!(p.prediction.direction, Direction::ALeqB, "{:?}", p.premises);
        assert!(p.consistent);
    }

    #[test]
    fn st_crossing_curves_are_incomparable() {
        // higher claim probability but heavier discount on severities
        let a = phr_gumbel(vec![1.0, 1.0], vec![0.5, 0.5], 1.0);
        let b = phr_gumbel(vec![3.0, 3.0], vec![0.9, 0.9], 1.0);
        let v = check_st_on_grid(&a, &b, &grid()).unwrap();
        assert_eq!(v.direction, Direction::Incomparable);
        let (w, c) = (v.witness.unwrap(), v.counter_witness.unwrap());
        assert!(w.margin > 0.0 && c.margin < 0.0);
        assert_eq!(w.x, 0.0);
    }

    #[test]
    fn st_rejects_bad_grid() {
        let a = frank_prhr(vec![3.0, 6.0, 2.0], vec![0.5, 0.6, 0.1]);
        assert!(matches!(check_st_on_grid(&a, &a, &[]), Err(Error::EmptyGrid)));
    }

    #[test]
    fn hr_characterization_examples() {
        let v = hr_characterization_gumbel_phr(&[1.0, 2.0], &[1.0, 2.0], &[0.5, 0.5], &[0.5, 0.5], 2.0)
            .unwrap();
        assert_eq!(v.direction, Direction::Equal);

        // sum l^2 = 2 = sum l*^2, prod p* <= prod p
        let ls = [0.1, (2.0f64 - 0.01).sqrt()];
        let v = hr_characterization_gumbel_phr(&[1.0, 1.0], &ls, &[0.9, 0.9], &[0.8, 0.9], 2.0)
            .unwrap();
        assert!(v.direction.a_leq_b());

        // theta = 1: sum l = 5 > 4 = sum l*
        let v = hr_characterization_gumbel_phr(&[2.0, 3.0], &[1.0, 3.0], &[0.5, 0.5], &[0.5, 0.5], 1.0)
            .unwrap();
        assert_eq!(v.direction, Direction::BLeqA);

        assert!(hr_characterization_gumbel_phr(&[1.0], &[1.0], &[0.5], &[0.5], 0.5).is_err());
        assert!(hr_characterization_gumbel_phr(&[1.0], &[0.0], &[0.5], &[0.5], 1.0).is_err());
    }

    #[test]
    fn hr_incomparable_reports_both_conditions() {
        let v = hr_characterization_gumbel_phr(&[1.0, 1.0], &[2.0, 2.0], &[0.5, 0.5], &[0.9, 0.9], 1.5)
            .unwrap();
        assert_eq!(v.direction, Direction::Incomparable);
        assert!(v.witness.unwrap().margin < 0.0);
        assert!(v.counter_witness.unwrap().margin > 0.0);
    }

    #[test]
    fn lr_characterization_examples() {
        let v = lr_characterization(&[3.0, 4.0], &[3.0, 4.0], &[0.5, 0.5], &[0.5, 0.5], 2.0).unwrap();
        assert_eq!(v.direction, Direction::Equal);

        // equal products and sum l^2 = 25 on both sides
        let v = lr_characterization(&[3.0, 4.0], &[24.0f64.sqrt(), 1.0], &[0.5, 0.5], &[0.5, 0.5], 2.0)
            .unwrap();
        assert_eq!(v.direction, Direction::Equal);

        // equal products, different sums
        let v = lr_characterization(&[3.0, 4.0], &[3.0, 5.0], &[0.5, 0.5], &[0.5, 0.5], 2.0).unwrap();
        assert_eq!(v.direction, Direction::Incomparable);

        // equal sums: 0.72 <= 0.81
        let v = lr_characterization(&[1.0, 2.0], &[2.0, 1.0], &[0.9, 0.9], &[0.8, 0.9], 2.0).unwrap();
        assert_eq!(v.direction, Direction::ALeqB);

        // neither side condition
        let v = lr_characterization(&[1.0, 2.0], &[2.0, 2.0], &[0.9, 0.9], &[0.8, 0.9], 2.0).unwrap();
        assert_eq!(v.direction, Direction::Inconclusive);

        // no atom on either side
        let v = lr_characterization(&[1.0, 2.0], &[2.0, 2.0], &[1.0, 1.0], &[1.0, 1.0], 2.0).unwrap();
        assert_eq!(v.direction, Direction::Inconclusive);
    }

    #[test]
    fn numeric_checks_on_identical_portfolios() {
        let a = phr_gumbel(vec![1.0, 2.0, 0.5], vec![0.5, 0.7, 0.9], 2.0);
        assert_eq!(numeric_lr_check(&a, &a, &grid()).unwrap().direction, Direction::Equal);
        assert_eq!(numeric_hr_check(&a, &a, &grid()).unwrap().direction, Direction::Equal);
    }

    #[test]
    fn numeric_lr_equal_exponent_equal_products() {
        let a = phr_gumbel(vec![3.0, 4.0], vec![0.5, 0.5], 2.0);
        let b = phr_gumbel(vec![24.0f64.sqrt(), 1.0], vec![0.5, 0.5], 2.0);
        assert_eq!(numeric_lr_check(&a, &b, &grid()).unwrap().direction, Direction::Equal);
    }

    #[test]
    fn numeric_lr_matches_equal_sum_instance() {
        let star = phr_gumbel(vec![2.0, 1.0], vec![0.8, 0.9], 2.0);
        let plain = phr_gumbel(vec![1.0, 2.0], vec![0.9, 0.9], 2.0);
        let v = numeric_lr_check(&star, &plain, &grid()).unwrap();
        assert_eq!(v.direction, Direction::ALeqB);
        assert!(v.counter_witness.is_some());
    }

    #[test]
    fn numeric_checks_need_closed_form() {
        let a = frank_prhr(vec![3.0, 6.0, 2.0], vec![0.5, 0.6, 0.1]);
        assert!(matches!(numeric_lr_check(&a, &a, &grid()), Err(Error::Unsupported(_))));
        assert!(matches!(numeric_hr_check(&a, &a, &grid()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn hr_characterization_agrees_with_numeric() {
        let mut r = rng::seeded(99);
        let xs = linspace(0.0, 3.0, 31);
        for _ in 0..100 {
            let n = 2 + rng::below(&mut r, 3);
            let theta = 1.0 + 4.0 * rng::unit(&mut r);
            let draw = |r: &mut rand_chacha::ChaCha8Rng, lo: f64, w: f64| -> Vec<f64> {
                (0..n).map(|_| lo + w * rng::unit(r)).collect()
            };
            let (l, ls) = (draw(&mut r, 0.2, 3.0), draw(&mut r, 0.2, 3.0));
            let (p, ps) = (draw(&mut r, 0.1, 0.9), draw(&mut r, 0.1, 0.9));
            let alg = hr_characterization_gumbel_phr(&l, &ls, &p, &ps, theta).unwrap();
            let a = phr_gumbel(ls, ps, theta);
            let b = phr_gumbel(l, p, theta);
            let num = numeric_hr_check(&a, &b, &xs).unwrap();
            assert_eq!(alg.direction, num.direction);
        }
    }

    #[test]
    fn clayton_dominance_prediction() {
        let base = Portfolio::new(
            vec![3.0, 5.0, 1.0],
            vec![0.2, 0.3, 0.2],
            MarginalFamily::Harris {
                baseline: Baseline::StretchedExponential { c: 3.0, k: 2.0 },
                theta_h: 3.0,
            },
            CopulaSpec::clayton(4.0, 3).unwrap(),
        )
        .unwrap();
        let weak = base.with_copula(CopulaSpec::clayton(1.0, 3).unwrap()).unwrap();
        let xs = linspace(0.0, 2.0, 41);
        let p = predict_st_from_premises(&weak, &base, &xs, 0).unwrap();
        assert_eq!(p.prediction.direction, Direction::ALeqB);
        assert!(p.consistent);
        assert!(p.grid.direction.a_leq_b());

        let same = predict_st_from_premises(&base, &base, &xs, 0).unwrap();
        assert_eq!(same.prediction.direction, Direction::Equal);
        assert!(same.consistent);
    }

    #[test]
    fn mismatched_setups_are_inconclusive() {
        let a = frank_prhr(vec![3.0, 6.0, 2.0], vec![0.5, 0.6, 0.1]);
        let b = frank_prhr(vec![3.0, 6.0], vec![0.5, 0.6]);
        let p = predict_st_from_premises(&a, &b, &grid(), 0).unwrap();
        assert_eq!(p.prediction.direction, Direction::Inconclusive);
        assert_eq!(p.premises[0].condition, Condition::CommonSetup);
    }

    #[test]
    fn reversal_is_antisymmetric() {
        let a = frank_prhr(vec![3.0, 6.0, 2.0], vec![0.5, 0.6, 0.1]);
        let b = frank_prhr(vec![4.0, 4.0, 3.0], vec![0.5, 0.6, 0.2]);
        let ab = check_st_on_grid(&a, &b, &grid()).unwrap();
        let ba = check_st_on_grid(&b, &a, &grid()).unwrap();
        assert_eq!(ab.direction.reversed(), ba.direction);
    }
}
