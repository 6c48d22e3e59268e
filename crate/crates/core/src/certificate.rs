//! Machine-readable records of numerical premise checks.
//!
//! A certificate is evidence gathered on a finite grid or a finite number of
//! random trials. It is never a proof.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Outcome of scanning an inequality `f(u) >= 0` over a lattice.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GridCertificate {
    pub verdict: bool,
    /// Smallest observed slack; negative values are violations.
    pub min_slack: f64,
    /// Lattice point attaining `min_slack`.
    pub witness: Vec<f64>,
    pub resolution: usize,
    pub tolerance: f64,
    pub points_checked: usize,
}

/// The hypotheses the comparison and bound results rest on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Condition {
    /// `prod p* <= prod p`.
    ProbabilityProduct,
    /// `lambda` is weakly supermajorized by `lambda*`.
    WeakSupermajorization,
    /// `C* <= C` pointwise.
    CopulaDominance,
    /// Marginal survival is increasing and concave in `lambda`.
    LambdaIncreasingConcave,
    /// The copula is Schur-concave.
    SchurConcave,
    /// The copula is positively upper orthant dependent.
    Puod,
    /// Family parameter restriction of a closed-form bound.
    FamilyParameter,
    /// Marginal family or copula family required by the method.
    FamilyMatch,
    /// Two portfolios must have the same marginal family and dimension.
    CommonSetup,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::ProbabilityProduct => "claim-probability product ordering",
            Condition::WeakSupermajorization => "weak supermajorization of lambda vectors",
            Condition::CopulaDominance => "copula dominance",
            Condition::LambdaIncreasingConcave => "survival increasing and concave in lambda",
            Condition::SchurConcave => "Schur-concave copula",
            Condition::Puod => "PUOD copula",
            Condition::FamilyParameter => "family parameter restriction",
            Condition::FamilyMatch => "family match",
            Condition::CommonSetup => "common portfolio setup",
        };
        f.write_str(s)
    }
}

/// One checked hypothesis with the evidence behind the verdict.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PremiseCheck {
    pub condition: Condition,
    pub holds: bool,
    /// Signed slack of the check; negative when it fails.
    pub margin: f64,
    pub detail: String,
}

impl PremiseCheck {
    pub fn new(condition: Condition, holds: bool, margin: f64, detail: impl Into<String>) -> Self {
        Self {
            condition,
            holds,
            margin,
            detail: detail.into(),
        }
    }
}

pub(crate) fn first_failure(checks: &[PremiseCheck]) -> Option<&PremiseCheck> {
    checks.iter().find(|c| !c.holds)
}
