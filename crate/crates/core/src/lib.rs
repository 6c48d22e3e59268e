//! Smallest claim amount in a portfolio of dependent risks.
//!
//! A portfolio pairs claim indicators `I_i ~ Bernoulli(p_i)` with severities
//! `X_i` drawn from one parametric survival family, coupled through an
//! Archimedean survival copula. This crate evaluates the survival function of
//! `Y_{1:n} = min_i I_i X_i`, its analytic bounds, and stochastic-order
//! verdicts between two portfolios.
//!
//! The crate is `no_std` and only needs `alloc`. IO, sampling and the command
//! line live in the `minclaim` crate.

#![no_std]
// `!(a < b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod certificate;
pub mod copula;
pub mod error;
pub mod majorization;
pub mod marginals;
pub mod orders;
pub mod portfolio;

mod math;
mod rng;

pub use certificate::{Condition, GridCertificate, PremiseCheck};
pub use copula::{CopulaSpec, Family};
pub use error::{Error, Result};
pub use marginals::{Baseline, MarginalFamily, MarginalSpec};
pub use orders::{Direction, OrderVerdict, Relation, Witness};
pub use portfolio::{BoundsCurve, BoundsMethod, BoundsOptions, Portfolio, SurvivalCurve};

/// Absolute slack tolerated by lattice certificates before a point counts as a
/// violation.
pub const GRID_EPS: f64 = 1e-9;

/// Evenly spaced grid of `n` points on `[start, end]`.
pub fn linspace(start: f64, end: f64, n: usize) -> alloc::vec::Vec<f64> {
    match n {
        0 => alloc::vec::Vec::new(),
        1 => alloc::vec![start],
        _ => {
            let step = (end - start) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { end } else { start + step * i as f64 })
                .collect()
        }
    }
}
