//! The three worked examples, kept as code so they cannot drift from the
//! published parameters.

use minclaim_core::{Baseline, CopulaSpec, MarginalFamily, Portfolio};

use crate::error::{Error, Result};

/// Worked example `k` (1, 2 or 3).
///
/// 1. Frank copula, `theta = 5`; PRHR marginals on `F(x) = 1 - e^{-x}`;
///    `lambda = (3, 6, 2)`, `p = (0.5, 0.6, 0.1)`.
/// 2. Clayton copula, `theta = 3`; Harris marginals with `theta_h = 3` on
///    the baseline survival `e^{-3x^2}`; `lambda = (3, 5, 1)`,
///    `p = (0.2, 0.3, 0.2)`.
/// 3. Gumbel–Hougaard copula, `theta = 2`; Lomax-exponential marginals
///    `LE(0.1, 3, lambda)`; `lambda = (0.7, 5, 0.4)`, `p = (0.1, 0.2, 0.8)`.
pub fn builtin_example(k: u8) -> Result<Portfolio> {
    let (lambdas, probs, marginal, copula) = match k {
        1 => (
            vec![3.0, 6.0, 2.0],
            vec![0.5, 0.6, 0.1],
            MarginalFamily::Prhr {
                baseline: Baseline::Exponential { rate: 1.0 },
            },
            CopulaSpec::frank(5.0, 3)?,
        ),
        2 => (
            vec![3.0, 5.0, 1.0],
            vec![0.2, 0.3, 0.2],
            MarginalFamily::Harris {
                baseline: Baseline::StretchedExponential { c: 3.0, k: 2.0 },
                theta_h: 3.0,
            },
            CopulaSpec::clayton(3.0, 3)?,
        ),
        3 => (
            vec![0.7, 5.0, 0.4],
            vec![0.1, 0.2, 0.8],
            MarginalFamily::LomaxExponential {
                alpha: 0.1,
                beta: 3.0,
            },
            CopulaSpec::gumbel_hougaard(2.0, 3)?,
        ),
        _ => return Err(Error::usage(format!("example must be 1, 2 or 3, got {k}"))),
    };
    Ok(Portfolio::new(lambdas, probs, marginal, copula)?)
}
