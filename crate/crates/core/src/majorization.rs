//! Majorization preorders on real vectors.
//!
//! All three predicates compare partial sums of the ascending arrangement, so
//! they are invariant under permutations of either argument.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Absolute slack on partial-sum comparisons.
pub const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Relation {
    Majorized,
    WeaklySubmajorized,
    WeaklySupermajorized,
}

impl Relation {
    pub fn holds(self, x: &[f64], y: &[f64]) -> Result<bool> {
        match self {
            Relation::Majorized => majorized(x, y),
            Relation::WeaklySubmajorized => weakly_submajorized(x, y),
            Relation::WeaklySupermajorized => weakly_supermajorized(x, y),
        }
    }
}

fn ascending_pair(x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let sort = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(f64::total_cmp);
        v
    };
    Ok((sort(x), sort(y)))
}

/// `x` is weakly submajorized by `y`: every suffix sum of the ascending
/// arrangement of `x` is at most the matching suffix sum of `y`.
pub fn weakly_submajorized(x: &[f64], y: &[f64]) -> Result<bool> {
    let (xs, ys) = ascending_pair(x, y)?;
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in xs.iter().rev().zip(ys.iter().rev()) {
        sx += a;
        sy += b;
        if sx > sy + SUM_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x` is weakly supermajorized by `y`: every prefix sum of the ascending
/// arrangement of `x` is at least the matching prefix sum of `y`.
pub fn weakly_supermajorized(x: &[f64], y: &[f64]) -> Result<bool> {
    let (xs, ys) = ascending_pair(x, y)?;
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(ys.iter()) {
        sx += a;
        sy += b;
        if sx + SUM_TOL < sy {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x` is majorized by `y`: equal totals and the weak supermajorization
/// prefix condition.
pub fn majorized(x: &[f64], y: &[f64]) -> Result<bool> {
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    Ok(weakly_supermajorized(x, y)? && (sx - sy).abs() <= SUM_TOL)
}

/// Moves `delta` from coordinate `from` to coordinate `to`. When
/// `0 <= delta <= v[from] - v[to]` the result is majorized by `v`.
pub fn robin_hood_transfer(v: &[f64], from: usize, to: usize, delta: f64) -> Result<Vec<f64>> {
    let n = v.len();
    if from >= n || to >= n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: from.max(to) + 1,
        });
    }
    if from != to {
        let gap = v[from] - v[to];
        if !(delta >= 0.0 && delta <= gap) {
            return Err(Error::domain("delta", delta, "0 <= delta <= v[from] - v[to]"));
        }
    }
    let mut out = v.to_vec();
    out[from] -= delta;
    out[to] += delta;
    Ok(out)
}

/// Draws a pair `(x, y)` with `relation(x, y)` true.
///
/// `y` has entries in `[0.2, 5)`. `x` starts from `y` after a few Robin Hood
/// transfers; the weak relations then inflate one side uniformly. Every
/// emitted pair is re-checked against the predicate.
pub fn random_comparable_pair(n: usize, relation: Relation, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 2 {
        return Err(Error::domain("n", n as f64, "n >= 2"));
    }
    let mut rng = rng::seeded(seed);
    loop {
        let mut y: Vec<f64> = (0..n).map(|_| 0.2 + 4.8 * rng::unit(&mut rng)).collect();
        let mut x = y.clone();
        let transfers = 1 + rng::below(&mut rng, 2 * n);
        for _ in 0..transfers {
            let i = rng::below(&mut rng, n);
            let j = rng::below(&mut rng, n);
            let (rich, poor) = if x[i] >= x[j] { (i, j) } else { (j, i) };
            let delta = rng::unit(&mut rng) * (x[rich] - x[poor]);
            x = robin_hood_transfer(&x, rich, poor, delta)?;
        }
        let shift = rng::unit(&mut rng);
        match relation {
            Relation::Majorized => {}
            Relation::WeaklySubmajorized => y.iter_mut().for_each(|v| *v += shift),
            Relation::WeaklySupermajorized => x.iter_mut().for_each(|v| *v += shift),
        }
        if relation.holds(&x, &y)? {
            return Ok((x, y));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn submajorization_examples() {
        let x = [1.0, 2.0, 3.0];
        assert!(weakly_submajorized(&x, &x).unwrap());
        assert!(weakly_submajorized(&x, &[0.0, 2.0, 4.0]).unwrap());
        assert!(!weakly_submajorized(&[5.0, 0.0, 0.0], &[1.0, 1.0, 1.0]).unwrap());
    }

    #[test]
    fn supermajorization_examples() {
        let lambda = [3.0, 6.0, 2.0];
        assert!(weakly_supermajorized(&lambda, &lambda).unwrap());
        let mean = 11.0 / 3.0;
        assert!(weakly_supermajorized(&[mean; 3], &lambda).unwrap());
        assert!(weakly_supermajorized(&lambda, &[2.0, 2.0, 2.0]).unwrap());
        assert!(!weakly_supermajorized(&[2.0, 2.0, 2.0], &lambda).unwrap());
    }

    #[test]
    fn majorization_examples() {
        assert!(majorized(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap());
        assert!(majorized(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]).unwrap());
        assert!(!majorized(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap());
        // weak supermajorization alone is not enough
        assert!(!majorized(&[3.0, 3.0], &[1.0, 2.0]).unwrap());
    }

    #[test]
    fn length_mismatch() {
        for rel in [
            Relation::Majorized,
            Relation::WeaklySubmajorized,
            Relation::WeaklySupermajorized,
        ] {
            assert!(matches!(
                rel.holds(&[1.0, 2.0], &[1.0]),
                Err(Error::DimensionMismatch { .. })
            ));
        }
    }

    #[test]
    fn two_point_transfer() {
        let a = 1.5;
        let delta = 0.4;
        let y = vec![a - delta, a + delta];
        assert!(majorized(&[a, a], &y).unwrap());
        let back = robin_hood_transfer(&y, 1, 0, delta).unwrap();
        assert_eq!(back, vec![a, a]);
        assert!(robin_hood_transfer(&y, 0, 1, 0.1).is_err());
    }

    #[test]
    fn near_equal_sums_are_not_flipped_by_rounding() {
        // 0.1 + 0.2 + 0.3 and 0.2 * 3 differ in the last bit
        assert!(majorized(&[0.2, 0.2, 0.2], &[0.1, 0.2, 0.3]).unwrap());
        assert!(majorized(&[0.3, 0.2, 0.1], &[0.6, 0.0, 0.0]).unwrap());
    }

    #[test]
    fn generator_emits_valid_pairs() {
        for seed in 0..50 {
            for rel in [
                Relation::Majorized,
                Relation::WeaklySubmajorized,
                Relation::WeaklySupermajorized,
            ] {
                let (x, y) = random_comparable_pair(4, rel, seed).unwrap();
                assert!(rel.holds(&x, &y).unwrap());
            }
        }
        assert!(random_comparable_pair(1, Relation::Majorized, 0).is_err());
    }

    fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-10.0f64..10.0, n)
    }

    proptest! {
        #[test]
        fn majorized_implies_both_weak(seed in any::<u64>(), n in 2usize..7) {
            let (x, y) = random_comparable_pair(n, Relation::Majorized, seed).unwrap();
            prop_assert!(weakly_submajorized(&x, &y).unwrap());
            prop_assert!(weakly_supermajorized(&x, &y).unwrap());
        }

        #[test]
        fn permutation_invariance((x, y, rot) in (2usize..6).prop_flat_map(|n| (vector(n), vector(n), 0..n))) {
            let mut xp = x.clone();
            xp.rotate_left(rot);
            let mut yp = y.clone();
            yp.reverse();
            for rel in [Relation::Majorized, Relation::WeaklySubmajorized, Relation::WeaklySupermajorized] {
                prop_assert_eq!(rel.holds(&x, &y).unwrap(), rel.holds(&xp, &yp).unwrap());
            }
        }

        #[test]
        fn transitive_chains(seed in any::<u64>(), n in 2usize..6) {
            for rel in [Relation::Majorized, Relation::WeaklySubmajorized, Relation::WeaklySupermajorized] {
                // z -> y -> x built by chaining the generator on its own output
                let (y, z) = random_comparable_pair(n, rel, seed).unwrap();
                let mut r = rng::seeded(seed ^ 0x9e37);
                let mut x = y.clone();
                let i = rng::below(&mut r, n);
                let j = rng::below(&mut r, n);
                let (rich, poor) = if x[i] >= x[j] { (i, j) } else { (j, i) };
                x = robin_hood_transfer(&x, rich, poor, 0.5 * (x[rich] - x[poor])).unwrap();
                if rel == Relation::WeaklySupermajorized {
                    x.iter_mut().for_each(|v| *v += 0.25);
                }
                prop_assert!(rel.holds(&x, &y).unwrap());
                prop_assert!(rel.holds(&x, &z).unwrap());
            }
        }

        #[test]
        fn mean_vector_is_weakly_supermajorized(x in (1usize..8).prop_flat_map(vector)) {
            let mean = x.iter().sum::<f64>() / x.len() as f64;
            let m = vec![mean; x.len()];
            prop_assert!(weakly_supermajorized(&m, &x).unwrap());
        }
    }
}
