use minclaim::builtin::builtin_example;
use minclaim::sampler::{empirical_survival, sample_archimedean, sample_smallest_claim};
use minclaim_core::{Baseline, CopulaSpec, MarginalFamily, Portfolio};

/// Asymptotic 1% critical value of the Kolmogorov–Smirnov statistic.
const KS_CRIT_1PCT: f64 = 1.628;

#[test]
fn independence_columns_are_uniform() {
    let n = 100_000;
    let s = sample_archimedean(&CopulaSpec::independence(3).unwrap(), n, 1).unwrap();
    for j in 0..3 {
        let mut col: Vec<f64> = (0..n).map(|i| s.row(i)[j]).collect();
        col.sort_by(f64::total_cmp);
        let d = col
            .iter()
            .enumerate()
            .map(|(i, &u)| (u - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - u).abs()))
            .fold(0.0, f64::max);
        assert!(d * (n as f64).sqrt() < KS_CRIT_1PCT, "column {j}: D = {d}");
    }
}

#[test]
fn every_family_has_uniform_margins() {
    let n = 100_000;
    for c in [
        CopulaSpec::clayton(3.0, 3).unwrap(),
        CopulaSpec::gumbel_hougaard(2.0, 3).unwrap(),
        CopulaSpec::frank(5.0, 3).unwrap(),
    ] {
        let s = sample_archimedean(&c, n, 2).unwrap();
        let mut col: Vec<f64> = (0..n).map(|i| s.row(i)[1]).collect();
        col.sort_by(f64::total_cmp);
        let d = col
            .iter()
            .enumerate()
            .map(|(i, &u)| (u - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - u).abs()))
            .fold(0.0, f64::max);
        assert!(d * (n as f64).sqrt() < KS_CRIT_1PCT, "{c:?}: D = {d}");
    }
}

#[test]
fn joint_cdf_matches_copula_on_lattice() {
    let n = 100_000;
    for c in [
        CopulaSpec::clayton(3.0, 3).unwrap(),
        CopulaSpec::gumbel_hougaard(2.0, 3).unwrap(),
        CopulaSpec::frank(5.0, 3).unwrap(),
    ] {
        let s = sample_archimedean(&c, n, 3).unwrap();
        for point in [[0.5, 0.5, 0.5], [0.2, 0.7, 0.9], [0.8, 0.3, 0.6]] {
            let hits = (0..n)
                .filter(|&i| s.row(i).iter().zip(&point).all(|(u, t)| u <= t))
                .count() as f64
                / n as f64;
            let target = c.eval(&point).unwrap();
            let se = (target * (1.0 - target) / n as f64).sqrt();
            assert!((hits - target).abs() < 3.0 * se, "{c:?} at {point:?}: {hits} vs {target}");
        }
    }
}

#[test]
fn reflected_sample_is_distinguishable() {
    // P(1 - U_1 <= t, ...) is the survival copula of C, which differs from C
    // for Clayton; the sampler must produce C itself.
    let n = 100_000;
    let c = CopulaSpec::clayton(3.0, 2).unwrap();
    let s = sample_archimedean(&c, n, 4).unwrap();
    let t = 0.1;
    let lower = (0..n).filter(|&i| s.row(i).iter().all(|&u| u <= t)).count() as f64 / n as f64;
    let upper = (0..n).filter(|&i| s.row(i).iter().all(|&u| 1.0 - u <= t)).count() as f64 / n as f64;
    let target = c.eval(&[t, t]).unwrap();
    let se = (target * (1.0 - target) / n as f64).sqrt();
    assert!((lower - target).abs() < 3.0 * se);
    assert!((upper - target).abs() > 10.0 * se, "{upper} vs {target}");
}

#[test]
fn severities_follow_survival_copula() {
    // With p = 1 the model survival is C(S_1(x), S_2(x)) exactly.
    let p = Portfolio::new(
        vec![1.0, 2.5],
        vec![1.0, 1.0],
        MarginalFamily::Phr {
            baseline: Baseline::Exponential { rate: 1.0 },
        },
        CopulaSpec::clayton(3.0, 2).unwrap(),
    )
    .unwrap();
    let n = 200_000;
    let batch = sample_smallest_claim(&p, n, 5).unwrap();
    let xs = [0.1, 0.3, 0.6];
    let emp = empirical_survival(&batch, &xs).unwrap();
    for (i, &x) in xs.iter().enumerate() {
        let g = p.smallest_claim_survival(x).unwrap();
        let se = (g * (1.0 - g) / n as f64).sqrt();
        assert!((emp.curve.values[i] - g).abs() < 3.0 * se, "x={x}");
    }
}

#[test]
fn independent_exponentials() {
    let p = Portfolio::new(
        vec![1.0, 1.0],
        vec![1.0, 1.0],
        MarginalFamily::Phr {
            baseline: Baseline::Exponential { rate: 1.0 },
        },
        CopulaSpec::independence(2).unwrap(),
    )
    .unwrap();
    let n = 1_000_000;
    let batch = sample_smallest_claim(&p, n, 6).unwrap();
    let xs = [0.1, 0.5, 1.0];
    let emp = empirical_survival(&batch, &xs).unwrap();
    for (i, &x) in xs.iter().enumerate() {
        let g = (-2.0 * x).exp();
        let se = (g * (1.0 - g) / n as f64).sqrt();
        assert!((emp.curve.values[i] - g).abs() < 3.0 * se, "x={x}");
    }
}

#[test]
fn example_one_at_half() {
    let p = builtin_example(1).unwrap();
    let n = 1_000_000;
    let batch = sample_smallest_claim(&p, n, 7).unwrap();
    let emp = empirical_survival(&batch, &[0.0, 0.5]).unwrap();
    for (i, x) in [0.0, 0.5].into_iter().enumerate() {
        let g = p.smallest_claim_survival(x).unwrap();
        let se = (g * (1.0 - g) / n as f64).sqrt();
        assert!((emp.curve.values[i] - g).abs() < 3.0 * se, "x={x}");
    }
    assert!(emp.curve.values.windows(2).all(|w| w[1] <= w[0]));
    let far = empirical_survival(&batch, &[1e6]).unwrap();
    assert_eq!(far.curve.values[0], 0.0);
}

#[test]
fn batches_are_reproducible() {
    let p = builtin_example(2).unwrap();
    let a = sample_smallest_claim(&p, 70_000, 11).unwrap();
    let b = sample_smallest_claim(&p, 70_000, 11).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.y_min.len(), 70_000);
    assert!(a.y_min.iter().all(|&y| y >= 0.0));
    assert_ne!(a, sample_smallest_claim(&p, 70_000, 12).unwrap());
}
