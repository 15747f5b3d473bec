use mbgames::random::{binomial, rank_subset, sample, sample_naive, unrank_subset, SeedSpec};
use proptest::prelude::*;

/// Upper 0.1% point of chi-square with `df` degrees of freedom
/// (Wilson-Hilferty).
fn chi_square_critical(df: usize) -> f64 {
    let k = df as f64;
    let z = 3.090_232;
    k * (1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt()).powi(3)
}

fn binomial_pmf(total: u64, p: f64) -> Vec<f64> {
    let mut pmf = vec![(1.0 - p).powi(total as i32)];
    for k in 0..total {
        let next = pmf[k as usize] * (total - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
        pmf.push(next);
    }
    pmf
}

/// Chi-square of observed counts against expected probabilities, pooling
/// adjacent cells until each expects at least 5.
fn chi_square(observed: &[u64], probs: &[f64], runs: u64) -> (f64, usize) {
    let (mut stat, mut cells) = (0.0, 0);
    let (mut o, mut e) = (0.0, 0.0);
    for (k, &p) in probs.iter().enumerate() {
        o += observed.get(k).copied().unwrap_or(0) as f64;
        e += p * runs as f64;
        if e >= 5.0 {
            stat += (o - e) * (o - e) / e;
            cells += 1;
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 {
        stat += (o - e) * (o - e) / e.max(1e-9);
        cells += 1;
    }
    (stat, cells.max(2) - 1)
}

#[test]
fn skip_and_naive_samplers_share_the_edge_count_law() {
    let runs = 20_000u64;
    for (n, s, p) in [(6usize, 2usize, 0.3), (8, 3, 0.05), (7, 3, 0.5), (8, 4, 0.02)] {
        let total = binomial(n as u64, s as u64).unwrap();
        let probs = binomial_pmf(total, p);
        for (name, sampler) in [
            ("skip", sample as fn(usize, usize, f64, SeedSpec) -> mbgames::Result<mbgames::Hypergraph>),
            ("naive", sample_naive),
        ] {
            let mut hist = vec![0u64; total as usize + 1];
            for i in 0..runs {
                hist[sampler(n, s, p, SeedSpec::new(99, i)).unwrap().num_edges()] += 1;
            }
            let (stat, df) = chi_square(&hist, &probs, runs);
            assert!(
                stat < chi_square_critical(df),
                "{name} n={n} s={s} p={p}: chi-square {stat:.1} on {df} df"
            );
        }
    }
}

#[test]
fn streams_differ() {
    let a = sample(30, 3, 0.05, SeedSpec::new(1, 0)).unwrap();
    let b = sample(30, 3, 0.05, SeedSpec::new(1, 1)).unwrap();
    let c = sample(30, 3, 0.05, SeedSpec::new(2, 0)).unwrap();
    assert_ne!(a, b);
    assert_ne!(a, c);
    assert_eq!(a, sample(30, 3, 0.05, SeedSpec::new(1, 0)).unwrap());
}

proptest! {
    #[test]
    fn rank_round_trip((n, s, frac) in (1usize..40).prop_flat_map(|n| (Just(n), 1..=n.min(8), 0.0f64..1.0))) {
        let total = binomial(n as u64, s as u64).unwrap();
        let rank = ((total as f64 * frac) as u64).min(total - 1);
        let subset = unrank_subset(rank, n, s).unwrap();
        prop_assert_eq!(subset.len(), s);
        prop_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        prop_assert!((*subset.last().unwrap() as usize) < n);
        prop_assert_eq!(rank_subset(&subset), rank);
    }

    #[test]
    fn samples_are_canonical(n in 3usize..30, s in 1usize..=3, p in 0.0f64..0.3, seed in any::<u64>()) {
        let h = sample(n, s, p, SeedSpec::new(seed, 0)).unwrap();
        prop_assert!(h.edges().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(h.edges().iter().all(|e| e.len() == s && e.windows(2).all(|w| w[0] < w[1])));
        prop_assert_eq!(h.uniformity(), Some(s));
    }
}
