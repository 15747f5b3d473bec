//! Reproducible sampling of the random `s`-uniform hypergraph `H(n, s, p)`.
//!
//! # Generator
//!
//! Every random stream is a xoshiro256** generator whose four state words are
//! the first four outputs of a SplitMix64 generator seeded with
//!
//! ```text
//! seed_word = base_seed XOR mix64(stream_index * 0x9E3779B97F4A7C15)
//! ```
//!
//! where `mix64` is the SplitMix64 output finalizer and all arithmetic wraps
//! modulo 2^64. Uniform doubles are `(next_u64 >> 11) * 2^-53`.
//!
//! # Sampling
//!
//! The `choose(n, s)` potential edges are ordered by colexicographic rank.
//! Gaps between kept edges are geometric: with `u` uniform in `[0, 1)` the
//! gap is `floor(ln(1 - u) / ln(1 - p))`. Each kept rank is unranked into a
//! vertex set, so the work is proportional to the number of realized edges.

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Identifies one random stream: a base seed plus a stream index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub base_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(base_seed: u64, stream_index: u64) -> Self {
        Self {
            base_seed,
            stream_index,
        }
    }

    pub fn rng(self) -> Xoshiro256 {
        Xoshiro256::from_seed_spec(self)
    }
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64; used only to expand a seed word into generator state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }
}

/// xoshiro256** by Blackman and Vigna.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xoshiro256 {
    s: [u64; 4],
}

impl Xoshiro256 {
    pub fn from_seed_spec(seed: SeedSpec) -> Self {
        let word = seed.base_seed ^ mix64(seed.stream_index.wrapping_mul(GOLDEN));
        let mut sm = SplitMix64::new(word);
        Self {
            s: [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..bound` by rejection; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % bound;
            }
        }
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// `k` distinct elements of `items`, uniformly, in random order.
    pub fn sample<T: Copy>(&mut self, items: &[T], k: usize) -> Vec<T> {
        let mut pool = items.to_vec();
        let k = k.min(pool.len());
        for i in 0..k {
            let j = i + self.below((pool.len() - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

/// `choose(n, k)`, or `None` on `u64` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

fn total_subsets(n: usize, s: usize) -> Result<u64> {
    binomial(n as u64, s as u64).ok_or_else(|| {
        Error::InvalidParameter(format!("choose({n}, {s}) does not fit in 64 bits"))
    })
}

/// The `s`-subset of `0..n` with colexicographic rank `rank`.
pub fn unrank_subset(rank: u64, n: usize, s: usize) -> Result<Vec<Vertex>> {
    let total = total_subsets(n, s)?;
    if rank >= total {
        return Err(Error::InvalidParameter(format!(
            "rank {rank} out of range for choose({n}, {s}) = {total}"
        )));
    }
    Ok(unrank_unchecked(rank, n, s))
}

fn unrank_unchecked(mut rank: u64, n: usize, s: usize) -> Vec<Vertex> {
    let mut out = vec![0; s];
    let mut hi = n as u64;
    for i in (1..=s as u64).rev() {
        // largest c < hi with choose(c, i) <= rank
        let (mut lo, mut top) = (i - 1, hi - 1);
        while lo < top {
            let mid = lo + (top - lo).div_ceil(2);
            if binomial(mid, i).is_some_and(|b| b <= rank) {
                lo = mid;
            } else {
                top = mid - 1;
            }
        }
        rank -= binomial(lo, i).expect("below total");
        out[i as usize - 1] = lo as Vertex;
        hi = lo;
    }
    out
}

/// Colexicographic rank of a strictly increasing subset.
pub fn rank_subset(subset: &[Vertex]) -> u64 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c as u64, i as u64 + 1).expect("rank fits"))
        .sum()
}

fn check_params(n: usize, s: usize, p: f64) -> Result<()> {
    if s == 0 || s > n {
        return Err(Error::InvalidParameter(format!("need 1 <= s <= n, got s={s}, n={n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Iterates the colex ranks of kept edges for one stream.
struct SkipRanks {
    rng: Xoshiro256,
    total: u64,
    next: u64,
    log_q: f64,
    p: f64,
}

impl Iterator for SkipRanks {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.p <= 0.0 || self.next >= self.total {
            return None;
        }
        if self.p < 1.0 {
            let u = self.rng.next_f64();
            let gap = ((1.0 - u).ln() / self.log_q).floor();
            let room = (self.total - self.next) as f64;
            if gap >= room {
                self.next = self.total;
                return None;
            }
            self.next += gap as u64;
            if self.next >= self.total {
                return None;
            }
        }
        let rank = self.next;
        self.next += 1;
        Some(rank)
    }
}

fn skip_ranks(n: usize, s: usize, p: f64, seed: SeedSpec) -> Result<SkipRanks> {
    check_params(n, s, p)?;
    Ok(SkipRanks {
        rng: seed.rng(),
        total: total_subsets(n, s)?,
        next: 0,
        log_q: (-p).ln_1p(),
        p,
    })
}

/// Samples `H(n, s, p)` with geometric skipping.
pub fn sample(n: usize, s: usize, p: f64, seed: SeedSpec) -> Result<Hypergraph> {
    let ranks = skip_ranks(n, s, p, seed)?;
    let mut edges: Vec<Vec<Vertex>> = ranks.map(|r| unrank_unchecked(r, n, s)).collect();
    edges.sort_unstable();
    Ok(Hypergraph::from_canonical(n, s, edges))
}

/// Number of edges a call to [`sample`] with the same arguments would keep,
/// without unranking them.
pub fn sample_edge_count(n: usize, s: usize, p: f64, seed: SeedSpec) -> Result<u64> {
    Ok(skip_ranks(n, s, p, seed)?.count() as u64)
}

/// Reference sampler: one uniform draw per potential edge, in colex order,
/// kept when the draw is below `p`. Cost is `choose(n, s)`; meant for
/// checking [`sample`] on small boards.
pub fn sample_naive(n: usize, s: usize, p: f64, seed: SeedSpec) -> Result<Hypergraph> {
    check_params(n, s, p)?;
    let total = total_subsets(n, s)?;
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for rank in 0..total {
        if rng.next_f64() < p {
            edges.push(unrank_unchecked(rank, n, s));
        }
    }
    edges.sort_unstable();
    Ok(Hypergraph::from_canonical(n, s, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_vectors() {
        // SplitMix64 from seed 0; first outputs of the published reference.
        let mut sm = SplitMix64::new(0);
        assert_eq!(sm.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(sm.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        // Stream 0 uses the base seed unchanged.
        let a = SeedSpec::new(42, 0).rng();
        let mut sm = SplitMix64::new(42);
        let s = [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()];
        assert_eq!(a, Xoshiro256 { s });
    }

    #[test]
    fn streams_differ() {
        let mut a = SeedSpec::new(7, 0).rng();
        let mut b = SeedSpec::new(7, 1).rng();
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn colex_extremes() {
        assert_eq!(unrank_subset(0, 5, 3).unwrap(), vec![0, 1, 2]);
        assert_eq!(unrank_subset(9, 5, 3).unwrap(), vec![2, 3, 4]);
        assert!(unrank_subset(10, 5, 3).is_err());
    }

    #[test]
    fn rank_unrank_roundtrip_exhaustive() {
        for n in 1..=12usize {
            for s in 1..=n {
                let total = binomial(n as u64, s as u64).unwrap();
                let mut prev: Option<Vec<Vertex>> = None;
                for r in 0..total {
                    let sub = unrank_subset(r, n, s).unwrap();
                    assert!(sub.windows(2).all(|w| w[0] < w[1]));
                    assert!((*sub.last().unwrap() as usize) < n);
                    assert_eq!(rank_subset(&sub), r);
                    if let Some(p) = &prev {
                        // colex: compare from the largest element down
                        assert!(p.iter().rev().lt(sub.iter().rev()));
                    }
                    prev = Some(sub);
                }
            }
        }
    }

    #[test]
    fn extreme_probabilities() {
        let g = sample(10, 3, 0.0, SeedSpec::new(1, 0)).unwrap();
        assert!(g.is_edgeless());
        assert_eq!(g.uniformity(), Some(3));
        let g = sample(10, 3, 1.0, SeedSpec::new(1, 0)).unwrap();
        assert_eq!(g.num_edges(), 120);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(sample(3, 4, 0.5, SeedSpec::new(0, 0)).is_err());
        assert!(sample(3, 0, 0.5, SeedSpec::new(0, 0)).is_err());
        assert!(sample(3, 2, 1.5, SeedSpec::new(0, 0)).is_err());
        assert!(sample(3, 2, f64::NAN, SeedSpec::new(0, 0)).is_err());
    }

    #[test]
    fn deterministic() {
        let a = sample(30, 3, 0.01, SeedSpec::new(9, 4)).unwrap();
        let b = sample(30, 3, 0.01, SeedSpec::new(9, 4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            sample_edge_count(30, 3, 0.01, SeedSpec::new(9, 4)).unwrap(),
            a.num_edges() as u64
        );
    }

    #[test]
    fn mean_edge_count_matches_binomial() {
        let (n, s, p) = (100, 3, 1e-4);
        let total = binomial(100, 3).unwrap() as f64;
        let runs = 10_000u64;
        let counts: Vec<f64> = (0..runs)
            .map(|i| sample_edge_count(n, s, p, SeedSpec::new(2024, i)).unwrap() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / runs as f64;
        let expected = total * p;
        assert!((expected - 16.17).abs() < 0.01);
        let se = (total * p * (1.0 - p) / runs as f64).sqrt();
        assert!((mean - expected).abs() < 3.0 * se, "mean {mean} vs {expected}");
    }

    #[test]
    fn per_edge_inclusion_frequency() {
        let (n, s, p) = (6, 3, 0.3);
        let runs = 20_000u64;
        let mut hits = vec![0u64; 20];
        for i in 0..runs {
            let g = sample(n, s, p, SeedSpec::new(5, i)).unwrap();
            for e in g.edges() {
                hits[rank_subset(e) as usize] += 1;
            }
        }
        let se = (p * (1.0 - p) / runs as f64).sqrt();
        for h in hits {
            let freq = h as f64 / runs as f64;
            assert!((freq - p).abs() < 4.0 * se, "frequency {freq}");
        }
    }

    #[test]
    fn below_and_sample_stay_in_range() {
        let mut rng = SeedSpec::new(3, 3).rng();
        for bound in 1..50 {
            assert!(rng.below(bound) < bound);
        }
        let picked = rng.sample(&[1, 2, 3, 4, 5], 3);
        assert_eq!(picked.len(), 3);
        let mut sorted = picked.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 3);
    }
}
