//! Monte Carlo estimation over `H(n, s, p)`.
//!
//! A [`Predicate`] is evaluated on independently sampled boards, sample `i`
//! of a probe using random stream `stream_lo + i`. Counts are reduced in
//! stream order, so the number of worker threads never changes a result.
//! Success rates carry 95% Wilson score intervals.
//!
//! [`find_p_quantile`] bisects on `log p` for the probability at which a
//! monotone predicate crosses a target rate; [`fit_exponent`] regresses
//! `log p_half` on `log n`.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::game::{GameConfig, Side};
use crate::guard::WorkGuard;
use crate::hypergraph::Hypergraph;
use crate::random::{sample, SeedSpec};
use crate::solver::{Solver, SolverOptions};
use crate::strategies::{arena, Player, PlayerKind};

/// Largest `n` for which predicates that solve games exactly are accepted.
pub const DEFAULT_EXACT_CAP: usize = 14;

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

/// Bisection stops once `hi / lo - 1` falls below this.
pub const RELATIVE_WIDTH_STOP: f64 = 0.05;

/// Events measured on a sampled board.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "predicate", rename_all = "snake_case")]
pub enum Predicate {
    HasEdge,
    MaxDegreeGe { d: usize },
    HasKDisjointDStars { k: usize, d: usize },
    AllTreeUnicycle,
    NotAllTreeUnicycle,
    /// Every set of as many vertices as Maker ends up owning (Maker moving
    /// first) contains an edge, so Maker wins however they play.
    CoversAllTSubsets { m: usize, b: usize },
    MakerWinExact { m: usize, b: usize, first: Side },
    /// The named Breaker strategy applies to the board and beats the
    /// solver-optimal Maker, Maker moving first.
    BreakerStrategyWins { strategy: PlayerKind, m: usize, b: usize },
}

impl Predicate {
    /// Builds a predicate from its name, its parameters and the game quotas.
    pub fn from_parts(name: &str, params: &Value, m: usize, b: usize) -> Result<Self> {
        let get = |key: &str| -> Result<usize> {
            params
                .get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| Error::InvalidParameter(format!("predicate `{name}` needs integer `{key}`")))
        };
        let text = |key: &str| params.get(key).and_then(Value::as_str);
        let p = match name {
            "has_edge" => Predicate::HasEdge,
            "max_degree_ge" => Predicate::MaxDegreeGe { d: get("d")? },
            "has_k_disjoint_d_stars" => Predicate::HasKDisjointDStars {
                k: get("k")?,
                d: get("d")?,
            },
            "all_tree_unicycle" => Predicate::AllTreeUnicycle,
            "not_all_tree_unicycle" => Predicate::NotAllTreeUnicycle,
            "covers_all_t_subsets" => Predicate::CoversAllTSubsets { m, b },
            "maker_win_exact" => Predicate::MakerWinExact {
                m,
                b,
                first: text("first").unwrap_or("maker").parse()?,
            },
            "breaker_strategy_wins" => Predicate::BreakerStrategyWins {
                strategy: text("strategy")
                    .ok_or_else(|| Error::InvalidParameter("breaker_strategy_wins needs `strategy`".into()))?
                    .parse()?,
                m,
                b,
            },
            other => return Err(Error::InvalidParameter(format!("unknown predicate `{other}`"))),
        };
        p.check_params()?;
        Ok(p)
    }

    fn check_params(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        match *self {
            Predicate::MaxDegreeGe { d: 0 } => bad("d must be positive"),
            Predicate::HasKDisjointDStars { k, d } if k == 0 || d == 0 => bad("k and d must be positive"),
            Predicate::CoversAllTSubsets { m, b }
            | Predicate::MakerWinExact { m, b, .. }
            | Predicate::BreakerStrategyWins { m, b, .. }
                if m == 0 || b == 0 =>
            {
                bad("quotas must be positive")
            }
            Predicate::BreakerStrategyWins { strategy, .. }
                if !matches!(
                    strategy,
                    PlayerKind::Kill | PlayerKind::DisjointEdges | PlayerKind::TreeUnicycle
                ) =>
            {
                bad("breaker_strategy_wins needs a Breaker strategy")
            }
            _ => Ok(()),
        }
    }

    /// Stable text label, free of commas.
    pub fn label(&self) -> String {
        match *self {
            Predicate::HasEdge => "has_edge".into(),
            Predicate::MaxDegreeGe { d } => format!("max_degree_ge(d={d})"),
            Predicate::HasKDisjointDStars { k, d } => format!("has_k_disjoint_d_stars(k={k};d={d})"),
            Predicate::AllTreeUnicycle => "all_tree_unicycle".into(),
            Predicate::NotAllTreeUnicycle => "not_all_tree_unicycle".into(),
            Predicate::CoversAllTSubsets { m, b } => format!("covers_all_t_subsets(m={m};b={b})"),
            Predicate::MakerWinExact { m, b, first } => {
                format!("maker_win_exact(m={m};b={b};first={first})")
            }
            Predicate::BreakerStrategyWins { strategy, m, b } => {
                format!("breaker_strategy_wins(strategy={strategy};m={m};b={b})")
            }
        }
    }

    /// Quotas the predicate refers to, if any.
    pub fn quotas(&self) -> Option<(usize, usize)> {
        match *self {
            Predicate::CoversAllTSubsets { m, b }
            | Predicate::MakerWinExact { m, b, .. }
            | Predicate::BreakerStrategyWins { m, b, .. } => Some((m, b)),
            _ => None,
        }
    }

    /// Whether adding edges can only turn the predicate from false to true.
    /// The two decreasing predicates are bisected through their complement.
    pub fn is_increasing(&self) -> bool {
        !matches!(
            self,
            Predicate::AllTreeUnicycle | Predicate::BreakerStrategyWins { .. }
        )
    }

    /// Rejects sizes at which the predicate cannot run.
    pub fn validate(&self, n: usize, exact_cap: usize) -> Result<()> {
        match self {
            Predicate::MakerWinExact { .. } | Predicate::BreakerStrategyWins { .. } if n > exact_cap => {
                Err(Error::InvalidParameter(format!(
                    "{} solves games exactly and is limited to n <= {exact_cap}, got n = {n}",
                    self.label()
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, board: &Hypergraph, guard: WorkGuard) -> Result<bool> {
        match *self {
            Predicate::HasEdge => Ok(!board.is_edgeless()),
            Predicate::MaxDegreeGe { d } => Ok(board.max_degree() >= d),
            Predicate::HasKDisjointDStars { k, d } => {
                Ok(board.find_disjoint_d_stars(d, k, guard)?.is_some())
            }
            Predicate::AllTreeUnicycle => board.is_tree_unicycle_collection(),
            Predicate::NotAllTreeUnicycle => Ok(!board.is_tree_unicycle_collection()?),
            Predicate::CoversAllTSubsets { m, b } => {
                let t = GameConfig::maker_first(m, b)?.maker_final_share(board.n());
                board.covers_all_t_subsets(t, guard)
            }
            Predicate::MakerWinExact { m, b, first } => {
                let config = GameConfig::new(m, b, first)?;
                let options = SolverOptions {
                    node_limit: guard.limit,
                    ..SolverOptions::default()
                };
                let state = crate::game::GameState::new(board, &config);
                Ok(Solver::with_options(config, options).solve_state(&state)?.winner == Side::Maker)
            }
            Predicate::BreakerStrategyWins { strategy, m, b } => {
                let config = GameConfig::maker_first(m, b)?;
                let mut breaker = match strategy.instantiate(board, &config, Side::Breaker, 0) {
                    Ok(p) => p,
                    Err(Error::Inapplicable { .. }) => return Ok(false),
                    Err(e) => return Err(e),
                };
                let options = SolverOptions {
                    node_limit: guard.limit,
                    ..SolverOptions::default()
                };
                let mut maker = Player::Optimal(Solver::with_options(config, options));
                Ok(arena(board, &config, &mut maker, &mut breaker)?.winner == Side::Breaker)
            }
        }
    }
}

/// 95% Wilson score interval for `successes` out of `samples`.
pub fn wilson_interval(successes: u64, samples: u64) -> (f64, f64) {
    if samples == 0 {
        return (0.0, 1.0);
    }
    let n = samples as f64;
    let phat = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// One Monte Carlo measurement.
/// Equality ignores the wall time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub s: usize,
    pub m: Option<usize>,
    pub b: Option<usize>,
    /// Decimal text of `p` as given, or the shortest round-trip form of a
    /// computed probe.
    pub p_text: String,
    pub p: f64,
    pub predicate: String,
    pub samples: u64,
    pub successes: u64,
    pub base_seed: u64,
    pub stream_lo: u64,
    /// Exclusive.
    pub stream_hi: u64,
    #[serde(skip)]
    pub wall_time_ms: f64,
}

impl PartialEq for ExperimentRecord {
    fn eq(&self, o: &Self) -> bool {
        (self.n, self.s, self.m, self.b, &self.p_text, self.p.to_bits(), &self.predicate)
            == (o.n, o.s, o.m, o.b, &o.p_text, o.p.to_bits(), &o.predicate)
            && (self.samples, self.successes, self.base_seed, self.stream_lo, self.stream_hi)
                == (o.samples, o.successes, o.base_seed, o.stream_lo, o.stream_hi)
    }
}

impl ExperimentRecord {
    pub fn p_hat(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.successes as f64 / self.samples as f64
        }
    }

    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.successes, self.samples)
    }
}

/// Where and how much to sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub n: usize,
    pub s: usize,
    pub p: f64,
    pub p_text: Option<String>,
    pub samples: u64,
    pub base_seed: u64,
    pub stream_lo: u64,
}

/// Counts how many sampled boards satisfy `predicate`.
pub fn estimate(probe: &Probe, predicate: &Predicate, guard: WorkGuard) -> Result<ExperimentRecord> {
    let started = Instant::now();
    let hits: Vec<bool> = (0..probe.samples)
        .into_par_iter()
        .map(|i| {
            let seed = SeedSpec::new(probe.base_seed, probe.stream_lo + i);
            let board = sample(probe.n, probe.s, probe.p, seed)?;
            predicate.eval(&board, guard)
        })
        .collect::<Result<_>>()?;
    let successes = hits.iter().filter(|&&h| h).count() as u64;
    let (m, b) = match predicate.quotas() {
        Some((m, b)) => (Some(m), Some(b)),
        None => (None, None),
    };
    Ok(ExperimentRecord {
        n: probe.n,
        s: probe.s,
        m,
        b,
        p_text: probe.p_text.clone().unwrap_or_else(|| format!("{}", probe.p)),
        p: probe.p,
        predicate: predicate.label(),
        samples: probe.samples,
        successes,
        base_seed: probe.base_seed,
        stream_lo: probe.stream_lo,
        stream_hi: probe.stream_lo + probe.samples,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Result of a quantile search.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileEstimate {
    pub p: f64,
    pub half_width: f64,
    /// Every probe taken, endpoints first.
    pub probes: Vec<ExperimentRecord>,
}

/// Search interval for `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bracket {
    /// Fixed `[lo, hi]`.
    P(f64, f64),
    /// `[n^lo, n^hi]`.
    NPow(f64, f64),
}

impl Bracket {
    pub fn resolve(&self, n: usize) -> (f64, f64) {
        match *self {
            Bracket::P(lo, hi) => (lo, hi),
            Bracket::NPow(lo, hi) => ((n as f64).powf(lo), (n as f64).powf(hi)),
        }
    }
}

/// Settings shared by the searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSettings {
    pub samples: u64,
    pub base_seed: u64,
    /// First stream used; probe `j` uses `stream_lo + j * samples ..`.
    pub stream_lo: u64,
    pub guard: WorkGuard,
}

/// Bisects on `log p` for where the success rate (of the complement, for
/// decreasing predicates) crosses `target`.
///
/// Each step probes the geometric midpoint. The step moves the bracket when
/// the midpoint's Wilson interval lies entirely on one side of `target`, and
/// stops at the midpoint when the interval contains `target`. It also stops
/// when the bracket is narrower than [`RELATIVE_WIDTH_STOP`]. The reported
/// half-width is the distance from the estimate to the far end of the final
/// bracket.
pub fn find_p_quantile(
    n: usize,
    s: usize,
    predicate: &Predicate,
    target: f64,
    bracket: (f64, f64),
    settings: &SearchSettings,
) -> Result<QuantileEstimate> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && lo < hi && hi <= 1.0) {
        return Err(Error::InvalidParameter(format!("bad bracket [{lo}, {hi}]")));
    }
    let increasing = predicate.is_increasing();
    let rate = |r: &ExperimentRecord| {
        let (l, h) = r.wilson();
        if increasing {
            (r.p_hat(), l, h)
        } else {
            (1.0 - r.p_hat(), 1.0 - h, 1.0 - l)
        }
    };
    let mut probes = Vec::new();
    let probe = |p: f64, probes: &mut Vec<ExperimentRecord>| -> Result<ExperimentRecord> {
        let j = probes.len() as u64;
        let rec = estimate(
            &Probe {
                n,
                s,
                p,
                p_text: None,
                samples: settings.samples,
                base_seed: settings.base_seed,
                stream_lo: settings.stream_lo + j * settings.samples,
            },
            predicate,
            settings.guard,
        )?;
        probes.push(rec.clone());
        Ok(rec)
    };
    let at_lo = probe(lo, &mut probes)?;
    let at_hi = probe(hi, &mut probes)?;
    let (rate_lo, rate_hi) = (rate(&at_lo).0, rate(&at_hi).0);
    if !(rate_lo < target && target < rate_hi) {
        return Err(Error::BracketNotStraddling {
            lo,
            hi,
            target,
            rate_lo,
            rate_hi,
        });
    }
    while hi / lo - 1.0 >= RELATIVE_WIDTH_STOP {
        let mid = (lo * hi).sqrt();
        let rec = probe(mid, &mut probes)?;
        let (_, ci_lo, ci_hi) = rate(&rec);
        if ci_hi < target {
            lo = mid;
        } else if ci_lo > target {
            hi = mid;
        } else {
            return Ok(QuantileEstimate {
                p: mid,
                half_width: (hi - mid).max(mid - lo),
                probes,
            });
        }
    }
    let mid = (lo * hi).sqrt();
    Ok(QuantileEstimate {
        p: mid,
        half_width: (hi - mid).max(mid - lo),
        probes,
    })
}

/// [`find_p_quantile`] at rate one half.
pub fn find_p_half(
    n: usize,
    s: usize,
    predicate: &Predicate,
    bracket: (f64, f64),
    settings: &SearchSettings,
) -> Result<QuantileEstimate> {
    find_p_quantile(n, s, predicate, 0.5, bracket, settings)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub n: usize,
    pub p_half: f64,
    pub half_width: f64,
}

/// Least-squares line through `(ln n, ln p_half)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFit {
    pub points: Vec<ThresholdPoint>,
    pub slope: f64,
    pub intercept: f64,
    /// Residual standard error of the regression.
    pub stderr: f64,
    /// Standard error of the slope.
    pub slope_stderr: f64,
}

pub fn fit_exponent(points: &[ThresholdPoint]) -> Result<ThresholdFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(bad) = points.iter().find(|p| p.n == 0 || p.p_half.is_nan() || p.p_half <= 0.0) {
        return Err(Error::DegenerateFit(format!("non-positive value at n = {}", bad.n)));
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.p_half.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all n are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (k - 2.0)).sqrt();
    Ok(ThresholdFit {
        points: points.to_vec(),
        slope,
        intercept,
        stderr,
        slope_stderr: stderr / sxx.sqrt(),
    })
}

/// Crossing points of two success rates at one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    pub n: usize,
    pub q_lo: f64,
    pub q_hi: f64,
    pub p_lo: f64,
    pub p_lo_half_width: f64,
    pub p_hi: f64,
    pub p_hi_half_width: f64,
    pub ratio: f64,
}

/// For each `n`, the `p` values where the success rate crosses the two
/// quantiles, and their ratio.
pub fn constant_window(
    n_list: &[usize],
    s: usize,
    predicate: &Predicate,
    quantiles: (f64, f64),
    bracket: &Bracket,
    settings: &SearchSettings,
) -> Result<(Vec<WindowRow>, Vec<ExperimentRecord>)> {
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for (i, &n) in n_list.iter().enumerate() {
        let lo_settings = SearchSettings {
            stream_lo: settings.stream_lo + stream_block(2 * i),
            ..*settings
        };
        let hi_settings = SearchSettings {
            stream_lo: settings.stream_lo + stream_block(2 * i + 1),
            ..*settings
        };
        let range = bracket.resolve(n);
        let a = find_p_quantile(n, s, predicate, quantiles.0, range, &lo_settings)?;
        let b = find_p_quantile(n, s, predicate, quantiles.1, range, &hi_settings)?;
        rows.push(WindowRow {
            n,
            q_lo: quantiles.0,
            q_hi: quantiles.1,
            p_lo: a.p,
            p_lo_half_width: a.half_width,
            p_hi: b.p,
            p_hi_half_width: b.half_width,
            ratio: b.p / a.p,
        });
        records.extend(a.probes);
        records.extend(b.probes);
    }
    Ok((rows, records))
}

/// Streams reserved per search within an experiment.
fn stream_block(i: usize) -> u64 {
    (i as u64) << 32
}

/// What an experiment measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentMode {
    /// p-half per n, then a log-log fit.
    #[default]
    PHalf,
    /// Quantile window per n.
    Window,
    /// Plain estimates on a list of p values.
    Grid,
}

/// Experiment file. `predicate` names the event, `params` holds its own
/// parameters (`d`, `k`, `first`, `strategy`); `m` and `b` are the game
/// quotas for the predicates that play games.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub predicate: String,
    #[serde(default)]
    pub params: Value,
    pub n_list: Vec<usize>,
    pub s: usize,
    #[serde(default = "one")]
    pub m: usize,
    #[serde(default = "one")]
    pub b: usize,
    #[serde(default)]
    pub bracket: Option<BracketSpec>,
    pub samples: u64,
    pub base_seed: u64,
    #[serde(default)]
    pub mode: ExperimentMode,
    #[serde(default)]
    pub quantiles: Option<(f64, f64)>,
    /// Decimal strings (or numbers) for grid mode.
    #[serde(default)]
    pub p_list: Vec<Value>,
    #[serde(default)]
    pub exact_cap: Option<usize>,
}

fn one() -> usize {
    1
}

/// Bracket as written in an experiment file: `{"p": ["1e-9", "1e-3"]}` or
/// `{"n_pow": [-4, -2]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketSpec {
    P(Value, Value),
    NPow(f64, f64),
}

/// Parses a probability given as a decimal string or a JSON number.
pub fn parse_probability(v: &Value) -> Result<(String, f64)> {
    let text = match v {
        Value::String(s) => s.trim().to_string(),
        Value::Number(num) => num.to_string(),
        other => return Err(Error::InvalidParameter(format!("not a probability: {other}"))),
    };
    let p: f64 = text
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("not a probability: `{text}`")))?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("probability out of range: {text}")));
    }
    Ok((text, p))
}

/// Everything an experiment produced.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentOutput {
    pub records: Vec<ExperimentRecord>,
    pub points: Vec<ThresholdPoint>,
    pub window: Vec<WindowRow>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn build_predicate(&self) -> Result<Predicate> {
        Predicate::from_parts(&self.predicate, &self.params, self.m, self.b)
    }

    fn bracket(&self) -> Result<Bracket> {
        match &self.bracket {
            None => Err(Error::InvalidParameter("this mode needs a bracket".into())),
            Some(BracketSpec::NPow(lo, hi)) => Ok(Bracket::NPow(*lo, *hi)),
            Some(BracketSpec::P(lo, hi)) => {
                Ok(Bracket::P(parse_probability(lo)?.1, parse_probability(hi)?.1))
            }
        }
    }

    /// Checks everything that can be checked before sampling.
    pub fn validate(&self) -> Result<Predicate> {
        let predicate = self.build_predicate()?;
        GameConfig::maker_first(self.m, self.b)?;
        if self.n_list.is_empty() {
            return Err(Error::InvalidParameter("n_list is empty".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidParameter("samples must be positive".into()));
        }
        let cap = self.exact_cap.unwrap_or(DEFAULT_EXACT_CAP);
        for &n in &self.n_list {
            if self.s == 0 || self.s > n {
                return Err(Error::InvalidParameter(format!("need 1 <= s <= n, got s={} n={n}", self.s)));
            }
            predicate.validate(n, cap)?;
        }
        match self.mode {
            ExperimentMode::PHalf => {
                self.bracket()?;
            }
            ExperimentMode::Window => {
                self.bracket()?;
                let (a, b) = self.quantiles.unwrap_or((0.1, 0.9));
                if !(0.0 < a && a < b && b < 1.0) {
                    return Err(Error::InvalidParameter(format!("bad quantiles ({a}, {b})")));
                }
            }
            ExperimentMode::Grid => {
                if self.p_list.is_empty() {
                    return Err(Error::InvalidParameter("grid mode needs p_list".into()));
                }
                for p in &self.p_list {
                    parse_probability(p)?;
                }
            }
        }
        Ok(predicate)
    }

    pub fn run(&self, guard: WorkGuard) -> Result<ExperimentOutput> {
        let predicate = self.validate()?;
        let settings = SearchSettings {
            samples: self.samples,
            base_seed: self.base_seed,
            stream_lo: 0,
            guard,
        };
        let mut out = ExperimentOutput::default();
        match self.mode {
            ExperimentMode::PHalf => {
                let bracket = self.bracket()?;
                for (i, &n) in self.n_list.iter().enumerate() {
                    let st = SearchSettings {
                        stream_lo: stream_block(i),
                        ..settings
                    };
                    let est = find_p_half(n, self.s, &predicate, bracket.resolve(n), &st)?;
                    out.points.push(ThresholdPoint {
                        n,
                        p_half: est.p,
                        half_width: est.half_width,
                    });
                    out.records.extend(est.probes);
                }
            }
            ExperimentMode::Window => {
                let q = self.quantiles.unwrap_or((0.1, 0.9));
                let (rows, records) =
                    constant_window(&self.n_list, self.s, &predicate, q, &self.bracket()?, &settings)?;
                out.window = rows;
                out.records = records;
            }
            ExperimentMode::Grid => {
                let mut block = 0;
                for &n in &self.n_list {
                    for pv in &self.p_list {
                        let (text, p) = parse_probability(pv)?;
                        let probe = Probe {
                            n,
                            s: self.s,
                            p,
                            p_text: Some(text),
                            samples: self.samples,
                            base_seed: self.base_seed,
                            stream_lo: stream_block(block),
                        };
                        block += 1;
                        out.records.push(estimate(&probe, &predicate, guard)?);
                    }
                }
            }
        }
        for r in &mut out.records {
            r.m.get_or_insert(self.m);
            r.b.get_or_insert(self.b);
        }
        Ok(out)
    }
}

pub const CSV_HEADER: &str =
    "n,s,m,b,p,predicate,samples,successes,p_hat,ci_low,ci_high,base_seed,stream_lo,stream_hi";

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Results table; floats in shortest round-trip form.
pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let (lo, hi) = r.wilson();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.s,
            opt(r.m),
            opt(r.b),
            r.p_text,
            r.predicate,
            r.samples,
            r.successes,
            r.p_hat(),
            lo,
            hi,
            r.base_seed,
            r.stream_lo,
            r.stream_hi
        );
    }
    out
}

pub fn records_from_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(Error::Malformed("unexpected CSV header".into()));
    }
    let bad = |line: usize, what: &str| Error::Malformed(format!("line {}: bad {what}", line + 2));
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 14 {
            return Err(bad(i, "field count"));
        }
        let int = |k: usize, name: &str| f[k].parse::<u64>().map_err(|_| bad(i, name));
        let maybe = |k: usize, name: &str| -> Result<Option<usize>> {
            if f[k].is_empty() {
                Ok(None)
            } else {
                Ok(Some(f[k].parse().map_err(|_| bad(i, name))?))
            }
        };
        let p: f64 = f[4].parse().map_err(|_| bad(i, "p"))?;
        out.push(ExperimentRecord {
            n: int(0, "n")? as usize,
            s: int(1, "s")? as usize,
            m: maybe(2, "m")?,
            b: maybe(3, "b")?,
            p_text: f[4].to_string(),
            p,
            predicate: f[5].to_string(),
            samples: int(6, "samples")?,
            successes: int(7, "successes")?,
            base_seed: int(11, "base_seed")?,
            stream_lo: int(12, "stream_lo")?,
            stream_hi: int(13, "stream_hi")?,
            wall_time_ms: 0.0,
        });
    }
    Ok(out)
}

/// Recovers one p-half per `n` from raw probe rows by log-linear
/// interpolation between the two probes whose rates straddle one half most
/// tightly. Direction is read off the data: if the rate falls with `p` the
/// complement is used.
pub fn points_from_records(records: &[ExperimentRecord]) -> Result<Vec<ThresholdPoint>> {
    let mut ns: Vec<usize> = records.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut points = Vec::new();
    for n in ns {
        let mut rows: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.n == n)
            .map(|r| (r.p, r.p_hat()))
            .collect();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (first, last) = (rows[0].1, rows[rows.len() - 1].1);
        if first > last {
            for r in &mut rows {
                r.1 = 1.0 - r.1;
            }
        }
        let lo = rows.iter().rev().find(|r| r.1 < 0.5).copied();
        let hi = rows.iter().find(|r| r.1 >= 0.5).copied();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::DegenerateFit(format!("no crossing of one half at n = {n}")));
        };
        let (a, b) = if lo.0 < hi.0 { (lo, hi) } else { (hi, lo) };
        let t = if (b.1 - a.1).abs() > 0.0 { (0.5 - a.1) / (b.1 - a.1) } else { 0.5 };
        let t = t.clamp(0.0, 1.0);
        let p_half = (a.0.ln() + t * (b.0.ln() - a.0.ln())).exp();
        points.push(ThresholdPoint {
            n,
            p_half,
            half_width: (b.0 - a.0) / 2.0,
        });
    }
    Ok(points)
}

/// Static log-log scatter of the points with the fitted line.
pub fn fit_svg(fit: &ThresholdFit) -> String {
    let (w, h, pad) = (480.0, 360.0, 50.0);
    let xs: Vec<f64> = fit.points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = fit.points.iter().map(|p| p.p_half.ln()).collect();
    let (x0, x1) = min_max(&xs);
    let (y0, y1) = min_max(&ys);
    let (x0, x1) = widen(x0, x1);
    let (y0, y1) = widen(y0, y1);
    let px = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let py = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<line x1=\"{pad}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        h - pad,
        w - pad,
        h - pad
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{}\" stroke=\"black\"/>",
        h - pad
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"steelblue\"/>",
        px(x0),
        py(fit.intercept + fit.slope * x0),
        px(x1),
        py(fit.intercept + fit.slope * x1)
    );
    for (x, y) in xs.iter().zip(&ys) {
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"firebrick\"/>",
            px(*x),
            py(*y)
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{pad}\" y=\"{}\" font-size=\"14\">ln n</text>",
        h - 15.0
    );
    let _ = writeln!(svg, "<text x=\"10\" y=\"30\" font-size=\"14\">ln p_half</text>");
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"30\" font-size=\"14\">slope {:.4}</text>",
        w - 160.0,
        fit.slope
    );
    svg.push_str("</svg>\n");
    svg
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}

fn widen(a: f64, b: f64) -> (f64, f64) {
    let span = (b - a).abs().max(1e-9);
    (a - 0.05 * span, b + 0.05 * span)
}
