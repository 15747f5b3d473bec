//! Constructive strategies with strict applicability checks, and an arena
//! that plays them against each other, the exact solver, or a random mover.
//!
//! Each strategy refuses boards outside the hypotheses under which it is
//! guaranteed to win. Inside them it must win every game; a loss or an
//! illegal move is a bug and is reported as [`Error::StrategyFailure`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::shrunken_edges;
use crate::game::{GameConfig, GameState, Move, Owner, Side, Status};
use crate::guard::WorkGuard;
use crate::hypergraph::{Hypergraph, Star, Vertex};
use crate::random::{SeedSpec, Xoshiro256};
use crate::solver::{Solver, SolverOptions};

pub trait Strategy: Send {
    fn name(&self) -> &'static str;

    fn side(&self) -> Side;

    fn choose(&mut self, state: &GameState<'_>, config: &GameConfig) -> Result<Move>;
}

/// `ceil((b + 1) / m)`: the star size at which Maker's first turn can
/// outrun Breaker's answer.
pub fn critical_degree(config: &GameConfig) -> usize {
    (config.b + 1).div_ceil(config.m)
}

fn inapplicable(strategy: &str, reason: impl Into<String>) -> Error {
    Error::Inapplicable {
        strategy: strategy.to_string(),
        reason: reason.into(),
    }
}

fn failure(strategy: &str, reason: impl Into<String>) -> Error {
    Error::StrategyFailure {
        strategy: strategy.to_string(),
        reason: reason.into(),
    }
}

/// Picks one free vertex from every target edge that is still live and
/// holds a Maker vertex, then tops the move up with the smallest free
/// vertices.
fn answer_touched_edges<'e>(
    name: &str,
    targets: impl IntoIterator<Item = &'e [Vertex]>,
    state: &GameState<'_>,
    config: &GameConfig,
) -> Result<Move> {
    let q = state.move_size(config);
    let mut picks: Vec<Vertex> = Vec::new();
    for e in targets {
        let live = e.iter().all(|&v| state.owner(v) != Owner::Breaker);
        let touched = e.iter().any(|&v| state.owner(v) == Owner::Maker);
        if !live || !touched || e.iter().any(|v| picks.contains(v)) {
            continue;
        }
        let Some(&v) = e.iter().find(|&&v| state.owner(v) == Owner::Free) else {
            return Err(failure(name, format!("edge {e:?} already complete")));
        };
        picks.push(v);
    }
    if picks.len() > q {
        return Err(failure(
            name,
            format!("{} edges need answering but the quota is {q}", picks.len()),
        ));
    }
    Ok(fill_surplus(state, picks, q))
}

/// Tops `picks` up to `q` with the smallest free vertices not yet picked.
fn fill_surplus(state: &GameState<'_>, mut picks: Vec<Vertex>, q: usize) -> Move {
    for v in state.free_vertices() {
        if picks.len() >= q {
            break;
        }
        if !picks.contains(&v) {
            picks.push(v);
        }
    }
    picks.sort_unstable();
    picks
}

/// Breaker answers every edge Maker touches. Wins when every vertex has
/// degree below `ceil((b+1)/m)` and no edge fits in one Maker turn.
#[derive(Debug, Clone)]
pub struct BreakerKill {
    edges: Vec<Vec<Vertex>>,
}

impl BreakerKill {
    pub const NAME: &'static str = "kill";

    pub fn new(board: &Hypergraph, config: &GameConfig) -> Result<Self> {
        let d = critical_degree(config);
        let max_degree = board.max_degree();
        if max_degree >= d {
            return Err(inapplicable(
                Self::NAME,
                format!("max degree {max_degree} is not below ceil((b+1)/m) = {d}"),
            ));
        }
        if let Some(e) = board.edges().iter().find(|e| e.len() <= config.m) {
            return Err(inapplicable(
                Self::NAME,
                format!("edge {e:?} fits in one Maker turn of {}", config.m),
            ));
        }
        Ok(Self {
            edges: board.edges().to_vec(),
        })
    }
}

impl Strategy for BreakerKill {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn side(&self) -> Side {
        Side::Breaker
    }

    fn choose(&mut self, state: &GameState<'_>, config: &GameConfig) -> Result<Move> {
        answer_touched_edges(Self::NAME, self.edges.iter().map(Vec::as_slice), state, config)
    }
}

/// Maker takes the centres of `m` disjoint `ceil((b+1)/m)`-stars, then
/// completes a star edge Breaker has not touched. Requires `m = s - 1` and
/// Maker moving first.
#[derive(Debug, Clone)]
pub struct MakerStar {
    centres: Vec<Vertex>,
    /// Star edges with the centre removed, sorted lexicographically by the
    /// full edge.
    arms: Vec<(Vec<Vertex>, Vec<Vertex>)>,
}

impl MakerStar {
    pub const NAME: &'static str = "star";

    pub fn new(board: &Hypergraph, config: &GameConfig) -> Result<Self> {
        Self::with_guard(board, config, WorkGuard::default())
    }

    pub fn with_guard(board: &Hypergraph, config: &GameConfig, guard: WorkGuard) -> Result<Self> {
        if config.first != Side::Maker {
            return Err(inapplicable(Self::NAME, "Maker must move first"));
        }
        let s = board
            .uniformity()
            .ok_or_else(|| inapplicable(Self::NAME, "board is not uniform"))?;
        if config.m + 1 != s {
            return Err(inapplicable(
                Self::NAME,
                format!("needs m = s - 1, got m={} s={s}", config.m),
            ));
        }
        let d = critical_degree(config);
        let stars: Vec<Star> = board
            .find_disjoint_d_stars(d, config.m, guard)?
            .ok_or_else(|| {
                inapplicable(Self::NAME, format!("no {} disjoint {d}-stars", config.m))
            })?;
        let centres = stars.iter().map(|s| s.centre).collect();
        let mut arms: Vec<(Vec<Vertex>, Vec<Vertex>)> = stars
            .iter()
            .flat_map(|star| {
                star.edges.iter().map(move |&i| {
                    let e = board.edge(i).to_vec();
                    let rest = e.iter().copied().filter(|&v| v != star.centre).collect();
                    (e, rest)
                })
            })
            .collect();
        arms.sort();
        Ok(Self { centres, arms })
    }

    pub fn centres(&self) -> &[Vertex] {
        &self.centres
    }
}

impl Strategy for MakerStar {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn side(&self) -> Side {
        Side::Maker
    }

    fn choose(&mut self, state: &GameState<'_>, config: &GameConfig) -> Result<Move> {
        let q = state.move_size(config);
        if self.centres.iter().all(|&c| state.owner(c) == Owner::Free) {
            return Ok(fill_surplus(state, self.centres.clone(), q));
        }
        let open = self.arms.iter().find(|(edge, _)| {
            edge.iter().all(|&v| state.owner(v) != Owner::Breaker)
        });
        let Some((edge, _)) = open else {
            return Err(failure(Self::NAME, "Breaker touched every star edge"));
        };
        let picks: Vec<Vertex> = edge
            .iter()
            .copied()
            .filter(|&v| state.owner(v) == Owner::Free)
            .collect();
        if picks.len() > q {
            return Err(failure(Self::NAME, format!("edge {edge:?} needs more than {q} picks")));
        }
        Ok(fill_surplus(state, picks, q))
    }
}

/// Breaker on pairwise disjoint edges, each larger than Maker's quota, with
/// `b >= m`: answer inside every edge Maker touches.
#[derive(Debug, Clone)]
pub struct DisjointEdgeBlocker {
    edges: Vec<Vec<Vertex>>,
}

impl DisjointEdgeBlocker {
    pub const NAME: &'static str = "disjoint-edges";

    pub fn new(board: &Hypergraph, config: &GameConfig) -> Result<Self> {
        Self::for_edges(Self::NAME, board.n(), board.edges().to_vec(), config)
    }

    fn for_edges(
        name: &str,
        n: usize,
        edges: Vec<Vec<Vertex>>,
        config: &GameConfig,
    ) -> Result<Self> {
        if config.b < config.m {
            return Err(inapplicable(name, format!("needs b >= m, got m={} b={}", config.m, config.b)));
        }
        if let Some(e) = edges.iter().find(|e| e.len() <= config.m) {
            return Err(inapplicable(
                name,
                format!("edge {e:?} fits in one Maker turn of {}", config.m),
            ));
        }
        let mut seen = vec![false; n];
        for e in &edges {
            for &v in e {
                if std::mem::replace(&mut seen[v as usize], true) {
                    return Err(inapplicable(name, format!("edges share vertex {v}")));
                }
            }
        }
        Ok(Self { edges })
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }
}

impl Strategy for DisjointEdgeBlocker {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn side(&self) -> Side {
        Side::Breaker
    }

    fn choose(&mut self, state: &GameState<'_>, config: &GameConfig) -> Result<Move> {
        answer_touched_edges(Self::NAME, self.edges.iter().map(Vec::as_slice), state, config)
    }
}

/// Breaker on a collection of trees and unicycles with `m <= s - 2` and
/// `m <= b`. Shrinks every edge to `s - 1` vertices so that the shrunken
/// edges are pairwise disjoint, then blocks those. The original board is not
/// kept.
#[derive(Debug, Clone)]
pub struct TreeUnicycleBreaker {
    inner: DisjointEdgeBlocker,
}

impl TreeUnicycleBreaker {
    pub const NAME: &'static str = "tree-unicycle";

    pub fn new(board: &Hypergraph, config: &GameConfig) -> Result<Self> {
        let name = Self::NAME;
        if board.is_edgeless() {
            return Ok(Self {
                inner: DisjointEdgeBlocker { edges: Vec::new() },
            });
        }
        let s = board
            .uniformity()
            .ok_or_else(|| inapplicable(name, "board is not uniform"))?;
        if config.m + 2 > s {
            return Err(inapplicable(name, format!("needs m <= s - 2, got m={} s={s}", config.m)));
        }
        if config.m > config.b {
            return Err(inapplicable(name, format!("needs m <= b, got m={} b={}", config.m, config.b)));
        }
        if !board.is_tree_unicycle_collection()? {
            return Err(inapplicable(name, "board has a component of positive excess"));
        }
        let Some(shrunk) = shrunken_edges(board)? else {
            return Err(failure(name, "no disjoint (s-1)-system on a tree/unicycle board"));
        };
        let inner = DisjointEdgeBlocker::for_edges(name, board.n(), shrunk, config)
            .map_err(|e| failure(name, e.to_string()))?;
        Ok(Self { inner })
    }

    /// The shrunken disjoint system being blocked.
    pub fn shrunken(&self) -> &[Vec<Vertex>] {
        self.inner.edges()
    }
}

impl Strategy for TreeUnicycleBreaker {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn side(&self) -> Side {
        Side::Breaker
    }

    fn choose(&mut self, state: &GameState<'_>, config: &GameConfig) -> Result<Move> {
        answer_touched_edges(Self::NAME, self.inner.edges.iter().map(Vec::as_slice), state, config)
    }
}

/// Who sits in a seat of the arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlayerKind {
    Kill,
    Star,
    DisjointEdges,
    TreeUnicycle,
    Optimal,
    Random,
}

impl PlayerKind {
    pub const ALL: [PlayerKind; 6] = [
        PlayerKind::Kill,
        PlayerKind::Star,
        PlayerKind::DisjointEdges,
        PlayerKind::TreeUnicycle,
        PlayerKind::Optimal,
        PlayerKind::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PlayerKind::Kill => BreakerKill::NAME,
            PlayerKind::Star => MakerStar::NAME,
            PlayerKind::DisjointEdges => DisjointEdgeBlocker::NAME,
            PlayerKind::TreeUnicycle => TreeUnicycleBreaker::NAME,
            PlayerKind::Optimal => "optimal",
            PlayerKind::Random => "random",
        }
    }

    /// Builds a player for `side`, running the applicability check.
    pub fn instantiate(
        self,
        board: &Hypergraph,
        config: &GameConfig,
        side: Side,
        seed: u64,
    ) -> Result<Player> {
        let strategy: Box<dyn Strategy> = match self {
            PlayerKind::Optimal => {
                let options = SolverOptions::default();
                if board.n() > crate::solver::MAX_SOLVER_VERTICES {
                    return Err(Error::BoardTooLarge {
                        n: board.n(),
                        max: crate::solver::MAX_SOLVER_VERTICES,
                    });
                }
                return Ok(Player::Optimal(Solver::with_options(*config, options)));
            }
            PlayerKind::Random => {
                let stream = match side {
                    Side::Maker => 0,
                    Side::Breaker => 1,
                };
                return Ok(Player::Random(SeedSpec::new(seed, stream).rng()));
            }
            PlayerKind::Kill => Box::new(BreakerKill::new(board, config)?),
            PlayerKind::Star => Box::new(MakerStar::new(board, config)?),
            PlayerKind::DisjointEdges => Box::new(DisjointEdgeBlocker::new(board, config)?),
            PlayerKind::TreeUnicycle => Box::new(TreeUnicycleBreaker::new(board, config)?),
        };
        if strategy.side() != side {
            return Err(inapplicable(
                strategy.name(),
                format!("plays {}, seated as {side}", strategy.side()),
            ));
        }
        Ok(Player::Strategy(strategy))
    }
}

impl fmt::Display for PlayerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlayerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PlayerKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown player `{s}`")))
    }
}

#[allow(clippy::large_enum_variant)]
pub enum Player {
    Strategy(Box<dyn Strategy>),
    Optimal(Solver),
    /// Uniform over all sets of free vertices of the required size.
    Random(Xoshiro256),
}

impl Player {
    pub fn name(&self) -> &'static str {
        match self {
            Player::Strategy(s) => s.name(),
            Player::Optimal(_) => "optimal",
            Player::Random(_) => "random",
        }
    }

    pub fn choose(&mut self, state: &GameState<'_>, config: &GameConfig) -> Result<Move> {
        match self {
            Player::Strategy(s) => s.choose(state, config),
            Player::Optimal(solver) => solver.best_move(state),
            Player::Random(rng) => {
                let mut mv = rng.sample(&state.free_vertices(), state.move_size(config));
                mv.sort_unstable();
                Ok(mv)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turn {
    pub side: Side,
    pub picks: Move,
}

/// A complete game record; replayable through [`GameState::apply`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub config: GameConfig,
    pub maker: String,
    pub breaker: String,
    pub turns: Vec<Turn>,
    pub winner: Option<Side>,
}

impl Transcript {
    /// Replays every turn on `board`, checking legality and the recorded
    /// winner.
    pub fn replay<'a>(&self, board: &'a Hypergraph) -> Result<GameState<'a>> {
        let mut state = GameState::new(board, &self.config);
        for turn in &self.turns {
            if turn.side != state.to_move() {
                return Err(Error::IllegalMove(format!("{} moved out of turn", turn.side)));
            }
            state = state.apply(&turn.picks, &self.config)?;
        }
        if state.status().winner() != self.winner {
            return Err(Error::Malformed("recorded winner does not match the replay".into()));
        }
        Ok(state)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArenaOutcome {
    pub winner: Side,
    pub transcript: Transcript,
}

impl ArenaOutcome {
    pub fn turns(&self) -> usize {
        self.transcript.turns.len()
    }
}

/// Plays one game to the end. Any move that breaks the rules aborts with
/// [`Error::StrategyFailure`].
pub fn arena(
    board: &Hypergraph,
    config: &GameConfig,
    maker: &mut Player,
    breaker: &mut Player,
) -> Result<ArenaOutcome> {
    let mut state = GameState::new(board, config);
    let mut turns = Vec::new();
    while state.status() == Status::Ongoing {
        let side = state.to_move();
        let player = match side {
            Side::Maker => &mut *maker,
            Side::Breaker => &mut *breaker,
        };
        let mv = player.choose(&state, config)?;
        state = state.apply(&mv, config).map_err(|e| failure(player.name(), e.to_string()))?;
        turns.push(Turn { side, picks: mv });
    }
    let winner = state.status().winner().expect("game ended");
    Ok(ArenaOutcome {
        winner,
        transcript: Transcript {
            config: *config,
            maker: maker.name().to_string(),
            breaker: breaker.name().to_string(),
            turns,
            winner: Some(winner),
        },
    })
}

/// Convenience wrapper: instantiates both seats and plays.
pub fn play_match(
    board: &Hypergraph,
    config: &GameConfig,
    maker: PlayerKind,
    breaker: PlayerKind,
    seed: u64,
) -> Result<ArenaOutcome> {
    let mut m = maker.instantiate(board, config, Side::Maker, seed)?;
    let mut b = breaker.instantiate(board, config, Side::Breaker, seed)?;
    arena(board, config, &mut m, &mut b)
}
