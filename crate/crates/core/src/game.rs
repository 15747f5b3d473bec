//! The `(m, b)` Maker-Breaker game: configuration, positions, move legality
//! and the residual reduction the solver works on.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{is_subset, Hypergraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Maker,
    Breaker,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Maker => Side::Breaker,
            Side::Breaker => Side::Maker,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Maker => "maker",
            Side::Breaker => "breaker",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maker" => Ok(Side::Maker),
            "breaker" => Ok(Side::Breaker),
            other => Err(Error::InvalidParameter(format!(
                "expected `maker` or `breaker`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Free,
    Maker,
    Breaker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ongoing,
    MakerWin,
    BreakerWin,
}

impl Status {
    pub fn winner(self) -> Option<Side> {
        match self {
            Status::Ongoing => None,
            Status::MakerWin => Some(Side::Maker),
            Status::BreakerWin => Some(Side::Breaker),
        }
    }
}

/// Quotas per turn and who opens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub m: usize,
    pub b: usize,
    pub first: Side,
}

impl GameConfig {
    pub fn new(m: usize, b: usize, first: Side) -> Result<Self> {
        if m == 0 || b == 0 {
            return Err(Error::InvalidParameter(format!(
                "quotas must be positive, got m={m}, b={b}"
            )));
        }
        Ok(Self { m, b, first })
    }

    /// Maker-first `(m, b)` game.
    pub fn maker_first(m: usize, b: usize) -> Result<Self> {
        Self::new(m, b, Side::Maker)
    }

    pub fn quota(&self, side: Side) -> usize {
        match side {
            Side::Maker => self.m,
            Side::Breaker => self.b,
        }
    }

    /// How many vertices Maker owns once all `n` vertices are claimed,
    /// if the game is played to the end.
    pub fn maker_final_share(&self, n: usize) -> usize {
        let (mut free, mut maker, mut side) = (n, 0, self.first);
        while free > 0 {
            let q = self.quota(side).min(free);
            if side == Side::Maker {
                maker += q;
            }
            free -= q;
            side = side.other();
        }
        maker
    }
}

/// A sorted set of vertices claimed in one turn.
pub type Move = Vec<Vertex>;

/// A position: who owns which vertex and whose turn it is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState<'a> {
    board: &'a Hypergraph,
    owner: Vec<Owner>,
    to_move: Side,
}

impl<'a> GameState<'a> {
    pub fn new(board: &'a Hypergraph, config: &GameConfig) -> Self {
        Self {
            board,
            owner: vec![Owner::Free; board.n()],
            to_move: config.first,
        }
    }

    /// A position with the given ownership. Fails if `owner` has the wrong
    /// length.
    pub fn with_owners(board: &'a Hypergraph, owner: Vec<Owner>, to_move: Side) -> Result<Self> {
        if owner.len() != board.n() {
            return Err(Error::VertexCountMismatch(owner.len(), board.n()));
        }
        Ok(Self {
            board,
            owner,
            to_move,
        })
    }

    pub fn board(&self) -> &'a Hypergraph {
        self.board
    }

    pub fn owner(&self, v: Vertex) -> Owner {
        self.owner[v as usize]
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owner
    }

    pub fn to_move(&self) -> Side {
        self.to_move
    }

    fn owned_by(&self, who: Owner) -> Vec<Vertex> {
        (0..self.owner.len() as Vertex)
            .filter(|&v| self.owner[v as usize] == who)
            .collect()
    }

    pub fn free_vertices(&self) -> Vec<Vertex> {
        self.owned_by(Owner::Free)
    }

    pub fn maker_vertices(&self) -> Vec<Vertex> {
        self.owned_by(Owner::Maker)
    }

    pub fn breaker_vertices(&self) -> Vec<Vertex> {
        self.owned_by(Owner::Breaker)
    }

    pub fn num_free(&self) -> usize {
        self.owner.iter().filter(|&&o| o == Owner::Free).count()
    }

    pub fn status(&self) -> Status {
        let mut any_live = false;
        for e in self.board.edges() {
            let mut killed = false;
            let mut complete = true;
            for &v in e {
                match self.owner[v as usize] {
                    Owner::Breaker => {
                        killed = true;
                        complete = false;
                    }
                    Owner::Free => complete = false,
                    Owner::Maker => {}
                }
            }
            if complete {
                return Status::MakerWin;
            }
            any_live |= !killed;
        }
        if !any_live || self.num_free() == 0 {
            Status::BreakerWin
        } else {
            Status::Ongoing
        }
    }

    /// Number of vertices the player to move must claim.
    pub fn move_size(&self, config: &GameConfig) -> usize {
        config.quota(self.to_move).min(self.num_free())
    }

    /// Edges with no Breaker vertex, given as their free vertices.
    pub fn live_edges(&self) -> Vec<Vec<Vertex>> {
        self.board
            .edges()
            .iter()
            .filter(|e| e.iter().all(|&v| self.owner[v as usize] != Owner::Breaker))
            .map(|e| {
                e.iter()
                    .copied()
                    .filter(|&v| self.owner[v as usize] == Owner::Free)
                    .collect()
            })
            .collect()
    }

    /// Sorted free vertices lying in some live edge.
    pub fn live_support(&self) -> Vec<Vertex> {
        let mut support: Vec<Vertex> = self.live_edges().into_iter().flatten().collect();
        support.sort_unstable();
        support.dedup();
        support
    }

    /// Moves the search considers: every `q`-subset of the live support.
    /// When the support has fewer than `q` vertices the only move is the
    /// whole support padded with the smallest other free vertices.
    pub fn legal_moves(&self, config: &GameConfig) -> Result<Vec<Move>> {
        if self.status() != Status::Ongoing {
            return Err(Error::GameOver);
        }
        let q = self.move_size(config);
        let support = self.live_support();
        if support.len() <= q {
            let mut mv = support.clone();
            mv.extend(
                self.free_vertices()
                    .into_iter()
                    .filter(|v| support.binary_search(v).is_err())
                    .take(q - support.len()),
            );
            mv.sort_unstable();
            return Ok(vec![mv]);
        }
        Ok(support.into_iter().combinations(q).collect())
    }

    /// Rule check: exactly `min(quota, free)` distinct free vertices.
    pub fn check_move(&self, mv: &[Vertex], config: &GameConfig) -> Result<()> {
        if self.status() != Status::Ongoing {
            return Err(Error::GameOver);
        }
        let q = self.move_size(config);
        if mv.len() != q {
            return Err(Error::IllegalMove(format!(
                "{} must claim exactly {q} vertices, got {}",
                self.to_move,
                mv.len()
            )));
        }
        let mut seen = mv.to_vec();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::IllegalMove("repeated vertex".into()));
        }
        for &v in mv {
            if v as usize >= self.owner.len() {
                return Err(Error::IllegalMove(format!("vertex {v} does not exist")));
            }
            if self.owner[v as usize] != Owner::Free {
                return Err(Error::IllegalMove(format!("vertex {v} is already claimed")));
            }
        }
        Ok(())
    }

    pub fn apply(&self, mv: &[Vertex], config: &GameConfig) -> Result<GameState<'a>> {
        self.check_move(mv, config)?;
        let mut next = self.clone();
        let mark = match self.to_move {
            Side::Maker => Owner::Maker,
            Side::Breaker => Owner::Breaker,
        };
        for &v in mv {
            next.owner[v as usize] = mark;
        }
        next.to_move = self.to_move.other();
        Ok(next)
    }

    pub fn residual(&self) -> ResidualGame {
        let maker_won = self.status() == Status::MakerWin;
        let live = if maker_won { Vec::new() } else { self.live_edges() };
        ResidualGame::reduce(live, self.free_vertices(), maker_won)
    }

    /// Plain-text rendering: one line per edge with ownership marks
    /// (`+v` Maker, `-v` Breaker, `v` free).
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.board.edges().iter().enumerate() {
            let cells: Vec<String> = e
                .iter()
                .map(|&v| match self.owner[v as usize] {
                    Owner::Free => format!("{v}"),
                    Owner::Maker => format!("+{v}"),
                    Owner::Breaker => format!("-{v}"),
                })
                .collect();
            out.push_str(&format!("e{i}: {}\n", cells.join(" ")));
        }
        out
    }
}

/// The game that remains: live edges restricted to free vertices, with
/// duplicates and dominated supersets dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidualGame {
    /// Sorted, non-empty, no edge contains another.
    pub live_edges: Vec<Vec<Vertex>>,
    pub free: Vec<Vertex>,
    /// Maker already owns a whole edge; `live_edges` is then empty.
    pub maker_won: bool,
}

impl ResidualGame {
    pub fn reduce(mut live: Vec<Vec<Vertex>>, mut free: Vec<Vertex>, maker_won: bool) -> Self {
        free.sort_unstable();
        free.dedup();
        for e in &mut live {
            e.sort_unstable();
            e.dedup();
        }
        live.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        live.dedup();
        let mut kept: Vec<Vec<Vertex>> = Vec::with_capacity(live.len());
        for e in live {
            if !kept.iter().any(|k| is_subset(k, &e)) {
                kept.push(e);
            }
        }
        kept.sort();
        Self {
            live_edges: kept,
            free,
            maker_won,
        }
    }

    /// Re-applies the reduction; a fixed point for any reduced game.
    pub fn reduced(&self) -> Self {
        Self::reduce(self.live_edges.clone(), self.free.clone(), self.maker_won)
    }
}
