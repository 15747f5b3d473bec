//! Exact solving by memoized game-tree search.
//!
//! Positions are residual games over at most 64 vertices, held as bitmasks:
//! the live edges (free vertices only, no edge containing another), the set
//! of free vertices and the side to move. Search is a boolean minimax with
//! short-circuiting, plus:
//!
//! * a transposition table keyed by a relabeled form of the residual game,
//!   where support vertices are ordered by colour-refinement class and then
//!   by id. Any relabeling yields an isomorphic position, so merges are
//!   always sound; equal positions that relabel differently are just missed.
//! * move generation over incidence classes: free vertices lying in exactly
//!   the same live edges are interchangeable, so a move is a count per class
//!   and takes the smallest vertices of each class.
//! * the Erdős-Selfridge-Beck bound as a Breaker-win certificate, checked
//!   only when Maker is to move.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{GameConfig, GameState, Move, ResidualGame, Side, Status};
use crate::hypergraph::{Hypergraph, Vertex};

/// Largest board the solver accepts.
pub const MAX_SOLVER_VERTICES: usize = 64;

/// Default cap on expanded nodes per solve.
pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

/// Relative margin the Erdős-Selfridge-Beck sum must clear.
pub const CRITERION_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub node_limit: u64,
    pub criterion_pruning: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            node_limit: DEFAULT_NODE_LIMIT,
            criterion_pruning: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub winner: Side,
    /// An optimal move at the root; `None` when the root is already decided.
    pub principal_move: Option<Move>,
    pub nodes_expanded: u64,
    pub memo_hits: u64,
}

#[derive(Debug, Clone)]
struct Pos {
    /// Antichain of live edges, sorted by (size, mask).
    edges: Vec<u64>,
    free: u64,
    side: Side,
}

enum Child {
    MakerCompleted,
    Open(Pos),
}

/// A solver for one game configuration. The transposition table persists
/// across calls, so repeated queries along one game are cheap.
#[derive(Debug)]
pub struct Solver {
    config: GameConfig,
    options: SolverOptions,
    memo: HashMap<Vec<u64>, bool>,
    weights: [f64; 65],
    threshold: f64,
    nodes: u64,
    hits: u64,
}

impl Solver {
    pub fn new(config: GameConfig) -> Self {
        Self::with_options(config, SolverOptions::default())
    }

    pub fn with_options(config: GameConfig, options: SolverOptions) -> Self {
        let base = 1.0 + config.b as f64;
        let mut weights = [0.0; 65];
        for (k, w) in weights.iter_mut().enumerate() {
            *w = base.powf(-(k as f64) / config.m as f64);
        }
        Self {
            config,
            options,
            memo: HashMap::new(),
            weights,
            threshold: (1.0 / base) * (1.0 - CRITERION_MARGIN),
            nodes: 0,
            hits: 0,
        }
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    /// Number of positions currently memoized.
    pub fn table_size(&self) -> usize {
        self.memo.len()
    }

    /// Solves the game from `state` under optimal play.
    pub fn solve_state(&mut self, state: &GameState<'_>) -> Result<SolveResult> {
        self.nodes = 0;
        self.hits = 0;
        let n = state.board().n();
        if n > MAX_SOLVER_VERTICES {
            return Err(Error::BoardTooLarge {
                n,
                max: MAX_SOLVER_VERTICES,
            });
        }
        match state.status() {
            Status::MakerWin => return Ok(self.result(Side::Maker, None)),
            Status::BreakerWin => return Ok(self.result(Side::Breaker, None)),
            Status::Ongoing => {}
        }
        let root = pos_from_state(state);
        let mover = root.side;
        let q = self.quota(&root);
        let mut moves = self.moves(&root, q);
        moves.sort_by(|a, b| lex_cmp(*a, *b));
        self.nodes += 1;

        if let Some(maker_wins) = self.quick(&root) {
            let mover_wins = maker_wins == (mover == Side::Maker);
            if !mover_wins {
                let winner = mover.other();
                return Ok(self.result(winner, Some(mask_to_move(moves[0]))));
            }
        }
        for &mv in &moves {
            let maker_wins = match self.play(&root, mv) {
                Child::MakerCompleted => true,
                Child::Open(child) => self.eval(&child)?,
            };
            if maker_wins == (mover == Side::Maker) {
                return Ok(self.result(mover, Some(mask_to_move(mv))));
            }
        }
        Ok(self.result(mover.other(), Some(mask_to_move(moves[0]))))
    }

    /// Optimal move for the side to move; among optimal moves the
    /// lexicographically smallest.
    pub fn best_move(&mut self, state: &GameState<'_>) -> Result<Move> {
        self.solve_state(state)?.principal_move.ok_or(Error::GameOver)
    }

    fn result(&self, winner: Side, principal_move: Option<Move>) -> SolveResult {
        SolveResult {
            winner,
            principal_move,
            nodes_expanded: self.nodes,
            memo_hits: self.hits,
        }
    }

    fn quota(&self, pos: &Pos) -> u32 {
        (self.config.quota(pos.side) as u32).min(pos.free.count_ones())
    }

    fn criterion_fires(&self, edges: &[u64]) -> bool {
        let mut total = 0.0;
        for &e in edges {
            total += self.weights[e.count_ones() as usize];
            if total >= self.threshold {
                return false;
            }
        }
        total < self.threshold
    }

    /// Decides positions that need no branching. `Some(true)` means Maker
    /// wins.
    fn quick(&self, pos: &Pos) -> Option<bool> {
        if pos.edges.is_empty() || pos.free == 0 {
            return Some(false);
        }
        let q = self.quota(pos);
        match pos.side {
            Side::Maker => {
                if pos.edges[0].count_ones() <= q {
                    return Some(true);
                }
                if self.options.criterion_pruning && self.criterion_fires(&pos.edges) {
                    return Some(false);
                }
            }
            Side::Breaker => {
                let support = pos.edges.iter().fold(0, |acc, e| acc | e);
                if support.count_ones() <= q {
                    return Some(false);
                }
            }
        }
        None
    }

    fn eval(&mut self, pos: &Pos) -> Result<bool> {
        if let Some(v) = self.quick(pos) {
            return Ok(v);
        }
        let key = canonical_key(pos);
        self.eval_keyed(pos, key)
    }

    fn eval_keyed(&mut self, pos: &Pos, key: Vec<u64>) -> Result<bool> {
        if let Some(&v) = self.memo.get(&key) {
            self.hits += 1;
            return Ok(v);
        }
        self.nodes += 1;
        if self.nodes > self.options.node_limit {
            return Err(Error::GuardExceeded {
                limit: self.options.node_limit,
            });
        }
        let q = self.quota(pos);
        let mut moves = self.moves(pos, q);
        self.order_moves(pos, &mut moves);
        let maker_to_move = pos.side == Side::Maker;
        // Maker needs one winning child; Breaker needs every child lost.
        let mut value = !maker_to_move;
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for mv in moves {
            let child_value = match self.play(pos, mv) {
                Child::MakerCompleted => true,
                Child::Open(child) => match self.quick(&child) {
                    Some(v) => v,
                    None => {
                        let k = canonical_key(&child);
                        if !seen.insert(k.clone()) {
                            continue;
                        }
                        self.eval_keyed(&child, k)?
                    }
                },
            };
            if child_value == maker_to_move {
                value = maker_to_move;
                break;
            }
        }
        self.memo.insert(key, value);
        Ok(value)
    }

    fn play(&self, pos: &Pos, mv: u64) -> Child {
        let free = pos.free & !mv;
        match pos.side {
            Side::Maker => {
                let mut edges = Vec::with_capacity(pos.edges.len());
                for &e in &pos.edges {
                    let rest = e & !mv;
                    if rest == 0 {
                        return Child::MakerCompleted;
                    }
                    edges.push(rest);
                }
                Child::Open(Pos {
                    edges: normalize(edges),
                    free,
                    side: Side::Breaker,
                })
            }
            Side::Breaker => Child::Open(Pos {
                edges: pos.edges.iter().copied().filter(|e| e & mv == 0).collect(),
                free,
                side: Side::Maker,
            }),
        }
    }

    /// One representative move per assignment of picks to incidence classes.
    fn moves(&self, pos: &Pos, q: u32) -> Vec<u64> {
        let support = pos.edges.iter().fold(0u64, |acc, e| acc | e);
        if support.count_ones() <= q {
            let mut mv = support;
            let mut pad = pos.free & !support;
            for _ in support.count_ones()..q {
                let low = pad & pad.wrapping_neg();
                mv |= low;
                pad &= !low;
            }
            return vec![mv];
        }
        let words = pos.edges.len().div_ceil(64);
        let mut class_of: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for v in bits(support) {
            let mut sig = vec![0u64; words];
            for (i, &e) in pos.edges.iter().enumerate() {
                if e >> v & 1 == 1 {
                    sig[i / 64] |= 1 << (i % 64);
                }
            }
            let next = classes.len();
            let slot = *class_of.entry(sig).or_insert(next);
            if slot == next {
                classes.push(Vec::new());
            }
            classes[slot].push(v);
        }
        let mut out = Vec::new();
        distribute(&classes, 0, q as usize, 0, &mut out);
        out
    }

    /// Most promising first: for Maker the gain in the Erdős-Selfridge
    /// potential, for Breaker the potential removed. Ties by vertex order.
    fn order_moves(&self, pos: &Pos, moves: &mut [u64]) {
        let w = &self.weights;
        let score = |mv: u64| -> f64 {
            pos.edges
                .iter()
                .filter(|&&e| e & mv != 0)
                .map(|&e| match pos.side {
                    Side::Maker => w[(e & !mv).count_ones() as usize] - w[e.count_ones() as usize],
                    Side::Breaker => w[e.count_ones() as usize],
                })
                .sum()
        };
        let mut scored: Vec<(f64, u64)> = moves.iter().map(|&m| (score(m), m)).collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| lex_cmp(a.1, b.1)));
        for (slot, (_, m)) in moves.iter_mut().zip(scored) {
            *slot = m;
        }
    }
}

/// Solves the game on a fresh board.
pub fn solve(board: &Hypergraph, config: &GameConfig) -> Result<SolveResult> {
    Solver::new(*config).solve_state(&GameState::new(board, config))
}

/// Lexicographically smallest optimal move from `state`.
pub fn best_move(state: &GameState<'_>, config: &GameConfig) -> Result<Move> {
    Solver::new(*config).best_move(state)
}

/// Erdős-Selfridge-Beck: with Maker to move on `residual`, if
/// `sum (1+b)^(-|e|/m) < (1+b)^(-1)` over the live edges then Breaker wins.
/// The sum must be below the bound by a relative margin of
/// [`CRITERION_MARGIN`]; `false` carries no information.
pub fn es_beck_criterion(residual: &ResidualGame, m: usize, b: usize) -> bool {
    if residual.maker_won {
        return false;
    }
    let base = 1.0 + b as f64;
    let total: f64 = residual
        .live_edges
        .iter()
        .map(|e| base.powf(-(e.len() as f64) / m as f64))
        .sum();
    total < (1.0 / base) * (1.0 - CRITERION_MARGIN)
}

/// Smallest `M <= cap` such that Maker, moving first, wins the `(m, b)` game
/// on `M` pairwise disjoint `s`-edges. Only meaningful for `b < m < s`.
pub fn minimal_disjoint_edges_for_maker(
    m: usize,
    b: usize,
    s: usize,
    cap: usize,
) -> Result<Option<usize>> {
    if !(b < m && m < s) {
        return Err(Error::InvalidParameter(format!(
            "need b < m < s (with s <= m Maker wins on one edge, with b >= m no number \
             of disjoint edges suffices); got m={m}, b={b}, s={s}"
        )));
    }
    let config = GameConfig::maker_first(m, b)?;
    for count in 1..=cap {
        let board = disjoint_edges(count, s)?;
        if solve(&board, &config)?.winner == Side::Maker {
            return Ok(Some(count));
        }
    }
    Ok(None)
}

/// `count` disjoint `s`-edges on `count * s` vertices.
pub fn disjoint_edges(count: usize, s: usize) -> Result<Hypergraph> {
    let edges = (0..count).map(|i| ((i * s) as Vertex..((i + 1) * s) as Vertex).collect::<Vec<_>>());
    Hypergraph::with_uniformity(count * s, s, edges)
}

fn pos_from_state(state: &GameState<'_>) -> Pos {
    let free = state
        .free_vertices()
        .into_iter()
        .fold(0u64, |acc, v| acc | 1 << v);
    let edges = state
        .live_edges()
        .into_iter()
        .map(|e| e.into_iter().fold(0u64, |acc, v| acc | 1 << v))
        .collect();
    Pos {
        edges: normalize(edges),
        free,
        side: state.to_move(),
    }
}

fn normalize(mut edges: Vec<u64>) -> Vec<u64> {
    edges.sort_unstable_by_key(|e| (e.count_ones(), *e));
    edges.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(edges.len());
    for e in edges {
        if !kept.iter().any(|k| k & !e == 0) {
            kept.push(e);
        }
    }
    kept
}

fn bits(mut mask: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros();
            mask &= mask - 1;
            Some(v)
        }
    })
}

fn mask_to_move(mask: u64) -> Move {
    bits(mask).collect()
}

/// Lexicographic order of the sorted vertex lists.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    let mut ia = bits(a);
    let mut ib = bits(b);
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x != y => return x.cmp(&y),
            _ => {}
        }
    }
}

fn distribute(classes: &[Vec<u32>], i: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
    if left == 0 {
        out.push(acc);
        return;
    }
    if i == classes.len() {
        return;
    }
    let mut mv = acc;
    distribute(classes, i + 1, left, mv, out);
    for (taken, &v) in classes[i].iter().enumerate().take(left) {
        mv |= 1 << v;
        distribute(classes, i + 1, left - taken - 1, mv, out);
    }
}

/// Ranks signatures: equal signatures get equal ranks, ranks follow the
/// signature order, so the result does not depend on vertex ids.
fn rank_signatures(sigs: &[Vec<u32>]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..sigs.len()).collect();
    order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
    let mut ranks = vec![0u32; sigs.len()];
    let mut rank = 0;
    for w in 0..order.len() {
        if w > 0 && sigs[order[w]] != sigs[order[w - 1]] {
            rank += 1;
        }
        ranks[order[w]] = rank;
    }
    ranks
}

fn canonical_key(pos: &Pos) -> Vec<u64> {
    let support = pos.edges.iter().fold(0u64, |acc, e| acc | e);
    let verts: Vec<u32> = bits(support).collect();
    let mut local = [u8::MAX; 64];
    for (i, &v) in verts.iter().enumerate() {
        local[v as usize] = i as u8;
    }
    let edge_members: Vec<Vec<usize>> = pos
        .edges
        .iter()
        .map(|&e| bits(e).map(|v| local[v as usize] as usize).collect())
        .collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
    for (i, members) in edge_members.iter().enumerate() {
        for &v in members {
            incident[v].push(i);
        }
    }

    let initial: Vec<Vec<u32>> = incident
        .iter()
        .map(|inc| {
            let mut sizes: Vec<u32> = inc.iter().map(|&i| edge_members[i].len() as u32).collect();
            sizes.sort_unstable();
            sizes
        })
        .collect();
    let mut colour = rank_signatures(&initial);
    let mut classes = colour.iter().max().map_or(0, |m| m + 1);
    for _ in 0..verts.len() {
        let edge_sigs: Vec<Vec<u32>> = edge_members
            .iter()
            .map(|members| {
                let mut c: Vec<u32> = members.iter().map(|&v| colour[v]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        let edge_colour = rank_signatures(&edge_sigs);
        let sigs: Vec<Vec<u32>> = incident
            .iter()
            .enumerate()
            .map(|(v, inc)| {
                let mut c: Vec<u32> = inc.iter().map(|&i| edge_colour[i]).collect();
                c.sort_unstable();
                c.insert(0, colour[v]);
                c
            })
            .collect();
        let next = rank_signatures(&sigs);
        let next_classes = next.iter().max().map_or(0, |m| m + 1);
        colour = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }

    let mut order: Vec<usize> = (0..verts.len()).collect();
    order.sort_by_key(|&v| (colour[v], v));
    let mut relabel = vec![0u32; verts.len()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new as u32;
    }
    let mut key: Vec<u64> = edge_members
        .iter()
        .map(|members| members.iter().fold(0u64, |acc, &v| acc | 1 << relabel[v]))
        .collect();
    key.sort_unstable();
    let spare = (pos.free & !support).count_ones() as u64;
    key.push(spare << 1 | (pos.side == Side::Maker) as u64);
    key
}
