#![allow(dead_code)]

use mbgames::game::{GameConfig, Side};
use mbgames::{Hypergraph, Owner, Vertex};
use proptest::prelude::*;

/// Boards on `n` vertices whose edges all have size `s`.
pub fn uniform_board(n: usize, s: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    prop::collection::vec(prop::collection::btree_set(0..n as Vertex, s), 0..=max_edges)
        .prop_map(move |edges| {
            let edges = edges.into_iter().map(|e| e.into_iter().collect::<Vec<_>>());
            Hypergraph::with_uniformity(n, s, edges).expect("valid edges")
        })
}

/// Small uniform boards with `2 <= s <= 3` and `s <= n <= max_n`.
pub fn small_board(max_n: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (2usize..=3)
        .prop_flat_map(move |s| (Just(s), s..=max_n))
        .prop_flat_map(move |(s, n)| uniform_board(n, s, max_edges))
}

pub fn any_config() -> impl Strategy<Value = GameConfig> {
    (1usize..=2, 1usize..=2, any::<bool>()).prop_map(|(m, b, maker_first)| {
        let first = if maker_first { Side::Maker } else { Side::Breaker };
        GameConfig::new(m, b, first).expect("positive quotas")
    })
}

/// Plain minimax over every set of free vertices of the required size,
/// played until Maker owns an edge or no vertex is free.
pub fn brute_force(board: &Hypergraph, owner: &mut [Owner], to_move: Side, config: &GameConfig) -> Side {
    if board
        .edges()
        .iter()
        .any(|e| e.iter().all(|&v| owner[v as usize] == Owner::Maker))
    {
        return Side::Maker;
    }
    let free: Vec<usize> = (0..owner.len()).filter(|&v| owner[v] == Owner::Free).collect();
    if free.is_empty() {
        return Side::Breaker;
    }
    let q = config.quota(to_move).min(free.len());
    let mark = match to_move {
        Side::Maker => Owner::Maker,
        Side::Breaker => Owner::Breaker,
    };
    let mut pick = Vec::new();
    if search(board, owner, &free, 0, q, mark, &mut pick, to_move, config) {
        to_move
    } else {
        to_move.other()
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    board: &Hypergraph,
    owner: &mut [Owner],
    free: &[usize],
    from: usize,
    q: usize,
    mark: Owner,
    pick: &mut Vec<usize>,
    to_move: Side,
    config: &GameConfig,
) -> bool {
    if pick.len() == q {
        for &v in pick.iter() {
            owner[v] = mark;
        }
        let wins = brute_force(board, owner, to_move.other(), config) == to_move;
        for &v in pick.iter() {
            owner[v] = Owner::Free;
        }
        return wins;
    }
    for i in from..free.len() {
        pick.push(free[i]);
        let wins = search(board, owner, free, i + 1, q, mark, pick, to_move, config);
        pick.pop();
        if wins {
            return true;
        }
    }
    false
}

pub fn brute_winner(board: &Hypergraph, config: &GameConfig) -> Side {
    let mut owner = vec![Owner::Free; board.n()];
    brute_force(board, &mut owner, config.first, config)
}

/// `min over edge sets F of (s-1)(|E| - |F|) + |N(F)|`.
pub fn brute_min_cut(board: &Hypergraph, s: usize) -> u64 {
    let e = board.num_edges();
    (0u32..1 << e)
        .map(|mask| {
            let mut covered = vec![false; board.n()];
            let mut taken = 0;
            for i in (0..e).filter(|i| mask >> i & 1 == 1) {
                taken += 1;
                for &v in board.edge(i) {
                    covered[v as usize] = true;
                }
            }
            let nb = covered.iter().filter(|&&c| c).count() as u64;
            (s as u64 - 1) * (e - taken) as u64 + nb
        })
        .min()
        .expect("at least the empty set")
}
