//! Maker-Breaker games on uniform hypergraphs.
//!
//! Two players alternately claim free vertices of a hypergraph, Maker taking
//! `m` per turn and Breaker `b`. Maker wins by owning every vertex of some
//! edge; Breaker wins by preventing that until the board is full.
//!
//! ```
//! use mbgames::{solve, GameConfig, Hypergraph, Side};
//!
//! let board = Hypergraph::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]])?;
//! let result = solve(&board, &GameConfig::maker_first(2, 1)?)?;
//! assert_eq!(result.winner, Side::Maker);
//! # Ok::<(), mbgames::Error>(())
//! ```
//!
//! Modules, bottom up: [`hypergraph`] (boards and their structure),
//! [`random`] (reproducible sampling from `H(n, s, p)`), [`game`] (rules),
//! [`solver`] (exact search), [`flow`] (edge shrinking by max flow),
//! [`strategies`] (explicit players), [`lab`] (threshold experiments).

pub mod error;
pub mod flow;
pub mod game;
pub mod guard;
pub mod hypergraph;
pub mod lab;
pub mod random;
pub mod solver;
pub mod strategies;

pub use error::{Error, Result};
pub use game::{GameConfig, GameState, Move, Owner, ResidualGame, Side, Status};
pub use guard::WorkGuard;
pub use hypergraph::{Hypergraph, Vertex};
pub use random::SeedSpec;
pub use solver::{solve, SolveResult, Solver};
pub use strategies::{arena, play_match, Player, PlayerKind, Strategy};

// The guide's and README's code blocks run as doctests of these empty modules.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/boards.md")]
    mod boards {}
    #[doc = include_str!("../../../book/src/random.md")]
    mod random {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/strategies.md")]
    mod strategies {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
