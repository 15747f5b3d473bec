use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a board on {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },

    #[error("edge {index} is empty")]
    EmptyEdge { index: usize },

    #[error("edge {index} has {len} vertices but the board is declared {expected}-uniform")]
    WrongEdgeSize {
        index: usize,
        len: usize,
        expected: usize,
    },

    #[error("operation requires a uniform hypergraph")]
    NotUniform,

    #[error("vertex counts differ: {0} vs {1}")]
    VertexCountMismatch(usize, usize),

    #[error("work guard exceeded: more than {limit} steps")]
    GuardExceeded { limit: u64 },

    #[error("board has {n} vertices; the solver handles at most {max}")]
    BoardTooLarge { n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("the game is already decided")]
    GameOver,

    #[error("strategy `{strategy}` not applicable: {reason}")]
    Inapplicable { strategy: String, reason: String },

    #[error("strategy `{strategy}` failed: {reason}")]
    StrategyFailure { strategy: String, reason: String },

    #[error("bracket [{lo}, {hi}] does not straddle {target}: rates {rate_lo} and {rate_hi}")]
    BracketNotStraddling {
        lo: f64,
        hi: f64,
        target: f64,
        rate_lo: f64,
        rate_hi: f64,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Errors that reject a request as outside what the library will do
    /// (unmet hypotheses, exceeded work caps), as opposed to malformed input.
    pub fn is_rejection(&self) -> bool {
        matches!(
            self,
            Error::GuardExceeded { .. }
                | Error::BoardTooLarge { .. }
                | Error::Inapplicable { .. }
                | Error::NotUniform
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::EmptyEdge { .. } => "empty_edge",
            Error::WrongEdgeSize { .. } => "wrong_edge_size",
            Error::NotUniform => "not_uniform",
            Error::VertexCountMismatch(..) => "vertex_count_mismatch",
            Error::GuardExceeded { .. } => "guard_exceeded",
            Error::BoardTooLarge { .. } => "board_too_large",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::IllegalMove(_) => "illegal_move",
            Error::GameOver => "game_over",
            Error::Inapplicable { .. } => "inapplicable",
            Error::StrategyFailure { .. } => "strategy_failure",
            Error::BracketNotStraddling { .. } => "bracket",
            Error::DegenerateFit(_) => "degenerate_fit",
            Error::Malformed(_) => "malformed",
        }
    }
}
