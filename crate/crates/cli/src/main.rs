//! `mbg`: command-line front end for the mbgames library.
//!
//! Exit codes: 0 success, 1 usage error, 2 malformed input, 3 rejection
//! (strategy hypotheses unmet, work or size caps exceeded). Failures print a
//! single JSON line `{"error": kind, "message": text}` on standard error.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use mbgames::flow::{extract_shrunken_system, max_flow, FlowNetwork};
use mbgames::game::{GameConfig, GameState, Side, Status};
use mbgames::lab::{
    self, fit_exponent, fit_svg, records_from_csv, records_to_csv, ExperimentConfig, ThresholdPoint,
};
use mbgames::random::{sample, SeedSpec};
use mbgames::solver::{Solver, SolverOptions, DEFAULT_NODE_LIMIT};
use mbgames::strategies::{arena, PlayerKind, Transcript, Turn};
use mbgames::{Error, Hypergraph, WorkGuard};

#[derive(Parser)]
#[command(name = "mbg", version, about = "Maker-Breaker games on uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a board from H(n, s, p).
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        /// Edge probability, as a decimal.
        #[arg(long)]
        p: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural report: components, excess, degrees, star systems.
    Analyze {
        file: PathBuf,
        /// Star degree for the star-system search.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Write the shrunken system to this path.
        #[arg(long)]
        extract: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide the winner under optimal play.
    Solve {
        file: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value = "maker")]
        first: Side,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play against a strategy from the terminal, or replay a log.
    Play {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value = "maker")]
        first: Side,
        #[arg(long, default_value = "optimal")]
        opponent: PlayerKind,
        /// The side the human plays.
        #[arg(long, default_value = "maker")]
        human: Side,
        /// Seed for a random opponent.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the game log here.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Replay a game log instead of playing.
        #[arg(long, conflicts_with = "file")]
        replay: Option<PathBuf>,
    },
    /// Strategy against strategy on a batch of random boards; CSV out.
    Arena {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        p: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        games: u64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value = "maker")]
        first: Side,
        #[arg(long)]
        maker: PlayerKind,
        #[arg(long)]
        breaker: PlayerKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a lab experiment file; CSV of every probe plus a JSON summary.
    Experiment {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Summary JSON; defaults to standard output.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Fit log p-half against log n from points JSON or a results CSV.
    Fit {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

/// What ends a run early.
enum Failure {
    Usage(String),
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn report(&self) -> (u8, &'static str, String) {
        match self {
            Failure::Usage(m) => (1, "usage", m.clone()),
            Failure::Input(m) => (2, "malformed_input", m.clone()),
            Failure::Lib(e) => {
                let code = if e.is_rejection() {
                    3
                } else if matches!(e, Error::Malformed(_)) {
                    2
                } else {
                    1
                };
                (code, e.kind(), e.to_string())
            }
        }
    }
}

type Run = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", json!({"error": "usage", "message": first}));
            return ExitCode::from(1);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, kind, message) = f.report();
            eprintln!("{}", json!({"error": kind, "message": message}));
            ExitCode::from(code)
        }
    }
}

fn dispatch(command: Command) -> Run {
    let guard = WorkGuard::from_env();
    match command {
        Command::Gen {
            n,
            s,
            p,
            seed,
            stream,
            out,
        } => {
            let (_, p) = lab::parse_probability(&json!(p)).map_err(usage)?;
            let board = sample(n, s, p, SeedSpec::new(seed, stream)).map_err(usage)?;
            emit(out.as_deref(), &board.to_json())
        }
        Command::Analyze { file, d, extract, out } => {
            let board = read_board(&file)?;
            let (report, shrunken) = analyze(&board, d, guard)?;
            emit(out.as_deref(), &pretty(&report))?;
            if let Some(path) = extract {
                let h = shrunken.ok_or_else(|| Error::Inapplicable {
                    strategy: "extract".into(),
                    reason: "the flow does not saturate every edge, so no shrunken system exists".into(),
                })?;
                write_file(&path, &h.to_json())?;
            }
            Ok(())
        }
        Command::Solve {
            file,
            m,
            b,
            first,
            node_limit,
            out,
        } => {
            let board = read_board(&file)?;
            let config = GameConfig::new(m, b, first).map_err(usage)?;
            let options = SolverOptions {
                node_limit,
                ..SolverOptions::default()
            };
            let result = Solver::with_options(config, options).solve_state(&GameState::new(&board, &config))?;
            let report = json!({
                "winner": result.winner,
                "principal_move": result.principal_move,
                "nodes_expanded": result.nodes_expanded,
            });
            emit(out.as_deref(), &format!("{report}\n"))
        }
        Command::Play {
            file,
            m,
            b,
            first,
            opponent,
            human,
            seed,
            log,
            replay,
        } => {
            if let Some(path) = replay {
                return replay_log(&path);
            }
            let file = file.ok_or_else(|| Failure::Usage("play needs a board file or --replay".into()))?;
            let board = read_board(&file)?;
            let config = GameConfig::new(m, b, first).map_err(usage)?;
            let stdin = io::stdin();
            let stdout = io::stdout();
            let log_entry = play(
                &board,
                &config,
                opponent,
                human,
                seed,
                &mut stdin.lock(),
                &mut stdout.lock(),
            )?;
            if let Some(path) = log {
                write_file(&path, &pretty(&log_entry))?;
            }
            Ok(())
        }
        Command::Arena {
            n,
            s,
            p,
            seed,
            games,
            m,
            b,
            first,
            maker,
            breaker,
            out,
        } => {
            let (_, p) = lab::parse_probability(&json!(p)).map_err(usage)?;
            let config = GameConfig::new(m, b, first).map_err(usage)?;
            let mut csv = String::from("board_seed,maker,breaker,winner,turns\n");
            for i in 0..games {
                let board = sample(n, s, p, SeedSpec::new(seed, i)).map_err(usage)?;
                let row = match play_one(&board, &config, maker, breaker, seed ^ i) {
                    Ok((winner, turns)) => format!("{i},{maker},{breaker},{winner},{turns}"),
                    Err(Error::Inapplicable { .. }) => {
                        format!("{i},{maker},{breaker},inapplicable,0")
                    }
                    Err(e) => return Err(e.into()),
                };
                csv.push_str(&row);
                csv.push('\n');
            }
            emit(out.as_deref(), &csv)
        }
        Command::Experiment { config, out, summary } => {
            let text = read_text(&config)?;
            let cfg = ExperimentConfig::from_json(&text)?;
            cfg.validate().map_err(usage)?;
            let result = cfg.run(guard)?;
            write_file(&out, &records_to_csv(&result.records))?;
            let fit = if result.points.len() >= 3 {
                fit_exponent(&result.points).ok()
            } else {
                None
            };
            let report = json!({
                "points": result.points,
                "fit": fit,
                "window": result.window,
            });
            emit(summary.as_deref(), &pretty(&report))
        }
        Command::Fit { input, out, svg } => {
            let text = read_text(&input)?;
            let points = read_points(&text)?;
            let fit = fit_exponent(&points)?;
            emit(out.as_deref(), &pretty(&fit))?;
            if let Some(path) = svg {
                write_file(&path, &fit_svg(&fit))?;
            }
            Ok(())
        }
    }
}

fn usage(e: Error) -> Failure {
    match e {
        Error::InvalidParameter(m) => Failure::Usage(m),
        other => Failure::Lib(other),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_board(path: &Path) -> std::result::Result<Hypergraph, Failure> {
    let text = read_text(path)?;
    Hypergraph::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Run {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, contents: &str) -> Run {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
        }
    }
}

#[derive(Serialize)]
struct StarSystemReport {
    d: usize,
    count: usize,
    stars: Vec<mbgames::hypergraph::Star>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: usize,
    s: Option<usize>,
    num_edges: usize,
    components: Vec<mbgames::hypergraph::Component>,
    isolated: Vec<mbgames::Vertex>,
    excess: Vec<Option<i64>>,
    all_tree_unicycle: Option<bool>,
    max_degree: usize,
    star_system: StarSystemReport,
    flow_value: Option<u64>,
    flow_target: Option<u64>,
}

fn analyze(
    board: &Hypergraph,
    d: usize,
    guard: WorkGuard,
) -> std::result::Result<(AnalyzeReport, Option<Hypergraph>), Failure> {
    if d == 0 {
        return Err(Failure::Usage("--d must be positive".into()));
    }
    let summary = board.components();
    let stars = board.max_disjoint_d_stars(d, guard)?;
    let uniform = board.uniformity().is_some() || board.is_edgeless();
    let (flow_value, flow_target, shrunken) = if uniform {
        let net = FlowNetwork::for_hypergraph(board)?;
        let flow = max_flow(&net);
        let s = board.uniformity().unwrap_or(2) as u64;
        let target = (s - 1) * board.num_edges() as u64;
        (Some(flow.value), Some(target), extract_shrunken_system(board)?)
    } else {
        (None, None, None)
    };
    let report = AnalyzeReport {
        n: board.n(),
        s: board.uniformity(),
        num_edges: board.num_edges(),
        excess: summary.components.iter().map(|c| c.excess).collect(),
        all_tree_unicycle: board.is_tree_unicycle_collection().ok(),
        components: summary.components,
        isolated: summary.isolated,
        max_degree: board.max_degree(),
        star_system: StarSystemReport {
            d,
            count: stars.len(),
            stars,
        },
        flow_value,
        flow_target,
    };
    Ok((report, shrunken))
}

fn play_one(
    board: &Hypergraph,
    config: &GameConfig,
    maker: PlayerKind,
    breaker: PlayerKind,
    seed: u64,
) -> mbgames::Result<(Side, usize)> {
    let mut m = maker.instantiate(board, config, Side::Maker, seed)?;
    let mut b = breaker.instantiate(board, config, Side::Breaker, seed)?;
    let outcome = arena(board, config, &mut m, &mut b)?;
    Ok((outcome.winner, outcome.turns()))
}

/// Everything needed to replay a game.
#[derive(Serialize, Deserialize)]
struct GameLog {
    board: Hypergraph,
    transcript: Transcript,
}

fn play(
    board: &Hypergraph,
    config: &GameConfig,
    opponent: PlayerKind,
    human: Side,
    seed: u64,
    input: &mut impl BufRead,
    output: &mut impl Write,
) -> std::result::Result<GameLog, Failure> {
    let mut bot = opponent.instantiate(board, config, human.other(), seed)?;
    let mut state = GameState::new(board, config);
    let mut turns = Vec::new();
    let io_err = |e: io::Error| Failure::Usage(format!("terminal: {e}"));
    writeln!(output, "{}", state.render()).map_err(io_err)?;
    while state.status() == Status::Ongoing {
        let side = state.to_move();
        let picks = if side == human {
            loop {
                let q = state.move_size(config);
                write!(output, "{side} claims {q}> ").map_err(io_err)?;
                output.flush().map_err(io_err)?;
                let mut line = String::new();
                if input.read_line(&mut line).map_err(io_err)? == 0 {
                    return Err(Failure::Input("input ended before the game finished".into()));
                }
                let parsed: std::result::Result<Vec<mbgames::Vertex>, _> =
                    line.split_whitespace().map(str::parse).collect();
                match parsed {
                    Err(_) => writeln!(output, "expected space-separated vertex ids").map_err(io_err)?,
                    Ok(mut mv) => match state.check_move(&mv, config) {
                        Ok(()) => {
                            mv.sort_unstable();
                            break mv;
                        }
                        Err(e) => writeln!(output, "{e}").map_err(io_err)?,
                    },
                }
            }
        } else {
            let mv = bot.choose(&state, config)?;
            writeln!(output, "{side} ({}) claims {mv:?}", bot.name()).map_err(io_err)?;
            mv
        };
        state = state.apply(&picks, config)?;
        turns.push(Turn { side, picks });
        writeln!(output, "{}", state.render()).map_err(io_err)?;
    }
    let winner = state.status().winner();
    if let Some(w) = winner {
        writeln!(output, "{w} wins").map_err(io_err)?;
    }
    let (maker, breaker) = match human {
        Side::Maker => ("human".to_string(), bot.name().to_string()),
        Side::Breaker => (bot.name().to_string(), "human".to_string()),
    };
    Ok(GameLog {
        board: board.clone(),
        transcript: Transcript {
            config: *config,
            maker,
            breaker,
            turns,
            winner,
        },
    })
}

fn replay_log(path: &Path) -> Run {
    let text = read_text(path)?;
    let log: GameLog =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let state = log
        .transcript
        .replay(&log.board)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let winner = state.status().winner();
    let report = json!({
        "winner": winner,
        "turns": log.transcript.turns.len(),
        "maker": log.transcript.maker,
        "breaker": log.transcript.breaker,
    });
    emit(None, &format!("{}{report}\n", state.render()))
}

/// Points JSON (a list, or an object with a `points` list) or a results CSV.
fn read_points(text: &str) -> std::result::Result<Vec<ThresholdPoint>, Failure> {
    if text.starts_with(lab::CSV_HEADER) {
        let records = records_from_csv(text)?;
        return Ok(lab::points_from_records(&records)?);
    }
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Failure::Input(format!("points: {e}")))?;
    let list = value.get("points").cloned().unwrap_or(value);
    serde_json::from_value(list).map_err(|e| Failure::Input(format!("points: {e}")))
}
