//! Command-line front end for `gts-core`: compositional checking, game
//! solving, interactive play, rendering, encoding and the HTTP session
//! service used by the browser UI.

pub mod play;
pub mod serve;
pub mod view;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gts_core::game::{ClaimUnbound, DeleteMiss, Game, GameConfig, GameError, Trace, TupleDeletion};
use gts_core::solver::{solve_bounded, solve_exact, Outcome, SolveError, Verdict};
use gts_core::structure::{encode_model, Assignment, FreshStatus, PartialStructure};
use gts_core::syntax::{
    index_subformulas, parse_formula, print_formula, render_natural_language, Formula, Vocabulary,
};
use gts_core::{evaluate, parse_model};
use serde::{Deserialize, Serialize};

pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFIED: u8 = 10;
    pub const FALSIFIED: u8 = 11;
    pub const INDETERMINATE: u8 = 20;
    pub const UNKNOWN: u8 = 21;
    pub const USAGE: u8 = 64;
    pub const PARSE: u8 = 65;
    pub const INTERNAL: u8 = 70;
}

pub fn outcome_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Verified => exit::VERIFIED,
        Outcome::Falsified => exit::FALSIFIED,
        Outcome::IndeterminateProven => exit::INDETERMINATE,
        Outcome::Unknown => exit::UNKNOWN,
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Parse(_) => exit::PARSE,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Game(GameError::NoGameRule(_)) | SolveError::ContainsInsertion => {
                CliError::Parse(e.to_string())
            }
            SolveError::Game(GameError::AssignmentOutsideDomain(_)) => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Internal(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "gts", version, about = "Semantic games over partial models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a formula compositionally (plus/minus judgements).
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Decide who can force a win in the formula's game.
    Solve {
        #[command(flatten)]
        input: Input,
        /// Depth budget for the bounded solver.
        #[arg(long, default_value_t = 12)]
        budget: u32,
        #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
        solver: SolverChoice,
        /// Print the winning play.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        conventions: Conventions,
    },
    /// Play the game against the engine in the terminal.
    Play {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = RoleArg::Eloise)]
        role: RoleArg,
        /// Search budget for engine moves and `:hint`.
        #[arg(long, default_value_t = 6)]
        budget: u32,
        /// Stop after this many moves.
        #[arg(long, default_value_t = 200)]
        max_moves: usize,
        #[command(flatten)]
        conventions: Conventions,
    },
    /// Render the formula as an English sentence.
    RenderNl {
        #[arg(short, long)]
        formula: String,
        /// Model file whose vocabulary the formula uses.
        #[arg(short, long)]
        model: Option<PathBuf>,
    },
    /// Print the string encoding of a model.
    Encode {
        #[arg(short, long)]
        model: PathBuf,
    },
    /// Serve the HTTP API for the browser UI.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Minutes before an unused session is dropped.
        #[arg(long, default_value_t = 30)]
        idle_minutes: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Model file; the empty model over the empty vocabulary if omitted.
    #[arg(short, long)]
    pub model: Option<PathBuf>,
    #[arg(short, long)]
    pub formula: String,
    /// Initial assignment, e.g. `--assign x=a`.
    #[arg(long = "assign", value_name = "VAR=ELEMENT")]
    pub assign: Vec<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverChoice {
    Auto,
    Exact,
    Bounded,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleArg {
    Eloise,
    Abelard,
}

impl From<RoleArg> for gts_core::Role {
    fn from(r: RoleArg) -> Self {
        match r {
            RoleArg::Eloise => gts_core::Role::Eloise,
            RoleArg::Abelard => gts_core::Role::Abelard,
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeleteMissArg {
    #[default]
    Lose,
    Ignore,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimUnboundArg {
    #[default]
    Neither,
    Lose,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreshStatusArg {
    #[default]
    Undefined,
    Negative,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleDeletionArg {
    #[default]
    Choose,
    FromAssignment,
}

/// Game conventions. The defaults are the standard ones.
#[derive(Args, Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct Conventions {
    /// Deleting an unbound variable: the verifier loses, or nothing happens.
    #[arg(long, value_enum, default_value_t)]
    pub delete_miss: DeleteMissArg,
    /// A claim atom with no binder: neither player wins, or the verifier loses.
    #[arg(long, value_enum, default_value_t)]
    pub claim_unbound: ClaimUnboundArg,
    /// Status of tuples involving inserted elements in partial relations.
    #[arg(long, value_enum, default_value_t)]
    pub fresh_status: FreshStatusArg,
    /// Which tuple a tuple deletion removes.
    #[arg(long, value_enum, default_value_t)]
    pub tuple_deletion: TupleDeletionArg,
}

impl Conventions {
    pub fn game_config(self) -> GameConfig {
        GameConfig {
            delete_miss: match self.delete_miss {
                DeleteMissArg::Lose => DeleteMiss::Lose,
                DeleteMissArg::Ignore => DeleteMiss::Ignore,
            },
            claim_unbound: match self.claim_unbound {
                ClaimUnboundArg::Neither => ClaimUnbound::Neither,
                ClaimUnboundArg::Lose => ClaimUnbound::Lose,
            },
            tuple_deletion: match self.tuple_deletion {
                TupleDeletionArg::Choose => TupleDeletion::Choose,
                TupleDeletionArg::FromAssignment => TupleDeletion::FromAssignment,
            },
        }
    }

    pub fn fresh_status(self) -> FreshStatus {
        match self.fresh_status {
            FreshStatusArg::Undefined => FreshStatus::Undefined,
            FreshStatusArg::Negative => FreshStatus::Negative,
        }
    }
}

/// A parsed model and formula ready to evaluate or play.
pub struct Problem {
    pub vocabulary: Vocabulary,
    pub structure: PartialStructure,
    pub formula: Formula,
    pub assignment: Assignment,
}

/// Parses model text, formula text and `var=element` bindings.
pub fn load_problem(
    model: &str,
    formula: &str,
    assign: &[(String, String)],
) -> Result<Problem, CliError> {
    let (vocabulary, structure) =
        parse_model(model).map_err(|e| CliError::Parse(format!("model: {e}")))?;
    let formula = parse_formula(formula, &vocabulary)
        .map_err(|e| CliError::Parse(format!("formula: {e}")))?;
    let mut assignment = Assignment::new();
    for (var, name) in assign {
        let e = structure
            .element(name)
            .ok_or_else(|| CliError::Usage(format!("unknown element `{name}` in --assign")))?;
        assignment.set(&var.as_str().into(), e);
    }
    Ok(Problem {
        vocabulary,
        structure,
        formula,
        assignment,
    })
}

fn read_model(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        None => Ok(String::new()),
        Some(p) => {
            fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn parse_bindings(items: &[String]) -> Result<Vec<(String, String)>, CliError> {
    items
        .iter()
        .map(|item| {
            item.split_once('=')
                .map(|(v, e)| (v.trim().to_string(), e.trim().to_string()))
                .ok_or_else(|| CliError::Usage(format!("expected VAR=ELEMENT, got `{item}`")))
        })
        .collect()
}

fn load(input: &Input) -> Result<Problem, CliError> {
    let model = read_model(input.model.as_deref())?;
    load_problem(&model, &input.formula, &parse_bindings(&input.assign)?)
}

/// `--json` output of `solve`.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SolveOutput {
    pub formula: String,
    pub conventions: Conventions,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// The JSON schema that `solve --json` output follows.
pub const VERDICT_SCHEMA: &str = include_str!("../schema/verdict.schema.json");

pub fn run_solve(
    problem: &Problem,
    conventions: Conventions,
    solver: SolverChoice,
    budget: u32,
) -> Result<Verdict, CliError> {
    let table = index_subformulas(&problem.formula);
    let structure = problem
        .structure
        .clone()
        .with_fresh_status(conventions.fresh_status());
    let config = conventions.game_config();
    let g = &problem.assignment;
    let verdict = match solver {
        SolverChoice::Auto => gts_core::solve(&structure, g, &table, config, budget)?,
        SolverChoice::Exact => solve_exact(&structure, g, &table, config)?,
        SolverChoice::Bounded => solve_bounded(&structure, g, &table, config, budget)?,
    };
    Ok(verdict)
}

fn write_trace(out: &mut impl Write, trace: &Trace) -> io::Result<()> {
    for (i, step) in trace.steps.iter().enumerate() {
        writeln!(
            out,
            "  {:>3}. {}  [{} -> {}]",
            i + 1,
            step.description,
            step.from,
            step.to
        )?;
    }
    writeln!(out, "  {}", trace.terminal)
}

/// Runs a parsed command, writing to `out`. Returns the exit code.
pub fn dispatch(command: Command, out: &mut impl Write) -> Result<u8, CliError> {
    match command {
        Command::Check { input, json } => {
            let p = load(&input)?;
            let status = evaluate(&p.structure, &p.assignment, &p.formula)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&status).expect("serializable")
                )?;
            } else {
                writeln!(out, "plus={} minus={}", status.plus, status.minus)?;
            }
            Ok(exit::OK)
        }
        Command::Solve {
            input,
            budget,
            solver,
            trace,
            json,
            conventions,
        } => {
            let p = load(&input)?;
            if budget == 0 {
                return Err(CliError::Usage("--budget must be at least 1".into()));
            }
            let verdict = run_solve(&p, conventions, solver, budget)?;
            let code = outcome_code(verdict.outcome);
            if json {
                let output = SolveOutput {
                    formula: print_formula(&p.formula),
                    conventions,
                    verdict,
                };
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&output).expect("serializable")
                )?;
                return Ok(code);
            }
            writeln!(out, "{}", verdict.outcome)?;
            let depth = verdict
                .depth
                .map(|d| format!(", depth {d}"))
                .unwrap_or_default();
            let solver = match verdict.solver {
                gts_core::solver::SolverKind::Exact => "exact",
                gts_core::solver::SolverKind::Bounded => "bounded",
            };
            writeln!(
                out,
                "solver {solver}, {} positions{depth}",
                verdict.positions
            )?;
            if trace {
                if let Some(t) = &verdict.trace {
                    write_trace(out, t)?;
                }
            }
            Ok(code)
        }
        Command::Play {
            input,
            role,
            budget,
            max_moves,
            conventions,
        } => {
            let p = load(&input)?;
            let table = index_subformulas(&p.formula);
            let game = Game::new(&table, conventions.game_config())
                .map_err(|e| CliError::Parse(e.to_string()))?;
            let structure = p
                .structure
                .clone()
                .with_fresh_status(conventions.fresh_status());
            let start = game
                .initial_position(structure, p.assignment.clone())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let options = play::PlayOptions {
                human: role.into(),
                budget: budget.max(1),
                max_moves,
            };
            let stdin = io::stdin();
            play::play(&game, start, options, stdin.lock(), out)?;
            Ok(exit::OK)
        }
        Command::RenderNl { formula, model } => {
            let model = read_model(model.as_deref())?;
            let p = load_problem(&model, &formula, &[])?;
            writeln!(out, "{}", render_natural_language(&p.formula))?;
            Ok(exit::OK)
        }
        Command::Encode { model } => {
            let text = read_model(Some(&model))?;
            let (_, s) = parse_model(&text).map_err(|e| CliError::Parse(format!("model: {e}")))?;
            writeln!(out, "{}", encode_model(&s))?;
            Ok(exit::OK)
        }
        Command::Serve {
            port,
            host,
            idle_minutes,
        } => {
            let idle = std::time::Duration::from_secs(idle_minutes.max(1) * 60);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime
                .block_on(serve::serve(&host, port, idle, out))
                .map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(exit::OK)
        }
    }
}
