//! In-memory HTTP sessions for the browser UI.
//!
//! Each session owns an indexed formula and the current position. Moves
//! within a session are serialized: a move submitted while another is still
//! being processed gets `409 Conflict`. Reads and hints work on a snapshot
//! and never wait for a move to finish.

use std::collections::HashMap;
use std::io::Write;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use gts_core::game::{Game, GameConfig, LegalMoves, Position, Role, TraceStep};
use gts_core::solver::{suggest_move, Verdict};
use gts_core::syntax::{index_subformulas, FormulaTable};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::view::{choices, position_view, ChoiceView, PositionView, TerminalView};
use crate::{load_problem, CliError, Conventions, RoleArg};

/// Engine replies stop after this many consecutive engine moves.
const MAX_ENGINE_MOVES: usize = 256;
const DEFAULT_BUDGET: u32 = 6;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct HistoryEntry {
    /// Player who made the move; `None` for forced moves.
    pub actor: Option<Role>,
    pub by_engine: bool,
    #[serde(flatten)]
    pub step: TraceStep,
}

#[derive(Clone)]
struct Session {
    table: Arc<FormulaTable>,
    config: GameConfig,
    human: Role,
    budget: u32,
    current: Position,
    history: Vec<HistoryEntry>,
}

impl Session {
    fn game(&self) -> Game<'_> {
        Game::new(&self.table, self.config).expect("checked at creation")
    }

    fn apply(&mut self, choice: usize, by_engine: bool) -> Result<HistoryEntry, ApiError> {
        let game = Game::new(&self.table, self.config).expect("checked at creation");
        let moves = match game.legal_moves(&self.current).expect("own position") {
            LegalMoves::End(_) => {
                return Err(ApiError::bad_request("illegal", "the play has ended"))
            }
            LegalMoves::Moves(ms) => ms,
        };
        let m = moves
            .get(choice)
            .ok_or_else(|| ApiError::bad_request("illegal", format!("no choice {choice}")))?;
        let next = game
            .apply_move(&self.current, m)
            .expect("listed moves are legal");
        let entry = HistoryEntry {
            actor: m.player(&self.current),
            by_engine,
            step: TraceStep {
                from: self.current.hash_id(),
                choice,
                description: m.describe(&self.current),
                to: next.hash_id(),
            },
        };
        self.current = next;
        self.history.push(entry.clone());
        Ok(entry)
    }

    /// Lets the engine move while it is the engine's turn. Forced moves are
    /// left to the human so that cycles stay visible one step at a time.
    fn engine_reply(&mut self) -> Vec<HistoryEntry> {
        let engine = self.human.opponent();
        let mut replies = Vec::new();
        for _ in 0..MAX_ENGINE_MOVES {
            let game = self.game();
            let owner = match game.legal_moves(&self.current).expect("own position") {
                LegalMoves::Moves(ms) => ms[0].player(&self.current),
                LegalMoves::End(_) => break,
            };
            if owner != Some(engine) {
                break;
            }
            let choice = suggest_move(&game, &self.current, engine, self.budget)
                .ok()
                .and_then(|s| s.choice)
                .unwrap_or(0);
            replies.push(
                self.apply(choice, true)
                    .expect("engine picks a listed move"),
            );
        }
        replies
    }

    fn snapshot(&self, id: &str) -> SessionView {
        let game = self.game();
        let (choices, terminal) = choices(&game, &self.current);
        SessionView {
            id: id.to_string(),
            human_role: self.human,
            position: position_view(&game, &self.current),
            choices,
            terminal,
            history: self.history.clone(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub id: String,
    pub human_role: Role,
    pub position: PositionView,
    pub choices: Vec<ChoiceView>,
    pub terminal: Option<TerminalView>,
    pub history: Vec<HistoryEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct MoveResponse {
    pub position: PositionView,
    pub choices: Vec<ChoiceView>,
    pub terminal: Option<TerminalView>,
    pub human_move: HistoryEntry,
    pub engine_reply: Vec<HistoryEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct CreateResponse {
    #[serde(flatten)]
    pub session: SessionView,
    /// Moves the engine made before the human's first turn.
    pub engine_reply: Vec<HistoryEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct HintResponse {
    pub verdict: Verdict,
    pub suggested_choice: Option<usize>,
}

#[derive(Deserialize, Debug)]
#[serde(rename_all = "camelCase")]
pub struct CreateRequest {
    pub model: String,
    pub formula: String,
    pub human_role: RoleArg,
    #[serde(default)]
    pub config: Conventions,
    #[serde(default)]
    pub assignment: HashMap<String, String>,
    /// Search budget for engine moves.
    pub engine_budget: Option<u32>,
}

#[derive(Deserialize, Debug)]
#[serde(rename_all = "camelCase")]
pub struct MoveRequest {
    pub choice_index: usize,
}

#[derive(Deserialize, Debug, Default)]
pub struct HintRequest {
    pub budget: Option<u32>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    fn bad_request(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            kind,
            message: message.into(),
        }
    }

    fn not_found() -> Self {
        Self {
            status: StatusCode::NOT_FOUND,
            kind: "not_found",
            message: "no such session".into(),
        }
    }
}

impl From<CliError> for ApiError {
    fn from(e: CliError) -> Self {
        let kind = match e {
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "invalid",
            CliError::Internal(_) => "internal",
        };
        Self::bad_request(kind, e.message())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(json!({ "error": { "kind": self.kind, "message": self.message } })),
        )
            .into_response()
    }
}

struct Slot {
    session: Mutex<Session>,
    moving: AtomicBool,
    last_used: Mutex<Instant>,
}

impl Slot {
    fn touch(&self) {
        *self.last_used.lock().unwrap() = Instant::now();
    }

    fn snapshot(&self) -> Session {
        self.session.lock().unwrap().clone()
    }
}

/// Shared server state: live sessions and the idle timeout.
#[derive(Clone)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Arc<Slot>>>>,
    idle: Duration,
}

impl AppState {
    pub fn new(idle: Duration) -> Self {
        Self {
            sessions: Arc::default(),
            idle,
        }
    }

    fn get(&self, id: &str) -> Result<Arc<Slot>, ApiError> {
        let slot = self
            .sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(ApiError::not_found)?;
        if slot.last_used.lock().unwrap().elapsed() > self.idle {
            self.sessions.write().unwrap().remove(id);
            return Err(ApiError::not_found());
        }
        slot.touch();
        Ok(slot)
    }

    /// Drops sessions idle for longer than the timeout. Returns how many.
    pub fn expire(&self) -> usize {
        let mut sessions = self.sessions.write().unwrap();
        let before = sessions.len();
        sessions.retain(|_, slot| slot.last_used.lock().unwrap().elapsed() <= self.idle);
        before - sessions.len()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for AppState {
    fn default() -> Self {
        Self::new(Duration::from_secs(30 * 60))
    }
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> T + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        kind: "internal",
        message: e.to_string(),
    })
}

async fn create(
    State(state): State<AppState>,
    Json(req): Json<CreateRequest>,
) -> Result<Response, ApiError> {
    let assign: Vec<(String, String)> = req.assignment.into_iter().collect();
    let problem = load_problem(&req.model, &req.formula, &assign)?;
    let table = Arc::new(index_subformulas(&problem.formula));
    let config = req.config.game_config();
    let game =
        Game::new(&table, config).map_err(|e| ApiError::bad_request("parse", e.to_string()))?;
    let structure = problem
        .structure
        .with_fresh_status(req.config.fresh_status());
    let start = game
        .initial_position(structure, problem.assignment)
        .map_err(|e| ApiError::bad_request("invalid", e.to_string()))?;
    let budget = req.engine_budget.unwrap_or(DEFAULT_BUDGET).max(1);
    let mut session = Session {
        table: table.clone(),
        config,
        human: req.human_role.into(),
        budget,
        current: start,
        history: Vec::new(),
    };
    let id = uuid::Uuid::new_v4().to_string();
    let (session, engine_reply) = blocking(move || {
        let reply = session.engine_reply();
        (session, reply)
    })
    .await?;
    let view = session.snapshot(&id);
    let slot = Arc::new(Slot {
        session: Mutex::new(session),
        moving: AtomicBool::new(false),
        last_used: Mutex::new(Instant::now()),
    });
    state.sessions.write().unwrap().insert(id, slot);
    let body = CreateResponse {
        session: view,
        engine_reply,
    };
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn read(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<SessionView>, ApiError> {
    let slot = state.get(&id)?;
    Ok(Json(slot.snapshot().snapshot(&id)))
}

/// Clears the in-progress flag when a move handler finishes, even on error.
struct MoveGuard(Arc<Slot>);

impl Drop for MoveGuard {
    fn drop(&mut self) {
        self.0.moving.store(false, Ordering::Release);
    }
}

async fn submit_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<MoveRequest>,
) -> Result<Json<MoveResponse>, ApiError> {
    let slot = state.get(&id)?;
    if slot.moving.swap(true, Ordering::AcqRel) {
        return Err(ApiError {
            status: StatusCode::CONFLICT,
            kind: "conflict",
            message: "another move for this session is in progress".into(),
        });
    }
    let guard = MoveGuard(slot.clone());
    let mut session = slot.snapshot();
    let (session, result) = blocking(move || {
        let result = session
            .apply(req.choice_index, false)
            .map(|human| (human, session.engine_reply()));
        (session, result)
    })
    .await?;
    let (human_move, engine_reply) = result?;
    let view = session.snapshot(&id);
    *slot.session.lock().unwrap() = session;
    drop(guard);
    Ok(Json(MoveResponse {
        position: view.position,
        choices: view.choices,
        terminal: view.terminal,
        human_move,
        engine_reply,
    }))
}

async fn hint(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Option<Json<HintRequest>>,
) -> Result<Json<HintResponse>, ApiError> {
    let slot = state.get(&id)?;
    let session = slot.snapshot();
    let budget = body.and_then(|Json(b)| b.budget).unwrap_or(DEFAULT_BUDGET);
    if budget == 0 {
        return Err(ApiError::bad_request(
            "invalid",
            "budget must be at least 1",
        ));
    }
    blocking(move || {
        let game = session.game();
        suggest_move(&game, &session.current, session.human, budget)
            .map(|s| {
                Json(HintResponse {
                    verdict: s.verdict,
                    suggested_choice: s.choice,
                })
            })
            .map_err(|e| ApiError::bad_request("invalid", e.to_string()))
    })
    .await?
}

async fn remove(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    match state.sessions.write().unwrap().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::not_found()),
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/session", post(create))
        .route("/api/session/{id}", get(read).delete(remove))
        .route("/api/session/{id}/move", post(submit_move))
        .route("/api/session/{id}/hint", post(hint))
        .with_state(state)
}

/// Binds `host:port`, prints the address, and serves until the process
/// ends. Idle sessions are swept once a minute.
pub async fn serve(
    host: &str,
    port: u16,
    idle: Duration,
    out: &mut impl Write,
) -> std::io::Result<()> {
    let state = AppState::new(idle);
    let sweeper = state.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            sweeper.expire();
        }
    });
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    writeln!(out, "listening on http://{}", listener.local_addr()?)?;
    out.flush()?;
    axum::serve(listener, router(state)).await
}
