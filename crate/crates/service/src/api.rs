use std::sync::Arc;
use std::time::Duration;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use logloop::hitl::PipelineOptions;
use logloop::Answer;

use crate::request::{prepare, CreateSession};
use crate::session::{AnswerOutcome, Registry, Session, SessionState};

/// Upper bound on a single long-poll wait.
pub const MAX_WAIT_MS: u64 = 30_000;

pub type AppState = Arc<Registry>;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("no session {id:?}"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/healthz", get(health))
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(view))
        .route("/sessions/{id}/question", get(question))
        .route("/sessions/{id}/answer", post(answer))
        .route("/sessions/{id}/abort", post(abort))
        .route("/sessions/{id}/result", get(result))
        .route("/sessions/{id}/result/clustering", get(result_clustering))
        .with_state(state)
}

fn lookup(state: &AppState, id: &str) -> ApiResult<Arc<Session>> {
    state.get(id).ok_or_else(|| ApiError::not_found(id))
}

async fn health(State(state): State<AppState>) -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "sessions": state.len() }))
}

#[derive(Serialize)]
struct Created {
    id: String,
    state: SessionState,
    links: Links,
}

#[derive(Serialize)]
struct Links {
    session: String,
    question: String,
    answer: String,
    result: String,
}

async fn create(State(state): State<AppState>, Json(req): Json<CreateSession>) -> ApiResult<(StatusCode, Json<Created>)> {
    let repeat = req.repeat.policy().map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e))?;
    let opts = PipelineOptions {
        repeat,
        lossless_completion: req.lossless_completion,
        ..Default::default()
    };
    let prepared = tokio::task::spawn_blocking(move || prepare(&req))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e))?;
    let session = state
        .start(prepared, opts)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("cannot start session: {e}")))?;
    let id = session.id().to_owned();
    log::info!("session {id} created");
    let base = format!("/sessions/{id}");
    let body = Created {
        state: session.state(),
        links: Links {
            question: format!("{base}/question"),
            answer: format!("{base}/answer"),
            result: format!("{base}/result"),
            session: base,
        },
        id,
    };
    Ok((StatusCode::CREATED, Json(body)))
}

async fn view(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<crate::SessionView>> {
    Ok(Json(lookup(&state, &id)?.view()))
}

#[derive(Deserialize)]
struct WaitParams {
    #[serde(default)]
    wait_ms: u64,
}

/// The pending question, waiting up to `wait_ms` for one to appear.
async fn question(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<WaitParams>,
) -> ApiResult<Json<serde_json::Value>> {
    let session = lookup(&state, &id)?;
    let mut changes = session.subscribe();
    let deadline = tokio::time::Instant::now() + Duration::from_millis(params.wait_ms.min(MAX_WAIT_MS));
    loop {
        changes.borrow_and_update();
        if let Some(q) = session.pending() {
            return Ok(Json(json!({ "status": "pending", "question": q })));
        }
        let st = session.state();
        if st.is_terminal() {
            let mut body = json!({ "status": "none", "state": st });
            if st == SessionState::Finished {
                body["result"] = json!(session.result_link());
            }
            return Ok(Json(body));
        }
        match tokio::time::timeout_at(deadline, changes.changed()).await {
            Ok(Ok(())) => continue,
            _ => return Ok(Json(json!({ "status": "none", "state": st }))),
        }
    }
}

#[derive(Deserialize)]
struct AnswerBody {
    seq: u64,
    answer: Answer,
}

async fn answer(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(body): Json<AnswerBody>,
) -> ApiResult<Json<serde_json::Value>> {
    let session = lookup(&state, &id)?;
    match session.answer(body.seq, body.answer) {
        AnswerOutcome::Accepted => Ok(Json(json!({ "accepted": true, "seq": body.seq }))),
        AnswerOutcome::Duplicate => Ok(Json(json!({ "accepted": false, "duplicate": true, "seq": body.seq }))),
        AnswerOutcome::Invalid(e) => Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())),
        AnswerOutcome::Stale { pending, state } => Err(ApiError::new(
            StatusCode::CONFLICT,
            match pending {
                Some(p) => format!("question {} is not pending; question {p} is", body.seq),
                None => format!("no question is pending; session is {}", state_name(state)),
            },
        )),
    }
}

async fn abort(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<serde_json::Value>> {
    let session = lookup(&state, &id)?;
    let st = session.abort();
    Ok(Json(json!({ "id": id, "state": st })))
}

fn finished(session: &Session) -> ApiResult<Arc<crate::SessionResult>> {
    session.result().ok_or_else(|| {
        let st = session.state();
        let mut msg = format!("session is {}, not finished", state_name(st));
        if let Some(e) = session.error() {
            msg = format!("{msg}: {e}");
        }
        ApiError::new(StatusCode::CONFLICT, msg)
    })
}

async fn result(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let session = lookup(&state, &id)?;
    let r = finished(&session)?;
    let body = serde_json::to_vec(&*r).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(([(header::CONTENT_TYPE, "application/json")], body).into_response())
}

/// The refined clustering as an interchange document, byte for byte what a
/// headless run exports.
async fn result_clustering(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let session = lookup(&state, &id)?;
    let r = finished(&session)?;
    let body = logloop::corpus::clustering_to_json(&r.clustering);
    Ok(([(header::CONTENT_TYPE, "application/json")], body).into_response())
}

fn state_name(st: SessionState) -> String {
    serde_json::to_value(st)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}
