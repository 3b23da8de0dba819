//! HTTP session service: each session runs one refinement pipeline whose
//! questions are answered by a person over the API.
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/sessions` | create a session from a corpus and a base clustering |
//! | GET | `/sessions/{id}` | state, progress and the pending question |
//! | GET | `/sessions/{id}/question?wait_ms=N` | the pending question, long-polled |
//! | POST | `/sessions/{id}/answer` | `{"seq": n, "answer": {...}}` |
//! | POST | `/sessions/{id}/abort` | stop the pipeline |
//! | GET | `/sessions/{id}/result` | report, clustering and counters |
//! | GET | `/sessions/{id}/result/clustering` | the clustering alone |
//! | GET | `/healthz` | liveness and session count |

mod api;
mod render;
mod request;
mod session;

use std::future::Future;
use std::sync::Arc;

pub use api::{router, AppState, MAX_WAIT_MS};
pub use render::{RenderedCandidate, RenderedQuestion, RenderedTemplate};
pub use request::{BaseSource, CorpusSource, CreateSession, RepeatArg};
pub use session::{AnswerOutcome, Registry, Session, SessionResult, SessionState, SessionView};

/// Serves the API on `listener` until `shutdown` resolves, then aborts any
/// session still running so its thread can exit.
pub async fn serve<F>(listener: tokio::net::TcpListener, shutdown: F) -> std::io::Result<()>
where
    F: Future<Output = ()> + Send + 'static,
{
    let registry = Arc::new(Registry::new());
    let app = router(Arc::clone(&registry));
    let served = axum::serve(listener, app).with_graceful_shutdown(shutdown).await;
    registry.abort_all();
    served
}
