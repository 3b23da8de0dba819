//! Sessions and the provider that parks a pipeline thread on a human.
//!
//! Each session runs its pipeline on a dedicated OS thread. When the
//! pipeline asks a question, the provider publishes it, wakes long-polling
//! readers and blocks on a channel until an answer or an abort arrives. HTTP
//! handlers validate answers before forwarding them, so the pipeline only ever
//! sees answers that fit the question.

use std::collections::HashMap;
use std::sync::mpsc;
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use serde::Serialize;
use tokio::sync::watch;

use logloop::feedback::AnswerError;
use logloop::hitl::{pipeline_with_progress, PipelineOptions, Progress, RoundSummary};
use logloop::report::CounterSummary;
use logloop::{
    Answer, Feedback, FeedbackError, FeedbackProvider, GroundTruth, LogStore, MinedClustering, Question,
    RefinementReport,
};

use crate::render::{render, RenderedQuestion};
use crate::request::Prepared;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionState {
    Running,
    AwaitingAnswer,
    Finished,
    Aborted,
    /// The pipeline stopped with an error other than an abort.
    Failed,
}

impl SessionState {
    pub fn is_terminal(self) -> bool {
        matches!(self, SessionState::Finished | SessionState::Aborted | SessionState::Failed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionResult {
    /// Present when the corpus came with a ground truth.
    pub report: Option<RefinementReport>,
    pub clustering: MinedClustering,
    pub counters: CounterSummary,
    pub rounds: Vec<RoundSummary>,
}

/// A snapshot of a session for clients.
#[derive(Debug, Clone, Serialize)]
pub struct SessionView {
    pub id: String,
    pub state: SessionState,
    pub n_logs: usize,
    pub progress: Option<Progress>,
    pub questions_asked: u64,
    pub current_question: Option<RenderedQuestion>,
    pub error: Option<String>,
    pub result: Option<String>,
}

enum Reply {
    Answer(Answer),
    Abort,
}

struct Inner {
    state: SessionState,
    pending: Option<RenderedQuestion>,
    last_answered: Option<u64>,
    asked: u64,
    progress: Option<Progress>,
    result: Option<Arc<SessionResult>>,
    error: Option<String>,
}

pub struct Session {
    id: String,
    n_logs: usize,
    inner: Mutex<Inner>,
    replies: mpsc::Sender<Reply>,
    changed: watch::Sender<u64>,
}

/// What happened to a posted answer.
#[derive(Debug, PartialEq, Eq)]
pub enum AnswerOutcome {
    Accepted,
    /// The same sequence number was answered before; nothing changes.
    Duplicate,
    Invalid(AnswerError),
    /// No question with this sequence number is waiting.
    Stale { pending: Option<u64>, state: SessionState },
}

impl Session {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> SessionState {
        self.inner.lock().state
    }

    pub fn view(&self) -> SessionView {
        let inner = self.inner.lock();
        SessionView {
            id: self.id.clone(),
            state: inner.state,
            n_logs: self.n_logs,
            progress: inner.progress,
            questions_asked: inner.asked,
            current_question: inner.pending.clone(),
            error: inner.error.clone(),
            result: (inner.state == SessionState::Finished).then(|| self.result_link()),
        }
    }

    pub fn result_link(&self) -> String {
        format!("/sessions/{}/result", self.id)
    }

    pub fn pending(&self) -> Option<RenderedQuestion> {
        self.inner.lock().pending.clone()
    }

    pub fn result(&self) -> Option<Arc<SessionResult>> {
        self.inner.lock().result.clone()
    }

    pub fn error(&self) -> Option<String> {
        self.inner.lock().error.clone()
    }

    pub fn subscribe(&self) -> watch::Receiver<u64> {
        self.changed.subscribe()
    }

    fn notify(&self) {
        self.changed.send_modify(|v| *v += 1);
    }

    pub fn answer(&self, seq: u64, answer: Answer) -> AnswerOutcome {
        let mut inner = self.inner.lock();
        if inner.last_answered == Some(seq) {
            return AnswerOutcome::Duplicate;
        }
        let Some(pending) = inner.pending.as_ref().filter(|p| p.seq == seq) else {
            return AnswerOutcome::Stale {
                pending: inner.pending.as_ref().map(|p| p.seq),
                state: inner.state,
            };
        };
        if let Err(e) = answer.validate(&pending.question) {
            return AnswerOutcome::Invalid(e);
        }
        inner.pending = None;
        inner.last_answered = Some(seq);
        inner.state = SessionState::Running;
        // the pipeline thread holds the receiver for as long as it can ask
        // questions, and it is blocked waiting for exactly this answer
        let _ = self.replies.send(Reply::Answer(answer));
        drop(inner);
        self.notify();
        AnswerOutcome::Accepted
    }

    /// Stops a live session and returns the state afterwards. Finished,
    /// failed and already aborted sessions are left alone.
    pub fn abort(&self) -> SessionState {
        let mut inner = self.inner.lock();
        if inner.state.is_terminal() {
            return inner.state;
        }
        inner.state = SessionState::Aborted;
        inner.pending = None;
        let _ = self.replies.send(Reply::Abort);
        drop(inner);
        self.notify();
        SessionState::Aborted
    }

    fn publish(&self, question: &Question, logs: &LogStore) -> Result<u64, FeedbackError> {
        let mut inner = self.inner.lock();
        if inner.state == SessionState::Aborted {
            return Err(FeedbackError::Aborted);
        }
        inner.asked += 1;
        let seq = inner.asked;
        inner.pending = Some(render(seq, question, logs));
        inner.state = SessionState::AwaitingAnswer;
        drop(inner);
        self.notify();
        Ok(seq)
    }

    fn set_progress(&self, p: Progress) {
        self.inner.lock().progress = Some(p);
        self.notify();
    }

    fn finish(&self, outcome: Result<SessionResult, String>) {
        let mut inner = self.inner.lock();
        if inner.state == SessionState::Aborted {
            return;
        }
        inner.pending = None;
        match outcome {
            Ok(result) => {
                inner.state = SessionState::Finished;
                inner.result = Some(Arc::new(result));
            }
            Err(e) => {
                log::warn!("session {} failed: {e}", self.id);
                inner.state = SessionState::Failed;
                inner.error = Some(e);
            }
        }
        drop(inner);
        self.notify();
    }
}

/// Asks through a [`Session`] and waits for the person on the other end.
struct Interactive {
    session: Arc<Session>,
    logs: Arc<LogStore>,
    replies: mpsc::Receiver<Reply>,
}

impl FeedbackProvider for Interactive {
    fn ask(&mut self, question: &Question) -> Result<Answer, FeedbackError> {
        self.session.publish(question, &self.logs)?;
        match self.replies.recv() {
            Ok(Reply::Answer(a)) => Ok(a),
            Ok(Reply::Abort) | Err(_) => Err(FeedbackError::Aborted),
        }
    }
}

/// The shared, internally synchronized session map.
#[derive(Default)]
pub struct Registry {
    sessions: RwLock<HashMap<String, Arc<Session>>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.read().is_empty()
    }

    pub fn get(&self, id: &str) -> Option<Arc<Session>> {
        self.sessions.read().get(id).cloned()
    }

    /// Registers a session and starts its pipeline thread.
    pub(crate) fn start(&self, prepared: Prepared, opts: PipelineOptions) -> std::io::Result<Arc<Session>> {
        let (tx, rx) = mpsc::channel();
        let (changed, _) = watch::channel(0);
        let id = loop {
            let id = format!("{:032x}", rand::random::<u128>());
            if !self.sessions.read().contains_key(&id) {
                break id;
            }
        };
        let session = Arc::new(Session {
            id: id.clone(),
            n_logs: prepared.logs.len(),
            inner: Mutex::new(Inner {
                state: SessionState::Running,
                pending: None,
                last_answered: None,
                asked: 0,
                progress: None,
                result: None,
                error: None,
            }),
            replies: tx,
            changed,
        });
        let runner = Arc::clone(&session);
        std::thread::Builder::new()
            .name(format!("session-{}", &id[..8]))
            .spawn(move || run(runner, prepared, opts, rx))?;
        self.sessions.write().insert(id, Arc::clone(&session));
        Ok(session)
    }

    /// Aborts every live session, unblocking their threads.
    pub fn abort_all(&self) {
        for s in self.sessions.read().values() {
            s.abort();
        }
    }
}

fn run(session: Arc<Session>, prepared: Prepared, opts: PipelineOptions, replies: mpsc::Receiver<Reply>) {
    let Prepared { logs, truth, base } = prepared;
    let logs = Arc::new(logs);
    let provider = Interactive {
        session: Arc::clone(&session),
        logs: Arc::clone(&logs),
        replies,
    };
    let mut fb = Feedback::new(provider).with_execution(opts.exec);
    let on_progress = &mut |p| session.set_progress(p);
    let outcome = pipeline_with_progress(&base, &logs, &mut fb, &opts, on_progress);
    let counters = fb.take_counters();
    let result = outcome
        .map_err(|e| e.to_string())
        .and_then(|out| conclude(&base, out, truth.as_ref(), &counters, &opts));
    session.finish(result);
}

fn conclude(
    base: &MinedClustering,
    out: logloop::hitl::PipelineOutcome,
    truth: Option<&GroundTruth>,
    counters: &logloop::FeedbackCounters,
    opts: &PipelineOptions,
) -> Result<SessionResult, String> {
    let report = match truth {
        Some(t) => Some(RefinementReport::build(base, &out, t, counters, opts.exec).map_err(|e| e.to_string())?),
        None => None,
    };
    Ok(SessionResult {
        report,
        clustering: out.clustering,
        counters: counters.into(),
        rounds: out.rounds,
    })
}
