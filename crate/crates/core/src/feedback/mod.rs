//! The three feedback questions, the provider contract that answers them,
//! and query accounting.
//!
//! Algorithms never talk to a provider directly. They go through
//! [`Feedback`], which validates every answer against its question and keeps
//! [`FeedbackCounters`] for query-complexity reporting.

mod simulator;

pub use simulator::{simulate_dummy_token, simulate_message_loss, simulate_select, Simulator};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::seq::{lcs_len, Token, TokenSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeedbackError {
    #[error("feedback session aborted")]
    Aborted,
    #[error("invalid answer: {0}")]
    InvalidAnswer(#[from] AnswerError),
    #[error("feedback provider failed: {0}")]
    Provider(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnswerError {
    #[error("expected a {expected:?} answer, got {got:?}")]
    KindMismatch {
        expected: QuestionKind,
        got: QuestionKind,
    },
    #[error("dummy-token answer must name at least one token")]
    NoDummyTokens,
    #[error("token {0:?} does not occur in the question's target")]
    TokenNotInTarget(String),
    #[error("candidate index {index} out of range ({len} candidates)")]
    IndexOutOfRange { index: usize, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuestionKind {
    MessageLoss,
    DummyToken,
    Select,
}

/// Which refinement step is asking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Completion,
    Merge,
    Separation,
    Lossless,
}

/// An entry of a select list: a pool template and its LCS length against the
/// question's target. `pool_index` points back into the pool the list was
/// built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub template: TokenSeq,
    pub lcs_len: usize,
    pub pool_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub kind: QuestionKind,
    pub stage: Stage,
    /// The template or log being asked about.
    pub target: TokenSeq,
    /// Set when the target is a raw log from the store.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_log: Option<usize>,
    /// Select lists only: sorted by `lcs_len` descending, all positive.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Candidate>,
    /// Logs that contain the target, shown to a human for context.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<TokenSeq>,
}

impl Question {
    pub fn message_loss(stage: Stage, target: TokenSeq, samples: Vec<TokenSeq>) -> Self {
        Question {
            kind: QuestionKind::MessageLoss,
            stage,
            target,
            target_log: None,
            candidates: Vec::new(),
            samples,
        }
    }

    pub fn dummy_token(stage: Stage, target: TokenSeq, samples: Vec<TokenSeq>) -> Self {
        Question {
            kind: QuestionKind::DummyToken,
            stage,
            target,
            target_log: None,
            candidates: Vec::new(),
            samples,
        }
    }
}

/// Builds the select list for `target` over `pool`: LCS length per entry,
/// zero-length entries dropped, the rest sorted by length descending. Ties
/// keep pool order.
pub fn build_select_question<T: AsRef<[Token]> + Sync>(
    stage: Stage,
    target: TokenSeq,
    pool: &[T],
) -> Question {
    build_select_question_with(stage, target, pool, Execution::default())
}

pub fn build_select_question_with<T: AsRef<[Token]> + Sync>(
    stage: Stage,
    target: TokenSeq,
    pool: &[T],
    exec: Execution,
) -> Question {
    let lens = exec
        .for_len(pool.len(), 64)
        .map(pool, |p| lcs_len(&target, p.as_ref()));
    let mut candidates: Vec<Candidate> = lens
        .into_iter()
        .enumerate()
        .filter(|&(_, len)| len > 0)
        .map(|(i, len)| Candidate {
            template: TokenSeq::from(pool[i].as_ref().to_vec()),
            lcs_len: len,
            pool_index: i,
        })
        .collect();
    candidates.sort_by_key(|c| std::cmp::Reverse(c.lcs_len));
    Question {
        kind: QuestionKind::Select,
        stage,
        target,
        target_log: None,
        candidates,
        samples: Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Answer {
    MessageLoss { loss: bool },
    /// `None`: the user cannot point at a dummy token.
    DummyToken { tokens: Option<Vec<Token>> },
    /// Index into the question's candidate list; `None`: no candidate matches.
    Select { index: Option<usize> },
}

impl Answer {
    pub fn kind(&self) -> QuestionKind {
        match self {
            Answer::MessageLoss { .. } => QuestionKind::MessageLoss,
            Answer::DummyToken { .. } => QuestionKind::DummyToken,
            Answer::Select { .. } => QuestionKind::Select,
        }
    }

    pub fn validate(&self, question: &Question) -> Result<(), AnswerError> {
        if self.kind() != question.kind {
            return Err(AnswerError::KindMismatch {
                expected: question.kind,
                got: self.kind(),
            });
        }
        match self {
            Answer::MessageLoss { .. } => Ok(()),
            Answer::DummyToken { tokens: None } => Ok(()),
            Answer::DummyToken { tokens: Some(tokens) } => {
                if tokens.is_empty() {
                    return Err(AnswerError::NoDummyTokens);
                }
                match tokens.iter().find(|t| !question.target.contains(t)) {
                    Some(t) => Err(AnswerError::TokenNotInTarget(t.to_string())),
                    None => Ok(()),
                }
            }
            Answer::Select { index: None } => Ok(()),
            Answer::Select { index: Some(i) } => {
                if *i < question.candidates.len() {
                    Ok(())
                } else {
                    Err(AnswerError::IndexOutOfRange {
                        index: *i,
                        len: question.candidates.len(),
                    })
                }
            }
        }
    }
}

/// Something that answers questions: a simulator, a scripted test double,
/// or a human behind the session API. Calls block until answered.
pub trait FeedbackProvider {
    fn ask(&mut self, question: &Question) -> Result<Answer, FeedbackError>;
}

impl<P: FeedbackProvider + ?Sized> FeedbackProvider for &mut P {
    fn ask(&mut self, question: &Question) -> Result<Answer, FeedbackError> {
        (**self).ask(question)
    }
}

impl<P: FeedbackProvider + ?Sized> FeedbackProvider for Box<P> {
    fn ask(&mut self, question: &Question) -> Result<Answer, FeedbackError> {
        (**self).ask(question)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackCounters {
    pub n_message_loss: usize,
    pub n_select: usize,
    pub n_dummy_token: usize,
    /// The part of `n_message_loss` asked inside lossless template extraction.
    pub n_message_loss_lossless: usize,
    /// Candidate-list size of every select question.
    pub question_lengths: Vec<usize>,
    /// 1-based position of every non-null selection.
    pub selected_ranks: Vec<usize>,
}

impl FeedbackCounters {
    pub fn total(&self) -> usize {
        self.n_message_loss + self.n_select + self.n_dummy_token
    }

    /// Message-loss questions asked to classify a template, as opposed to
    /// the re-checks inside lossless extraction.
    pub fn classification_queries(&self) -> usize {
        self.n_message_loss - self.n_message_loss_lossless
    }

    pub fn avg_question_length(&self) -> Option<f64> {
        mean(&self.question_lengths)
    }

    pub fn avg_selected_rank(&self) -> Option<f64> {
        mean(&self.selected_ranks)
    }

    fn record(&mut self, question: &Question, answer: &Answer) {
        match question.kind {
            QuestionKind::MessageLoss => {
                self.n_message_loss += 1;
                if question.stage == Stage::Lossless {
                    self.n_message_loss_lossless += 1;
                }
            }
            QuestionKind::DummyToken => self.n_dummy_token += 1,
            QuestionKind::Select => {
                self.n_select += 1;
                self.question_lengths.push(question.candidates.len());
                if let Answer::Select { index: Some(i) } = answer {
                    self.selected_ranks.push(i + 1);
                }
            }
        }
    }
}

fn mean(xs: &[usize]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<usize>() as f64 / xs.len() as f64)
    }
}

/// Audited access to a provider.
#[derive(Debug)]
pub struct Feedback<P> {
    provider: P,
    counters: FeedbackCounters,
    exec: Execution,
}

impl<P: FeedbackProvider> Feedback<P> {
    pub fn new(provider: P) -> Self {
        Feedback {
            provider,
            counters: FeedbackCounters::default(),
            exec: Execution::default(),
        }
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn counters(&self) -> &FeedbackCounters {
        &self.counters
    }

    pub fn take_counters(&mut self) -> FeedbackCounters {
        std::mem::take(&mut self.counters)
    }

    pub fn provider(&self) -> &P {
        &self.provider
    }

    pub fn provider_mut(&mut self) -> &mut P {
        &mut self.provider
    }

    pub fn into_parts(self) -> (P, FeedbackCounters) {
        (self.provider, self.counters)
    }

    /// Asks, validates and counts. Invalid answers are not counted.
    pub fn ask(&mut self, question: &Question) -> Result<Answer, FeedbackError> {
        let answer = self.provider.ask(question)?;
        answer.validate(question)?;
        self.counters.record(question, &answer);
        Ok(answer)
    }

    /// True when the provider reports message loss.
    pub fn message_loss(
        &mut self,
        stage: Stage,
        target: &TokenSeq,
        samples: Vec<TokenSeq>,
    ) -> Result<bool, FeedbackError> {
        let q = Question::message_loss(stage, target.clone(), samples);
        match self.ask(&q)? {
            Answer::MessageLoss { loss } => Ok(loss),
            _ => unreachable!("validated kind"),
        }
    }

    pub fn dummy_tokens(
        &mut self,
        stage: Stage,
        target: &TokenSeq,
        samples: Vec<TokenSeq>,
    ) -> Result<Option<Vec<Token>>, FeedbackError> {
        let q = Question::dummy_token(stage, target.clone(), samples);
        match self.ask(&q)? {
            Answer::DummyToken { tokens } => Ok(tokens),
            _ => unreachable!("validated kind"),
        }
    }

    /// Asks the user to pick the pool entry carrying the same message as
    /// `target`; returns its pool index.
    pub fn select<T: AsRef<[Token]> + Sync>(
        &mut self,
        stage: Stage,
        target: &TokenSeq,
        target_log: Option<usize>,
        pool: &[T],
        samples: Vec<TokenSeq>,
    ) -> Result<Option<usize>, FeedbackError> {
        let mut q = build_select_question_with(stage, target.clone(), pool, self.exec);
        q.target_log = target_log;
        q.samples = samples;
        match self.ask(&q)? {
            Answer::Select { index } => Ok(index.map(|i| q.candidates[i].pool_index)),
            _ => unreachable!("validated kind"),
        }
    }
}
