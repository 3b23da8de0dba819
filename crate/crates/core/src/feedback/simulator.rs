//! Ground-truth-backed feedback.
//!
//! Message-loss answers are always correct. Dummy-token and select answers
//! are null whenever the target has message loss, so the simulator is never
//! stronger than a careful human.

use crate::seq::{is_subsequence, Token, TokenSeq};
use crate::truth::GroundTruth;

use super::{Answer, FeedbackError, FeedbackProvider, Question, QuestionKind};

/// True iff no ground-truth template embeds in `template`.
pub fn simulate_message_loss(template: &[Token], truth: &GroundTruth) -> bool {
    !truth.is_complete(template)
}

/// The first token of `template` whose text is absent from the matched
/// ground-truth template, as a singleton; null under message loss or when
/// every token belongs to the template.
pub fn simulate_dummy_token(template: &[Token], truth: &GroundTruth) -> Option<Vec<Token>> {
    let k = truth.matched_cluster(template)?;
    let reference = truth.template(k);
    template
        .iter()
        .find(|t| !reference.contains(t))
        .map(|t| vec![t.clone()])
}

/// Index of the first candidate carrying the target's ground-truth template.
///
/// A raw-log target (`target_log` set) resolves its template by cluster id;
/// any other target by subsequence search.
pub fn simulate_select(question: &Question, truth: &GroundTruth) -> Option<usize> {
    let k = match question.target_log {
        Some(n) => truth.cluster_of(n),
        None => truth.matched_cluster(&question.target)?,
    };
    let reference: &TokenSeq = truth.template(k);
    question
        .candidates
        .iter()
        .position(|c| is_subsequence(reference, &c.template))
}

#[derive(Debug, Clone, Copy)]
pub struct Simulator<'a> {
    truth: &'a GroundTruth,
}

impl<'a> Simulator<'a> {
    pub fn new(truth: &'a GroundTruth) -> Self {
        Simulator { truth }
    }

    /// The answer for `question`, without the provider plumbing.
    pub fn answer(&self, question: &Question) -> Answer {
        match question.kind {
            QuestionKind::MessageLoss => Answer::MessageLoss {
                loss: simulate_message_loss(&question.target, self.truth),
            },
            QuestionKind::DummyToken => Answer::DummyToken {
                tokens: simulate_dummy_token(&question.target, self.truth),
            },
            QuestionKind::Select => Answer::Select {
                index: simulate_select(question, self.truth),
            },
        }
    }
}

impl FeedbackProvider for Simulator<'_> {
    fn ask(&mut self, question: &Question) -> Result<Answer, FeedbackError> {
        Ok(self.answer(question))
    }
}
