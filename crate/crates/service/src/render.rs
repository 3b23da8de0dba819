//! Questions as shown to a person: templates with `<*>` gaps and the raw
//! log lines behind them.

use serde::Serialize;

use logloop::feedback::Stage;
use logloop::seq::render_template;
use logloop::{LogStore, Question, QuestionKind, TokenSeq};

#[derive(Debug, Clone, Serialize)]
pub struct RenderedTemplate {
    pub tokens: TokenSeq,
    pub text: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RenderedCandidate {
    pub index: usize,
    pub template: RenderedTemplate,
    pub lcs_len: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RenderedQuestion {
    /// Echo this back with the answer.
    pub seq: u64,
    pub kind: QuestionKind,
    pub stage: Stage,
    pub prompt: &'static str,
    pub target: RenderedTemplate,
    /// Present when the target is a single log rather than a template.
    pub target_line_id: Option<usize>,
    pub candidates: Vec<RenderedCandidate>,
    pub samples: Vec<String>,
    /// The question exactly as the pipeline asked it.
    pub question: Question,
}

fn prompt(kind: QuestionKind) -> &'static str {
    match kind {
        QuestionKind::MessageLoss => "Does this template miss any constant token of the logs it stands for?",
        QuestionKind::DummyToken => {
            "Which tokens of this template are variable parameters rather than constants? Answer null if none."
        }
        QuestionKind::Select => {
            "Which candidate template describes the same event as the target? Answer null if none does."
        }
    }
}

fn template(tokens: &TokenSeq, samples: &[TokenSeq]) -> RenderedTemplate {
    // a template that does not embed in its samples is exactly what a
    // dummy-token question may show, so fall back to the bare tokens
    let text = render_template(tokens, samples).unwrap_or_else(|_| tokens.join());
    RenderedTemplate {
        tokens: tokens.clone(),
        text,
    }
}

pub(crate) fn render(seq: u64, question: &Question, logs: &LogStore) -> RenderedQuestion {
    let target_samples: Vec<TokenSeq> = match question.target_log {
        Some(n) => vec![logs[n].clone()],
        None => question.samples.clone(),
    };
    let samples = match question.target_log {
        Some(n) => vec![logs.raw_line(n).into_owned()],
        None => question.samples.iter().map(TokenSeq::join).collect(),
    };
    RenderedQuestion {
        seq,
        kind: question.kind,
        stage: question.stage,
        prompt: prompt(question.kind),
        target: template(&question.target, &target_samples),
        target_line_id: question.target_log.map(|n| logs.line_id(n)),
        candidates: question
            .candidates
            .iter()
            .enumerate()
            .map(|(index, c)| RenderedCandidate {
                index,
                template: template(&c.template, &[]),
                lcs_len: c.lcs_len,
            })
            .collect(),
        samples,
        question: question.clone(),
    }
}
