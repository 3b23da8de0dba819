//! The versioned document written after a refinement run.

use serde::{Deserialize, Serialize};

use crate::feedback::FeedbackCounters;
use crate::hitl::{PipelineOutcome, RoundSummary};
use crate::metrics::{complexity_stats, evaluate_with, ComplexityStats, Evaluation, MetricsError};
use crate::model::MinedClustering;
use crate::truth::GroundTruth;
use crate::exec::Execution;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub version: u32,
    pub n_logs: usize,
    pub before: Evaluation,
    /// After message completion, before any merge.
    pub completed: Evaluation,
    pub after: Evaluation,
    pub counters: CounterSummary,
    pub stats: ComplexityStats,
    pub rounds: Vec<RoundSummary>,
}

/// Counter totals without the per-question vectors, which would make the
/// report grow with the number of questions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterSummary {
    pub message_loss: usize,
    pub message_loss_lossless: usize,
    pub dummy_token: usize,
    pub select: usize,
    pub total: usize,
}

impl From<&FeedbackCounters> for CounterSummary {
    fn from(c: &FeedbackCounters) -> Self {
        CounterSummary {
            message_loss: c.n_message_loss,
            message_loss_lossless: c.n_message_loss_lossless,
            dummy_token: c.n_dummy_token,
            select: c.n_select,
            total: c.total(),
        }
    }
}

impl RefinementReport {
    pub fn build(
        base: &MinedClustering,
        outcome: &PipelineOutcome,
        truth: &GroundTruth,
        counters: &FeedbackCounters,
        exec: Execution,
    ) -> Result<Self, MetricsError> {
        let completed = MinedClustering::new(outcome.completed.clone(), base.n_logs())
            .expect("completion keeps the member sets of a valid clustering");
        Ok(RefinementReport {
            version: REPORT_VERSION,
            n_logs: base.n_logs(),
            before: evaluate_with(base, truth, exec)?,
            completed: evaluate_with(&completed, truth, exec)?,
            after: evaluate_with(&outcome.clustering, truth, exec)?,
            counters: counters.into(),
            stats: complexity_stats(&outcome.completed, truth, counters),
            rounds: outcome.rounds.clone(),
        })
    }

    /// Pretty JSON. Field order is fixed by the struct layout, so equal
    /// reports serialize to identical bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
