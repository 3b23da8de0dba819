//! The human-in-the-loop refinement algorithms: message completion, lossless
//! template extraction, merge, separation, and the combined pipeline.
//!
//! Every algorithm streams its input once in ascending order (log index or
//! input list order), so results are reproducible for a given provider.

mod completion;
mod lossless;
mod merge;
mod pipeline;
mod separation;

pub use completion::{complete_all, message_completion, message_completion_lossless};
pub use lossless::{lossless_template, LosslessOutcome};
pub use merge::{merge, MergeOutput};
pub use pipeline::{
    pipeline, pipeline_with_progress, Phase, PipelineOptions, PipelineOutcome, Progress, RepeatPolicy, RoundSummary,
    MAX_ROUNDS,
};
pub use separation::separation;

use thiserror::Error;

use crate::feedback::FeedbackError;
use crate::model::ClusteringError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HitlError {
    #[error(transparent)]
    Feedback(#[from] FeedbackError),
    #[error("refined clustering is not a valid partition: {0}")]
    Validation(#[from] ClusteringError),
    #[error("cannot refine an empty cluster")]
    EmptyCluster,
}

/// How many member logs accompany a question as display context.
pub(crate) const SAMPLE_LOGS: usize = 3;
