use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::exec::Execution;
use crate::feedback::{Feedback, FeedbackProvider};
use crate::model::{ClusterTemplatePair, LogStore, MinedClustering};

use super::merge::merge_observed;
use super::{complete_all, message_completion_lossless, separation, HitlError};

/// Safety cap on merge-separation rounds under [`RepeatPolicy::UntilStable`].
pub const MAX_ROUNDS: usize = 100;

/// How many merge-separation rounds to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepeatPolicy {
    /// `Rounds(n)` runs up to `n + 1` rounds; `Rounds(0)` is a single
    /// merge followed by separation of its loss set.
    Rounds(u32),
    /// Repeat until a merge produces no message-loss pairs.
    UntilStable,
}

impl Default for RepeatPolicy {
    fn default() -> Self {
        RepeatPolicy::Rounds(0)
    }
}

impl std::str::FromStr for RepeatPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "until-stable" | "until_stable" => Ok(RepeatPolicy::UntilStable),
            n => n
                .parse()
                .map(RepeatPolicy::Rounds)
                .map_err(|_| format!("expected a round count or `until-stable`, got {n:?}")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PipelineOptions {
    pub repeat: RepeatPolicy,
    /// Use lossless extraction inside message completion. Asks questions;
    /// meant for corpora whose same-template logs share parameter values.
    pub lossless_completion: bool,
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSummary {
    pub merge_input: usize,
    pub loss: usize,
    pub complete: usize,
    /// Pairs produced by separating the loss set.
    pub separated: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Completion,
    Merge,
    Separation,
    Finished,
}

/// Where a running pipeline is: `done` of `total` units of the current
/// phase (pairs for completion and merge, loss pairs for separation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub phase: Phase,
    /// 1-based merge/separation round; 0 during completion.
    pub round: usize,
    pub done: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOutcome {
    /// Pairs after message completion, before the first merge.
    pub completed: Vec<ClusterTemplatePair>,
    pub clustering: MinedClustering,
    pub rounds: Vec<RoundSummary>,
}

/// Message completion on every pair, then merge/separation rounds.
pub fn pipeline<P: FeedbackProvider>(
    base: &MinedClustering,
    logs: &LogStore,
    fb: &mut Feedback<P>,
    opts: &PipelineOptions,
) -> Result<PipelineOutcome, HitlError> {
    pipeline_with_progress(base, logs, fb, opts, &mut |_| {})
}

/// [`pipeline`] reporting its position to `on_progress` as it goes.
pub fn pipeline_with_progress<P: FeedbackProvider>(
    base: &MinedClustering,
    logs: &LogStore,
    fb: &mut Feedback<P>,
    opts: &PipelineOptions,
    on_progress: &mut dyn FnMut(Progress),
) -> Result<PipelineOutcome, HitlError> {
    let n_pairs = base.len();
    let mut report = |phase, round, done, total| {
        on_progress(Progress {
            phase,
            round,
            done,
            total,
        })
    };
    report(Phase::Completion, 0, 0, n_pairs);
    let completed = if opts.lossless_completion {
        let mut out = Vec::with_capacity(n_pairs);
        for (i, p) in base.pairs().iter().enumerate() {
            out.push(ClusterTemplatePair {
                template: message_completion_lossless(p, logs, fb)?,
                members: p.members.clone(),
            });
            report(Phase::Completion, 0, i + 1, n_pairs);
        }
        out
    } else {
        let out = complete_all(base.pairs(), logs, opts.exec);
        report(Phase::Completion, 0, n_pairs, n_pairs);
        out
    };

    let mut working = completed.clone();
    let mut rounds = Vec::new();
    loop {
        let merge_input = working.len();
        let round = rounds.len() + 1;
        let out = merge_observed(working, logs, fb, &mut |done, total| {
            report(Phase::Merge, round, done, total)
        })?;
        let mut summary = RoundSummary {
            merge_input,
            loss: out.loss.len(),
            complete: out.complete.len(),
            separated: 0,
        };
        if out.loss.is_empty() {
            rounds.push(summary);
            working = out.complete;
            break;
        }
        let mut next = out.complete;
        let n_loss = out.loss.len();
        for (i, lossy) in out.loss.iter().enumerate() {
            report(Phase::Separation, round, i, n_loss);
            let parts = separation(&lossy.members, logs, fb)?;
            summary.separated += parts.len();
            next.extend(parts);
        }
        debug!("round {round}: {summary:?}");
        rounds.push(summary);
        working = next;

        let done = match opts.repeat {
            RepeatPolicy::Rounds(n) => rounds.len() > n as usize,
            RepeatPolicy::UntilStable => {
                if rounds.len() >= MAX_ROUNDS {
                    warn!("stopping after {MAX_ROUNDS} rounds with loss pairs remaining");
                    true
                } else {
                    false
                }
            }
        };
        if done {
            break;
        }
    }

    let clustering = MinedClustering::new(working, base.n_logs())?;
    let n_out = clustering.len();
    report(Phase::Finished, rounds.len(), n_out, n_out);
    Ok(PipelineOutcome {
        completed,
        clustering,
        rounds,
    })
}
