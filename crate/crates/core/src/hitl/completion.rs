use crate::exec::Execution;
use crate::feedback::{Feedback, FeedbackProvider};
use crate::model::{ClusterTemplatePair, LogStore};
use crate::seq::{is_subsequence, lcs, TokenSeq};

use super::{lossless_template, HitlError};

/// Completes the message of a mined template without touching its cluster.
///
/// Starts from the lowest-index member log and folds the remaining members in
/// ascending order: a log that already contains the running template is
/// skipped, otherwise the template becomes its LCS with the log. As soon as
/// the running template stops containing the mined template, the mined
/// template is returned unchanged. No feedback is consulted.
pub fn message_completion(pair: &ClusterTemplatePair, logs: &LogStore) -> TokenSeq {
    fold_members(pair, logs, |acc, log| Ok::<_, std::convert::Infallible>(lcs(acc, log)))
        .unwrap_or_else(|e| match e {})
}

/// [`message_completion`] with every LCS step replaced by lossless template
/// extraction, for corpora where same-template logs can share parameter
/// values and a plain LCS may lose message.
pub fn message_completion_lossless<P: FeedbackProvider>(
    pair: &ClusterTemplatePair,
    logs: &LogStore,
    fb: &mut Feedback<P>,
) -> Result<TokenSeq, HitlError> {
    fold_members(pair, logs, |acc, log| {
        lossless_template(acc, log, fb).map(|o| o.template)
    })
    .map_err(HitlError::from)
}

fn fold_members<E>(
    pair: &ClusterTemplatePair,
    logs: &LogStore,
    mut combine: impl FnMut(&TokenSeq, &TokenSeq) -> Result<TokenSeq, E>,
) -> Result<TokenSeq, E> {
    let mut members = pair.members.iter();
    let mut current = match members.next() {
        Some(&n) => logs[n].clone(),
        None => return Ok(pair.template.clone()),
    };
    for &n in members {
        let log = &logs[n];
        if is_subsequence(&current, log) {
            continue;
        }
        current = combine(&current, log)?;
        if !is_subsequence(&pair.template, &current) {
            return Ok(pair.template.clone());
        }
    }
    Ok(current)
}

/// Runs [`message_completion`] on every pair; pairs are independent, so this
/// is the pipeline's data-parallel pass.
pub fn complete_all(pairs: &[ClusterTemplatePair], logs: &LogStore, exec: Execution) -> Vec<ClusterTemplatePair> {
    exec.for_len(pairs.len(), 2).map(pairs, |pair| ClusterTemplatePair {
        template: message_completion(pair, logs),
        members: pair.members.clone(),
    })
}
