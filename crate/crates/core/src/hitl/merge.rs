use crate::feedback::{Feedback, FeedbackProvider, Stage};
use crate::model::{ClusterTemplatePair, LogStore};
use crate::seq::{is_subsequence, TokenSeq};

use super::{lossless_template, HitlError, SAMPLE_LOGS};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeOutput {
    /// Input pairs whose templates were reported as message-loss, unchanged.
    pub loss: Vec<ClusterTemplatePair>,
    /// Message-complete pairs, at most one per distinct message.
    pub complete: Vec<ClusterTemplatePair>,
}

/// Merges partial clusters that carry the same message.
///
/// Each input pair, in order: if some complete pair's template embeds in its
/// template, the cluster is absorbed there and the incumbent template kept.
/// Otherwise a message-loss question routes it to the loss set, or a select
/// question over the complete templates either opens a new complete pair
/// (null) or merges into the selected one, whose template becomes the
/// lossless template of the two.
pub fn merge<P: FeedbackProvider>(
    input: Vec<ClusterTemplatePair>,
    logs: &LogStore,
    fb: &mut Feedback<P>,
) -> Result<MergeOutput, HitlError> {
    merge_observed(input, logs, fb, &mut |_, _| {})
}

/// [`merge`], calling `on_pair(done, total)` before each input pair with the
/// number of pairs already handled.
pub(crate) fn merge_observed<P: FeedbackProvider>(
    input: Vec<ClusterTemplatePair>,
    logs: &LogStore,
    fb: &mut Feedback<P>,
    on_pair: &mut dyn FnMut(usize, usize),
) -> Result<MergeOutput, HitlError> {
    let total = input.len();
    let mut out = MergeOutput::default();
    for (done, pair) in input.into_iter().enumerate() {
        on_pair(done, total);
        if let Some(hit) = out
            .complete
            .iter_mut()
            .find(|c| is_subsequence(&c.template, &pair.template))
        {
            hit.absorb(&pair.members);
            continue;
        }

        let samples: Vec<TokenSeq> = pair.sample_logs(logs, SAMPLE_LOGS).into_iter().cloned().collect();
        if fb.message_loss(Stage::Merge, &pair.template, samples.clone())? {
            out.loss.push(pair);
            continue;
        }

        let pool: Vec<&TokenSeq> = out.complete.iter().map(|c| &c.template).collect();
        match fb.select(Stage::Merge, &pair.template, None, &pool, samples)? {
            None => out.complete.push(pair),
            Some(i) => {
                let merged = lossless_template(&out.complete[i].template, &pair.template, fb)?;
                let target = &mut out.complete[i];
                target.absorb(&pair.members);
                target.template = merged.template;
            }
        }
    }
    Ok(out)
}
