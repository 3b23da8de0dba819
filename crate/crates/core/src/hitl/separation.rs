use crate::feedback::{Feedback, FeedbackProvider, Stage};
use crate::model::{ClusterTemplatePair, LogStore};
use crate::seq::{is_subsequence, TokenSeq};

use super::{lossless_template, HitlError};

/// Splits a cluster into pure clusters with message-complete templates.
///
/// Member logs are streamed in ascending order. A log joins the first output
/// pair whose template embeds in it; otherwise a select question over the
/// current templates either starts a new pair with the log as its template
/// (null) or merges the log into the selected pair, replacing its template
/// with the lossless template of the two.
pub fn separation<P: FeedbackProvider>(
    members: &[usize],
    logs: &LogStore,
    fb: &mut Feedback<P>,
) -> Result<Vec<ClusterTemplatePair>, HitlError> {
    if members.is_empty() {
        return Err(HitlError::EmptyCluster);
    }
    let mut order = members.to_vec();
    order.sort_unstable();

    let mut out: Vec<ClusterTemplatePair> = Vec::new();
    for n in order {
        let log = &logs[n];
        if let Some(hit) = out.iter_mut().find(|p| is_subsequence(&p.template, log)) {
            hit.members.push(n);
            continue;
        }
        let pool: Vec<&TokenSeq> = out.iter().map(|p| &p.template).collect();
        match fb.select(Stage::Separation, log, Some(n), &pool, Vec::new())? {
            None => out.push(ClusterTemplatePair::singleton(n, log.clone())),
            Some(i) => {
                let merged = lossless_template(&out[i].template, log, fb)?;
                out[i].members.push(n);
                out[i].template = merged.template;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feedback::Simulator;
    use crate::truth::GroundTruth;

    fn s(line: &str) -> TokenSeq {
        TokenSeq::parse(line)
    }

    #[test]
    fn single_log() {
        let logs = LogStore::from_lines(["a 1"]);
        let gt = GroundTruth::new(vec![0], vec![s("a")], vec![], &logs).unwrap();
        let mut fb = Feedback::new(Simulator::new(&gt));
        let out = separation(&[0], &logs, &mut fb).unwrap();
        assert_eq!(out, vec![ClusterTemplatePair::singleton(0, s("a 1"))]);
        assert_eq!(fb.counters().n_select, 1);
        assert_eq!(fb.counters().question_lengths, vec![0]);
    }

    #[test]
    fn failed_password_logs_merge() {
        let logs = LogStore::from_lines([
            "Failed password from port 11, user=root",
            "Failed password from port 12, user=root",
        ]);
        let gt = GroundTruth::new(vec![0, 0], vec![s("Failed password from port")], vec![], &logs).unwrap();
        let mut fb = Feedback::new(Simulator::new(&gt));
        let out = separation(&[1, 0], &logs, &mut fb).unwrap();
        assert_eq!(
            out,
            vec![ClusterTemplatePair::new(vec![0, 1], s("Failed password from port user=root"))]
        );
        assert_eq!(fb.counters().selected_ranks, vec![1]);
    }

    #[test]
    fn mixed_cluster_splits() {
        let logs = LogStore::from_lines(["a 1 b", "c 2 d", "a 3 b", "c 4 d", "a 5 b"]);
        let gt = GroundTruth::new(vec![0, 1, 0, 1, 0], vec![s("a b"), s("c d")], vec![], &logs).unwrap();
        let mut fb = Feedback::new(Simulator::new(&gt));
        let out = separation(&[0, 1, 2, 3, 4], &logs, &mut fb).unwrap();
        assert_eq!(
            out,
            vec![
                ClusterTemplatePair::new(vec![0, 2, 4], s("a b")),
                ClusterTemplatePair::new(vec![1, 3], s("c d")),
            ]
        );
    }

    #[test]
    fn empty_cluster_is_rejected() {
        let logs = LogStore::from_lines(["a"]);
        let gt = GroundTruth::new(vec![0], vec![s("a")], vec![], &logs).unwrap();
        let mut fb = Feedback::new(Simulator::new(&gt));
        assert_eq!(separation(&[], &logs, &mut fb), Err(HitlError::EmptyCluster));
    }
}
