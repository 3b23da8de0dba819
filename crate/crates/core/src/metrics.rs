//! Ground-truth-referenced evaluation: group accuracy, message accuracy,
//! per-pair diagnosis, the error census, and query-complexity statistics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::feedback::FeedbackCounters;
use crate::model::{ClusterTemplatePair, LogStore, MinedClustering};
use crate::seq::is_subsequence;
use crate::truth::GroundTruth;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("log index {0} is not covered by the ground truth")]
    UnknownLog(usize),
    #[error("cannot diagnose an empty cluster")]
    EmptyCluster,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Purity {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fullness {
    Full,
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    Complete,
    Loss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    Correct,
    LossPure,
    CompletePartial,
    LossMixed,
    /// A mixed cluster whose template is still complete; cannot happen when
    /// mixed clusters always lose message.
    CompleteMixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDiagnosis {
    pub purity: Purity,
    /// Only defined for pure clusters.
    pub fullness: Option<Fullness>,
    pub completeness: Completeness,
    /// The cluster all members belong to, when pure.
    pub pure_cluster: Option<usize>,
    /// The ground-truth cluster whose template the pair's template carries.
    pub matched_gt_cluster: Option<usize>,
}

impl PairDiagnosis {
    pub fn class(&self) -> ErrorClass {
        match (self.purity, self.completeness, self.fullness) {
            (Purity::Pure, Completeness::Loss, _) => ErrorClass::LossPure,
            (Purity::Pure, Completeness::Complete, Some(Fullness::Full)) => ErrorClass::Correct,
            (Purity::Pure, Completeness::Complete, _) => ErrorClass::CompletePartial,
            (Purity::Mixed, Completeness::Loss, _) => ErrorClass::LossMixed,
            (Purity::Mixed, Completeness::Complete, _) => ErrorClass::CompleteMixed,
        }
    }
}

pub fn diagnose(pair: &ClusterTemplatePair, truth: &GroundTruth) -> Result<PairDiagnosis, MetricsError> {
    let first = *pair.members.first().ok_or(MetricsError::EmptyCluster)?;
    let mut shared = Some(gt_cluster(truth, first)?);
    for &n in &pair.members[1..] {
        if Some(gt_cluster(truth, n)?) != shared {
            shared = None;
        }
    }
    let (purity, fullness) = match shared {
        Some(k) if truth.cluster_size(k) == pair.members.len() => (Purity::Pure, Some(Fullness::Full)),
        Some(_) => (Purity::Pure, Some(Fullness::Partial)),
        None => (Purity::Mixed, None),
    };
    let matched = truth.matched_cluster(&pair.template);
    Ok(PairDiagnosis {
        purity,
        fullness,
        completeness: if matched.is_some() {
            Completeness::Complete
        } else {
            Completeness::Loss
        },
        pure_cluster: shared,
        matched_gt_cluster: matched,
    })
}

fn gt_cluster(truth: &GroundTruth, n: usize) -> Result<usize, MetricsError> {
    if n < truth.n_logs() {
        Ok(truth.cluster_of(n))
    } else {
        Err(MetricsError::UnknownLog(n))
    }
}

fn check_covered(mc: &MinedClustering, truth: &GroundTruth) -> Result<(), MetricsError> {
    if mc.n_logs() > truth.n_logs() {
        Err(MetricsError::UnknownLog(truth.n_logs()))
    } else {
        Ok(())
    }
}

/// Fraction of logs whose mined cluster equals a ground-truth cluster exactly.
pub fn group_accuracy(mc: &MinedClustering, truth: &GroundTruth) -> Result<f64, MetricsError> {
    group_accuracy_with(mc, truth, Execution::default())
}

pub fn group_accuracy_with(
    mc: &MinedClustering,
    truth: &GroundTruth,
    exec: Execution,
) -> Result<f64, MetricsError> {
    check_covered(mc, truth)?;
    if mc.n_logs() == 0 {
        return Ok(1.0);
    }
    let hits = exec.for_len(mc.len(), 256).map(mc.pairs(), |pair| {
        let k = truth.cluster_of(pair.members[0]);
        let exact = truth.cluster_size(k) == pair.members.len()
            && pair.members.iter().all(|&n| truth.cluster_of(n) == k);
        if exact {
            pair.members.len()
        } else {
            0
        }
    });
    Ok(hits.iter().sum::<usize>() as f64 / mc.n_logs() as f64)
}

/// Fraction of logs whose own ground-truth template embeds in the template
/// of the cluster they were mined into.
pub fn message_accuracy(mc: &MinedClustering, truth: &GroundTruth) -> Result<f64, MetricsError> {
    message_accuracy_with(mc, truth, Execution::default())
}

pub fn message_accuracy_with(
    mc: &MinedClustering,
    truth: &GroundTruth,
    exec: Execution,
) -> Result<f64, MetricsError> {
    check_covered(mc, truth)?;
    if mc.n_logs() == 0 {
        return Ok(1.0);
    }
    let hits = exec.for_len(mc.len(), 64).map(mc.pairs(), |pair| {
        // one embedding test per distinct ground-truth cluster in the pair
        let mut verdict: Vec<Option<bool>> = vec![None; truth.k()];
        pair.members
            .iter()
            .filter(|&&n| {
                let k = truth.cluster_of(n);
                *verdict[k].get_or_insert_with(|| is_subsequence(truth.template(k), &pair.template))
            })
            .count()
    });
    Ok(hits.iter().sum::<usize>() as f64 / mc.n_logs() as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCensus {
    pub correct: usize,
    pub loss_pure: usize,
    pub complete_partial: usize,
    pub loss_mixed: usize,
    pub complete_mixed: usize,
}

impl ErrorCensus {
    pub fn total(&self) -> usize {
        self.correct + self.loss_pure + self.complete_partial + self.loss_mixed + self.complete_mixed
    }

    fn add(&mut self, class: ErrorClass) {
        match class {
            ErrorClass::Correct => self.correct += 1,
            ErrorClass::LossPure => self.loss_pure += 1,
            ErrorClass::CompletePartial => self.complete_partial += 1,
            ErrorClass::LossMixed => self.loss_mixed += 1,
            ErrorClass::CompleteMixed => self.complete_mixed += 1,
        }
    }
}

pub fn census(pairs: &[ClusterTemplatePair], truth: &GroundTruth) -> Result<ErrorCensus, MetricsError> {
    census_with(pairs, truth, Execution::default())
}

pub fn census_with(
    pairs: &[ClusterTemplatePair],
    truth: &GroundTruth,
    exec: Execution,
) -> Result<ErrorCensus, MetricsError> {
    let diagnoses = exec.for_len(pairs.len(), 64).map(pairs, |p| diagnose(p, truth));
    let mut out = ErrorCensus::default();
    for d in diagnoses {
        out.add(d?.class());
    }
    if out.complete_mixed > 0 {
        log::warn!("{} mixed clusters carry a complete template", out.complete_mixed);
    }
    Ok(out)
}

/// GA, MA and census of one clustering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub ga: f64,
    pub ma: f64,
    pub n_clusters: usize,
    pub census: ErrorCensus,
}

pub fn evaluate(mc: &MinedClustering, truth: &GroundTruth) -> Result<Evaluation, MetricsError> {
    evaluate_with(mc, truth, Execution::default())
}

pub fn evaluate_with(mc: &MinedClustering, truth: &GroundTruth, exec: Execution) -> Result<Evaluation, MetricsError> {
    Ok(Evaluation {
        ga: group_accuracy_with(mc, truth, exec)?,
        ma: message_accuracy_with(mc, truth, exec)?,
        n_clusters: mc.len(),
        census: census_with(mc.pairs(), truth, exec)?,
    })
}

/// The two quantities the select and dummy-token query bounds are stated in.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryParams {
    /// Distinct ground-truth templates present in the input.
    pub n_templates: usize,
    /// Largest token surplus of an input sequence over its ground-truth
    /// template.
    pub max_surplus: usize,
}

impl QueryParams {
    pub fn select_bound(&self) -> usize {
        self.n_templates * (self.max_surplus + 1)
    }

    pub fn dummy_bound(&self) -> usize {
        self.n_templates * self.max_surplus * self.max_surplus
    }
}

/// Bound parameters of a merge input: ground-truth templates embedded in any
/// input template, and the largest surplus of a complete template over the
/// ground-truth template of its cluster.
pub fn merge_query_params(pairs: &[ClusterTemplatePair], truth: &GroundTruth) -> QueryParams {
    let mut seen = vec![false; truth.k()];
    let mut max_surplus = 0;
    for pair in pairs {
        let mut complete = false;
        for k in truth.embedded_clusters(&pair.template) {
            seen[k] = true;
            complete = true;
        }
        if !complete {
            continue;
        }
        let reference = match diagnose(pair, truth) {
            Ok(PairDiagnosis {
                pure_cluster: Some(k), ..
            }) => Some(k),
            _ => truth.matched_cluster(&pair.template),
        };
        if let Some(k) = reference {
            max_surplus = max_surplus.max(pair.template.len().saturating_sub(truth.template(k).len()));
        }
    }
    QueryParams {
        n_templates: seen.iter().filter(|&&s| s).count(),
        max_surplus,
    }
}

/// Bound parameters of a separation input: ground-truth templates embedded
/// in any member log, and the largest surplus of a member log over its own
/// ground-truth template.
pub fn separation_query_params(members: &[usize], logs: &LogStore, truth: &GroundTruth) -> QueryParams {
    let mut seen = vec![false; truth.k()];
    let mut max_surplus = 0;
    for &n in members {
        for k in truth.embedded_clusters(&logs[n]) {
            seen[k] = true;
        }
        max_surplus = max_surplus.max(logs[n].len() - truth.template_of_log(n).len());
    }
    QueryParams {
        n_templates: seen.iter().filter(|&&s| s).count(),
        max_surplus,
    }
}

/// The query-complexity row reported for a refinement run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityStats {
    pub n_input_pairs: usize,
    pub n_complete_input_pairs: usize,
    pub n_distinct_templates: usize,
    /// Complete input pairs per distinct template.
    pub redundancy: f64,
    pub max_dummy_tokens: usize,
    pub avg_question_length: Option<f64>,
    pub avg_selected_rank: Option<f64>,
    pub n_message_loss: usize,
    pub n_select: usize,
    pub n_dummy_token: usize,
}

pub fn complexity_stats(
    input_pairs: &[ClusterTemplatePair],
    truth: &GroundTruth,
    counters: &FeedbackCounters,
) -> ComplexityStats {
    let params = merge_query_params(input_pairs, truth);
    let n_complete = input_pairs.iter().filter(|p| truth.is_complete(&p.template)).count();
    ComplexityStats {
        n_input_pairs: input_pairs.len(),
        n_complete_input_pairs: n_complete,
        n_distinct_templates: params.n_templates,
        redundancy: if params.n_templates == 0 {
            0.0
        } else {
            n_complete as f64 / params.n_templates as f64
        },
        max_dummy_tokens: params.max_surplus,
        avg_question_length: counters.avg_question_length(),
        avg_selected_rank: counters.avg_selected_rank(),
        n_message_loss: counters.n_message_loss,
        n_select: counters.n_select,
        n_dummy_token: counters.n_dummy_token,
    }
}
