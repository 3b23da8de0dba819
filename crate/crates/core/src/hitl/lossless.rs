use crate::feedback::{Feedback, FeedbackError, FeedbackProvider, Stage};
use crate::seq::{lcs, trim_tokens, Token, TokenSeq};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LosslessOutcome {
    pub template: TokenSeq,
    /// Dummy-token rounds taken; never exceeds `min(len(a), len(b))`.
    pub rounds: usize,
}

/// Extracts a common subsequence of `a` and `b` without message loss.
///
/// Starts from `lcs(a, b)`. While both inputs are non-empty and the provider
/// reports message loss, it asks for dummy tokens, trims them from both inputs
/// and recomputes the LCS. A null dummy-token answer ends the loop with the
/// current LCS.
pub fn lossless_template<P: FeedbackProvider>(
    a: &[Token],
    b: &[Token],
    fb: &mut Feedback<P>,
) -> Result<LosslessOutcome, FeedbackError> {
    let mut a = TokenSeq::from(a.to_vec());
    let mut b = TokenSeq::from(b.to_vec());
    let mut template = lcs(&a, &b);
    let mut rounds = 0;
    while !a.is_empty() && !b.is_empty() {
        let samples = vec![a.clone(), b.clone()];
        if !fb.message_loss(Stage::Lossless, &template, samples.clone())? {
            break;
        }
        let Some(victims) = fb.dummy_tokens(Stage::Lossless, &template, samples)? else {
            break;
        };
        rounds += 1;
        a = trim_tokens(&a, &victims);
        b = trim_tokens(&b, &victims);
        template = lcs(&a, &b);
    }
    Ok(LosslessOutcome { template, rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feedback::{Answer, Question, QuestionKind, Simulator};
    use crate::model::LogStore;
    use crate::truth::GroundTruth;

    fn s(line: &str) -> TokenSeq {
        TokenSeq::parse(line)
    }

    /// Answers message loss by ground truth and names dummy tokens from a
    /// fixed script, the way a human who spots collisions would.
    struct Scripted<'a> {
        truth: &'a GroundTruth,
        dummies: Vec<&'static str>,
    }

    impl FeedbackProvider for Scripted<'_> {
        fn ask(&mut self, q: &Question) -> Result<Answer, FeedbackError> {
            Ok(match q.kind {
                QuestionKind::MessageLoss => Answer::MessageLoss {
                    loss: !self.truth.is_complete(&q.target),
                },
                QuestionKind::DummyToken => Answer::DummyToken {
                    tokens: Some(vec![Token::new(self.dummies.remove(0)).unwrap()]),
                },
                QuestionKind::Select => unreachable!(),
            })
        }
    }

    fn collision_case() -> (LogStore, GroundTruth) {
        // Both logs carry template "A B C"; the parameter run "y z w v"
        // appears in both and outweighs the template in the LCS.
        let logs = LogStore::from_lines(["A B y z w v C", "y z w v A B C"]);
        let gt = GroundTruth::new(vec![0, 0], vec![s("A B C")], vec![], &logs).unwrap();
        (logs, gt)
    }

    #[test]
    fn complete_lcs_needs_one_question() {
        let logs = LogStore::from_lines(["a 1 b", "a 2 b"]);
        let gt = GroundTruth::new(vec![0, 0], vec![s("a b")], vec![], &logs).unwrap();
        let mut fb = Feedback::new(Simulator::new(&gt));
        let out = lossless_template(&logs[0], &logs[1], &mut fb).unwrap();
        assert_eq!(out, LosslessOutcome { template: s("a b"), rounds: 0 });
        assert_eq!(fb.counters().n_message_loss, 1);
        assert_eq!(fb.counters().n_dummy_token, 0);
    }

    #[test]
    fn scripted_human_trims_collisions() {
        let (logs, gt) = collision_case();
        assert_eq!(lcs(&logs[0], &logs[1]), s("y z w v C"));
        // Trace: "y z w v C" (loss) -> trim y -> "z w v C" (loss) -> trim z
        // -> "w v" and "A B" tie before the shared "C"; the walk keeps "A B".
        let mut fb = Feedback::new(Scripted {
            truth: &gt,
            dummies: vec!["y", "z"],
        });
        let out = lossless_template(&logs[0], &logs[1], &mut fb).unwrap();
        assert_eq!(out.template, s("A B C"));
        assert_eq!(out.rounds, 2);
        assert_eq!(fb.counters().n_message_loss, 3);
        assert_eq!(fb.counters().n_dummy_token, 2);
    }

    #[test]
    fn simulator_falls_back_on_null() {
        let (logs, gt) = collision_case();
        let mut fb = Feedback::new(Simulator::new(&gt));
        let out = lossless_template(&logs[0], &logs[1], &mut fb).unwrap();
        assert_eq!(out.template, s("y z w v C"));
        assert_eq!(out.rounds, 0);
        assert_eq!(fb.counters().n_dummy_token, 1);
    }

    #[test]
    fn empty_input_asks_nothing() {
        let (_, gt) = collision_case();
        let mut fb = Feedback::new(Simulator::new(&gt));
        let out = lossless_template(&[], &s("A B C"), &mut fb).unwrap();
        assert!(out.template.is_empty());
        assert_eq!(fb.counters().total(), 0);
    }
}
