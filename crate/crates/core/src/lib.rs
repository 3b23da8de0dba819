//! Human-in-the-loop refinement of mined log templates.
//!
//! A base parser's clustering is repaired in three passes that ask a
//! feedback provider (a person, or a ground-truth simulator) small questions:
//! message completion fixes templates of pure clusters, merge joins partial
//! clusters that carry the same message, and separation splits mixed
//! clusters. [`hitl::pipeline`] chains them; [`metrics`] scores the result.

pub mod corpus;
pub mod exec;
pub mod feedback;
pub mod hitl;
pub mod metrics;
pub mod model;
pub mod report;
pub mod seq;
pub mod truth;

pub use exec::Execution;
pub use feedback::{Answer, Feedback, FeedbackCounters, FeedbackError, FeedbackProvider, Question, QuestionKind, Simulator};
pub use model::{ClusterTemplatePair, ClusteringError, LogStore, MinedClustering};
pub use report::RefinementReport;
pub use seq::{is_subsequence, lcs, lcs_len, Token, TokenSeq};
pub use truth::GroundTruth;
