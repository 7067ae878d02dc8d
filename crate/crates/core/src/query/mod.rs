//! Query-based prediction: geometric interval partitions, a corruptible
//! comparison-query oracle, linear interval search over a precomputed
//! response string, and an error-tolerant binary interval search.

mod oracle;
mod partition;
mod rbis;
mod rlis;

pub use oracle::{make_oracle, ResponseOracle};
pub use partition::IntervalPartition;
pub use rbis::{
    query_lower_bound, rbis_bound, rbis_search, IterationRecord, QueryBudget, SearchAction,
    SearchTranscript, TreeNode,
};
pub use rlis::{
    rlis_bound, rlis_decide, rlis_preprocess, rlis_reservation, rlis_truthful_responses,
    ResponseString, RlisDecision,
};
