//! Error-tolerant binary search over a tree of 2^n price intervals.
//!
//! The search walks a full binary tree whose leaves are the left-open cells
//! (a_{i-1}, a_i] of a geometric partition. At each node it asks a main
//! comparison query against the rightmost leaf of the left subtree. When the
//! answer disagrees with the most recent answer at some ancestor, the
//! nearest such ancestor's query is re-asked as a checkup; agreement with
//! the stored answer lets the search descend, disagreement sends it one
//! level back up. After the query budget is spent, the result is hedged by
//! climbing toward the root once per unspent unit of the lie budget, and the
//! reservation price is the left edge of the surviving subtree.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::query::oracle::ResponseOracle;
use crate::query::partition::IntervalPartition;

/// Query count n and tolerated lie count H, with 0 <= H < n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryBudget {
    queries: usize,
    lie_bound: usize,
}

impl QueryBudget {
    pub fn new(queries: usize, lie_bound: usize) -> Result<Self> {
        if queries == 0 || lie_bound >= queries {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= lie bound < query count, got H={lie_bound}, n={queries}"
            )));
        }
        Ok(Self { queries, lie_bound })
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    pub fn lie_bound(&self) -> usize {
        self.lie_bound
    }
}

/// A node of the full binary tree, addressed by depth and offset within its
/// level. The root is (0, 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeNode {
    pub depth: u32,
    pub offset: u64,
}

impl TreeNode {
    pub const ROOT: TreeNode = TreeNode { depth: 0, offset: 0 };

    pub fn left(&self) -> TreeNode {
        TreeNode { depth: self.depth + 1, offset: 2 * self.offset }
    }

    pub fn right(&self) -> TreeNode {
        TreeNode { depth: self.depth + 1, offset: 2 * self.offset + 1 }
    }

    pub fn parent(&self) -> Option<TreeNode> {
        (self.depth > 0).then(|| TreeNode { depth: self.depth - 1, offset: self.offset / 2 })
    }

    /// Climbs `levels` toward the root, stopping there.
    pub fn ancestor_or_root(&self, levels: u32) -> TreeNode {
        let climb = levels.min(self.depth);
        TreeNode { depth: self.depth - climb, offset: self.offset >> climb }
    }

    pub fn is_leaf(&self, tree_height: u32) -> bool {
        self.depth == tree_height
    }

    /// 1-based inclusive span of leaves under this node, in a tree of the
    /// given height.
    pub fn leaf_span(&self, tree_height: u32) -> (u64, u64) {
        let size = 1u64 << (tree_height - self.depth);
        let lo = self.offset * size + 1;
        (lo, lo + size - 1)
    }

    /// Grid index of the main query at this node: the rightmost leaf of the
    /// left subtree.
    pub fn main_query_index(&self, tree_height: u32) -> u64 {
        let size = 1u64 << (tree_height - self.depth);
        self.offset * size + size / 2
    }
}

impl std::fmt::Display for TreeNode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.depth, self.offset)
    }
}

/// What an iteration did after its queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchAction {
    MoveDownLeft,
    MoveDownRight,
    MoveUp,
}

impl std::fmt::Display for SearchAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchAction::MoveDownLeft => write!(f, "down-left"),
            SearchAction::MoveDownRight => write!(f, "down-right"),
            SearchAction::MoveUp => write!(f, "up"),
        }
    }
}

/// One iteration of the search loop. `action` is `None` only for a final
/// iteration whose checkup no longer fit in the budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationRecord {
    pub node: TreeNode,
    /// Response to the main query ("is p* <= a_q").
    pub main: bool,
    /// Response to the checkup query, when one was asked.
    pub checkup: Option<bool>,
    pub action: Option<SearchAction>,
}

/// Full record of a search run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchTranscript {
    pub iterations: Vec<IterationRecord>,
    /// Total queries consumed (mains plus checkups).
    pub queries_used: usize,
    /// Move-up count at the end of the search.
    pub move_ups: usize,
    /// Node where the search stopped.
    pub final_node: TreeNode,
    /// The hedged ancestor whose subtree backs the reservation.
    pub fallback_node: TreeNode,
    /// Grid index l - 1 of the reservation price, where L_l is the leftmost
    /// leaf under the fallback node.
    pub reservation_index: u64,
}

impl SearchTranscript {
    /// Lines for the CLI trace command, one iteration per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, rec) in self.iterations.iter().enumerate() {
            let check = match rec.checkup {
                Some(true) => "yes",
                Some(false) => "no",
                None => "-",
            };
            let action = match rec.action {
                Some(a) => a.to_string(),
                None => "defer".to_string(),
            };
            out.push_str(&format!(
                "iter={} node={} main={} check={} action={}\n",
                i + 1,
                rec.node,
                if rec.main { "yes" } else { "no" },
                check,
                action
            ));
        }
        out.push_str(&format!(
            "queries={} move_ups={} final={} fallback={} reservation_index={}\n",
            self.queries_used, self.move_ups, self.final_node, self.fallback_node, self.reservation_index
        ));
        out
    }
}

/// Runs the robust binary interval search against `oracle` and returns the
/// reservation price together with the full transcript.
///
/// The partition must have 2^k cells; the tree height is derived from it.
/// When only one query remains and an iteration needs a checkup, the main
/// query is still asked but the move is deferred and the search stops. A
/// move-down that lands on a leaf with budget to spare stops the search
/// there.
pub fn rbis_search(
    oracle: &mut ResponseOracle,
    budget: QueryBudget,
    part: &IntervalPartition,
) -> Result<(f64, SearchTranscript)> {
    if !part.cells().is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "binary interval search needs a power-of-two cell count, got {}",
            part.cells()
        )));
    }
    let height = part.cells().trailing_zeros();
    if oracle.asked() != 0 {
        return Err(Error::InvalidInput(
            "oracle has already answered queries for another search".into(),
        ));
    }

    let mut main_responses: HashMap<TreeNode, bool> = HashMap::new();
    let mut iterations = Vec::new();
    let mut node = TreeNode::ROOT;
    let mut queries_used = 0usize;
    let mut move_ups = 0usize;

    while queries_used < budget.queries() {
        if node.is_leaf(height) {
            break;
        }
        let main = oracle.answer(node.main_query_index(height));
        queries_used += 1;
        main_responses.insert(node, main);

        // Nearest ancestor whose most recent main response disagrees.
        let mut ancestor = None;
        let mut walk = node.parent();
        while let Some(w) = walk {
            let recorded = *main_responses
                .get(&w)
                .ok_or_else(|| Error::InternalInvariant(format!("ancestor {w} was never queried")))?;
            if recorded != main {
                ancestor = Some((w, recorded));
                break;
            }
            walk = w.parent();
        }

        enum Step {
            Defer,
            Down,
            Up,
        }

        let (checkup, step) = match ancestor {
            None => (None, Step::Down),
            Some((w, recorded)) => {
                if queries_used == budget.queries() {
                    // Checkup no longer affordable: stop without moving.
                    (None, Step::Defer)
                } else {
                    let check = oracle.answer(w.main_query_index(height));
                    queries_used += 1;
                    if check == recorded {
                        (Some(check), Step::Down)
                    } else {
                        (Some(check), Step::Up)
                    }
                }
            }
        };

        match step {
            Step::Defer => {
                iterations.push(IterationRecord { node, main, checkup, action: None });
                break;
            }
            Step::Down => {
                let action = if main { SearchAction::MoveDownLeft } else { SearchAction::MoveDownRight };
                iterations.push(IterationRecord { node, main, checkup, action: Some(action) });
                node = if main { node.left() } else { node.right() };
            }
            Step::Up => {
                move_ups += 1;
                iterations.push(IterationRecord { node, main, checkup, action: Some(SearchAction::MoveUp) });
                node = node.parent().ok_or_else(|| {
                    Error::InternalInvariant("move-up from the root is impossible".into())
                })?;
            }
        }
    }

    let climb = budget.lie_bound().saturating_sub(move_ups);
    let fallback = node.ancestor_or_root(climb as u32);
    let (leftmost_leaf, _) = fallback.leaf_span(height);
    let reservation_index = leftmost_leaf - 1;
    let reservation = part.point(reservation_index);

    Ok((
        reservation,
        SearchTranscript {
            iterations,
            queries_used,
            move_ups,
            final_node: node,
            fallback_node: fallback,
            reservation_index,
        },
    ))
}

/// The proven competitive ratio (M/m)^(2^(2H - n/2)), available for H <= n/4.
pub fn rbis_bound(query_count: usize, lie_bound: usize, bounds: crate::search::PriceBounds) -> Result<f64> {
    if 4 * lie_bound > query_count {
        return Err(Error::GuaranteeUnavailable(format!(
            "binary search guarantee needs H <= n/4, got H={lie_bound}, n={query_count}"
        )));
    }
    let exponent = (2.0f64).powf(2.0 * lie_bound as f64 - query_count as f64 / 2.0);
    Ok(bounds.spread().powf(exponent))
}

/// The reported query-model lower bound (M/m)^(2^(2H - n)); no construction
/// behind it, a reduction proves it for n >= 11.
pub fn query_lower_bound(
    query_count: usize,
    lie_bound: usize,
    bounds: crate::search::PriceBounds,
) -> Result<f64> {
    if query_count < 11 {
        return Err(Error::GuaranteeUnavailable(format!(
            "query lower bound is proved for n >= 11, got n={query_count}"
        )));
    }
    if 2 * lie_bound >= query_count {
        return Err(Error::GuaranteeUnavailable(format!(
            "query lower bound needs 2H < n, got H={lie_bound}, n={query_count}"
        )));
    }
    let exponent = (2.0f64).powf(2.0 * lie_bound as f64 - query_count as f64);
    Ok(bounds.spread().powf(exponent))
}
