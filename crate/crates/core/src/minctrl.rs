//! Minimum controlled sets: the smallest set of variables whose replacement
//! by inputs makes a network controllable.
//!
//! The exact search enumerates candidate sets by increasing cardinality, and
//! lexicographically within each cardinality, testing each with the fast
//! controllability check. Every variable with a self-loop must be controlled
//! (nothing else removes the loop arc), which shrinks the search to subsets
//! of the remaining variables. The decision problem is NP-hard, so exact
//! search is guarded by a variable limit and a test budget; a greedy
//! heuristic is available for anything bigger.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::analysis::{check_controllability, Verdict};
use crate::model::{Cbcn, Cbn, DependencyGraph, Node};

/// Limits for the exact search.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Refuse exact search above this variable count.
    pub max_vars: usize,
    /// Maximum number of controllability tests before giving up.
    pub test_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_vars: 30,
            test_budget: 10_000_000,
        }
    }
}

/// A controlled set making the network controllable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinControlResult {
    /// The controlled index set `I`.
    pub control_set: BTreeSet<usize>,
    /// Verdict of the resulting network; always controllable.
    pub certificate: Verdict,
    /// True for exact search results: no smaller set works.
    pub exact: bool,
    /// Number of controllability tests performed.
    pub tested: u64,
    pub elapsed: Duration,
}

impl MinControlResult {
    pub fn cardinality(&self) -> usize {
        self.control_set.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("network has {vars} variables, above the exact-search limit of {limit}")]
    TooManyVariables { vars: usize, limit: usize },
    #[error("search exceeded the budget of {budget} tests; best feasible set so far has {} controls", best.cardinality())]
    BudgetExceeded {
        budget: u64,
        /// Best feasible (not necessarily minimum) set found.
        best: Box<MinControlResult>,
    },
}

struct Enumerator<'a> {
    cbn: &'a Cbn,
    budget: u64,
    tested: u64,
}

impl Enumerator<'_> {
    /// Tests one candidate set, charging the budget. `Err(())` means the
    /// budget ran out before the test.
    fn test(&mut self, candidate: &BTreeSet<usize>) -> Result<Option<Verdict>, ()> {
        if self.tested >= self.budget {
            return Err(());
        }
        self.tested += 1;
        let net = Cbcn::control(self.cbn, candidate).expect("candidate indices are in range");
        let verdict = check_controllability(&net);
        Ok(verdict.is_controllable().then_some(verdict))
    }

    fn extend(
        &mut self,
        mandatory: &BTreeSet<usize>,
        optional: &[usize],
        from: usize,
        left: usize,
        chosen: &mut Vec<usize>,
    ) -> Result<Option<(BTreeSet<usize>, Verdict)>, ()> {
        if left == 0 {
            let mut candidate = mandatory.clone();
            candidate.extend(chosen.iter().copied());
            return Ok(self.test(&candidate)?.map(|verdict| (candidate, verdict)));
        }
        for i in from..=optional.len().saturating_sub(left) {
            chosen.push(optional[i]);
            let found = self.extend(mandatory, optional, i + 1, left - 1, chosen)?;
            chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// First feasible set of cardinality at most `cap`, in (cardinality,
    /// lexicographic) order. That is the lexicographically smallest minimum
    /// set when one exists within the cap.
    fn search(&mut self, cap: usize) -> Result<Option<(BTreeSet<usize>, Verdict)>, ()> {
        let mandatory = self.cbn.self_loop_vars();
        if mandatory.len() > cap {
            return Ok(None);
        }
        let optional: Vec<usize> = self.cbn.vars().filter(|v| !mandatory.contains(v)).collect();
        for size in mandatory.len()..=cap {
            let extra = size - mandatory.len();
            if extra > optional.len() {
                break;
            }
            let mut chosen = Vec::with_capacity(extra);
            if let Some(found) = self.extend(&mandatory, &optional, 0, extra, &mut chosen)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

fn guard(cbn: &Cbn, config: &SearchConfig) -> Result<(), SearchError> {
    if cbn.var_count() > config.max_vars {
        return Err(SearchError::TooManyVariables {
            vars: cbn.var_count(),
            limit: config.max_vars,
        });
    }
    Ok(())
}

fn budget_error(cbn: &Cbn, config: &SearchConfig, started: Instant, tested: u64) -> SearchError {
    // The enumerator has not met a feasible set yet, so fall back to the
    // greedy answer as the best-known upper bound.
    let mut best = greedy_control_set(cbn);
    best.tested += tested;
    best.elapsed = started.elapsed();
    SearchError::BudgetExceeded {
        budget: config.test_budget,
        best: Box::new(best),
    }
}

/// Exact solution: the lexicographically smallest controlled set of minimum
/// cardinality.
pub fn minimal_control_set(
    cbn: &Cbn,
    config: &SearchConfig,
) -> Result<MinControlResult, SearchError> {
    guard(cbn, config)?;
    let started = Instant::now();
    let mut enumerator = Enumerator {
        cbn,
        budget: config.test_budget,
        tested: 0,
    };
    match enumerator.search(cbn.var_count()) {
        Ok(found) => {
            let (control_set, certificate) =
                found.expect("controlling every variable is always feasible");
            assert!(certificate.is_controllable());
            Ok(MinControlResult {
                control_set,
                certificate,
                exact: true,
                tested: enumerator.tested,
                elapsed: started.elapsed(),
            })
        }
        Err(()) => Err(budget_error(cbn, config, started, enumerator.tested)),
    }
}

/// Decision version: is there a controlled set of cardinality at most `k`?
pub fn decision_min_controls(
    cbn: &Cbn,
    k: usize,
    config: &SearchConfig,
) -> Result<bool, SearchError> {
    guard(cbn, config)?;
    let started = Instant::now();
    let mut enumerator = Enumerator {
        cbn,
        budget: config.test_budget,
        tested: 0,
    };
    match enumerator.search(k.min(cbn.var_count())) {
        Ok(found) => Ok(found.is_some()),
        Err(()) => Err(budget_error(cbn, config, started, enumerator.tested)),
    }
}

fn count_property_p_violations(g: &DependencyGraph) -> usize {
    g.simple_nodes()
        .filter(|&v| {
            !g.in_neighbors(v)
                .any(|u| u.is_generator() || g.is_channel(u))
        })
        .count()
}

/// Number of nodes lying on some cycle: members of a multi-node strongly
/// connected component, plus self-loops.
fn count_cycle_nodes(g: &DependencyGraph) -> usize {
    let n = g.var_count();
    let mut visited = vec![false; 2 * n];
    let mut postorder = Vec::with_capacity(g.node_count());
    for root in g.nodes() {
        if visited[root.dense_slot(n)] {
            continue;
        }
        visited[root.dense_slot(n)] = true;
        let mut stack: Vec<(Node, usize)> = vec![(root, 0)];
        while let Some(&mut (node, ref mut cursor)) = stack.last_mut() {
            if *cursor < g.out_degree(node) {
                let next = g.out_neighbor(node, *cursor);
                *cursor += 1;
                if !visited[next.dense_slot(n)] {
                    visited[next.dense_slot(n)] = true;
                    stack.push((next, 0));
                }
            } else {
                postorder.push(node);
                stack.pop();
            }
        }
    }

    // Second pass over reversed arcs in reverse postorder groups components.
    let mut component = vec![usize::MAX; 2 * n];
    let mut on_cycle = 0usize;
    for (id, &root) in postorder.iter().rev().enumerate() {
        if component[root.dense_slot(n)] != usize::MAX {
            continue;
        }
        let mut members = Vec::new();
        let mut stack = vec![root];
        component[root.dense_slot(n)] = id;
        while let Some(node) = stack.pop() {
            members.push(node);
            for prev in g.in_neighbors(node) {
                if component[prev.dense_slot(n)] == usize::MAX {
                    component[prev.dense_slot(n)] = id;
                    stack.push(prev);
                }
            }
        }
        if members.len() > 1 {
            on_cycle += members.len();
        } else if g.has_self_loop(members[0]) {
            on_cycle += 1;
        }
    }
    on_cycle
}

fn violation_count(g: &DependencyGraph) -> usize {
    count_cycle_nodes(g) + count_property_p_violations(g)
}

/// Greedy feasible set: start from the mandatory self-loop variables, then
/// repeatedly control the variable that removes the most remaining
/// violations (cycle memberships plus property-P failures), lowest index on
/// ties. Always succeeds; the result is not necessarily minimum.
pub fn greedy_control_set(cbn: &Cbn) -> MinControlResult {
    let started = Instant::now();
    let mut control_set = cbn.self_loop_vars();
    let mut tested = 0u64;
    loop {
        let net = Cbcn::control(cbn, &control_set).expect("indices in range");
        let verdict = check_controllability(&net);
        tested += 1;
        if verdict.is_controllable() {
            return MinControlResult {
                control_set,
                certificate: verdict,
                exact: false,
                tested,
                elapsed: started.elapsed(),
            };
        }
        let mut best: Option<(usize, usize)> = None;
        for v in cbn.vars().filter(|v| !control_set.contains(v)) {
            let mut candidate = control_set.clone();
            candidate.insert(v);
            let net = Cbcn::control(cbn, &candidate).expect("indices in range");
            let score = violation_count(&net.dependency_graph());
            tested += 1;
            if best.is_none_or(|(_, s)| score < s) {
                best = Some((v, score));
            }
        }
        let (v, _) = best.expect("an uncontrollable network has uncontrolled variables left");
        control_set.insert(v);
    }
}
