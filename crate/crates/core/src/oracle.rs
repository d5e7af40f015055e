//! Exhaustive breadth-first recognizer.
//!
//! Every successor of a form is generated (each production at each match
//! position) and forms are never expanded twice. Since no production has an
//! empty right-hand side, reductions never lengthen a form, so the reachable
//! space is finite and the search always terminates. The first time the
//! start symbol is generated its depth is the shortest reduction length.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::grammar::{Grammar, SententialForm, SymbolId};
use crate::rewrite::{apply_reduction, find_matches, is_goal, Derivation, DerivationStep};

pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

/// Ceiling on the number of candidate strings `enumerate_members` will test.
pub const DEFAULT_CANDIDATE_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle budget exceeded: more than {limit} forms")]
    BudgetExceeded { limit: usize },
    #[error("enumeration budget exceeded: more than {limit} candidate strings")]
    TooManyCandidates { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub member: bool,
    pub shortest_steps: Option<usize>,
    pub witness: Option<Derivation>,
    /// Distinct forms expanded.
    pub states_explored: usize,
}

struct Node {
    form: SententialForm,
    parent: Option<(usize, usize, usize)>, // (parent node, rule, position)
}

fn witness(nodes: &[Node], mut at: usize) -> Derivation {
    let mut steps = Vec::new();
    while let Some((parent, rule, position)) = nodes[at].parent {
        steps.push(DerivationStep {
            rule_index: rule,
            position,
            before: nodes[parent].form.clone(),
            after: nodes[at].form.clone(),
        });
        at = parent;
    }
    steps.reverse();
    Derivation { steps }
}

/// Shortest reduction of `omega` to the start symbol, or proof that none exists.
///
/// `state_limit` bounds the number of distinct forms stored; exceeding it is
/// reported as [`OracleError::BudgetExceeded`], never as non-membership.
pub fn shortest_reduction(
    grammar: &Grammar,
    omega: &SententialForm,
    state_limit: usize,
) -> Result<OracleResult, OracleError> {
    if is_goal(omega, grammar) {
        return Ok(OracleResult {
            member: true,
            shortest_steps: Some(0),
            witness: Some(Derivation::default()),
            states_explored: 0,
        });
    }

    let mut nodes = vec![Node {
        form: omega.clone(),
        parent: None,
    }];
    let mut seen: HashMap<SententialForm, usize> = HashMap::new();
    seen.insert(omega.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut explored = 0;

    while let Some(at) = queue.pop_front() {
        explored += 1;
        for production in grammar.productions() {
            for position in find_matches(&nodes[at].form, production) {
                let next = apply_reduction(&nodes[at].form, production, position)
                    .expect("position comes from find_matches");
                if seen.contains_key(&next) {
                    continue;
                }
                if seen.len() >= state_limit {
                    return Err(OracleError::BudgetExceeded { limit: state_limit });
                }
                let id = nodes.len();
                let goal = is_goal(&next, grammar);
                seen.insert(next.clone(), id);
                nodes.push(Node {
                    form: next,
                    parent: Some((at, production.index, position)),
                });
                if goal {
                    let w = witness(&nodes, id);
                    return Ok(OracleResult {
                        member: true,
                        shortest_steps: Some(w.len()),
                        witness: Some(w),
                        states_explored: explored,
                    });
                }
                queue.push_back(id);
            }
        }
    }

    Ok(OracleResult {
        member: false,
        shortest_steps: None,
        witness: None,
        states_explored: explored,
    })
}

/// Every terminal string of length `1..=max_len` in the grammar's language.
///
/// Tests each candidate over the terminal alphabet with
/// [`shortest_reduction`]. Results are ordered by length, then by symbol id.
pub fn enumerate_members(
    grammar: &Grammar,
    max_len: usize,
    candidate_limit: usize,
    state_limit: usize,
) -> Result<BTreeSet<SententialForm>, OracleError> {
    let terminals: Vec<SymbolId> = grammar.terminals().collect();
    let mut total: usize = 0;
    for len in 1..=max_len {
        let count = terminals
            .len()
            .checked_pow(len as u32)
            .ok_or(OracleError::TooManyCandidates {
                limit: candidate_limit,
            })?;
        total = total.saturating_add(count);
    }
    if total > candidate_limit {
        return Err(OracleError::TooManyCandidates {
            limit: candidate_limit,
        });
    }

    let mut members = BTreeSet::new();
    if terminals.is_empty() {
        return Ok(members);
    }
    for len in 1..=max_len {
        let mut digits = vec![0usize; len];
        loop {
            let form = SententialForm::new(digits.iter().map(|&d| terminals[d]).collect());
            if shortest_reduction(grammar, &form, state_limit)?.member {
                members.insert(form);
            }
            // Odometer increment.
            let mut k = len;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < terminals.len() {
                    break;
                }
                digits[k] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    Ok(members)
}
