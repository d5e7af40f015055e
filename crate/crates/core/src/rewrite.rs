//! Bottom-up reductions over sentential forms.
//!
//! A reduction replaces one occurrence of a production's right-hand side
//! with its left-hand side. Which occurrence to reduce is left to the
//! caller: the colony picks one at random, the oracle branches on all.

use thiserror::Error;

use crate::grammar::{Grammar, Production, SententialForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule {rule} does not match at position {position}")]
    NoMatch { rule: usize, position: usize },
    #[error("derivation step {step} refers to unknown rule {rule}")]
    UnknownRule { step: usize, rule: usize },
    #[error("corrupted derivation at step {step}: recorded form does not match the replayed one")]
    Corrupted { step: usize },
}

/// One applied reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub rule_index: usize,
    pub position: usize,
    pub before: SententialForm,
    pub after: SententialForm,
}

/// An ordered sequence of reductions, each step's `after` feeding the next
/// step's `before`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub steps: Vec<DerivationStep>,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rule_indices(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.rule_index).collect()
    }

    /// True when every step's `after` is the next step's `before`.
    pub fn is_chained(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].after == w[1].before)
    }
}

/// All positions where `production.rhs` occurs in `form`, ascending,
/// overlapping occurrences included.
pub fn find_matches(form: &SententialForm, production: &Production) -> Vec<usize> {
    let rhs = production.rhs.as_slice();
    if rhs.is_empty() || rhs.len() > form.len() {
        return Vec::new();
    }
    form.symbols()
        .windows(rhs.len())
        .enumerate()
        .filter_map(|(i, w)| (w == rhs).then_some(i))
        .collect()
}

fn matches_at(form: &SententialForm, production: &Production, position: usize) -> bool {
    let rhs = &production.rhs;
    !rhs.is_empty()
        && position + rhs.len() <= form.len()
        && &form.symbols()[position..position + rhs.len()] == rhs.as_slice()
}

/// Replaces `rhs` at `position` with `lhs`, returning a new form.
pub fn apply_reduction(
    form: &SententialForm,
    production: &Production,
    position: usize,
) -> Result<SententialForm, RewriteError> {
    if !matches_at(form, production, position) {
        return Err(RewriteError::NoMatch {
            rule: production.index,
            position,
        });
    }
    let symbols = form.symbols();
    let mut out = Vec::with_capacity(symbols.len() + 1 - production.rhs.len());
    out.extend_from_slice(&symbols[..position]);
    out.push(production.lhs);
    out.extend_from_slice(&symbols[position + production.rhs.len()..]);
    Ok(SententialForm::new(out))
}

/// Reduces and records the step.
pub fn reduce_step(
    form: &SententialForm,
    production: &Production,
    position: usize,
) -> Result<DerivationStep, RewriteError> {
    let after = apply_reduction(form, production, position)?;
    Ok(DerivationStep {
        rule_index: production.index,
        position,
        before: form.clone(),
        after,
    })
}

/// True iff `form` is exactly the start symbol.
pub fn is_goal(form: &SententialForm, grammar: &Grammar) -> bool {
    form.symbols() == [grammar.start()]
}

/// Re-applies every step of `derivation` starting from `start_form`.
///
/// Each recorded `before` must equal the current form and each recorded
/// `after` must equal the recomputed reduction. Steps are numbered from 1
/// in errors.
pub fn replay(
    grammar: &Grammar,
    derivation: &Derivation,
    start_form: &SententialForm,
) -> Result<SententialForm, RewriteError> {
    let mut current = start_form.clone();
    for (i, step) in derivation.steps.iter().enumerate() {
        let n = i + 1;
        if step.before != current {
            return Err(RewriteError::Corrupted { step: n });
        }
        let production = grammar
            .production(step.rule_index)
            .ok_or(RewriteError::UnknownRule {
                step: n,
                rule: step.rule_index,
            })?;
        let next = apply_reduction(&current, production, step.position)
            .map_err(|_| RewriteError::Corrupted { step: n })?;
        if next != step.after {
            return Err(RewriteError::Corrupted { step: n });
        }
        current = next;
    }
    Ok(current)
}
