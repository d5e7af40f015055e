//! JSON trace of a colony run.

use serde::{Deserialize, Serialize};

use crate::colony::{ColonyConfig, IterationStats, ParseResult};
use crate::grammar::{Grammar, InputError, SententialForm};
use crate::rewrite::{Derivation, DerivationStep};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub rule: usize,
    pub position: usize,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub input: String,
    pub accepted: bool,
    pub derivation: Vec<StepRecord>,
    pub steps: usize,
    pub hops: usize,
    pub iterations_run: usize,
    pub successes: usize,
    pub seed: u64,
    /// Configuration with the hop budget resolved.
    pub config: ColonyConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<Vec<IterationStats>>,
}

impl TraceRecord {
    pub fn new(
        grammar: &Grammar,
        omega: &SententialForm,
        config: &ColonyConfig,
        result: &ParseResult,
        with_iterations: bool,
    ) -> Self {
        let derivation = result
            .best_derivation
            .as_ref()
            .map(|d| step_records(grammar, d))
            .unwrap_or_default();
        let mut config = config.clone();
        config.max_hops = Some(config.hop_budget(grammar, omega));
        TraceRecord {
            input: grammar.render(omega),
            accepted: result.accepted,
            derivation,
            steps: result.best_steps.unwrap_or(0),
            hops: result.best_hops.unwrap_or(0),
            iterations_run: result.iterations_run,
            successes: result.successes,
            seed: config.seed,
            config,
            iterations: with_iterations.then(|| result.stats.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace is always serializable")
    }

    /// Rebuilds the recorded input and derivation against `grammar`.
    pub fn decode(
        &self,
        grammar: &Grammar,
    ) -> Result<(SententialForm, Derivation), InputError> {
        let form = |text: &str| grammar.form(&text.split_whitespace().collect::<Vec<_>>());
        let steps = self
            .derivation
            .iter()
            .map(|s| {
                Ok(DerivationStep {
                    rule_index: s.rule,
                    position: s.position,
                    before: form(&s.before)?,
                    after: form(&s.after)?,
                })
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok((form(&self.input)?, Derivation { steps }))
    }
}

/// JSON report of an oracle run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub input: String,
    pub member: bool,
    pub shortest_steps: Option<usize>,
    pub witness: Vec<StepRecord>,
    pub states_explored: usize,
}

impl OracleRecord {
    pub fn new(grammar: &Grammar, omega: &SententialForm, result: &crate::OracleResult) -> Self {
        OracleRecord {
            input: grammar.render(omega),
            member: result.member,
            shortest_steps: result.shortest_steps,
            witness: result
                .witness
                .as_ref()
                .map(|d| step_records(grammar, d))
                .unwrap_or_default(),
            states_explored: result.states_explored,
        }
    }
}

pub fn step_records(grammar: &Grammar, derivation: &Derivation) -> Vec<StepRecord> {
    derivation
        .steps
        .iter()
        .map(|s| StepRecord {
            rule: s.rule_index,
            position: s.position,
            before: grammar.render(&s.before),
            after: grammar.render(&s.after),
        })
        .collect()
}
