//! Ant-colony search for a reduction of the input to the start symbol.
//!
//! Every production is a node of a complete directed graph (self-loops
//! included). An ant is placed on a random node carrying the input form.
//! At each node it reduces one occurrence of the node's right-hand side,
//! then moves along a link chosen by the pseudo-random-proportional rule.
//! An ant whose node does not match becomes inactive; one that reaches the
//! start symbol deposits `Q / hops` on every link it traversed.
//!
//! Ants of one iteration read a frozen pheromone snapshot. Evaporation and
//! then all deposits of the iteration are applied at the barrier, so serial
//! and parallel execution give identical results for the same seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::{Grammar, InputError, SententialForm};
use crate::rewrite::{find_matches, is_goal, reduce_step, Derivation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ColonyError {
    #[error("invalid colony configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("pheromone deposit requested for an unsuccessful ant")]
    DepositOnFailure,
    #[error("transition weights are all zero or not finite")]
    DegenerateRow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColonyConfig {
    pub n_ants: usize,
    pub n_iterations: usize,
    /// Probability of the roulette-wheel branch; the greedy branch gets the rest.
    pub q0: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Evaporation rate; 0 disables evaporation.
    pub rho: f64,
    pub deposit_q: f64,
    pub tau0: f64,
    pub tau_min: f64,
    /// Per-ant hop budget; `None` means `4 * |input| * |productions|`.
    pub max_hops: Option<usize>,
    pub seed: u64,
    /// Stop once the best derivation has not improved for this many iterations.
    pub patience: Option<usize>,
    /// Extra deposit on the best-so-far path each iteration, as a multiple of `deposit_q`.
    pub elitist: f64,
}

impl Default for ColonyConfig {
    fn default() -> Self {
        ColonyConfig {
            n_ants: 50,
            n_iterations: 200,
            q0: 0.9,
            alpha: 1.0,
            beta: 0.0,
            rho: 0.05,
            deposit_q: 1.0,
            tau0: 1.0,
            tau_min: 1e-4,
            max_hops: None,
            seed: 0,
            patience: None,
            elitist: 0.0,
        }
    }
}

impl ColonyConfig {
    pub fn validate(&self) -> Result<(), ColonyError> {
        let bad = |msg: &str| Err(ColonyError::InvalidConfig(msg.to_string()));
        if self.n_ants == 0 {
            return bad("n_ants must be at least 1");
        }
        if self.n_iterations == 0 {
            return bad("n_iterations must be at least 1");
        }
        if !(self.q0 > 0.0 && self.q0 < 1.0) {
            return bad("q0 must lie strictly between 0 and 1");
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad("alpha must be finite and non-negative");
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad("beta must be finite and non-negative");
        }
        if !(0.0..1.0).contains(&self.rho) {
            return bad("rho must lie in [0, 1)");
        }
        if !(self.deposit_q >= 0.0 && self.deposit_q.is_finite()) {
            return bad("deposit must be finite and non-negative");
        }
        if !(self.tau_min > 0.0 && self.tau_min.is_finite()) {
            return bad("tau_min must be positive");
        }
        if !(self.tau0 >= self.tau_min && self.tau0.is_finite()) {
            return bad("tau0 must be finite and at least tau_min");
        }
        if !(self.elitist >= 0.0 && self.elitist.is_finite()) {
            return bad("elitist weight must be finite and non-negative");
        }
        Ok(())
    }

    pub fn hop_budget(&self, grammar: &Grammar, omega: &SententialForm) -> usize {
        self.max_hops
            .unwrap_or(4 * omega.len() * grammar.productions().len())
    }
}

/// Trail and heuristic values on the complete graph over production nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneGraph {
    n: usize,
    tau: Vec<f64>,
    eta: Vec<f64>,
    tau_min: f64,
}

impl PheromoneGraph {
    pub fn new(n_nodes: usize, tau0: f64, tau_min: f64) -> Self {
        PheromoneGraph {
            n: n_nodes,
            tau: vec![tau0.max(tau_min); n_nodes * n_nodes],
            eta: vec![1.0; n_nodes * n_nodes],
            tau_min,
        }
    }

    /// Replaces the heuristic matrix (row-major, `n * n` entries).
    pub fn with_eta(mut self, eta: Vec<f64>) -> Self {
        assert_eq!(eta.len(), self.n * self.n, "eta must be n x n");
        self.eta = eta;
        self
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn tau_min(&self) -> f64 {
        self.tau_min
    }

    pub fn tau(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.n + j]
    }

    pub fn eta(&self, i: usize, j: usize) -> f64 {
        self.eta[i * self.n + j]
    }

    pub fn tau_row(&self, i: usize) -> &[f64] {
        &self.tau[i * self.n..(i + 1) * self.n]
    }

    pub fn eta_row(&self, i: usize) -> &[f64] {
        &self.eta[i * self.n..(i + 1) * self.n]
    }

    pub fn tau_values(&self) -> &[f64] {
        &self.tau
    }

    fn add(&mut self, i: usize, j: usize, amount: f64) {
        self.tau[i * self.n + j] += amount;
    }

    pub fn summary(&self) -> PheromoneSummary {
        let (mut min, mut max, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for &t in &self.tau {
            min = min.min(t);
            max = max.max(t);
            sum += t;
        }
        PheromoneSummary {
            min,
            max,
            mean: sum / self.tau.len().max(1) as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PheromoneSummary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AntStatus {
    Success,
    Inactive,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntOutcome {
    pub status: AntStatus,
    /// Present iff `status` is `Success`.
    pub derivation: Option<Derivation>,
    pub start_node: usize,
    /// Link traversals; the initial placement is hop 0.
    pub hops: usize,
    pub path: Vec<(usize, usize)>,
}

impl AntOutcome {
    pub fn is_success(&self) -> bool {
        self.status == AntStatus::Success
    }
}

fn weight(tau: f64, eta: f64, alpha: f64, beta: f64) -> f64 {
    let t = if alpha == 1.0 { tau } else { tau.powf(alpha) };
    let h = if beta == 0.0 { 1.0 } else { eta.powf(beta) };
    t * h
}

/// `P(j) = tau_j^alpha * eta_j^beta / sum_k tau_k^alpha * eta_k^beta`.
pub fn transition_probabilities(
    tau_row: &[f64],
    eta_row: &[f64],
    alpha: f64,
    beta: f64,
) -> Result<Vec<f64>, ColonyError> {
    debug_assert_eq!(tau_row.len(), eta_row.len());
    let weights: Vec<f64> = tau_row
        .iter()
        .zip(eta_row)
        .map(|(&t, &e)| weight(t, e, alpha, beta))
        .collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0 && total.is_finite()) || weights.iter().any(|w| w.is_nan() || *w < 0.0) {
        return Err(ColonyError::DegenerateRow);
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

fn argmax(weights: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_w = f64::NEG_INFINITY;
    for (j, w) in weights.enumerate() {
        // Strict comparison keeps the lowest index on ties.
        if w > best_w {
            best = j;
            best_w = w;
        }
    }
    best
}

/// Pseudo-random-proportional choice of the next node.
///
/// Draws `q` uniform in `[0, 1)`. If `q <= q0` the next node is sampled in
/// proportion to `tau^alpha * eta^beta`; otherwise the heaviest link wins,
/// ties going to the lowest index.
pub fn select_next_node<R: Rng + ?Sized>(
    rng: &mut R,
    q0: f64,
    tau_row: &[f64],
    eta_row: &[f64],
    alpha: f64,
    beta: f64,
) -> usize {
    let weights = || {
        tau_row
            .iter()
            .zip(eta_row)
            .map(move |(&t, &e)| weight(t, e, alpha, beta))
    };
    let q: f64 = rng.random();
    if q > q0 {
        return argmax(weights());
    }
    let total: f64 = weights().sum();
    if !(total > 0.0 && total.is_finite()) {
        return argmax(weights());
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (j, w) in weights().enumerate() {
        if w > 0.0 {
            last_positive = j;
        }
        acc += w;
        if target < acc {
            return j;
        }
    }
    last_positive
}

/// Runs one ant from a uniformly random starting node.
pub fn run_ant<R: Rng + ?Sized>(
    grammar: &Grammar,
    graph: &PheromoneGraph,
    omega: &SententialForm,
    config: &ColonyConfig,
    rng: &mut R,
) -> AntOutcome {
    let start = rng.random_range(0..graph.n_nodes());
    run_ant_from(grammar, graph, omega, config, start, rng)
}

/// Runs one ant placed on `start_node`.
pub fn run_ant_from<R: Rng + ?Sized>(
    grammar: &Grammar,
    graph: &PheromoneGraph,
    omega: &SententialForm,
    config: &ColonyConfig,
    start_node: usize,
    rng: &mut R,
) -> AntOutcome {
    let max_hops = config.hop_budget(grammar, omega);
    let productions = grammar.productions();
    let mut outcome = AntOutcome {
        status: AntStatus::Success,
        derivation: None,
        start_node,
        hops: 0,
        path: Vec::new(),
    };
    let mut derivation = Derivation::default();
    let mut form = omega.clone();

    if is_goal(&form, grammar) {
        outcome.derivation = Some(derivation);
        return outcome;
    }

    let mut node = start_node;
    loop {
        let production = &productions[node];
        let matches = find_matches(&form, production);
        if matches.is_empty() {
            outcome.status = AntStatus::Inactive;
            return outcome;
        }
        let position = matches[rng.random_range(0..matches.len())];
        let step = reduce_step(&form, production, position)
            .expect("position comes from find_matches");
        form = step.after.clone();
        derivation.steps.push(step);

        if is_goal(&form, grammar) {
            outcome.derivation = Some(derivation);
            return outcome;
        }
        if outcome.hops >= max_hops {
            outcome.status = AntStatus::Exhausted;
            return outcome;
        }
        let next = select_next_node(
            rng,
            config.q0,
            graph.tau_row(node),
            graph.eta_row(node),
            config.alpha,
            config.beta,
        );
        outcome.path.push((node, next));
        outcome.hops += 1;
        node = next;
    }
}

/// Adds `deposit_q / max(hops, 1)` to every traversed link, once per traversal.
pub fn deposit(
    graph: &mut PheromoneGraph,
    outcome: &AntOutcome,
    deposit_q: f64,
) -> Result<(), ColonyError> {
    if !outcome.is_success() {
        return Err(ColonyError::DepositOnFailure);
    }
    deposit_on_path(graph, &outcome.path, deposit_q / outcome.hops.max(1) as f64);
    Ok(())
}

fn deposit_on_path(graph: &mut PheromoneGraph, path: &[(usize, usize)], amount: f64) {
    for &(i, j) in path {
        graph.add(i, j, amount);
    }
}

/// `tau <- max(tau_min, (1 - rho) * tau)` on every link.
pub fn evaporate(graph: &mut PheromoneGraph, rho: f64) {
    let keep = 1.0 - rho;
    let floor = graph.tau_min;
    for t in &mut graph.tau {
        *t = (*t * keep).max(floor);
    }
}

/// Whether ants of one iteration run on the calling thread or on rayon's pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Serial,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub iteration: usize,
    pub successes: usize,
    pub inactive: usize,
    pub exhausted: usize,
    /// Best derivation length found so far, after this iteration.
    pub best_steps: Option<usize>,
    /// Pheromone after this iteration's update.
    pub pheromone: PheromoneSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseResult {
    pub accepted: bool,
    pub best_derivation: Option<Derivation>,
    /// Number of reductions in the best derivation.
    pub best_steps: Option<usize>,
    /// Link traversals of the ant that found the best derivation.
    pub best_hops: Option<usize>,
    pub best_path: Option<Vec<(usize, usize)>>,
    pub iterations_run: usize,
    pub successes: usize,
    pub stats: Vec<IterationStats>,
}

/// Seed of the RNG stream for one ant; independent of execution order.
pub fn ant_seed(seed: u64, iteration: usize, ant: usize) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(((iteration as u64) << 32) ^ ant as u64))
}

struct Best {
    derivation: Derivation,
    hops: usize,
    path: Vec<(usize, usize)>,
}

/// Iteration-by-iteration colony state.
pub struct Colony<'a> {
    grammar: &'a Grammar,
    omega: &'a SententialForm,
    config: ColonyConfig,
    graph: PheromoneGraph,
    iteration: usize,
    since_improvement: usize,
    successes: usize,
    best: Option<Best>,
    stats: Vec<IterationStats>,
}

impl<'a> Colony<'a> {
    pub fn new(
        grammar: &'a Grammar,
        omega: &'a SententialForm,
        config: ColonyConfig,
    ) -> Result<Self, ColonyError> {
        config.validate()?;
        grammar.check_form(omega)?;
        if omega.is_empty() {
            return Err(InputError::Empty.into());
        }
        let graph = PheromoneGraph::new(grammar.productions().len(), config.tau0, config.tau_min);
        Ok(Colony {
            grammar,
            omega,
            config,
            graph,
            iteration: 0,
            since_improvement: 0,
            successes: 0,
            best: None,
            stats: Vec::new(),
        })
    }

    pub fn pheromone(&self) -> &PheromoneGraph {
        &self.graph
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// True when the iteration limit or the patience limit has been reached.
    pub fn is_done(&self) -> bool {
        if self.iteration >= self.config.n_iterations {
            return true;
        }
        match self.config.patience {
            Some(p) => self.best.is_some() && self.since_improvement >= p,
            None => false,
        }
    }

    fn ant(&self, ant: usize) -> AntOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(ant_seed(self.config.seed, self.iteration, ant));
        run_ant(self.grammar, &self.graph, self.omega, &self.config, &mut rng)
    }

    /// Runs one iteration: all ants, then evaporation, then deposits.
    pub fn step(&mut self, execution: Execution) -> &IterationStats {
        let outcomes: Vec<AntOutcome> = match execution {
            Execution::Serial => (0..self.config.n_ants).map(|a| self.ant(a)).collect(),
            Execution::Parallel => (0..self.config.n_ants)
                .into_par_iter()
                .map(|a| self.ant(a))
                .collect(),
        };

        evaporate(&mut self.graph, self.config.rho);

        let mut successes = 0;
        let mut inactive = 0;
        let mut exhausted = 0;
        let mut improved = false;
        for outcome in outcomes {
            match outcome.status {
                AntStatus::Inactive => inactive += 1,
                AntStatus::Exhausted => exhausted += 1,
                AntStatus::Success => {
                    successes += 1;
                    deposit(&mut self.graph, &outcome, self.config.deposit_q)
                        .expect("outcome is a success");
                    let derivation = outcome.derivation.expect("success carries a derivation");
                    let better = self
                        .best
                        .as_ref()
                        .is_none_or(|b| derivation.len() < b.derivation.len());
                    if better {
                        improved = true;
                        self.best = Some(Best {
                            derivation,
                            hops: outcome.hops,
                            path: outcome.path,
                        });
                    }
                }
            }
        }

        if self.config.elitist > 0.0 {
            if let Some(best) = &self.best {
                let amount = self.config.elitist * self.config.deposit_q / best.hops.max(1) as f64;
                deposit_on_path(&mut self.graph, &best.path, amount);
            }
        }

        self.successes += successes;
        self.since_improvement = if improved { 0 } else { self.since_improvement + 1 };
        self.stats.push(IterationStats {
            iteration: self.iteration,
            successes,
            inactive,
            exhausted,
            best_steps: self.best.as_ref().map(|b| b.derivation.len()),
            pheromone: self.graph.summary(),
        });
        self.iteration += 1;
        self.stats.last().expect("just pushed")
    }

    pub fn finish(self) -> ParseResult {
        let accepted = self.best.is_some();
        let (best_derivation, best_steps, best_hops, best_path) = match self.best {
            Some(b) => (
                Some(b.derivation.clone()),
                Some(b.derivation.len()),
                Some(b.hops),
                Some(b.path),
            ),
            None => (None, None, None, None),
        };
        ParseResult {
            accepted,
            best_derivation,
            best_steps,
            best_hops,
            best_path,
            iterations_run: self.iteration,
            successes: self.successes,
            stats: self.stats,
        }
    }
}

/// Runs the colony on the calling thread.
pub fn run_colony(
    grammar: &Grammar,
    omega: &SententialForm,
    config: &ColonyConfig,
) -> Result<ParseResult, ColonyError> {
    run_colony_with(grammar, omega, config, Execution::Serial)
}

pub fn run_colony_with(
    grammar: &Grammar,
    omega: &SententialForm,
    config: &ColonyConfig,
    execution: Execution,
) -> Result<ParseResult, ColonyError> {
    let mut colony = Colony::new(grammar, omega, config.clone())?;
    while !colony.is_done() {
        colony.step(execution);
    }
    Ok(colony.finish())
}
