use std::path::PathBuf;

use antparse_core::ColonyConfig;
use clap::{Args, Parser, Subcommand};

/// Context-free membership by ant-colony bottom-up reduction.
///
/// Exit codes: 0 accepted/member, 1 not accepted/not a member,
/// 2 usage or load error, 3 oracle budget exceeded.
#[derive(Debug, Parser)]
#[command(name = "antparse", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a reduction of the input to the start symbol with an ant colony.
    Recognize(RecognizeArgs),
    /// Decide membership exhaustively and report the shortest reduction.
    Oracle(OracleArgs),
    /// Sweep seeds over a file of inputs; one JSON object per line.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GrammarArgs {
    /// Grammar file.
    #[arg(long, value_name = "PATH")]
    pub grammar: PathBuf,
    /// Treat every character of an input as one symbol.
    #[arg(long)]
    pub chars: bool,
}

#[derive(Debug, Args)]
pub struct ColonyArgs {
    #[arg(long, default_value_t = ColonyConfig::default().n_ants)]
    pub ants: usize,
    #[arg(long, default_value_t = ColonyConfig::default().n_iterations)]
    pub iters: usize,
    #[arg(long, default_value_t = ColonyConfig::default().q0)]
    pub q0: f64,
    #[arg(long, default_value_t = ColonyConfig::default().alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = ColonyConfig::default().beta)]
    pub beta: f64,
    #[arg(long, default_value_t = ColonyConfig::default().rho)]
    pub rho: f64,
    /// Deposit numerator Q.
    #[arg(long, default_value_t = ColonyConfig::default().deposit_q)]
    pub deposit: f64,
    #[arg(long, default_value_t = ColonyConfig::default().tau0)]
    pub tau0: f64,
    #[arg(long, default_value_t = ColonyConfig::default().tau_min)]
    pub tau_min: f64,
    /// Per-ant hop budget [default: 4 * input length * rule count].
    #[arg(long)]
    pub max_hops: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stop after this many iterations without improvement of the best derivation.
    #[arg(long)]
    pub patience: Option<usize>,
    /// Extra deposit on the best-so-far path, as a multiple of Q.
    #[arg(long, default_value_t = 0.0)]
    pub elitist: f64,
    /// Run the ants of each iteration on all cores (results are identical).
    #[arg(long)]
    pub parallel: bool,
}

impl ColonyArgs {
    pub fn config(&self) -> ColonyConfig {
        ColonyConfig {
            n_ants: self.ants,
            n_iterations: self.iters,
            q0: self.q0,
            alpha: self.alpha,
            beta: self.beta,
            rho: self.rho,
            deposit_q: self.deposit,
            tau0: self.tau0,
            tau_min: self.tau_min,
            max_hops: self.max_hops,
            seed: self.seed,
            patience: self.patience,
            elitist: self.elitist,
        }
    }
}

#[derive(Debug, Args)]
pub struct RecognizeArgs {
    #[command(flatten)]
    pub grammar: GrammarArgs,
    /// Input string (whitespace-separated symbols).
    #[arg(long)]
    pub input: String,
    #[command(flatten)]
    pub colony: ColonyArgs,
    /// Print the trace record as JSON.
    #[arg(long)]
    pub json: bool,
    /// Include per-iteration statistics and pheromone summaries.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub grammar: GrammarArgs,
    #[arg(long)]
    pub input: String,
    /// Ceiling on distinct forms visited.
    #[arg(long, default_value_t = antparse_core::oracle::DEFAULT_STATE_LIMIT)]
    pub max_states: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub grammar: GrammarArgs,
    /// File with one input per line; blank lines and `#` comments are skipped.
    #[arg(long, value_name = "PATH")]
    pub inputs: PathBuf,
    /// Number of seeds per input, starting at --seed.
    #[arg(long, default_value_t = 100)]
    pub seeds: u64,
    #[command(flatten)]
    pub colony: ColonyArgs,
    #[arg(long, default_value_t = antparse_core::oracle::DEFAULT_STATE_LIMIT)]
    pub max_states: usize,
    /// Omit wall-clock fields so output is reproducible byte for byte.
    #[arg(long)]
    pub no_timing: bool,
}
