//! Context-free membership by ant-colony bottom-up reduction.
//!
//! Productions become nodes of a complete graph. Artificial ants carry the
//! input string, reduce it with the rule of each node they visit, and lay
//! pheromone on the links of walks that reach the start symbol. Ambiguous,
//! redundant and left-recursive grammars are used as written.
//!
//! [`oracle`] is an exhaustive breadth-first recognizer used to check the
//! colony: it decides membership and gives the shortest reduction length.
//!
//! ```
//! use antparse_core::{parse_grammar, parse_input, run_colony, shortest_reduction, ColonyConfig};
//!
//! let grammar = parse_grammar("start: S\nS -> a A\nA -> b\n").unwrap();
//! let omega = parse_input("a b", &grammar, false).unwrap();
//! let result = run_colony(&grammar, &omega, &ColonyConfig::default()).unwrap();
//! assert!(result.accepted);
//! let oracle = shortest_reduction(&grammar, &omega, 1000).unwrap();
//! assert_eq!(oracle.shortest_steps, result.best_steps);
//! ```

pub mod colony;
pub mod grammar;
pub mod oracle;
pub mod rewrite;
pub mod trace;

pub use colony::{
    deposit, evaporate, run_ant, run_ant_from, run_colony, run_colony_with, select_next_node,
    transition_probabilities, AntOutcome, AntStatus, Colony, ColonyConfig, ColonyError, Execution,
    IterationStats, ParseResult, PheromoneGraph,
};
pub use grammar::{
    parse_grammar, parse_input, Grammar, GrammarError, InputError, Production, SententialForm,
    Symbol, SymbolId, SymbolKind,
};
pub use oracle::{enumerate_members, shortest_reduction, OracleError, OracleResult};
pub use rewrite::{
    apply_reduction, find_matches, is_goal, replay, Derivation, DerivationStep, RewriteError,
};
pub use trace::{OracleRecord, StepRecord, TraceRecord};
