#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use antparse_core::{parse_grammar, Grammar, SententialForm, SymbolId, SymbolKind};
use rand::Rng;

pub fn fixture(name: &str) -> String {
    let path = format!("{}/../../grammars/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn example_grammar() -> Grammar {
    parse_grammar(&fixture("example.grammar")).unwrap()
}

pub fn ambiguous_grammar() -> Grammar {
    parse_grammar(&fixture("ambiguous.grammar")).unwrap()
}

/// A random grammar with at most six productions and at most four symbols
/// per right-hand side, no epsilon rules.
///
/// One to three nonterminals (`S`, `A`, `B`), each with at least one rule,
/// and two or three terminals. Every right-hand-side symbol is drawn
/// uniformly from all nonterminals and terminals.
pub fn random_grammar<R: Rng>(rng: &mut R) -> Grammar {
    const NT: [&str; 3] = ["S", "A", "B"];
    const T: [&str; 3] = ["a", "b", "c"];
    let n_nt = rng.random_range(1..=3);
    let n_t = rng.random_range(2..=3);
    let n_rules = rng.random_range(n_nt.max(2)..=6);
    let mut rules = Vec::with_capacity(n_rules);
    for i in 0..n_rules {
        let lhs = NT[if i < n_nt { i } else { rng.random_range(0..n_nt) }];
        let len = rng.random_range(1..=4);
        let rhs: Vec<&str> = (0..len)
            .map(|_| {
                let k = rng.random_range(0..n_nt + n_t);
                if k < n_nt {
                    NT[k]
                } else {
                    T[k - n_nt]
                }
            })
            .collect();
        rules.push((lhs, rhs));
    }
    // Terminals never used on a right-hand side simply do not exist in the grammar.
    Grammar::from_rules("S", &rules).unwrap()
}

/// All terminal strings of length `1..=max_len` derivable from the start
/// symbol, by forward (top-down) expansion. Independent of the reduction code.
pub fn forward_members(grammar: &Grammar, max_len: usize) -> BTreeSet<SententialForm> {
    let start = vec![grammar.start()];
    let mut seen: HashSet<Vec<SymbolId>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = BTreeSet::new();
    while let Some(form) = queue.pop_front() {
        let mut any_nt = false;
        for (i, sym) in form.iter().enumerate() {
            if grammar.kind(*sym) != SymbolKind::Nonterminal {
                continue;
            }
            any_nt = true;
            for p in grammar.productions().iter().filter(|p| p.lhs == *sym) {
                let mut next = form[..i].to_vec();
                next.extend_from_slice(&p.rhs);
                next.extend_from_slice(&form[i + 1..]);
                // Forward expansion never shortens a form.
                if next.len() <= max_len && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        if !any_nt && !form.is_empty() {
            out.insert(SententialForm::new(form));
        }
    }
    out
}

/// Every terminal string over the grammar's terminals with length in `1..=max_len`.
pub fn all_terminal_strings(grammar: &Grammar, max_len: usize) -> Vec<SententialForm> {
    let terminals: Vec<SymbolId> = grammar.terminals().collect();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<SymbolId>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &layer {
            for t in &terminals {
                let mut s = prefix.clone();
                s.push(*t);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned().map(SententialForm::new));
        layer = next;
    }
    out
}
