//! Context-free grammars, their text format, and input strings.
//!
//! A grammar file is line oriented:
//!
//! ```text
//! # comment
//! start: S
//! S -> a A c B e
//! A -> A b
//! ```
//!
//! Nonterminals are exactly the symbols that appear on some left-hand side
//! (plus the start symbol); every other symbol is a terminal. Duplicate and
//! mutually ambiguous productions are kept as they are.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: empty right-hand side (epsilon productions are not supported)")]
    EmptyRhs { line: usize },
    #[error("line {line}: production has no left-hand side")]
    BlankLhs { line: usize },
    #[error("line {line}: duplicate start declaration (first at line {first})")]
    DuplicateStart { line: usize, first: usize },
    #[error("missing `start: <symbol>` declaration")]
    MissingStart,
    #[error("line {line}: start symbol `{symbol}` has no production")]
    StartWithoutProduction { line: usize, symbol: String },
    #[error("invalid symbol name {0:?}")]
    InvalidSymbol(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("input is empty")]
    Empty,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol id {0} is not part of this grammar")]
    ForeignSymbol(u32),
}

/// A grammar symbol's name: non-empty, no whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Result<Self, GrammarError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(GrammarError::InvalidSymbol(name));
        }
        Ok(Symbol(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Index of a symbol in its grammar's symbol table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

impl SymbolId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Terminal,
    Nonterminal,
}

/// One rule `lhs -> rhs`, kept as its two halves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Production {
    pub index: usize,
    pub lhs: SymbolId,
    pub rhs: Vec<SymbolId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    symbols: Vec<Symbol>,
    kinds: Vec<SymbolKind>,
    lookup: HashMap<String, SymbolId>,
    start: SymbolId,
    productions: Vec<Production>,
}

/// A sequence of grammar symbols; the string an ant carries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SententialForm(Vec<SymbolId>);

impl SententialForm {
    pub fn new(symbols: Vec<SymbolId>) -> Self {
        SententialForm(symbols)
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_symbols(self) -> Vec<SymbolId> {
        self.0
    }
}

impl Grammar {
    /// Builds a grammar from a start symbol and `(lhs, rhs)` pairs.
    pub fn from_rules<S: AsRef<str>>(
        start: &str,
        rules: &[(S, Vec<S>)],
    ) -> Result<Self, GrammarError> {
        let mut builder = Builder::default();
        for (lhs, rhs) in rules {
            let rhs: Vec<&str> = rhs.iter().map(AsRef::as_ref).collect();
            builder.push(0, lhs.as_ref(), &rhs)?;
        }
        builder.finish(Some((0, start.to_string())))
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn production(&self, index: usize) -> Option<&Production> {
        self.productions.get(index)
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.index()]
    }

    pub fn kind(&self, id: SymbolId) -> SymbolKind {
        self.kinds[id.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.lookup.get(name).copied()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.ids_of(SymbolKind::Nonterminal)
    }

    pub fn terminals(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.ids_of(SymbolKind::Terminal)
    }

    fn ids_of(&self, kind: SymbolKind) -> impl Iterator<Item = SymbolId> + '_ {
        self.kinds
            .iter()
            .enumerate()
            .filter(move |(_, k)| **k == kind)
            .map(|(i, _)| SymbolId(i as u32))
    }

    /// Checks that every symbol of `form` belongs to this grammar.
    pub fn check_form(&self, form: &SententialForm) -> Result<(), InputError> {
        match form.symbols().iter().find(|s| s.index() >= self.symbols.len()) {
            Some(bad) => Err(InputError::ForeignSymbol(bad.0)),
            None => Ok(()),
        }
    }

    /// Builds a form from symbol names.
    pub fn form<S: AsRef<str>>(&self, names: &[S]) -> Result<SententialForm, InputError> {
        names
            .iter()
            .map(|n| {
                self.lookup(n.as_ref())
                    .ok_or_else(|| InputError::UnknownSymbol(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SententialForm)
    }

    /// Space-joined symbol names.
    pub fn render(&self, form: &SententialForm) -> String {
        self.render_symbols(form.symbols())
    }

    pub fn render_symbols(&self, symbols: &[SymbolId]) -> String {
        symbols
            .iter()
            .map(|s| self.symbol(*s).as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn render_production(&self, production: &Production) -> String {
        format!(
            "{} -> {}",
            self.symbol(production.lhs),
            self.render_symbols(&production.rhs)
        )
    }

    /// Serializes back into the grammar file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("start: {}\n", self.symbol(self.start));
        for p in &self.productions {
            out.push_str(&self.render_production(p));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Default)]
struct Builder {
    symbols: Vec<Symbol>,
    lookup: HashMap<String, SymbolId>,
    rules: Vec<(SymbolId, Vec<SymbolId>)>,
}

impl Builder {
    fn intern(&mut self, name: &str) -> Result<SymbolId, GrammarError> {
        if let Some(id) = self.lookup.get(name) {
            return Ok(*id);
        }
        let symbol = Symbol::new(name)?;
        let id = SymbolId(self.symbols.len() as u32);
        self.symbols.push(symbol);
        self.lookup.insert(name.to_string(), id);
        Ok(id)
    }

    fn push(&mut self, line: usize, lhs: &str, rhs: &[&str]) -> Result<(), GrammarError> {
        if lhs.is_empty() {
            return Err(GrammarError::BlankLhs { line });
        }
        if rhs.is_empty() {
            return Err(GrammarError::EmptyRhs { line });
        }
        let lhs = self.intern(lhs)?;
        let rhs = rhs
            .iter()
            .map(|s| self.intern(s))
            .collect::<Result<Vec<_>, _>>()?;
        self.rules.push((lhs, rhs));
        Ok(())
    }

    fn finish(self, start: Option<(usize, String)>) -> Result<Grammar, GrammarError> {
        let (start_line, start_name) = start.ok_or(GrammarError::MissingStart)?;
        let start = self
            .lookup
            .get(&start_name)
            .copied()
            .filter(|id| self.rules.iter().any(|(lhs, _)| lhs == id))
            .ok_or_else(|| GrammarError::StartWithoutProduction {
                line: start_line,
                symbol: start_name.clone(),
            })?;

        let mut kinds = vec![SymbolKind::Terminal; self.symbols.len()];
        for (lhs, _) in &self.rules {
            kinds[lhs.index()] = SymbolKind::Nonterminal;
        }
        let productions = self
            .rules
            .into_iter()
            .enumerate()
            .map(|(index, (lhs, rhs))| Production { index, lhs, rhs })
            .collect();
        Ok(Grammar {
            symbols: self.symbols,
            kinds,
            lookup: self.lookup,
            start,
            productions,
        })
    }
}

/// Parses the grammar file format.
///
/// Symbol ids are assigned in order of first appearance across the
/// production lines, so the position of the `start:` line and of comments
/// does not affect the result.
pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut builder = Builder::default();
    let mut start: Option<(usize, String)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("start:") {
            if let Some((first, _)) = &start {
                return Err(GrammarError::DuplicateStart {
                    line: line_no,
                    first: *first,
                });
            }
            let mut tokens = rest.split_whitespace();
            let (Some(name), None) = (tokens.next(), tokens.next()) else {
                return Err(GrammarError::Syntax {
                    line: line_no,
                    message: "expected exactly one symbol after `start:`".into(),
                });
            };
            start = Some((line_no, name.to_string()));
            continue;
        }
        let Some((lhs, rhs)) = line.split_once("->") else {
            return Err(GrammarError::Syntax {
                line: line_no,
                message: format!("expected `<lhs> -> <rhs>`, got {line:?}"),
            });
        };
        let lhs_tokens: Vec<&str> = lhs.split_whitespace().collect();
        let rhs_tokens: Vec<&str> = rhs.split_whitespace().collect();
        if rhs_tokens.contains(&"->") {
            return Err(GrammarError::Syntax {
                line: line_no,
                message: "more than one `->` on a line".into(),
            });
        }
        match lhs_tokens.as_slice() {
            [] => return Err(GrammarError::BlankLhs { line: line_no }),
            [lhs] => builder.push(line_no, lhs, &rhs_tokens)?,
            _ => {
                return Err(GrammarError::Syntax {
                    line: line_no,
                    message: "left-hand side must be a single symbol".into(),
                })
            }
        }
    }

    builder.finish(start)
}

/// Splits an input string into a form over `grammar`'s symbols.
///
/// Token mode splits on whitespace; char mode treats every non-whitespace
/// character as one symbol.
pub fn parse_input(
    text: &str,
    grammar: &Grammar,
    char_mode: bool,
) -> Result<SententialForm, InputError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(InputError::Empty);
    }
    if char_mode {
        let tokens: Vec<String> = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(String::from)
            .collect();
        grammar.form(&tokens)
    } else {
        grammar.form(&text.split_whitespace().collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "start: S
S -> a A c B e
A -> A b
A -> e
A -> b
B -> B d c
B -> d
";

    fn names(g: &Grammar, ids: impl Iterator<Item = SymbolId>) -> Vec<String> {
        let mut v: Vec<String> = ids.map(|i| g.symbol(i).to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn example_grammar_classification() {
        let g = parse_grammar(EXAMPLE).unwrap();
        assert_eq!(g.productions().len(), 6);
        assert_eq!(names(&g, g.nonterminals()), ["A", "B", "S"]);
        assert_eq!(names(&g, g.terminals()), ["a", "b", "c", "d", "e"]);
        assert_eq!(g.symbol(g.start()).as_str(), "S");
        assert_eq!(g.render_production(&g.productions()[0]), "S -> a A c B e");
        assert!(g.productions().iter().enumerate().all(|(i, p)| p.index == i));
    }

    #[test]
    fn start_without_productions() {
        assert_eq!(
            parse_grammar("start: S\n"),
            Err(GrammarError::StartWithoutProduction {
                line: 1,
                symbol: "S".into()
            })
        );
        assert!(matches!(
            parse_grammar("start: S\nA -> a\n"),
            Err(GrammarError::StartWithoutProduction { .. })
        ));
    }

    #[test]
    fn load_errors() {
        assert_eq!(
            parse_grammar("start: S\nS -> a\nA ->\n"),
            Err(GrammarError::EmptyRhs { line: 3 })
        );
        assert_eq!(parse_grammar("S -> a\n"), Err(GrammarError::MissingStart));
        assert_eq!(
            parse_grammar("start: S\n# c\nstart: S\nS -> a\n"),
            Err(GrammarError::DuplicateStart { line: 3, first: 1 })
        );
        assert_eq!(
            parse_grammar("start: S\n -> a\n"),
            Err(GrammarError::BlankLhs { line: 2 })
        );
        assert!(matches!(
            parse_grammar("start: S\nS a\n"),
            Err(GrammarError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_grammar("start: S\nS A -> a\n"),
            Err(GrammarError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_grammar("start:\nS -> a\n"),
            Err(GrammarError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn redundant_and_ambiguous_rules_are_kept() {
        let g = parse_grammar("start: S\nS -> a\nS -> a\nS -> S S\nS -> S S\n").unwrap();
        assert_eq!(g.productions().len(), 4);
        assert_eq!(g.productions()[0].rhs, g.productions()[1].rhs);
    }

    #[test]
    fn start_line_position_does_not_matter() {
        let a = parse_grammar(EXAMPLE).unwrap();
        let moved = format!("# trailing start\n{}start: S\n", &EXAMPLE["start: S\n".len()..]);
        assert_eq!(parse_grammar(&moved).unwrap(), a);
    }

    #[test]
    fn from_rules_matches_text() {
        let g = Grammar::from_rules(
            "S",
            &[
                ("S", vec!["a", "A", "c", "B", "e"]),
                ("A", vec!["A", "b"]),
                ("A", vec!["e"]),
                ("A", vec!["b"]),
                ("B", vec!["B", "d", "c"]),
                ("B", vec!["d"]),
            ],
        )
        .unwrap();
        assert_eq!(g, parse_grammar(EXAMPLE).unwrap());
    }

    #[test]
    fn input_modes() {
        let g = parse_grammar(EXAMPLE).unwrap();
        let tokens = parse_input("a b b c d e", &g, false).unwrap();
        assert_eq!(tokens.len(), 6);
        let chars = parse_input("abcde", &g, true).unwrap();
        assert_eq!(g.render(&chars), "a b c d e");
        assert_eq!(
            parse_input("a x c", &g, false),
            Err(InputError::UnknownSymbol("x".into()))
        );
        assert_eq!(parse_input("   ", &g, false), Err(InputError::Empty));
        assert_eq!(g.render(&parse_input("S", &g, false).unwrap()), "S");
    }

    #[test]
    fn multi_character_symbols() {
        let g = parse_grammar("start: expr\nexpr -> expr plus term\nexpr -> term\nterm -> num\n")
            .unwrap();
        let form = parse_input("num plus num", &g, false).unwrap();
        assert_eq!(form.len(), 3);
        assert!(parse_input("num plus num", &g, true).is_err());
    }

    #[test]
    fn foreign_ids_rejected() {
        let g = parse_grammar(EXAMPLE).unwrap();
        let form = SententialForm::new(vec![SymbolId(99)]);
        assert_eq!(g.check_form(&form), Err(InputError::ForeignSymbol(99)));
    }
}
