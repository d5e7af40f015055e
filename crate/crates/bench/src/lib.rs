//! Fixtures shared by the benchmarks.

use antparse_core::{parse_grammar, parse_input, Grammar, SententialForm};

pub const EXAMPLE_GRAMMAR: &str = include_str!("../../../grammars/example.grammar");
pub const AMBIGUOUS_GRAMMAR: &str = include_str!("../../../grammars/ambiguous.grammar");

pub fn load(grammar: &str, input: &str) -> (Grammar, SententialForm) {
    let g = parse_grammar(grammar).expect("fixture grammar");
    let w = parse_input(input, &g, false).expect("fixture input");
    (g, w)
}

/// `a b^n c d (d c)^m e`: a member whose shortest reduction grows with `n` and `m`.
pub fn long_member(n: usize, m: usize) -> String {
    let mut s = String::from("a");
    for _ in 0..n {
        s.push_str(" b");
    }
    s.push_str(" c d");
    for _ in 0..m {
        s.push_str(" d c");
    }
    s.push_str(" e");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use antparse_core::shortest_reduction;

    #[test]
    fn long_members_are_members() {
        for (n, m) in [(1, 0), (3, 1), (4, 2)] {
            let (g, w) = load(EXAMPLE_GRAMMAR, &long_member(n, m));
            let r = shortest_reduction(&g, &w, 1_000_000).unwrap();
            // One A -> b, n - 1 of A -> A b, B -> d, m of B -> B d c, then S.
            assert_eq!(r.shortest_steps, Some(1 + (n - 1) + 1 + m + 1));
        }
    }
}
