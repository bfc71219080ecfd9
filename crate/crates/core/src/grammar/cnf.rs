//! Chomsky-normal-form conversion.
//!
//! Pass order: DEL (remove erasing productions), UNIT (remove unit chains),
//! TERM (wrap terminals occurring in long right-hand sides), BIN (binarize).
//! Fresh nonterminals use the `_`-prefixed names the file format reserves,
//! so they can never collide with user symbols: `_T_x` wraps terminal `x`
//! and `_B_n` are the binarization links.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::grammar::enumerate::nullable_nonterminals;
use crate::grammar::{Grammar, GrammarError};
use crate::symbol::{Symbol, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("start symbol {0:?} is not a nonterminal of the grammar")]
    UnknownStart(String),
    #[error("invalid grammar: {0}")]
    Invalid(#[from] GrammarError),
}

/// Outcome of [`to_cnf`]: the converted grammar plus what the conversion had
/// to give up.
#[derive(Debug, Clone)]
pub struct CnfConversion {
    pub grammar: Grammar,
    pub start: Symbol,
    /// True when ε was in the original language; CNF cannot express it.
    pub epsilon_dropped: bool,
    /// True when nothing at all is derivable from the start symbol any more.
    pub empty_language: bool,
}

/// Converts to Chomsky normal form. The result generates the original
/// language minus ε.
pub fn to_cnf(grammar: &Grammar, start: &Symbol) -> Result<CnfConversion, CnfError> {
    if !grammar.contains_nonterminal(start) {
        return Err(CnfError::UnknownStart(start.name().to_string()));
    }

    let rules: Vec<(Symbol, Word)> = grammar
        .productions()
        .iter()
        .map(|p| (p.lhs().clone(), p.rhs().clone()))
        .collect();

    let nullable = nullable_nonterminals(grammar);
    let epsilon_dropped = nullable.contains(start);

    let rules = del_pass(rules, &nullable);
    let rules = unit_pass(rules);
    let rules = term_pass(rules);
    let rules = bin_pass(rules);

    let converted = Grammar::with_symbols(
        grammar.nonterminals().clone(),
        grammar.terminals().clone(),
        rules,
        Some(start.clone()),
    )?;
    let empty_language = !converted.productive_nonterminals().contains(start);

    Ok(CnfConversion {
        grammar: converted,
        start: start.clone(),
        epsilon_dropped,
        empty_language,
    })
}

/// DEL: for every production, emit one variant per subset of nullable
/// nonterminal occurrences removed; drop all erasing productions.
fn del_pass(rules: Vec<(Symbol, Word)>, nullable: &BTreeSet<Symbol>) -> Vec<(Symbol, Word)> {
    let mut out: Vec<(Symbol, Word)> = Vec::new();
    let mut seen: BTreeSet<(Symbol, Word)> = BTreeSet::new();
    for (lhs, rhs) in rules {
        let optional: Vec<usize> = rhs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_nonterminal() && nullable.contains(s))
            .map(|(i, _)| i)
            .collect();
        // Iterate subsets; bit set means "keep the occurrence".
        for mask in 0..(1u64 << optional.len()) {
            let dropped: BTreeSet<usize> = optional
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) == 0)
                .map(|(_, &i)| i)
                .collect();
            let variant: Word = rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| !dropped.contains(i))
                .map(|(_, s)| s.clone())
                .collect();
            if variant.is_empty() {
                continue;
            }
            if seen.insert((lhs.clone(), variant.clone())) {
                out.push((lhs.clone(), variant));
            }
        }
    }
    out
}

/// UNIT: replace unit productions `A -> B` by copies of B's non-unit
/// productions, following chains transitively.
fn unit_pass(rules: Vec<(Symbol, Word)>) -> Vec<(Symbol, Word)> {
    let is_unit =
        |rhs: &Word| rhs.len() == 1 && rhs.symbols()[0].is_nonterminal();

    // unit_reach[A] = every B with A ⇒ B through unit productions only.
    let mut unit_reach: BTreeMap<Symbol, BTreeSet<Symbol>> = BTreeMap::new();
    for (lhs, _) in &rules {
        unit_reach
            .entry(lhs.clone())
            .or_insert_with(|| BTreeSet::from([lhs.clone()]));
    }
    loop {
        let mut changed = false;
        for (lhs, rhs) in &rules {
            if !is_unit(rhs) {
                continue;
            }
            let target = rhs.symbols()[0].clone();
            let reachable_from_target: BTreeSet<Symbol> = unit_reach
                .get(&target)
                .cloned()
                .unwrap_or_else(|| BTreeSet::from([target.clone()]));
            let entry = unit_reach.entry(lhs.clone()).or_default();
            for sym in reachable_from_target {
                changed |= entry.insert(sym);
            }
        }
        if !changed {
            break;
        }
    }

    let mut out: Vec<(Symbol, Word)> = Vec::new();
    let mut seen: BTreeSet<(Symbol, Word)> = BTreeSet::new();
    for (lhs, reach) in &unit_reach {
        for target in reach {
            for (rl, rr) in &rules {
                if rl == target && !is_unit(rr) && seen.insert((lhs.clone(), rr.clone())) {
                    out.push((lhs.clone(), rr.clone()));
                }
            }
        }
    }
    out
}

fn wrapper_for(terminal: &Symbol) -> Symbol {
    Symbol::nonterminal(&format!("_T_{}", terminal.name()))
}

/// TERM: in every right-hand side of length ≥ 2, replace each terminal `x`
/// by the wrapper nonterminal `_T_x` and add `_T_x -> x`.
fn term_pass(rules: Vec<(Symbol, Word)>) -> Vec<(Symbol, Word)> {
    let mut wrapped: BTreeSet<Symbol> = BTreeSet::new();
    let mut out: Vec<(Symbol, Word)> = Vec::new();
    for (lhs, rhs) in rules {
        if rhs.len() < 2 {
            out.push((lhs, rhs));
            continue;
        }
        let new_rhs: Word = rhs
            .iter()
            .map(|sym| {
                if sym.is_terminal() {
                    wrapped.insert(sym.clone());
                    wrapper_for(sym)
                } else {
                    sym.clone()
                }
            })
            .collect();
        out.push((lhs, new_rhs));
    }
    for terminal in wrapped {
        out.push((wrapper_for(&terminal), Word::single(terminal)));
    }
    out
}

/// BIN: split right-hand sides of length ≥ 3 into chains of fresh `_B_n`
/// nonterminals, leaving only two-symbol bodies.
fn bin_pass(rules: Vec<(Symbol, Word)>) -> Vec<(Symbol, Word)> {
    let mut out: Vec<(Symbol, Word)> = Vec::new();
    let mut counter = 0usize;
    for (lhs, rhs) in rules {
        if rhs.len() <= 2 {
            out.push((lhs, rhs));
            continue;
        }
        let syms = rhs.symbols();
        let mut current_lhs = lhs;
        for i in 0..syms.len() - 2 {
            let link = Symbol::nonterminal(&format!("_B_{counter}"));
            counter += 1;
            out.push((
                current_lhs,
                Word::new(vec![syms[i].clone(), link.clone()]),
            ));
            current_lhs = link;
        }
        out.push((
            current_lhs,
            Word::new(vec![
                syms[syms.len() - 2].clone(),
                syms[syms.len() - 1].clone(),
            ]),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::grammar::{enumerate_language, parse_grammar};

    fn lang(g: &Grammar, start: &Symbol, max_len: usize) -> BTreeSet<Word> {
        let mut budget = Budget::default();
        enumerate_language(g, start, max_len, &mut budget).unwrap()
    }

    #[test]
    fn already_cnf_is_fixed_point() {
        let g = parse_grammar("start S\nS -> A B\nA -> a\nB -> b\n").unwrap();
        let conv = to_cnf(&g, &Symbol::nonterminal("S")).unwrap();
        assert!(conv.grammar.is_cnf());
        assert!(!conv.epsilon_dropped);
        assert!(!conv.empty_language);
        let rules: Vec<String> = conv
            .grammar
            .productions()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(rules, vec!["S -> A B", "A -> a", "B -> b"]);
    }

    #[test]
    fn g1_language_is_preserved() {
        let g = parse_grammar("start S\nS -> a S b | a b\n").unwrap();
        let s = Symbol::nonterminal("S");
        let conv = to_cnf(&g, &s).unwrap();
        assert!(conv.grammar.is_cnf());
        assert_eq!(lang(&conv.grammar, &s, 6), lang(&g, &s, 6));
    }

    #[test]
    fn epsilon_only_grammar_empties_out() {
        let g = parse_grammar("S -> eps\n").unwrap();
        let conv = to_cnf(&g, &Symbol::nonterminal("S")).unwrap();
        assert!(conv.grammar.productions().is_empty());
        assert!(conv.epsilon_dropped);
        assert!(conv.empty_language);
        // the nonterminal itself must survive for diagram construction
        assert!(conv.grammar.contains_nonterminal(&Symbol::nonterminal("S")));
    }

    #[test]
    fn epsilon_is_dropped_but_rest_survives() {
        let g = parse_grammar("start S\nS -> a S b | eps\n").unwrap();
        let s = Symbol::nonterminal("S");
        let conv = to_cnf(&g, &s).unwrap();
        assert!(conv.grammar.is_cnf());
        assert!(conv.epsilon_dropped);
        assert!(!conv.empty_language);
        let mut expected = lang(&g, &s, 6);
        expected.remove(&Word::empty());
        assert_eq!(lang(&conv.grammar, &s, 6), expected);
    }

    #[test]
    fn unit_chains_are_collapsed() {
        let g = parse_grammar("start Expr\nExpr -> Term\nTerm -> lparen Expr rparen | id\n")
            .unwrap();
        let start = Symbol::nonterminal("Expr");
        let conv = to_cnf(&g, &start).unwrap();
        assert!(conv.grammar.is_cnf());
        assert_eq!(lang(&conv.grammar, &start, 5), lang(&g, &start, 5));
    }

    #[test]
    fn fresh_symbols_use_reserved_prefix() {
        let g = parse_grammar("start S\nS -> a S b | a b\n").unwrap();
        let conv = to_cnf(&g, &Symbol::nonterminal("S")).unwrap();
        for p in conv.grammar.productions() {
            for sym in p.rhs() {
                if sym.is_nonterminal() && !g.contains_nonterminal(sym) {
                    assert!(sym.name().starts_with('_'), "fresh symbol {sym}");
                }
            }
        }
    }

    #[test]
    fn unknown_start_is_an_error() {
        let g = parse_grammar("S -> a\n").unwrap();
        assert!(matches!(
            to_cnf(&g, &Symbol::nonterminal("T")),
            Err(CnfError::UnknownStart(_))
        ));
    }

    #[test]
    fn unproductive_start_reports_empty_language() {
        let g = parse_grammar("start S\nS -> a S\n").unwrap();
        let conv = to_cnf(&g, &Symbol::nonterminal("S")).unwrap();
        assert!(conv.empty_language);
        assert!(!conv.epsilon_dropped);
        assert!(conv.grammar.is_cnf());
    }
}
