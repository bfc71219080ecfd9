//! Bounded, exhaustive derivation enumeration.
//!
//! `enumerate_language` is the ground-truth membership oracle used by the
//! verification harness: plain breadth-first rewriting of sentential forms,
//! sound for grammars with erasing productions because pruning uses the
//! minimum terminal yield of each nonterminal instead of a naive symbol
//! count.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::grammar::{Grammar, ParseTree};
use crate::symbol::{Symbol, Word};

/// Recursion ceiling protecting the stack; hitting it is reported the same
/// way as running out of budget.
const MAX_RECURSION_DEPTH: usize = 4_096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("recursion depth limit {0} reached; the grammar cycles without consuming input")]
    DepthLimit(usize),
    #[error("unknown nonterminal {0:?}")]
    UnknownNonterminal(String),
}

/// For every nonterminal, the length of the shortest terminal word it can
/// derive; `None` for unproductive nonterminals. Fixpoint over productions.
///
/// A yield of `Some(0)` is exactly "nullable".
pub fn min_terminal_yields(grammar: &Grammar) -> BTreeMap<Symbol, Option<usize>> {
    let mut yields: BTreeMap<Symbol, Option<usize>> = grammar
        .nonterminals()
        .iter()
        .map(|nt| (nt.clone(), None))
        .collect();
    loop {
        let mut changed = false;
        for p in grammar.productions() {
            let mut total = 0usize;
            let mut known = true;
            for sym in p.rhs() {
                if sym.is_terminal() {
                    total += 1;
                } else {
                    match yields.get(sym).and_then(|y| *y) {
                        Some(len) => total += len,
                        None => {
                            known = false;
                            break;
                        }
                    }
                }
            }
            if !known {
                continue;
            }
            let entry = yields.get_mut(p.lhs()).expect("lhs is a nonterminal");
            if entry.map_or(true, |best| total < best) {
                *entry = Some(total);
                changed = true;
            }
        }
        if !changed {
            return yields;
        }
    }
}

/// The nonterminals that derive ε.
pub fn nullable_nonterminals(grammar: &Grammar) -> BTreeSet<Symbol> {
    min_terminal_yields(grammar)
        .into_iter()
        .filter(|(_, y)| *y == Some(0))
        .map(|(nt, _)| nt)
        .collect()
}

/// Shortest derivable length of a whole sentential form, or `None` when some
/// symbol in it is unproductive.
fn form_lower_bound(form: &Word, yields: &BTreeMap<Symbol, Option<usize>>) -> Option<usize> {
    let mut total = 0usize;
    for sym in form {
        if sym.is_terminal() {
            total += 1;
        } else {
            total += yields.get(sym).copied().flatten()?;
        }
    }
    Some(total)
}

/// All terminal words of length at most `max_len` derivable from `start`.
///
/// Breadth-first search over sentential forms, expanding only the leftmost
/// nonterminal (leftmost rewriting reaches every derivable word). A form is
/// dropped as soon as its shortest completion already exceeds `max_len`.
/// Each processed form charges the budget once.
pub fn enumerate_language(
    grammar: &Grammar,
    start: &Symbol,
    max_len: usize,
    budget: &mut Budget,
) -> Result<BTreeSet<Word>, EnumerationError> {
    if !grammar.contains_nonterminal(start) {
        return Err(EnumerationError::UnknownNonterminal(start.name().into()));
    }
    let yields = min_terminal_yields(grammar);

    let mut words = BTreeSet::new();
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue: VecDeque<Word> = VecDeque::new();

    let initial = Word::single(start.clone());
    if form_lower_bound(&initial, &yields).map_or(false, |lb| lb <= max_len) {
        seen.insert(initial.clone());
        queue.push_back(initial);
    }

    while let Some(form) = queue.pop_front() {
        budget.charge()?;
        let leftmost = form.iter().position(Symbol::is_nonterminal);
        let Some(at) = leftmost else {
            debug_assert!(form.len() <= max_len);
            words.insert(form);
            continue;
        };
        let nt = form.symbols()[at].clone();
        for p in grammar.productions_of(&nt) {
            let mut next: Vec<Symbol> = form.symbols()[..at].to_vec();
            next.extend(p.rhs().iter().cloned());
            next.extend_from_slice(&form.symbols()[at + 1..]);
            let next = Word::new(next);
            if form_lower_bound(&next, &yields).map_or(true, |lb| lb > max_len) {
                continue;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(words)
}

/// Every parse tree rooted at `start` whose yield is at most `max_len` long,
/// each exactly once up to tree identity. Grammars that cycle without
/// consuming input (`A -> A`) have infinitely many such trees; the budget
/// turns that into an error instead of divergence.
pub fn enumerate_parse_trees(
    grammar: &Grammar,
    start: &Symbol,
    max_len: usize,
    budget: &mut Budget,
) -> Result<Vec<ParseTree>, EnumerationError> {
    if !grammar.contains_nonterminal(start) {
        return Err(EnumerationError::UnknownNonterminal(start.name().into()));
    }
    let yields = min_terminal_yields(grammar);
    trees_for(grammar, start, max_len, &yields, budget, 0)
}

fn trees_for(
    grammar: &Grammar,
    root: &Symbol,
    max_yield: usize,
    yields: &BTreeMap<Symbol, Option<usize>>,
    budget: &mut Budget,
    depth: usize,
) -> Result<Vec<ParseTree>, EnumerationError> {
    if depth > MAX_RECURSION_DEPTH {
        return Err(EnumerationError::DepthLimit(MAX_RECURSION_DEPTH));
    }
    let mut out = Vec::new();
    for p in grammar.productions_of(root) {
        budget.charge()?;
        let dec = p.decomposition();
        let base: usize = dec.runs().iter().map(Word::len).sum();
        let Some(child_mins) = dec
            .nonterminals()
            .iter()
            .map(|nt| yields.get(nt).copied().flatten())
            .collect::<Option<Vec<usize>>>()
        else {
            continue; // some child is unproductive
        };
        let min_total: usize = base + child_mins.iter().sum::<usize>();
        if min_total > max_yield {
            continue;
        }

        // Enumerate child tuples left to right; the budget available to
        // child i leaves room for the minimum yields of its right siblings.
        let mut partial: Vec<Vec<ParseTree>> = vec![Vec::new()];
        let mut partial_yields: Vec<usize> = vec![0];
        for (i, nt) in dec.nonterminals().iter().enumerate() {
            let siblings_min: usize = child_mins[i + 1..].iter().sum();
            let mut next_partial = Vec::new();
            let mut next_yields = Vec::new();
            for (tuple, used) in partial.iter().zip(&partial_yields) {
                let allowance = max_yield - base - siblings_min - used;
                for t in trees_for(grammar, nt, allowance, yields, budget, depth + 1)? {
                    let t_yield = t
                        .yield_word(grammar)
                        .expect("tree built against this grammar")
                        .len();
                    let mut extended = tuple.clone();
                    extended.push(t);
                    next_partial.push(extended);
                    next_yields.push(used + t_yield);
                }
            }
            partial = next_partial;
            partial_yields = next_yields;
        }

        for tuple in partial {
            let tree = ParseTree::new(grammar, p.id(), tuple)
                .expect("children enumerated to match the decomposition");
            out.push(tree);
        }
    }
    Ok(out)
}
