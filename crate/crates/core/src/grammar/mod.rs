//! Context-free grammars, their productions in decomposed form, and parse
//! trees as the canonical derivation representation.

mod cnf;
mod enumerate;
mod format;

pub use cnf::{to_cnf, CnfConversion, CnfError};
pub use enumerate::{
    enumerate_language, enumerate_parse_trees, min_terminal_yields, nullable_nonterminals,
    EnumerationError,
};
pub use format::{parse_grammar, render, ParseError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::symbol::{Symbol, Word};

/// The right-hand side of a production split into its canonical shape
///
/// ```text
/// α₀ B₁ α₁ B₂ α₂ … B_k α_k
/// ```
///
/// where each `αᵢ` is a maximal (possibly empty) run of terminals and each
/// `Bⱼ` is one nonterminal occurrence. `k = 0` means the right-hand side is
/// all terminals (possibly ε).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    runs: Vec<Word>,
    nonterminals: Vec<Symbol>,
}

impl Decomposition {
    fn of(rhs: &Word) -> Self {
        let mut runs = vec![Word::empty()];
        let mut nonterminals = Vec::new();
        for sym in rhs {
            if sym.is_nonterminal() {
                nonterminals.push(sym.clone());
                runs.push(Word::empty());
            } else {
                runs.last_mut().expect("runs is never empty").push(sym.clone());
            }
        }
        Decomposition { runs, nonterminals }
    }

    /// The number of nonterminal occurrences `k`.
    pub fn nonterminal_count(&self) -> usize {
        self.nonterminals.len()
    }

    /// The terminal runs `α₀ … α_k`, always exactly `k + 1` of them.
    pub fn runs(&self) -> &[Word] {
        &self.runs
    }

    /// The nonterminal occurrences `B₁ … B_k` in order.
    pub fn nonterminals(&self) -> &[Symbol] {
        &self.nonterminals
    }

    /// Reassembles `α₀ B₁ α₁ … B_k α_k`; always equals the original rhs.
    pub fn reassemble(&self) -> Word {
        let mut word = self.runs[0].clone();
        for (nt, run) in self.nonterminals.iter().zip(&self.runs[1..]) {
            word.push(nt.clone());
            word.extend_from(run);
        }
        word
    }
}

/// A single production `A → ω` with its canonical decomposition precomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Production {
    id: usize,
    lhs: Symbol,
    rhs: Word,
    decomposition: Decomposition,
}

impl Production {
    fn new(id: usize, lhs: Symbol, rhs: Word) -> Self {
        assert!(lhs.is_nonterminal(), "production lhs must be a nonterminal");
        let decomposition = Decomposition::of(&rhs);
        Production {
            id,
            lhs,
            rhs,
            decomposition,
        }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn lhs(&self) -> &Symbol {
        &self.lhs
    }

    pub fn rhs(&self) -> &Word {
        &self.rhs
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    /// Shorthand for the decomposition's nonterminal count.
    pub fn nonterminal_count(&self) -> usize {
        self.decomposition.nonterminal_count()
    }

    /// True for `A → BC` with exactly two nonterminals or `A → x` with
    /// exactly one terminal.
    pub fn is_cnf_shape(&self) -> bool {
        let syms = self.rhs.symbols();
        match syms.len() {
            1 => syms[0].is_terminal(),
            2 => syms[0].is_nonterminal() && syms[1].is_nonterminal(),
            _ => false,
        }
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rhs.is_empty() {
            write!(f, "{} -> eps", self.lhs)
        } else {
            write!(f, "{} -> {}", self.lhs, self.rhs)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("symbol {0:?} is used both as a terminal and as a nonterminal")]
    KindConflict(String),
    #[error("start symbol {0:?} is not a nonterminal of the grammar")]
    StartNotNonterminal(String),
    #[error("production lhs {0:?} is not marked as a nonterminal")]
    LhsNotNonterminal(String),
}

/// A context-free grammar: disjoint nonterminal and terminal alphabets, an
/// ordered production list with dense ids, and an optional start symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    nonterminals: BTreeSet<Symbol>,
    terminals: BTreeSet<Symbol>,
    productions: Vec<Production>,
    start: Option<Symbol>,
}

impl Grammar {
    /// Builds a grammar from `(lhs, rhs)` rules. The alphabets are derived
    /// from the rules; use [`Grammar::with_symbols`] to keep extra symbols
    /// that no production mentions.
    pub fn new(rules: Vec<(Symbol, Word)>, start: Option<Symbol>) -> Result<Self, GrammarError> {
        Self::with_symbols(BTreeSet::new(), BTreeSet::new(), rules, start)
    }

    /// Like [`Grammar::new`] but seeds the alphabets with extra symbols, so
    /// nonterminals without productions (or unused terminals) survive.
    pub fn with_symbols(
        extra_nonterminals: BTreeSet<Symbol>,
        extra_terminals: BTreeSet<Symbol>,
        rules: Vec<(Symbol, Word)>,
        start: Option<Symbol>,
    ) -> Result<Self, GrammarError> {
        let mut nonterminals = extra_nonterminals;
        let mut terminals = extra_terminals;
        for (lhs, rhs) in &rules {
            if !lhs.is_nonterminal() {
                return Err(GrammarError::LhsNotNonterminal(lhs.name().to_string()));
            }
            nonterminals.insert(lhs.clone());
            for sym in rhs {
                if sym.is_nonterminal() {
                    nonterminals.insert(sym.clone());
                } else {
                    terminals.insert(sym.clone());
                }
            }
        }
        for nt in &nonterminals {
            if terminals.iter().any(|t| t.name() == nt.name()) {
                return Err(GrammarError::KindConflict(nt.name().to_string()));
            }
        }
        if let Some(s) = &start {
            if !nonterminals.contains(s) {
                return Err(GrammarError::StartNotNonterminal(s.name().to_string()));
            }
        }
        let productions = rules
            .into_iter()
            .enumerate()
            .map(|(id, (lhs, rhs))| Production::new(id, lhs, rhs))
            .collect();
        Ok(Grammar {
            nonterminals,
            terminals,
            productions,
            start,
        })
    }

    pub fn nonterminals(&self) -> &BTreeSet<Symbol> {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &BTreeSet<Symbol> {
        &self.terminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn production(&self, id: usize) -> Option<&Production> {
        self.productions.get(id)
    }

    pub fn start(&self) -> Option<&Symbol> {
        self.start.as_ref()
    }

    pub fn contains_nonterminal(&self, symbol: &Symbol) -> bool {
        self.nonterminals.contains(symbol)
    }

    /// Productions with the given left-hand side, in id order.
    pub fn productions_of<'g>(
        &'g self,
        lhs: &'g Symbol,
    ) -> impl Iterator<Item = &'g Production> + 'g {
        self.productions.iter().filter(move |p| p.lhs() == lhs)
    }

    /// True iff every production is `A → BC` or `A → x`.
    pub fn is_cnf(&self) -> bool {
        self.productions.iter().all(Production::is_cnf_shape)
    }

    /// Non-fatal hygiene diagnostics: unreachable nonterminals, unproductive
    /// nonterminals, and terminals no production mentions. An empty list
    /// means clean. Reachability is only checked when a start symbol exists.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diagnostics = Vec::new();

        let productive = self.productive_nonterminals();
        for nt in &self.nonterminals {
            if !productive.contains(nt) {
                diagnostics.push(Diagnostic::UnproductiveNonterminal(nt.clone()));
            }
        }

        if let Some(start) = &self.start {
            let mut reachable = BTreeSet::from([start.clone()]);
            loop {
                let mut changed = false;
                for p in &self.productions {
                    if !reachable.contains(p.lhs()) {
                        continue;
                    }
                    for sym in p.rhs() {
                        if sym.is_nonterminal() && reachable.insert(sym.clone()) {
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            for nt in &self.nonterminals {
                if !reachable.contains(nt) {
                    diagnostics.push(Diagnostic::UnreachableNonterminal(nt.clone()));
                }
            }
        }

        let mut used: BTreeSet<&Symbol> = BTreeSet::new();
        for p in &self.productions {
            used.extend(p.rhs().iter().filter(|s| s.is_terminal()));
        }
        for t in &self.terminals {
            if !used.contains(t) {
                diagnostics.push(Diagnostic::UnusedTerminal(t.clone()));
            }
        }

        diagnostics
    }

    /// Fixpoint of "can derive some terminal-only word".
    pub fn productive_nonterminals(&self) -> BTreeSet<Symbol> {
        let mut productive: BTreeSet<Symbol> = BTreeSet::new();
        loop {
            let mut changed = false;
            for p in &self.productions {
                if productive.contains(p.lhs()) {
                    continue;
                }
                let all_known = p
                    .rhs()
                    .iter()
                    .filter(|s| s.is_nonterminal())
                    .all(|s| productive.contains(s));
                if all_known {
                    productive.insert(p.lhs().clone());
                    changed = true;
                }
            }
            if !changed {
                return productive;
            }
        }
    }
}

/// A hygiene warning from [`Grammar::validate`]. None of these make the
/// grammar invalid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    UnreachableNonterminal(Symbol),
    UnproductiveNonterminal(Symbol),
    UnusedTerminal(Symbol),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UnreachableNonterminal(s) => {
                write!(f, "unreachable nonterminal: {s}")
            }
            Diagnostic::UnproductiveNonterminal(s) => {
                write!(f, "unproductive nonterminal: {s} derives no terminal word")
            }
            Diagnostic::UnusedTerminal(s) => write!(f, "unused terminal: {s}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("production id {0} does not exist in the grammar")]
    UnknownProduction(usize),
    #[error("production {production} expects {expected} children, got {got}")]
    ChildCountMismatch {
        production: usize,
        expected: usize,
        got: usize,
    },
    #[error("child {index} of production {production} must be rooted at {expected}, got {got}")]
    ChildRootMismatch {
        production: usize,
        index: usize,
        expected: String,
        got: String,
    },
}

/// A derivation in tree form: the production applied at the root plus one
/// subtree per nonterminal occurrence of that production, in order.
///
/// Trees reference productions by id, so they are only meaningful relative
/// to the grammar they were built against.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParseTree {
    production: usize,
    children: Vec<ParseTree>,
}

impl ParseTree {
    /// Builds a node, checking child count and child roots against the
    /// production's decomposition.
    pub fn new(
        grammar: &Grammar,
        production: usize,
        children: Vec<ParseTree>,
    ) -> Result<Self, TreeError> {
        let p = grammar
            .production(production)
            .ok_or(TreeError::UnknownProduction(production))?;
        let expected = p.nonterminal_count();
        if children.len() != expected {
            return Err(TreeError::ChildCountMismatch {
                production,
                expected,
                got: children.len(),
            });
        }
        for (i, (child, nt)) in children
            .iter()
            .zip(p.decomposition().nonterminals())
            .enumerate()
        {
            let child_root = child.root(grammar)?;
            if child_root != nt {
                return Err(TreeError::ChildRootMismatch {
                    production,
                    index: i,
                    expected: nt.name().to_string(),
                    got: child_root.name().to_string(),
                });
            }
        }
        Ok(ParseTree {
            production,
            children,
        })
    }

    /// A leaf application of a production with no nonterminals.
    pub fn leaf(grammar: &Grammar, production: usize) -> Result<Self, TreeError> {
        Self::new(grammar, production, Vec::new())
    }

    pub fn production_id(&self) -> usize {
        self.production
    }

    pub fn production<'g>(&self, grammar: &'g Grammar) -> Result<&'g Production, TreeError> {
        grammar
            .production(self.production)
            .ok_or(TreeError::UnknownProduction(self.production))
    }

    /// The nonterminal this tree derives from.
    pub fn root<'g>(&self, grammar: &'g Grammar) -> Result<&'g Symbol, TreeError> {
        Ok(self.production(grammar)?.lhs())
    }

    pub fn children(&self) -> &[ParseTree] {
        &self.children
    }

    /// The terminal word this derivation produces, read off left to right:
    /// `α₀ · yield(child₁) · α₁ · … · yield(child_k) · α_k`.
    pub fn yield_word(&self, grammar: &Grammar) -> Result<Word, TreeError> {
        let p = self.production(grammar)?;
        let dec = p.decomposition();
        let mut word = dec.runs()[0].clone();
        for (child, run) in self.children.iter().zip(&dec.runs()[1..]) {
            word.extend_from(&child.yield_word(grammar)?);
            word.extend_from(run);
        }
        Ok(word)
    }

    /// Total number of production applications in the tree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ParseTree::size).sum::<usize>()
    }

    /// Renders the tree as a nested s-expression, e.g.
    /// `[S -> a S b [S -> a b]]`.
    pub fn render(&self, grammar: &Grammar) -> String {
        let mut out = String::new();
        self.render_into(grammar, &mut out);
        out
    }

    fn render_into(&self, grammar: &Grammar, out: &mut String) {
        match self.production(grammar) {
            Ok(p) => {
                out.push('[');
                out.push_str(&p.to_string());
                for child in &self.children {
                    out.push(' ');
                    child.render_into(grammar, out);
                }
                out.push(']');
            }
            Err(_) => out.push_str("[?]"),
        }
    }

    /// The leftmost rewrite sequence this tree linearizes to, starting at the
    /// root nonterminal and ending at the yield.
    pub fn leftmost_derivation(&self, grammar: &Grammar) -> Result<Vec<Word>, TreeError> {
        let root = self.root(grammar)?.clone();
        let mut forms = vec![Word::single(root)];
        let mut current = forms[0].clone();
        self.apply_leftmost(grammar, &mut forms, &mut current, 0)?;
        Ok(forms)
    }

    fn apply_leftmost(
        &self,
        grammar: &Grammar,
        forms: &mut Vec<Word>,
        current: &mut Word,
        at: usize,
    ) -> Result<usize, TreeError> {
        let p = self.production(grammar)?;
        let mut next: Vec<Symbol> = current.symbols()[..at].to_vec();
        next.extend(p.rhs().iter().cloned());
        next.extend_from_slice(&current.symbols()[at + 1..]);
        *current = Word::new(next);
        forms.push(current.clone());

        let dec = p.decomposition();
        let mut offset = at + dec.runs()[0].len();
        let mut yield_len = dec.runs()[0].len();
        for (child, run) in self.children.iter().zip(&dec.runs()[1..]) {
            let consumed = child.apply_leftmost(grammar, forms, current, offset)?;
            offset += consumed + run.len();
            yield_len += consumed + run.len();
        }
        Ok(yield_len)
    }
}

/// Convenience map from nonterminal to the ids of its productions.
pub fn productions_by_lhs(grammar: &Grammar) -> BTreeMap<Symbol, Vec<usize>> {
    let mut map: BTreeMap<Symbol, Vec<usize>> = BTreeMap::new();
    for p in grammar.productions() {
        map.entry(p.lhs().clone()).or_default().push(p.id());
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::SymbolKind;

    fn g1() -> Grammar {
        parse_grammar("start S\nS -> a S b | a b\n").unwrap()
    }

    #[test]
    fn decomposition_splits_runs_and_nonterminals() {
        let g = g1();
        let p = &g.productions()[0]; // S -> a S b
        let dec = p.decomposition();
        assert_eq!(dec.nonterminal_count(), 1);
        assert_eq!(dec.runs().len(), 2);
        assert_eq!(dec.runs()[0], Word::terminals(["a"]));
        assert_eq!(dec.runs()[1], Word::terminals(["b"]));
        assert_eq!(dec.nonterminals()[0], Symbol::nonterminal("S"));
        assert_eq!(dec.reassemble(), *p.rhs());
    }

    #[test]
    fn decomposition_of_empty_rhs() {
        let g = parse_grammar("A -> eps\n").unwrap();
        let dec = g.productions()[0].decomposition();
        assert_eq!(dec.nonterminal_count(), 0);
        assert_eq!(dec.runs(), &[Word::empty()]);
        assert_eq!(dec.reassemble(), Word::empty());
    }

    #[test]
    fn kind_conflict_is_rejected() {
        let rules = vec![(
            Symbol::nonterminal("S"),
            Word::new(vec![Symbol::terminal("S")]),
        )];
        assert_eq!(
            Grammar::new(rules, None),
            Err(GrammarError::KindConflict("S".into()))
        );
    }

    #[test]
    fn validate_clean_grammar() {
        assert!(g1().validate().is_empty());
    }

    #[test]
    fn validate_flags_unproductive() {
        // S -> a S can never terminate a derivation
        let g = parse_grammar("start S\nS -> a S\n").unwrap();
        let diags = g.validate();
        assert_eq!(
            diags,
            vec![Diagnostic::UnproductiveNonterminal(Symbol::nonterminal("S"))]
        );
    }

    #[test]
    fn validate_flags_unreachable() {
        let g = parse_grammar("start S\nS -> a\nT -> b\n").unwrap();
        let diags = g.validate();
        assert_eq!(
            diags,
            vec![Diagnostic::UnreachableNonterminal(Symbol::nonterminal("T"))]
        );
    }

    #[test]
    fn validate_flags_unused_terminal() {
        let dangling = Symbol::new("z", SymbolKind::Terminal);
        let g = Grammar::with_symbols(
            BTreeSet::new(),
            BTreeSet::from([dangling.clone()]),
            vec![(Symbol::nonterminal("S"), Word::terminals(["a"]))],
            Some(Symbol::nonterminal("S")),
        )
        .unwrap();
        assert_eq!(g.validate(), vec![Diagnostic::UnusedTerminal(dangling)]);
    }

    #[test]
    fn cnf_detection() {
        let cnf = parse_grammar("start S\nS -> A B\nA -> a\nB -> b\n").unwrap();
        assert!(cnf.is_cnf());
        assert!(!g1().is_cnf());
        let eps = parse_grammar("S -> eps\n").unwrap();
        assert!(!eps.is_cnf());
    }

    #[test]
    fn parse_tree_checks_children() {
        let g = g1();
        // production 0 is S -> a S b (one child), production 1 is S -> a b
        let leaf = ParseTree::leaf(&g, 1).unwrap();
        let nested = ParseTree::new(&g, 0, vec![leaf.clone()]).unwrap();
        assert_eq!(
            nested.yield_word(&g).unwrap(),
            Word::terminals(["a", "a", "b", "b"])
        );
        assert_eq!(nested.size(), 2);

        assert!(matches!(
            ParseTree::new(&g, 0, vec![]),
            Err(TreeError::ChildCountMismatch { .. })
        ));
        assert!(matches!(
            ParseTree::new(&g, 1, vec![leaf.clone()]),
            Err(TreeError::ChildCountMismatch { .. })
        ));
    }

    #[test]
    fn parse_tree_renders_nested() {
        let g = g1();
        let tree = ParseTree::new(&g, 0, vec![ParseTree::leaf(&g, 1).unwrap()]).unwrap();
        assert_eq!(tree.render(&g), "[S -> a S b [S -> a b]]");
    }

    #[test]
    fn leftmost_derivation_linearizes() {
        let g = g1();
        let tree = ParseTree::new(&g, 0, vec![ParseTree::leaf(&g, 1).unwrap()]).unwrap();
        let forms = tree.leftmost_derivation(&g).unwrap();
        let rendered: Vec<String> = forms.iter().map(Word::to_string).collect();
        assert_eq!(rendered, vec!["S", "a S b", "a a b b"]);
    }
}
