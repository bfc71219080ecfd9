//! The grammar text format.
//!
//! ```text
//! # comment to end of line
//! start S
//! S -> a S b | a b
//! A -> eps
//! ```
//!
//! Tokens are whitespace-separated. A token is a nonterminal exactly when it
//! appears on the left of some rule; every other rule token is a terminal.
//! `eps` stands for the empty right-hand side and must appear alone in its
//! alternative. Reserved tokens: `->`, `|`, `eps`, `start`, `#`, and any
//! token beginning with `_` (that prefix is kept free for generated symbols).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::grammar::{Grammar, GrammarError};
use crate::symbol::{Symbol, Word, RESERVED_TOKENS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected `->` after the rule's left-hand side")]
    MissingArrow { line: usize },
    #[error("line {line}: rule has an empty right-hand side; write `eps` for the empty word")]
    EmptyAlternative { line: usize },
    #[error("line {line}: `eps` must stand alone in its alternative")]
    EpsNotAlone { line: usize },
    #[error("line {line}: token {token:?} is reserved")]
    ReservedToken { line: usize, token: String },
    #[error("line {line}: duplicate `start` directive")]
    DuplicateStart { line: usize },
    #[error("line {line}: `start` expects exactly one symbol")]
    MalformedStart { line: usize },
    #[error("start symbol {token:?} never appears as a rule left-hand side")]
    StartNotNonterminal { token: String },
    #[error("no productions found")]
    Empty,
    #[error("invalid grammar: {0}")]
    Invalid(#[from] GrammarError),
}

/// One rule line prior to symbol-kind resolution.
struct RawRule {
    lhs: String,
    alternatives: Vec<Vec<String>>,
}

/// Parses the grammar text format. Nonterminals are exactly the tokens that
/// occur as a rule's left-hand side; production ids follow file order with
/// `|` alternatives expanded in place.
pub fn parse_grammar(text: &str) -> Result<Grammar, ParseError> {
    let mut raw_rules: Vec<RawRule> = Vec::new();
    let mut start_token: Option<String> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }

        if tokens[0] == "start" {
            if start_token.is_some() {
                return Err(ParseError::DuplicateStart { line });
            }
            if tokens.len() != 2 {
                return Err(ParseError::MalformedStart { line });
            }
            check_token(line, tokens[1])?;
            start_token = Some(tokens[1].to_string());
            continue;
        }

        if tokens.len() < 2 || tokens[1] != "->" {
            return Err(ParseError::MissingArrow { line });
        }
        check_token(line, tokens[0])?;
        let lhs = tokens[0].to_string();

        let mut alternatives: Vec<Vec<String>> = Vec::new();
        for alt in tokens[2..].split(|t| *t == "|") {
            if alt.is_empty() {
                return Err(ParseError::EmptyAlternative { line });
            }
            if alt.contains(&"eps") {
                if alt.len() != 1 {
                    return Err(ParseError::EpsNotAlone { line });
                }
                alternatives.push(Vec::new());
            } else {
                for tok in alt {
                    check_token(line, tok)?;
                }
                alternatives.push(alt.iter().map(|t| t.to_string()).collect());
            }
        }
        raw_rules.push(RawRule { lhs, alternatives });
    }

    if raw_rules.is_empty() {
        return Err(ParseError::Empty);
    }

    // A token is a nonterminal iff it occurs as some lhs.
    let lhs_names: BTreeSet<&str> = raw_rules.iter().map(|r| r.lhs.as_str()).collect();
    let symbol = |name: &str| -> Symbol {
        if lhs_names.contains(name) {
            Symbol::nonterminal(name)
        } else {
            Symbol::terminal(name)
        }
    };

    let mut rules: Vec<(Symbol, Word)> = Vec::new();
    for raw in &raw_rules {
        let lhs = Symbol::nonterminal(&raw.lhs);
        for alt in &raw.alternatives {
            let rhs: Word = alt.iter().map(|t| symbol(t)).collect();
            rules.push((lhs.clone(), rhs));
        }
    }

    let start = match start_token {
        Some(token) => {
            if !lhs_names.contains(token.as_str()) {
                return Err(ParseError::StartNotNonterminal { token });
            }
            Some(Symbol::nonterminal(&token))
        }
        None => None,
    };

    Ok(Grammar::new(rules, start)?)
}

fn check_token(line: usize, token: &str) -> Result<(), ParseError> {
    if RESERVED_TOKENS.contains(&token) || token.starts_with('_') {
        return Err(ParseError::ReservedToken {
            line,
            token: token.to_string(),
        });
    }
    Ok(())
}

/// Canonical emitter: the `start` directive first, then one line per
/// left-hand side with its alternatives `|`-joined in production-id order.
/// `parse_grammar(render(g))` reproduces `g` up to production order whenever
/// every nonterminal of `g` owns at least one production.
pub fn render(grammar: &Grammar) -> String {
    let mut out = String::new();
    if let Some(start) = grammar.start() {
        let _ = writeln!(out, "start {start}");
    }

    let mut lhs_order: Vec<&Symbol> = Vec::new();
    for p in grammar.productions() {
        if !lhs_order.contains(&p.lhs()) {
            lhs_order.push(p.lhs());
        }
    }
    for lhs in lhs_order {
        let alts: Vec<String> = grammar
            .productions_of(lhs)
            .map(|p| {
                if p.rhs().is_empty() {
                    "eps".to_string()
                } else {
                    p.rhs().to_string()
                }
            })
            .collect();
        let _ = writeln!(out, "{} -> {}", lhs, alts.join(" | "));
    }
    out
}
