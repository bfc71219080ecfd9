//! Grammar symbols and words over them.

use std::fmt;
use std::sync::Arc;

/// Tokens with special meaning in the grammar file format. A symbol may not
/// be named after any of them.
pub const RESERVED_TOKENS: [&str; 5] = ["->", "|", "eps", "start", "#"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Terminal,
    Nonterminal,
}

/// A terminal or nonterminal symbol. The kind is fixed at construction and
/// two symbols are equal only if both name and kind agree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: Arc<str>,
    kind: SymbolKind,
}

impl Symbol {
    pub fn new(name: &str, kind: SymbolKind) -> Self {
        assert!(!name.is_empty(), "symbol name must be non-empty");
        assert!(
            !name.contains(char::is_whitespace),
            "symbol name {name:?} contains whitespace"
        );
        assert!(
            !RESERVED_TOKENS.contains(&name),
            "symbol name {name:?} is a reserved token"
        );
        Symbol {
            name: Arc::from(name),
            kind,
        }
    }

    pub fn terminal(name: &str) -> Self {
        Self::new(name, SymbolKind::Terminal)
    }

    pub fn nonterminal(name: &str) -> Self {
        Self::new(name, SymbolKind::Nonterminal)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_terminal(&self) -> bool {
        self.kind == SymbolKind::Terminal
    }

    pub fn is_nonterminal(&self) -> bool {
        self.kind == SymbolKind::Nonterminal
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Terminal => write!(f, "t({})", self.name),
            SymbolKind::Nonterminal => write!(f, "N({})", self.name),
        }
    }
}

/// An ordered sequence of symbols. The empty word is ε.
///
/// A word over terminals only is a member of Σ*; a word that mixes in
/// nonterminals is a sentential form over (N ∪ Σ)*. [`Word::is_terminal_only`]
/// distinguishes the two at use sites that require the restriction.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn single(symbol: Symbol) -> Self {
        Word(vec![symbol])
    }

    /// Builds a terminal-only word from whitespace-free token names.
    pub fn terminals<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        Word(names.into_iter().map(Symbol::terminal).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn is_terminal_only(&self) -> bool {
        self.0.iter().all(Symbol::is_terminal)
    }

    pub fn push(&mut self, symbol: Symbol) {
        self.0.push(symbol);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// True when `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Word {
    /// Space-separated symbol names; the empty word renders as `ε`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, sym) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{sym}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_equality_includes_kind() {
        assert_ne!(Symbol::terminal("a"), Symbol::nonterminal("a"));
        assert_eq!(Symbol::terminal("a"), Symbol::terminal("a"));
    }

    #[test]
    #[should_panic(expected = "reserved")]
    fn reserved_name_rejected() {
        Symbol::terminal("eps");
    }

    #[test]
    #[should_panic(expected = "whitespace")]
    fn whitespace_name_rejected() {
        Symbol::terminal("a b");
    }

    #[test]
    fn word_display_uses_epsilon_for_empty() {
        assert_eq!(Word::empty().to_string(), "ε");
        assert_eq!(Word::terminals(["a", "b"]).to_string(), "a b");
    }

    #[test]
    fn word_prefix() {
        let w = Word::terminals(["a", "a", "b"]);
        assert!(Word::empty().is_prefix_of(&w));
        assert!(Word::terminals(["a", "a"]).is_prefix_of(&w));
        assert!(!Word::terminals(["a", "b"]).is_prefix_of(&w));
        assert!(!Word::terminals(["a", "a", "b", "b"]).is_prefix_of(&w));
    }
}
