//! The label algebra carried on diagram arcs and walks.
//!
//! Labels live in the monoid `R = Σ* × T`. The first component is a plain
//! terminal word; the second lives in the monoid `T` generated by the grammar
//! symbols together with a primed copy of each, subject to the one-sided
//! cancellation rules
//!
//! ```text
//! A'A = ε      x'x = ε
//! ```
//!
//! for every nonterminal `A` and terminal `x`. Note the rules are one-sided:
//! `A A'` does NOT reduce. Implementing two-sided (free-group) cancellation
//! here would be wrong — it would let structurally different walks collapse
//! to the same label, and `reduce` has a regression test pinning the
//! one-sidedness.
//!
//! Every redex is a primed letter immediately followed by its unprimed
//! partner. Two redexes can never overlap: the middle letter of a
//! three-letter overlap would have to be primed (to end the first redex's
//! pattern, i.e. be an unprimed second letter) and unprimed (to start the
//! second) at once. An orthogonal rewriting system with no overlaps is
//! confluent, so every word has a unique normal form and a single
//! left-to-right pass with a pending stack computes it.
//!
//! Multiplication in `R` concatenates the word components but multiplies the
//! `T` components in reversed order:
//!
//! ```text
//! (ω₁, z₁) ∘ (ω₂, z₂) = (ω₁ω₂, z₂z₁)
//! ```
//!
//! That reversal is what makes the tail of a well-formed walk label telescope
//! away to ε.

use std::fmt;

use crate::symbol::{Symbol, Word};

/// A generator of `T`: a grammar symbol, either plain or primed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedSymbol {
    base: Symbol,
    primed: bool,
}

impl SignedSymbol {
    pub fn plain(base: Symbol) -> Self {
        SignedSymbol {
            base,
            primed: false,
        }
    }

    pub fn primed(base: Symbol) -> Self {
        SignedSymbol { base, primed: true }
    }

    pub fn base(&self) -> &Symbol {
        &self.base
    }

    pub fn is_primed(&self) -> bool {
        self.primed
    }

    /// Toggles the prime marker: `(x')' = x`.
    pub fn prime(&self) -> Self {
        SignedSymbol {
            base: self.base.clone(),
            primed: !self.primed,
        }
    }
}

impl From<Symbol> for SignedSymbol {
    fn from(base: Symbol) -> Self {
        SignedSymbol::plain(base)
    }
}

impl fmt::Display for SignedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.primed {
            write!(f, "{}'", self.base)
        } else {
            write!(f, "{}", self.base)
        }
    }
}

impl fmt::Debug for SignedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The prime operator on raw letter sequences: reverse the sequence and
/// toggle every prime marker. `prime(ε) = ε`, and priming twice gives the
/// original sequence back.
pub fn prime(letters: &[SignedSymbol]) -> Vec<SignedSymbol> {
    letters.iter().rev().map(SignedSymbol::prime).collect()
}

/// An element of `T` kept in normal form: no letter sequence `z'z` (a primed
/// letter immediately followed by its unprimed partner) remains.
///
/// The normal form is a type invariant — every constructor reduces.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TWord {
    letters: Vec<SignedSymbol>,
}

impl TWord {
    /// The monoid identity ε.
    pub fn identity() -> Self {
        TWord::default()
    }

    /// Reduces a raw letter sequence to its unique normal form.
    ///
    /// Single pass with a pending stack: an unprimed letter whose matching
    /// primed partner sits on top of the stack annihilates it; every other
    /// letter is pushed. Confluence of the underlying rewriting (see module
    /// docs) makes the result independent of rewrite order.
    pub fn reduce(raw: impl IntoIterator<Item = SignedSymbol>) -> Self {
        let mut stack: Vec<SignedSymbol> = Vec::new();
        for letter in raw {
            match stack.last() {
                Some(top) if top.is_primed() && !letter.is_primed() && top.base() == letter.base() => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        TWord { letters: stack }
    }

    /// A `T`-element made of the given symbols, all unprimed.
    pub fn from_plain<'a>(symbols: impl IntoIterator<Item = &'a Symbol>) -> Self {
        Self::reduce(symbols.into_iter().cloned().map(SignedSymbol::plain))
    }

    /// The prime of a terminal word, as a `T`-element: reversed and primed.
    pub fn from_primed_word(word: &Word) -> Self {
        Self::reduce(
            word.iter()
                .rev()
                .cloned()
                .map(SignedSymbol::primed),
        )
    }

    pub fn letters(&self) -> &[SignedSymbol] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// True iff this is the monoid identity ε.
    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Monoid multiplication: `self · other`, reduced.
    ///
    /// Both operands are already in normal form, so cancellation can only
    /// happen where they meet and proceeds pairwise inward from the boundary.
    pub fn concat(&self, other: &TWord) -> TWord {
        TWord::reduce(
            self.letters
                .iter()
                .chain(other.letters.iter())
                .cloned(),
        )
    }
}

impl fmt::Display for TWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("ε");
        }
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// An element `(ω, z)` of `R = Σ* × T`: a terminal word plus a `T`-tail.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Label {
    word: Word,
    tail: TWord,
}

impl Label {
    pub fn new(word: Word, tail: TWord) -> Self {
        assert!(
            word.is_terminal_only(),
            "label word must contain terminals only, got {word}"
        );
        Label { word, tail }
    }

    /// The identity `(ε, ε)`.
    pub fn identity() -> Self {
        Label::default()
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn tail(&self) -> &TWord {
        &self.tail
    }

    /// True iff the tail is ε — the shape every complete proper walk's label
    /// must have.
    pub fn is_neutral_tail(&self) -> bool {
        self.tail.is_identity()
    }

    /// Label composition: `(ω₁, z₁) ∘ (ω₂, z₂) = (ω₁ω₂, z₂z₁)`.
    ///
    /// Words concatenate in walk order; tails multiply in reversed order.
    pub fn compose(&self, other: &Label) -> Label {
        Label {
            word: self.word.concat(&other.word),
            tail: other.tail.concat(&self.tail),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.word, self.tail)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(name: &str) -> Symbol {
        Symbol::terminal(name)
    }

    fn n(name: &str) -> Symbol {
        Symbol::nonterminal(name)
    }

    fn letters(spec: &[(&str, bool, bool)]) -> Vec<SignedSymbol> {
        // (name, is_nonterminal, primed)
        spec.iter()
            .map(|&(name, nt, primed)| {
                let base = if nt { n(name) } else { t(name) };
                if primed {
                    SignedSymbol::primed(base)
                } else {
                    SignedSymbol::plain(base)
                }
            })
            .collect()
    }

    #[test]
    fn primed_then_unprimed_cancels() {
        let w = TWord::reduce(letters(&[("A", true, true), ("A", true, false)]));
        assert!(w.is_identity());
    }

    #[test]
    fn unprimed_then_primed_is_irreducible() {
        // One-sided rules: x x' must survive.
        let raw = letters(&[("x", false, false), ("x", false, true)]);
        let w = TWord::reduce(raw.clone());
        assert_eq!(w.letters(), &raw[..]);
    }

    #[test]
    fn nested_pairs_cancel_inward() {
        // b' B' B b → b' b → ε
        let w = TWord::reduce(letters(&[
            ("b", false, true),
            ("B", true, true),
            ("B", true, false),
            ("b", false, false),
        ]));
        assert!(w.is_identity());
    }

    #[test]
    fn leftover_primed_letter_survives() {
        // a' a a' → a'
        let w = TWord::reduce(letters(&[
            ("a", false, true),
            ("a", false, false),
            ("a", false, true),
        ]));
        assert_eq!(w.letters(), &letters(&[("a", false, true)])[..]);
    }

    #[test]
    fn prime_reverses_and_toggles() {
        let raw = letters(&[("a", false, false), ("B", true, false), ("c", false, false)]);
        let primed = prime(&raw);
        assert_eq!(
            primed,
            letters(&[("c", false, true), ("B", true, true), ("a", false, true)])
        );
        assert_eq!(prime(&[]), vec![]);
        assert_eq!(prime(&prime(&raw)), raw);
    }

    #[test]
    fn concat_cancels_only_at_boundary() {
        let u = TWord::reduce(letters(&[("b", false, true)]));
        let v = TWord::reduce(letters(&[("b", false, false)]));
        assert!(u.concat(&v).is_identity());

        let id = TWord::identity();
        assert_eq!(id.concat(&v), v);
        assert_eq!(v.concat(&id), v);

        // a' B' · B a → ε, two boundary cancellations
        let u = TWord::reduce(letters(&[("a", false, true), ("B", true, true)]));
        let v = TWord::reduce(letters(&[("B", true, false), ("a", false, false)]));
        assert!(u.concat(&v).is_identity());
    }

    #[test]
    fn compose_reverses_tail_order() {
        // (a, b) ∘ (a b, ε) = (a a b, b)
        let p = Label::new(Word::terminals(["a"]), TWord::from_plain(&[t("b")]));
        let q = Label::new(Word::terminals(["a", "b"]), TWord::identity());
        let pq = p.compose(&q);
        assert_eq!(pq.word(), &Word::terminals(["a", "a", "b"]));
        assert_eq!(pq.tail(), &TWord::from_plain(&[t("b")]));

        // (a a b, b) ∘ (b, b') = (a a b b, ε)
        let r = Label::new(
            Word::terminals(["b"]),
            TWord::from_primed_word(&Word::terminals(["b"])),
        );
        let full = pq.compose(&r);
        assert_eq!(full.word(), &Word::terminals(["a", "a", "b", "b"]));
        assert!(full.is_neutral_tail());
    }

    #[test]
    fn identity_label_is_two_sided() {
        let p = Label::new(Word::terminals(["a"]), TWord::from_plain(&[n("B")]));
        assert_eq!(Label::identity().compose(&p), p);
        assert_eq!(p.compose(&Label::identity()), p);
        assert!(Label::identity().is_neutral_tail());
    }

    #[test]
    fn neutral_tail_detection() {
        let yes = Label::new(Word::terminals(["a", "a", "b", "b"]), TWord::identity());
        let no = Label::new(Word::terminals(["a"]), TWord::from_plain(&[t("b")]));
        assert!(yes.is_neutral_tail());
        assert!(!no.is_neutral_tail());
    }

    #[test]
    fn display_rendering() {
        assert_eq!(Label::identity().to_string(), "(ε, ε)");
        let l = Label::new(
            Word::terminals(["a"]),
            TWord::reduce(letters(&[("C", true, true), ("a", false, true)])),
        );
        assert_eq!(l.to_string(), "(a, C' a')");
    }
}
