//! Length-reducing string rewriting systems and the finite semigroups they
//! present.
//!
//! A [`RewritingSystem`] is a presentation `<X | R>` read left to right as
//! rewriting rules `u -> v`. Only length-reducing rules are accepted, which
//! makes every system noetherian; confluence is then decided by resolving
//! critical pairs. A complete system yields a normal form made of all the
//! irreducible words, and [`semigroup_from_presentation`] turns that normal
//! form into a [`FiniteSemigroup`].
//!
//! An optional zero is a sentinel rather than a letter. It absorbs on both
//! sides during concatenation, so the laws `0w = w0 = 0` never appear as
//! rules and never take part in critical-pair analysis.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::semigroup::{FiniteSemigroup, SemigroupError};

/// Irreducible-word limit used when the caller does not choose one.
pub const DEFAULT_CAP: usize = 10_000;

/// Index of a symbol in its [`Alphabet`].
pub type Letter = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("alphabet has more than 256 letters")]
    AlphabetTooLarge,
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("zero token `{0}` is also declared as a letter")]
    ZeroIsLetter(String),
    #[error("symbol `{symbol}` at offset {offset} is not in the alphabet")]
    UnknownSymbol { symbol: String, offset: usize },
    #[error("unterminated `[` at offset {0}")]
    UnterminatedBracket(usize),
    #[error("letter index {0} is outside the alphabet")]
    LetterOutOfRange(Letter),
    #[error("rule {index}: left-hand side must be a non-empty word")]
    EmptyLhs { index: usize },
    #[error("rule {index}: right-hand side must be a non-empty word or zero")]
    EmptyRhs { index: usize },
    #[error("rule {index} is not length-reducing ({lhs_len} -> {rhs_len})")]
    NotLengthReducing {
        index: usize,
        lhs_len: usize,
        rhs_len: usize,
    },
    #[error("rule {index} rewrites to zero but no zero token is declared")]
    UndeclaredZero { index: usize },
    #[error("more than {cap} irreducible words; the presented semigroup is presumably infinite")]
    CapExceeded { cap: usize },
    #[error("internal error: presented table is not a semigroup ({0})")]
    Table(SemigroupError),
}

impl From<SemigroupError> for RewriteError {
    fn from(e: SemigroupError) -> Self {
        RewriteError::Table(e)
    }
}

/// A word of the free monoid over an alphabet, or the adjoined zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Word {
    Letters(Vec<Letter>),
    Zero,
}

impl Word {
    pub fn letters(letters: impl Into<Vec<Letter>>) -> Self {
        Word::Letters(letters.into())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Word::Zero)
    }

    /// Length with the zero counted as 0.
    pub fn len(&self) -> usize {
        match self {
            Word::Letters(l) => l.len(),
            Word::Zero => 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_letters(&self) -> Option<&[Letter]> {
        match self {
            Word::Letters(l) => Some(l),
            Word::Zero => None,
        }
    }

    /// Concatenation in the free semigroup with zero.
    pub fn concat(&self, other: &Word) -> Word {
        match (self, other) {
            (Word::Letters(a), Word::Letters(b)) => {
                let mut out = Vec::with_capacity(a.len() + b.len());
                out.extend_from_slice(a);
                out.extend_from_slice(b);
                Word::Letters(out)
            }
            _ => Word::Zero,
        }
    }
}

fn splice(prefix: &[Letter], middle: &Word, suffix: &[Letter]) -> Word {
    match middle {
        Word::Zero => Word::Zero,
        Word::Letters(m) => {
            let mut out = Vec::with_capacity(prefix.len() + m.len() + suffix.len());
            out.extend_from_slice(prefix);
            out.extend_from_slice(m);
            out.extend_from_slice(suffix);
            Word::Letters(out)
        }
    }
}

fn valid_token(token: &str) -> bool {
    !token.is_empty()
        && !token
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '[' | ']' | '#' | ':' | '-' | '>'))
}

fn render_token(token: &str, out: &mut String) {
    if token.chars().count() == 1 {
        out.push_str(token);
    } else {
        out.push('[');
        out.push_str(token);
        out.push(']');
    }
}

/// Strips the brackets from a declared token (`[ab]` -> `ab`).
fn declared_token(raw: &str) -> Result<String, RewriteError> {
    let token = raw
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .unwrap_or(raw);
    if valid_token(token) {
        Ok(token.to_string())
    } else {
        Err(RewriteError::InvalidToken(raw.to_string()))
    }
}

/// Ordered set of distinct printable symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    tokens: Vec<String>,
}

impl Alphabet {
    pub fn new<I, T>(tokens: I) -> Result<Self, RewriteError>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(RewriteError::EmptyAlphabet);
        }
        if tokens.len() > 256 {
            return Err(RewriteError::AlphabetTooLarge);
        }
        let mut seen = HashSet::new();
        for t in &tokens {
            if !valid_token(t) {
                return Err(RewriteError::InvalidToken(t.clone()));
            }
            if !seen.insert(t.as_str()) {
                return Err(RewriteError::DuplicateLetter(t.clone()));
            }
        }
        Ok(Alphabet { tokens })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn index_of(&self, token: &str) -> Option<Letter> {
        self.tokens
            .iter()
            .position(|t| t == token)
            .map(|i| i as Letter)
    }

    fn render_into(&self, letters: &[Letter], out: &mut String) {
        for &l in letters {
            render_token(&self.tokens[l as usize], out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Vec<Letter>,
    pub rhs: Word,
}

impl Rule {
    pub fn new(lhs: impl Into<Vec<Letter>>, rhs: Word) -> Self {
        Rule {
            lhs: lhs.into(),
            rhs,
        }
    }
}

/// A position in a word where a rule's left-hand side occurs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Redex {
    pub position: usize,
    pub rule: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlapKind {
    /// A proper suffix of one left-hand side is a proper prefix of another.
    Overlap,
    /// One left-hand side occurs inside another.
    Containment,
}

/// Two distinct one-step reducts of a common source word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    pub source: Word,
    pub left: Word,
    pub right: Word,
    pub kind: OverlapKind,
    /// Rules producing `left` and `right` respectively.
    pub rules: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    NotConfluent {
        witness: CriticalPair,
        left_normal: Word,
        right_normal: Word,
    },
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        matches!(self, Completeness::Complete)
    }
}

/// A presentation `<X | R>` read as a length-reducing rewriting system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewritingSystem {
    alphabet: Alphabet,
    rules: Vec<Rule>,
    zero: Option<String>,
}

impl RewritingSystem {
    pub fn new(
        alphabet: Alphabet,
        rules: Vec<Rule>,
        zero: Option<String>,
    ) -> Result<Self, RewriteError> {
        if let Some(z) = &zero {
            if !valid_token(z) {
                return Err(RewriteError::InvalidToken(z.clone()));
            }
            if alphabet.index_of(z).is_some() {
                return Err(RewriteError::ZeroIsLetter(z.clone()));
            }
        }
        let n = alphabet.len();
        for (index, rule) in rules.iter().enumerate() {
            if rule.lhs.is_empty() {
                return Err(RewriteError::EmptyLhs { index });
            }
            let sides = std::iter::once(rule.lhs.as_slice()).chain(rule.rhs.as_letters());
            for side in sides {
                if let Some(&bad) = side.iter().find(|&&l| l as usize >= n) {
                    return Err(RewriteError::LetterOutOfRange(bad));
                }
            }
            match &rule.rhs {
                Word::Zero if zero.is_none() => return Err(RewriteError::UndeclaredZero { index }),
                Word::Letters(r) if r.is_empty() => return Err(RewriteError::EmptyRhs { index }),
                _ => {}
            }
            if rule.rhs.len() >= rule.lhs.len() {
                return Err(RewriteError::NotLengthReducing {
                    index,
                    lhs_len: rule.lhs.len(),
                    rhs_len: rule.rhs.len(),
                });
            }
        }
        Ok(RewritingSystem {
            alphabet,
            rules,
            zero,
        })
    }

    /// Builds a system from rule texts such as `("xyzt", "x")`, where the
    /// right-hand side may be the zero token.
    pub fn from_texts(
        letters: &[&str],
        zero: Option<&str>,
        rules: &[(&str, &str)],
    ) -> Result<Self, RewriteError> {
        let alphabet = Alphabet::new(letters.iter().copied())?;
        let zero = zero.map(str::to_string);
        let mut parsed = Vec::with_capacity(rules.len());
        for (lhs, rhs) in rules {
            let lhs = parse_word(&alphabet, zero.as_deref(), lhs)?;
            let rhs = parse_word(&alphabet, zero.as_deref(), rhs)?;
            let lhs = match lhs {
                Word::Letters(l) => l,
                Word::Zero => {
                    return Err(RewriteError::EmptyLhs {
                        index: parsed.len(),
                    })
                }
            };
            parsed.push(Rule { lhs, rhs });
        }
        RewritingSystem::new(alphabet, parsed, zero)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn zero_token(&self) -> Option<&str> {
        self.zero.as_deref()
    }

    pub fn has_zero(&self) -> bool {
        self.zero.is_some()
    }

    /// Parses a word written in this system's tokens.
    pub fn word(&self, text: &str) -> Result<Word, RewriteError> {
        parse_word(&self.alphabet, self.zero.as_deref(), text)
    }

    pub fn render(&self, word: &Word) -> String {
        match word {
            Word::Zero => self.zero.clone().unwrap_or_else(|| "0".to_string()),
            Word::Letters(l) => {
                let mut out = String::new();
                self.alphabet.render_into(l, &mut out);
                out
            }
        }
    }

    fn check_word(&self, word: &Word) -> Result<(), RewriteError> {
        if let Word::Letters(l) = word {
            if let Some(&bad) = l.iter().find(|&&c| c as usize >= self.alphabet.len()) {
                return Err(RewriteError::LetterOutOfRange(bad));
            }
        }
        Ok(())
    }

    /// Every occurrence of every left-hand side, ordered by position and
    /// then by rule index.
    pub fn redexes(&self, word: &[Letter]) -> Vec<Redex> {
        let mut out = Vec::new();
        for position in 0..word.len() {
            for (rule, r) in self.rules.iter().enumerate() {
                if word[position..].starts_with(&r.lhs) {
                    out.push(Redex { position, rule });
                }
            }
        }
        out
    }

    fn leftmost_redex(&self, word: &[Letter]) -> Option<Redex> {
        (0..word.len()).find_map(|position| {
            self.rules
                .iter()
                .position(|r| word[position..].starts_with(&r.lhs))
                .map(|rule| Redex { position, rule })
        })
    }

    /// Applies one rule at one position.
    pub fn rewrite_at(&self, word: &[Letter], redex: Redex) -> Word {
        let rule = &self.rules[redex.rule];
        let end = redex.position + rule.lhs.len();
        debug_assert!(word[redex.position..end] == rule.lhs[..]);
        splice(&word[..redex.position], &rule.rhs, &word[end..])
    }

    pub fn is_irreducible(&self, word: &[Letter]) -> bool {
        self.leftmost_redex(word).is_none()
    }

    /// Reduces to an irreducible word, always rewriting the leftmost match
    /// and preferring the lowest rule index there.
    pub fn reduce_word(&self, word: &Word) -> Result<Word, RewriteError> {
        self.check_word(word)?;
        let mut current = match word {
            Word::Zero => return Ok(Word::Zero),
            Word::Letters(l) => l.clone(),
        };
        while let Some(redex) = self.leftmost_redex(&current) {
            let rule = &self.rules[redex.rule];
            match &rule.rhs {
                Word::Zero => return Ok(Word::Zero),
                Word::Letters(rhs) => {
                    let end = redex.position + rule.lhs.len();
                    current.splice(redex.position..end, rhs.iter().copied());
                }
            }
        }
        Ok(Word::Letters(current))
    }

    /// Reduces with a caller-chosen strategy: `choose` receives all redexes
    /// of the current word and returns the index of the one to apply.
    pub fn reduce_word_with<F>(&self, word: &Word, mut choose: F) -> Result<Word, RewriteError>
    where
        F: FnMut(&[Redex]) -> usize,
    {
        self.check_word(word)?;
        let mut current = word.clone();
        loop {
            let letters = match &current {
                Word::Zero => return Ok(Word::Zero),
                Word::Letters(l) => l,
            };
            let redexes = self.redexes(letters);
            if redexes.is_empty() {
                return Ok(current);
            }
            let pick = choose(&redexes).min(redexes.len() - 1);
            current = self.rewrite_at(letters, redexes[pick]);
        }
    }

    /// All critical pairs from proper overlaps and containments of
    /// left-hand sides, deduplicated by source and unordered result pair.
    pub fn critical_pairs(&self) -> Vec<CriticalPair> {
        let mut out = Vec::new();
        let mut seen: HashSet<(Word, Word, Word)> = HashSet::new();
        let mut emit = |pair: CriticalPair| {
            if pair.left == pair.right {
                return;
            }
            let (a, b) = if pair.left <= pair.right {
                (pair.left.clone(), pair.right.clone())
            } else {
                (pair.right.clone(), pair.left.clone())
            };
            if seen.insert((pair.source.clone(), a, b)) {
                out.push(pair);
            }
        };

        for (i, ri) in self.rules.iter().enumerate() {
            let li = &ri.lhs;
            for (j, rj) in self.rules.iter().enumerate() {
                let lj = &rj.lhs;
                for k in 1..li.len().min(lj.len()) {
                    if li[li.len() - k..] != lj[..k] {
                        continue;
                    }
                    let mut source = li.clone();
                    source.extend_from_slice(&lj[k..]);
                    emit(CriticalPair {
                        left: splice(&[], &ri.rhs, &lj[k..]),
                        right: splice(&li[..li.len() - k], &rj.rhs, &[]),
                        source: Word::Letters(source),
                        kind: OverlapKind::Overlap,
                        rules: (i, j),
                    });
                }
                if i == j || lj.len() > li.len() {
                    continue;
                }
                for p in 0..=li.len() - lj.len() {
                    if li[p..p + lj.len()] != lj[..] {
                        continue;
                    }
                    emit(CriticalPair {
                        source: Word::Letters(li.clone()),
                        left: ri.rhs.clone(),
                        right: splice(&li[..p], &rj.rhs, &li[p + lj.len()..]),
                        kind: OverlapKind::Containment,
                        rules: (i, j),
                    });
                }
            }
        }
        out
    }

    /// Decides completeness. Length-reducing systems are noetherian, so the
    /// system is complete iff every critical pair has a common normal form.
    pub fn is_complete(&self) -> Completeness {
        for pair in self.critical_pairs() {
            let left_normal = self
                .reduce_word(&pair.left)
                .expect("critical pair words are over the alphabet");
            let right_normal = self
                .reduce_word(&pair.right)
                .expect("critical pair words are over the alphabet");
            if left_normal != right_normal {
                return Completeness::NotConfluent {
                    witness: pair,
                    left_normal,
                    right_normal,
                };
            }
        }
        Completeness::Complete
    }

    /// Irreducible non-empty words by increasing length (ties in alphabet
    /// order), followed by the zero when the system has one.
    ///
    /// Factors of irreducible words are irreducible, so each length level is
    /// built from the previous one and the enumeration stops at the first
    /// empty level.
    pub fn enumerate_irreducibles(&self, cap: usize) -> Result<Vec<Word>, RewriteError> {
        let letters = self.alphabet.len() as Letter;
        let mut out: Vec<Word> = Vec::new();
        let mut level: Vec<Vec<Letter>> = (0..letters)
            .map(|l| vec![l])
            .filter(|w| self.is_irreducible(w))
            .collect();
        while !level.is_empty() {
            if out.len() + level.len() > cap {
                return Err(RewriteError::CapExceeded { cap });
            }
            let mut next = Vec::new();
            for w in &level {
                for l in 0..letters {
                    let mut candidate = w.clone();
                    candidate.push(l);
                    if !self.rules.iter().any(|r| candidate.ends_with(&r.lhs)) {
                        next.push(candidate);
                    }
                }
            }
            out.extend(level.into_iter().map(Word::Letters));
            level = next;
        }
        if self.has_zero() {
            if out.len() + 1 > cap {
                return Err(RewriteError::CapExceeded { cap });
            }
            out.push(Word::Zero);
        }
        Ok(out)
    }

    /// Serializes to the presentation text format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("letters:");
        for t in self.alphabet.tokens() {
            out.push(' ');
            render_token(t, &mut out);
        }
        out.push('\n');
        if let Some(z) = &self.zero {
            out.push_str("zero: ");
            render_token(z, &mut out);
            out.push('\n');
        }
        for rule in &self.rules {
            out.push_str("rule: ");
            out.push_str(&self.render(&Word::Letters(rule.lhs.clone())));
            out.push_str(" -> ");
            out.push_str(&self.render(&rule.rhs));
            out.push('\n');
        }
        out
    }
}

/// Parses a word: single characters, or bracketed multi-character tokens.
/// Whitespace is ignored. Any occurrence of the zero token makes the whole
/// word zero.
pub fn parse_word(
    alphabet: &Alphabet,
    zero: Option<&str>,
    text: &str,
) -> Result<Word, RewriteError> {
    let mut letters = Vec::new();
    let mut is_zero = false;
    let mut chars = text.char_indices().peekable();
    while let Some((offset, c)) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        let token: String = if c == '[' {
            let mut t = String::new();
            loop {
                match chars.next() {
                    Some((_, ']')) => break,
                    Some((_, ch)) => t.push(ch),
                    None => return Err(RewriteError::UnterminatedBracket(offset)),
                }
            }
            t
        } else {
            c.to_string()
        };
        if zero == Some(token.as_str()) {
            is_zero = true;
        } else if let Some(l) = alphabet.index_of(&token) {
            letters.push(l);
        } else {
            return Err(RewriteError::UnknownSymbol {
                symbol: token,
                offset,
            });
        }
    }
    Ok(if is_zero {
        Word::Zero
    } else {
        Word::Letters(letters)
    })
}

/// A semigroup built from a complete presentation, with its normal forms.
#[derive(Clone, Debug)]
pub struct PresentedSemigroup {
    pub system: RewritingSystem,
    pub semigroup: FiniteSemigroup,
    /// Normal form of each element, by element index.
    pub normal_forms: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl PresentedSemigroup {
    /// Element represented by an arbitrary word.
    pub fn element_of(&self, word: &Word) -> Result<usize, RewriteError> {
        let normal = self.system.reduce_word(word)?;
        Ok(self.index[&normal])
    }

    /// Element represented by a word written in the system's tokens.
    pub fn element(&self, text: &str) -> Result<usize, RewriteError> {
        self.element_of(&self.system.word(text)?)
    }
}

/// The semigroup defined by a complete presentation: elements are the
/// irreducible words (plus the zero), multiplied by concatenating and
/// reducing. The resulting table is checked for associativity.
pub fn semigroup_from_presentation(
    system: &RewritingSystem,
    cap: usize,
) -> Result<PresentedSemigroup, RewriteError> {
    let words = system.enumerate_irreducibles(cap)?;
    let index: HashMap<Word, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let mut rows = Vec::with_capacity(words.len());
    for u in &words {
        let mut row = Vec::with_capacity(words.len());
        for v in &words {
            let product = system.reduce_word(&u.concat(v))?;
            // A complete system maps every word to an enumerated normal form.
            let idx = *index.get(&product).ok_or_else(|| {
                RewriteError::Table(SemigroupError::Internal(format!(
                    "product {} is not an enumerated normal form",
                    system.render(&product)
                )))
            })?;
            row.push(idx);
        }
        rows.push(row);
    }
    let names = words.iter().map(|w| system.render(w)).collect();
    let semigroup = FiniteSemigroup::from_table(names, rows)?;
    Ok(PresentedSemigroup {
        system: system.clone(),
        semigroup,
        normal_forms: words,
        index,
    })
}

/// Error in the presentation text format, with 1-based position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Splits `key: value` after stripping a `#` comment. Returns the key, the
/// value and the 0-based char column where the value starts.
pub(crate) fn split_declaration(line: &str) -> Option<(&str, &str, usize)> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    if line.trim().is_empty() {
        return None;
    }
    let (key, rest) = line.split_once(':').unwrap_or((line, ""));
    let skipped = rest.len() - rest.trim_start().len();
    let value_start = key.len() + 1 + skipped;
    Some((
        key.trim(),
        rest.trim(),
        line[..value_start.min(line.len())].chars().count(),
    ))
}

impl FromStr for RewritingSystem {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        let mut letters: Option<(usize, Alphabet)> = None;
        let mut zero: Option<String> = None;
        let mut rule_lines = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let Some((key, value, col)) = split_declaration(raw) else {
                continue;
            };
            match key {
                "letters" => {
                    if letters.is_some() {
                        return Err(ParseError::new(
                            line_no,
                            1,
                            "duplicate `letters:` declaration",
                        ));
                    }
                    let tokens = value
                        .split_whitespace()
                        .map(declared_token)
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| ParseError::new(line_no, col + 1, e.to_string()))?;
                    let alphabet = Alphabet::new(tokens)
                        .map_err(|e| ParseError::new(line_no, col + 1, e.to_string()))?;
                    letters = Some((line_no, alphabet));
                }
                "zero" => {
                    if zero.is_some() {
                        return Err(ParseError::new(line_no, 1, "duplicate `zero:` declaration"));
                    }
                    let mut parts = value.split_whitespace();
                    let token = match (parts.next(), parts.next()) {
                        (Some(t), None) => t,
                        _ => {
                            return Err(ParseError::new(
                                line_no,
                                col + 1,
                                "expected exactly one zero token",
                            ))
                        }
                    };
                    zero = Some(
                        declared_token(token)
                            .map_err(|e| ParseError::new(line_no, col + 1, e.to_string()))?,
                    );
                }
                "rule" => rule_lines.push((line_no, col, value.to_string())),
                other => {
                    return Err(ParseError::new(
                        line_no,
                        1,
                        format!("unknown declaration `{other}`"),
                    ))
                }
            }
        }
        let Some((letters_line, alphabet)) = letters else {
            return Err(ParseError::new(1, 1, "missing `letters:` declaration"));
        };
        if let Some(z) = &zero {
            if alphabet.index_of(z).is_some() {
                return Err(ParseError::new(
                    letters_line,
                    1,
                    RewriteError::ZeroIsLetter(z.clone()).to_string(),
                ));
            }
        }

        let mut rules = Vec::with_capacity(rule_lines.len());
        for (line_no, col, value) in &rule_lines {
            let Some((lhs_text, rhs_text)) = value.split_once("->") else {
                return Err(ParseError::new(*line_no, col + 1, "expected `lhs -> rhs`"));
            };
            let rhs_col = col + lhs_text.chars().count() + 2;
            let word_err = |base: usize, e: RewriteError| {
                let offset = match &e {
                    RewriteError::UnknownSymbol { offset, .. } => *offset,
                    RewriteError::UnterminatedBracket(offset) => *offset,
                    _ => 0,
                };
                ParseError::new(*line_no, base + offset + 1, e.to_string())
            };
            let lhs =
                parse_word(&alphabet, zero.as_deref(), lhs_text).map_err(|e| word_err(*col, e))?;
            let rhs = parse_word(&alphabet, zero.as_deref(), rhs_text)
                .map_err(|e| word_err(rhs_col, e))?;
            let lhs = match lhs {
                Word::Letters(l) if !l.is_empty() => l,
                _ => {
                    return Err(ParseError::new(
                        *line_no,
                        col + 1,
                        "left-hand side must be a non-empty word of letters",
                    ))
                }
            };
            rules.push(Rule { lhs, rhs });
        }
        RewritingSystem::new(alphabet, rules, zero).map_err(|e| {
            let line = match &e {
                RewriteError::EmptyRhs { index }
                | RewriteError::NotLengthReducing { index, .. }
                | RewriteError::UndeclaredZero { index }
                | RewriteError::EmptyLhs { index } => rule_lines[*index].0,
                _ => 1,
            };
            ParseError::new(line, 1, e.to_string())
        })
    }
}

impl fmt::Display for RewritingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
