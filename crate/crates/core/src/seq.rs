//! Token sequences and the deterministic sequence operations the refinement
//! steps are built on: subsequence matching, longest common subsequence,
//! token trimming and `<*>` rendering.
//!
//! Logs and templates share one representation, [`TokenSeq`]. A template is
//! a sequence of constant tokens; the variable parts of a log are the gaps
//! between them, so wildcards never appear as tokens.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// The wildcard marker used when rendering templates.
pub const WILDCARD: &str = "<*>";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TokenError {
    #[error("token is empty")]
    Empty,
    #[error("token {0:?} contains whitespace")]
    Whitespace(String),
    #[error("token {0:?} is a wildcard; wildcards are gaps, not tokens")]
    Wildcard(String),
}

/// Returned by [`render_template`] when a sample log does not contain the
/// template.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("template `{template}` is not a subsequence of sample `{sample}`")]
pub struct RenderError {
    pub template: String,
    pub sample: String,
}

/// A single whitespace-free token. Cloning is cheap (shared string).
#[derive(Clone, PartialOrd, Ord)]
pub struct Token(Arc<str>);

impl Token {
    pub fn new(text: &str) -> Result<Self, TokenError> {
        if text.is_empty() {
            return Err(TokenError::Empty);
        }
        if text.chars().any(char::is_whitespace) {
            return Err(TokenError::Whitespace(text.to_owned()));
        }
        if is_wildcard(text) {
            return Err(TokenError::Wildcard(text.to_owned()));
        }
        Ok(Token(Arc::from(text)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Token {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Token {}

impl std::hash::Hash for Token {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Token {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Token::new(&text).map_err(serde::de::Error::custom)
    }
}

/// A token that stands for a gap: the bare marker, or a token with an
/// embedded marker such as `blk_<*>`.
pub fn is_wildcard(text: &str) -> bool {
    text.contains(WILDCARD)
}

/// Deduplicates token storage during ingestion so that repeated tokens share
/// one allocation and compare by pointer.
#[derive(Debug, Default)]
pub struct Interner {
    map: HashMap<Arc<str>, Token>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics if `text` is not a valid token; callers split on whitespace and
    /// filter wildcards first.
    pub fn intern(&mut self, text: &str) -> Token {
        if let Some(tok) = self.map.get(text) {
            return tok.clone();
        }
        let tok = Token::new(text).expect("interned text must be a valid token");
        self.map.insert(tok.0.clone(), tok.clone());
        tok
    }

    /// Splits `line` on whitespace runs and drops wildcard tokens.
    pub fn tokenize(&mut self, line: &str) -> TokenSeq {
        TokenSeq(
            line.split_whitespace()
                .filter(|w| !is_wildcard(w))
                .map(|w| self.intern(w))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// An ordered, possibly empty, sequence of tokens.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenSeq(Vec<Token>);

impl TokenSeq {
    pub fn new() -> Self {
        Self::default()
    }

    /// Whitespace tokenization with wildcard tokens dropped.
    pub fn parse(line: &str) -> Self {
        TokenSeq(
            line.split_whitespace()
                .filter(|w| !is_wildcard(w))
                .map(|w| Token::new(w).expect("whitespace-split, non-wildcard"))
                .collect(),
        )
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Token> {
        self.0
    }

    pub fn push(&mut self, tok: Token) {
        self.0.push(tok);
    }

    /// Tokens joined by single spaces, no gap markers.
    pub fn join(&self) -> String {
        let mut out = String::new();
        for (i, tok) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(tok.as_str());
        }
        out
    }

    pub fn is_subsequence_of(&self, other: &[Token]) -> bool {
        is_subsequence(&self.0, other)
    }
}

impl Deref for TokenSeq {
    type Target = [Token];

    fn deref(&self) -> &[Token] {
        &self.0
    }
}

impl AsRef<[Token]> for TokenSeq {
    fn as_ref(&self) -> &[Token] {
        &self.0
    }
}

impl From<Vec<Token>> for TokenSeq {
    fn from(tokens: Vec<Token>) -> Self {
        TokenSeq(tokens)
    }
}

impl FromIterator<Token> for TokenSeq {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        TokenSeq(iter.into_iter().collect())
    }
}

impl IntoIterator for TokenSeq {
    type Item = Token;
    type IntoIter = std::vec::IntoIter<Token>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a TokenSeq {
    type Item = &'a Token;
    type IntoIter = std::slice::Iter<'a, Token>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.join())
    }
}

/// True iff `a` embeds into `b` by a strictly increasing index map.
///
/// Greedy left-to-right scan, linear in `b.len()`.
pub fn is_subsequence(a: &[Token], b: &[Token]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut want = a.iter();
    let mut next = match want.next() {
        Some(t) => t,
        None => return true,
    };
    for tok in b {
        if tok == next {
            next = match want.next() {
                Some(t) => t,
                None => return true,
            };
        }
    }
    false
}

thread_local! {
    static DP_TABLE: RefCell<Vec<u32>> = const { RefCell::new(Vec::new()) };
}

/// Longest common subsequence of `a` and `b`.
///
/// Prefix DP table, traced back from the bottom-right corner. A match is taken
/// whenever the current tokens are equal (so matches land on the largest
/// indices); otherwise the walk moves up (drops from `a`) when that keeps the
/// optimum, else left. The result is therefore unique for a given input pair.
pub fn lcs(a: &[Token], b: &[Token]) -> TokenSeq {
    // Common suffix is always taken first by the traceback; peel it off
    // without filling table cells for it.
    let mut suffix = 0;
    while suffix < a.len()
        && suffix < b.len()
        && a[a.len() - 1 - suffix] == b[b.len() - 1 - suffix]
    {
        suffix += 1;
    }
    let (a_head, b_head) = (&a[..a.len() - suffix], &b[..b.len() - suffix]);
    let mut out = lcs_table_walk(a_head, b_head);
    out.extend_from_slice(&a[a.len() - suffix..]);
    TokenSeq(out)
}

fn lcs_table_walk(a: &[Token], b: &[Token]) -> Vec<Token> {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return Vec::new();
    }
    let width = m + 1;
    DP_TABLE.with(|cell| {
        let mut table = cell.borrow_mut();
        table.clear();
        table.resize((n + 1) * width, 0);
        for i in 1..=n {
            let row = i * width;
            let prev = (i - 1) * width;
            let ai = &a[i - 1];
            for j in 1..=m {
                table[row + j] = if *ai == b[j - 1] {
                    table[prev + j - 1] + 1
                } else {
                    table[prev + j].max(table[row + j - 1])
                };
            }
        }

        let mut out = Vec::with_capacity(table[n * width + m] as usize);
        let (mut i, mut j) = (n, m);
        while i > 0 && j > 0 {
            if a[i - 1] == b[j - 1] {
                out.push(a[i - 1].clone());
                i -= 1;
                j -= 1;
            } else if table[(i - 1) * width + j] >= table[i * width + j - 1] {
                i -= 1;
            } else {
                j -= 1;
            }
        }
        out.reverse();
        out
    })
}

/// Length of the longest common subsequence, in O(min(len)) memory.
pub fn lcs_len(a: &[Token], b: &[Token]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return 0;
    }
    let mut prev = vec![0u32; short.len() + 1];
    let mut cur = vec![0u32; short.len() + 1];
    for x in long {
        for (j, y) in short.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()] as usize
}

/// Removes every occurrence of every victim token, keeping survivor order.
pub fn trim_tokens(s: &[Token], victims: &[Token]) -> TokenSeq {
    s.iter()
        .filter(|t| !victims.contains(t))
        .cloned()
        .collect()
}

/// Renders `template` for display with `<*>` at each gap.
///
/// A gap slot (before the first token, between two consecutive tokens, after
/// the last) gets one `<*>` when at least one sample skips tokens there under
/// its leftmost embedding. Without samples the tokens are simply joined.
pub fn render_template<S: AsRef<[Token]>>(
    template: &[Token],
    samples: &[S],
) -> Result<String, RenderError> {
    let mut gaps = vec![false; template.len() + 1];
    for sample in samples {
        let sample = sample.as_ref();
        let mut pos = 0usize;
        let mut last: Option<usize> = None;
        for (slot, tok) in template.iter().enumerate() {
            let found = sample[pos..].iter().position(|t| t == tok);
            let at = match found {
                Some(off) => pos + off,
                None => {
                    return Err(RenderError {
                        template: TokenSeq::from(template.to_vec()).join(),
                        sample: TokenSeq::from(sample.to_vec()).join(),
                    })
                }
            };
            let expected = last.map_or(0, |l| l + 1);
            if at > expected {
                gaps[slot] = true;
            }
            last = Some(at);
            pos = at + 1;
        }
        if pos < sample.len() {
            gaps[template.len()] = true;
        }
    }

    let mut parts: Vec<&str> = Vec::with_capacity(template.len() * 2 + 1);
    for (slot, tok) in template.iter().enumerate() {
        if gaps[slot] {
            parts.push(WILDCARD);
        }
        parts.push(tok.as_str());
    }
    if gaps[template.len()] {
        parts.push(WILDCARD);
    }
    Ok(parts.join(" "))
}
