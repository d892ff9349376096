//! The input document: line-oriented `key = value` pairs grouped in blocks.
//!
//! ```text
//! # comment
//! version = 1
//! field = F2
//!
//! [algebra A]
//! family = dual_numbers
//!
//! [module M]
//! preset = sum(R, k)
//!
//! [task t]
//! op = trace
//! M = M
//! ```
//!
//! A block header is either `[kind name key=value ...]` or the same without
//! brackets; the name and the inline pairs are optional. Unnamed blocks are
//! called `<kind><n>`. See `docs/FORMAT.md` for every block kind and key.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DocError {
    pub line: usize,
    pub message: String,
}

impl DocError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        DocError { line, message: message.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    Algebra,
    Module,
    Semigroup,
    Ideal,
    Task,
    Suite,
}

impl BlockKind {
    const ALL: [BlockKind; 6] =
        [BlockKind::Algebra, BlockKind::Module, BlockKind::Semigroup, BlockKind::Ideal, BlockKind::Task, BlockKind::Suite];

    pub fn word(self) -> &'static str {
        match self {
            BlockKind::Algebra => "algebra",
            BlockKind::Module => "module",
            BlockKind::Semigroup => "semigroup",
            BlockKind::Ideal => "ideal",
            BlockKind::Task => "task",
            BlockKind::Suite => "suite",
        }
    }

    fn parse(s: &str) -> Option<BlockKind> {
        Self::ALL.into_iter().find(|k| k.word() == s)
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Block {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn value(&self, key: &str) -> Option<&str> {
        self.get(key).map(|e| e.value.as_str())
    }

    /// The first key present among `keys` (aliases).
    pub fn any(&self, keys: &[&str]) -> Option<&Entry> {
        keys.iter().find_map(|k| self.get(k))
    }

    pub fn error(&self, message: impl Into<String>) -> DocError {
        DocError::new(self.line, message)
    }
}

/// The parsed but not yet resolved document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub globals: Vec<Entry>,
    pub blocks: Vec<Block>,
}

impl Document {
    pub fn global(&self, key: &str) -> Option<&Entry> {
        self.globals.iter().find(|e| e.key == key)
    }

    pub fn blocks_of(&self, kind: BlockKind) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(move |b| b.kind == kind)
    }

    pub fn block(&self, kind: BlockKind, name: &str) -> Option<&Block> {
        self.blocks_of(kind).find(|b| b.name == name)
    }
}

fn split_pair(s: &str) -> Option<(&str, &str)> {
    let (k, v) = s.split_once('=')?;
    let k = k.trim();
    if k.is_empty() || k.contains(char::is_whitespace) {
        return None;
    }
    Some((k, v.trim()))
}

/// Splits inline `key=value` tokens; values may contain commas and
/// parentheses but not spaces, unless wrapped in double quotes.
fn inline_pairs(s: &str, line: usize) -> Result<Vec<Entry>, DocError> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let Some(eq) = rest.find('=') else {
            return Err(DocError::new(line, format!("expected key=value, found {rest:?}")));
        };
        let key = rest[..eq].trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(DocError::new(line, format!("bad key in {rest:?}")));
        }
        let after = &rest[eq + 1..];
        let (value, next) = if let Some(q) = after.strip_prefix('"') {
            let end = q.find('"').ok_or_else(|| DocError::new(line, "unterminated quote"))?;
            (&q[..end], &q[end + 1..])
        } else {
            // whitespace inside parentheses belongs to the value: `M=sum(R, k)`
            let mut depth = 0i32;
            let end = after
                .char_indices()
                .find(|&(_, c)| {
                    match c {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    depth <= 0 && c.is_whitespace()
                })
                .map_or(after.len(), |(i, _)| i);
            (&after[..end], &after[end..])
        };
        out.push(Entry { key: key.into(), value: value.trim().into(), line });
        rest = next.trim_start();
    }
    Ok(out)
}

/// Kind, optional name and inline pairs of a block header.
type Header = (BlockKind, Option<String>, Vec<Entry>);

/// A header line: `[kind ...]`, or `kind ...` where the second token is not
/// `=` (so `algebra = A` inside a module block stays a key).
fn header(raw: &str, line: usize) -> Result<Option<Header>, DocError> {
    let body = if let Some(inner) = raw.strip_prefix('[') {
        inner.strip_suffix(']').ok_or_else(|| DocError::new(line, "unterminated section header"))?
    } else {
        let mut toks = raw.split_whitespace();
        let first = toks.next().unwrap_or("");
        let second = toks.next();
        if BlockKind::parse(first).is_none() || first.contains('=') || second == Some("=") || second.is_some_and(|s| s.starts_with('=')) {
            return Ok(None);
        }
        raw
    };
    let body = body.trim();
    let (word, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
    let kind = BlockKind::parse(word).ok_or_else(|| DocError::new(line, format!("unknown block kind {word:?}")))?;
    let rest = rest.trim();
    let (name, pairs) = match rest.split_once(char::is_whitespace).unwrap_or((rest, "")) {
        ("", _) => (None, ""),
        (first, tail) if !first.contains('=') => (Some(first.to_string()), tail),
        _ => (None, rest),
    };
    Ok(Some((kind, name, inline_pairs(pairs, line)?)))
}

pub fn parse(text: &str) -> Result<Document, DocError> {
    let mut doc = Document::default();
    let mut current: Option<Block> = None;
    let mut counters: BTreeMap<BlockKind, usize> = BTreeMap::new();
    let mut names: BTreeMap<(BlockKind, String), usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
        if raw.is_empty() {
            continue;
        }
        if let Some((kind, name, inline)) = header(raw, line)? {
            if let Some(b) = current.take() {
                doc.blocks.push(b);
            }
            let n = counters.entry(kind).or_default();
            *n += 1;
            let name = name.unwrap_or_else(|| format!("{kind}{n}"));
            if let Some(&first) = names.get(&(kind, name.clone())) {
                return Err(DocError::new(
                    line,
                    format!("duplicate {kind} block {name:?} (lines {first} and {line})"),
                ));
            }
            names.insert((kind, name.clone()), line);
            let mut block = Block { kind, name, line, entries: Vec::new() };
            for e in inline {
                push_entry(&mut block.entries, e)?;
            }
            current = Some(block);
            continue;
        }
        let (key, value) = split_pair(raw).ok_or_else(|| DocError::new(line, format!("expected `key = value`, found {raw:?}")))?;
        let entry = Entry { key: key.into(), value: value.into(), line };
        match current.as_mut() {
            Some(b) => push_entry(&mut b.entries, entry)?,
            None => push_entry(&mut doc.globals, entry)?,
        }
    }
    if let Some(b) = current {
        doc.blocks.push(b);
    }
    if let Some(v) = doc.global("version") {
        if v.value != "1" {
            return Err(DocError::new(v.line, format!("unsupported format version {:?}", v.value)));
        }
    }
    Ok(doc)
}

fn push_entry(entries: &mut Vec<Entry>, e: Entry) -> Result<(), DocError> {
    if let Some(prev) = entries.iter().find(|x| x.key == e.key) {
        return Err(DocError::new(e.line, format!("duplicate key {:?} (lines {} and {})", e.key, prev.line, e.line)));
    }
    entries.push(e);
    Ok(())
}

/// `name(arg, arg)` or `name`.
pub fn call(s: &str) -> Option<(&str, Vec<&str>)> {
    let s = s.trim();
    match s.split_once('(') {
        None => Some((s, Vec::new())),
        Some((name, rest)) => {
            let inner = rest.strip_suffix(')')?;
            let args = if inner.trim().is_empty() { Vec::new() } else { split_args(inner) };
            Some((name.trim(), args))
        }
    }
}

/// Top-level comma split that respects parentheses.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0usize, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// Whitespace- or comma-separated tokens.
pub fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty())
}

pub fn int_list<T: std::str::FromStr>(e: &Entry) -> Result<Vec<T>, DocError> {
    tokens(&e.value)
        .map(|t| t.parse().map_err(|_| DocError::new(e.line, format!("{}: bad integer {t:?}", e.key))))
        .collect()
}

pub fn scalar<T: std::str::FromStr>(e: &Entry) -> Result<T, DocError> {
    e.value.trim().parse().map_err(|_| DocError::new(e.line, format!("{}: bad value {:?}", e.key, e.value)))
}

/// Rows separated by `;`.
pub fn matrix_rows(s: &str) -> Vec<Vec<&str>> {
    s.split(';').map(|r| tokens(r).collect::<Vec<_>>()).filter(|r| !r.is_empty()).collect()
}
