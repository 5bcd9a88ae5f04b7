//! Node structures and the four stochastic edit operations.
//!
//! A [`Structure`] is a non-empty word over an [`Alphabet`]. New structures are
//! derived from existing ones by mutating, inserting, deleting or duplicating
//! symbols; [`apply_random_edit`] picks one of those according to
//! [`EditProbabilities`] and draws its parameters uniformly.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on structure length, bounding runaway duplication.
pub const DEFAULT_MAX_STRUCTURE_LEN: usize = 10_000;

const ABSENT: u8 = u8::MAX;

/// An ordered set of distinct ASCII symbols.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    index: [u8; 256],
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self> {
        let mut out = Vec::new();
        let mut index = [ABSENT; 256];
        for c in symbols {
            if !c.is_ascii_graphic() {
                return Err(Error::Alphabet(format!(
                    "symbol {c:?} is not a printable ASCII character"
                )));
            }
            if matches!(c, '=' | '#' | ';' | ',') {
                return Err(Error::Alphabet(format!("symbol {c:?} is reserved")));
            }
            let b = c as u8;
            if index[b as usize] != ABSENT {
                return Err(Error::Alphabet(format!("duplicate symbol {c:?}")));
            }
            index[b as usize] = out.len() as u8;
            out.push(b);
        }
        if out.is_empty() {
            return Err(Error::Alphabet("alphabet is empty".into()));
        }
        Ok(Self { symbols: out, index })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = char> + '_ {
        self.symbols.iter().map(|&b| b as char)
    }

    pub fn contains(&self, symbol: char) -> bool {
        symbol.is_ascii() && self.index[symbol as usize] != ABSENT
    }

    pub(crate) fn contains_byte(&self, b: u8) -> bool {
        self.index[b as usize] != ABSENT
    }

    pub(crate) fn byte_at(&self, i: usize) -> u8 {
        self.symbols[i]
    }

    /// Position of a symbol within the alphabet.
    pub(crate) fn rank(&self, b: u8) -> Option<usize> {
        match self.index[b as usize] {
            ABSENT => None,
            r => Some(r as usize),
        }
    }

    fn check(&self, symbol: char) -> Result<u8> {
        if self.contains(symbol) {
            Ok(symbol as u8)
        } else {
            Err(Error::SymbolNotInAlphabet { symbol })
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Alphabet")
            .field(&String::from_utf8_lossy(&self.symbols))
            .finish()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let joined: Vec<String> = self.symbols().map(String::from).collect();
        f.write_str(&joined.join(","))
    }
}

/// A non-empty word over an alphabet. Structures are only constructed through
/// validated paths, so every symbol is known to be in the alphabet it was
/// checked against.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structure(Vec<u8>);

impl Structure {
    pub fn parse(word: &str, alphabet: &Alphabet) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyStructure);
        }
        let bytes = word.chars().map(|c| alphabet.check(c)).collect::<Result<Vec<u8>>>()?;
        Ok(Self(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; structures have at least one symbol.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbol_at(&self, i: usize) -> Option<char> {
        self.0.get(i).map(|&b| b as char)
    }

    pub fn is_over(&self, alphabet: &Alphabet) -> bool {
        self.0.iter().all(|&b| alphabet.contains_byte(b))
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // ASCII by construction
        f.write_str(std::str::from_utf8(&self.0).unwrap_or("<non-ascii>"))
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure({self})")
    }
}

/// Replace the symbol at `index`.
pub fn mutate(s: &Structure, index: usize, new_symbol: char, alphabet: &Alphabet) -> Result<Structure> {
    let b = alphabet.check(new_symbol)?;
    if index >= s.len() {
        return Err(Error::IndexOutOfRange { index, len: s.len() });
    }
    let mut out = s.0.clone();
    out[index] = b;
    Ok(Structure(out))
}

/// Insert `new_symbol` so that it ends up at position `index` (`index == len` appends).
pub fn insert_symbol(s: &Structure, index: usize, new_symbol: char, alphabet: &Alphabet) -> Result<Structure> {
    let b = alphabet.check(new_symbol)?;
    if index > s.len() {
        return Err(Error::IndexOutOfRange { index, len: s.len() });
    }
    let mut out = Vec::with_capacity(s.len() + 1);
    out.extend_from_slice(&s.0[..index]);
    out.push(b);
    out.extend_from_slice(&s.0[index..]);
    Ok(Structure(out))
}

pub fn delete_symbol(s: &Structure, index: usize) -> Result<Structure> {
    if index >= s.len() {
        return Err(Error::IndexOutOfRange { index, len: s.len() });
    }
    if s.len() == 1 {
        return Err(Error::DeleteFromSingleton);
    }
    let mut out = s.0.clone();
    out.remove(index);
    Ok(Structure(out))
}

/// Copy `s[start..start + length]` and insert the copy right after the original segment.
pub fn duplicate_segment(s: &Structure, start: usize, length: usize) -> Result<Structure> {
    let end = start.saturating_add(length);
    if length == 0 || end > s.len() {
        return Err(Error::SegmentOutOfRange {
            start,
            end,
            len: s.len(),
        });
    }
    let mut out = Vec::with_capacity(s.len() + length);
    out.extend_from_slice(&s.0[..end]);
    out.extend_from_slice(&s.0[start..end]);
    out.extend_from_slice(&s.0[end..]);
    Ok(Structure(out))
}

/// Probabilities of the four edit kinds; they must sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EditProbabilities {
    pub p_mutate: f64,
    pub p_insert: f64,
    pub p_delete: f64,
    pub p_duplicate: f64,
}

impl EditProbabilities {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(p_mutate: f64, p_insert: f64, p_delete: f64, p_duplicate: f64) -> Result<Self> {
        let probs = Self {
            p_mutate,
            p_insert,
            p_delete,
            p_duplicate,
        };
        probs.validate()?;
        Ok(probs)
    }

    pub fn mutate_only() -> Self {
        Self {
            p_mutate: 1.0,
            p_insert: 0.0,
            p_delete: 0.0,
            p_duplicate: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in self.named() {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(Error::EditProbabilities(format!("{name} = {p} is outside [0, 1]")));
            }
        }
        let sum = self.p_mutate + self.p_insert + self.p_delete + self.p_duplicate;
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::EditProbabilities(format!(
                "probabilities must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }

    fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("p_mutate", self.p_mutate),
            ("p_insert", self.p_insert),
            ("p_delete", self.p_delete),
            ("p_duplicate", self.p_duplicate),
        ]
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> EditKind {
        let kinds = [
            (EditKind::Mutate, self.p_mutate),
            (EditKind::Insert, self.p_insert),
            (EditKind::Delete, self.p_delete),
            (EditKind::Duplicate, self.p_duplicate),
        ];
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last_nonzero = EditKind::Mutate;
        for (kind, p) in kinds {
            if p <= 0.0 {
                continue;
            }
            acc += p;
            last_nonzero = kind;
            if u < acc {
                return kind;
            }
        }
        // rounding left u above the cumulative sum
        last_nonzero
    }
}

/// How a duplicated segment is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DuplicationLaw {
    /// Start uniform in `0..len`, then length uniform in `1..=len - start`.
    #[default]
    StartThenLength,
    /// Uniform over all `len * (len + 1) / 2` segments.
    UniformSegment,
}

impl std::str::FromStr for DuplicationLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "start_then_length" => Ok(Self::StartThenLength),
            "uniform_segment" => Ok(Self::UniformSegment),
            other => Err(Error::Config(format!(
                "duplication_law must be `start_then_length` or `uniform_segment`, got {other:?}"
            ))),
        }
    }
}

impl DuplicationLaw {
    /// Draw `(start, length)` for a structure of length `len >= 1`.
    pub fn sample<R: Rng + ?Sized>(self, len: usize, rng: &mut R) -> (usize, usize) {
        match self {
            DuplicationLaw::StartThenLength => {
                let start = rng.random_range(0..len);
                (start, rng.random_range(1..=len - start))
            }
            DuplicationLaw::UniformSegment => loop {
                // two distinct cut points out of len + 1
                let a = rng.random_range(0..=len);
                let b = rng.random_range(0..=len);
                if a != b {
                    break (a.min(b), a.abs_diff(b));
                }
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditKind {
    Mutate,
    Insert,
    Delete,
    Duplicate,
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EditKind::Mutate => "mutate",
            EditKind::Insert => "insert",
            EditKind::Delete => "delete",
            EditKind::Duplicate => "duplicate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditFailure {
    /// Deletion drawn on a length-1 structure.
    DeleteFromSingleton,
    /// The derived structure would exceed the length cap.
    TooLong,
    /// Mutation drawn with a one-symbol alphabet.
    NoAlternativeSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditOutcome {
    Applied { kind: EditKind, structure: Structure },
    Failed { kind: EditKind, reason: EditFailure },
}

impl EditOutcome {
    pub fn kind(&self) -> EditKind {
        match self {
            EditOutcome::Applied { kind, .. } | EditOutcome::Failed { kind, .. } => *kind,
        }
    }

    pub fn structure(&self) -> Option<&Structure> {
        match self {
            EditOutcome::Applied { structure, .. } => Some(structure),
            EditOutcome::Failed { .. } => None,
        }
    }
}

/// Derive a new structure from `s` by one randomly chosen edit.
///
/// Parameters are drawn uniformly: mutation picks a position and a symbol
/// different from the current one; insertion a position in `0..=len` and any
/// symbol; deletion a position; duplication a start in `0..len` and a segment
/// length in `1..=len - start`.
pub fn apply_random_edit<R: Rng + ?Sized>(
    s: &Structure,
    probs: &EditProbabilities,
    alphabet: &Alphabet,
    max_len: usize,
    rng: &mut R,
) -> EditOutcome {
    apply_random_edit_with(s, probs, alphabet, max_len, DuplicationLaw::StartThenLength, rng)
}

/// [`apply_random_edit`] with a chosen duplication law.
pub fn apply_random_edit_with<R: Rng + ?Sized>(
    s: &Structure,
    probs: &EditProbabilities,
    alphabet: &Alphabet,
    max_len: usize,
    law: DuplicationLaw,
    rng: &mut R,
) -> EditOutcome {
    let kind = probs.sample(rng);
    let len = s.len();
    let fail = |reason| EditOutcome::Failed { kind, reason };
    let bytes = match kind {
        EditKind::Mutate => {
            if alphabet.len() < 2 {
                return fail(EditFailure::NoAlternativeSymbol);
            }
            let pos = rng.random_range(0..len);
            let current = alphabet.rank(s.0[pos]).expect("structure symbol outside its alphabet");
            // uniform over the alphabet minus the current symbol
            let mut r = rng.random_range(0..alphabet.len() - 1);
            if r >= current {
                r += 1;
            }
            let mut out = s.0.clone();
            out[pos] = alphabet.byte_at(r);
            out
        }
        EditKind::Insert => {
            if len + 1 > max_len {
                return fail(EditFailure::TooLong);
            }
            let pos = rng.random_range(0..=len);
            let sym = alphabet.byte_at(rng.random_range(0..alphabet.len()));
            let mut out = s.0.clone();
            out.insert(pos, sym);
            out
        }
        EditKind::Delete => {
            if len == 1 {
                return fail(EditFailure::DeleteFromSingleton);
            }
            let pos = rng.random_range(0..len);
            let mut out = s.0.clone();
            out.remove(pos);
            out
        }
        EditKind::Duplicate => {
            let (start, seg) = law.sample(len, rng);
            if len + seg > max_len {
                return fail(EditFailure::TooLong);
            }
            let end = start + seg;
            let mut out = Vec::with_capacity(len + seg);
            out.extend_from_slice(&s.0[..end]);
            out.extend_from_slice(&s.0[start..end]);
            out.extend_from_slice(&s.0[end..]);
            out
        }
    };
    EditOutcome::Applied {
        kind,
        structure: Structure(bytes),
    }
}
