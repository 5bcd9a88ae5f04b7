//! Generalized Hamming distance between structures.
//!
//! Structures are compared group by group, each group being `unit_distance`
//! consecutive symbols. Two groups are equal when they hold the same multiset of
//! symbols, or when a [`MatchTable`] declares them equal. Only the common
//! prefix is compared, and a trailing partial group is ignored.
//!
//! A table in [`MatchSemantics::Replace`] mode switches the multiset rule off:
//! groups are then equal only when identical or declared equal.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{Alphabet, Structure};

/// How a match table combines with the multiset rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchSemantics {
    /// Declared pairs are added to the multiset rule.
    #[default]
    Union,
    /// Declared pairs replace the multiset rule; undeclared groups must be identical.
    Replace,
}

impl std::str::FromStr for MatchSemantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "union" => Ok(Self::Union),
            "replace" => Ok(Self::Replace),
            other => Err(Error::DistanceConfig(format!(
                "match_semantics must be `union` or `replace`, got {other:?}"
            ))),
        }
    }
}

/// Declared equivalences between symbol tuples of length `unit`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchTable {
    unit: usize,
    entries: BTreeMap<Vec<u8>, BTreeSet<Vec<u8>>>,
    closure_additions: usize,
    semantics: MatchSemantics,
}

impl MatchTable {
    pub fn empty(unit: usize) -> Self {
        Self {
            unit,
            ..Default::default()
        }
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn semantics(&self) -> MatchSemantics {
        self.semantics
    }

    pub fn with_semantics(mut self, semantics: MatchSemantics) -> Self {
        self.semantics = semantics;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.entries.values().all(BTreeSet::is_empty)
    }

    /// Number of (left, right) pairs, counting both directions.
    pub fn pair_count(&self) -> usize {
        self.entries.values().map(BTreeSet::len).sum()
    }

    /// How many pairs were missing from the input and added to make it symmetric.
    pub fn closure_additions(&self) -> usize {
        self.closure_additions
    }

    pub fn declares_equal(&self, g1: &[u8], g2: &[u8]) -> bool {
        self.entries.get(g1).is_some_and(|set| set.contains(g2))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&[u8], &[u8])> {
        self.entries
            .iter()
            .flat_map(|(k, vs)| vs.iter().map(move |v| (k.as_slice(), v.as_slice())))
    }

    /// Add `g1 = g2` in both directions.
    pub fn insert(&mut self, g1: &[u8], g2: &[u8]) -> Result<()> {
        for g in [g1, g2] {
            if g.len() != self.unit {
                return Err(Error::GroupLengthMismatch {
                    left: g.len(),
                    right: self.unit,
                });
            }
        }
        self.entries.entry(g1.to_vec()).or_default().insert(g2.to_vec());
        self.entries.entry(g2.to_vec()).or_default().insert(g1.to_vec());
        Ok(())
    }

    fn symmetrize(&mut self) -> Vec<(Vec<u8>, Vec<u8>)> {
        let missing: Vec<(Vec<u8>, Vec<u8>)> = self
            .pairs()
            .filter(|(a, b)| !self.declares_equal(b, a))
            .map(|(a, b)| (b.to_vec(), a.to_vec()))
            .collect();
        for (a, b) in &missing {
            self.entries.entry(a.clone()).or_default().insert(b.clone());
        }
        self.closure_additions += missing.len();
        missing
    }
}

/// Parse a match file: one `TUPLE = [TUPLE ...]` rule per line, `#` comments,
/// blank lines ignored. The result is closed under symmetry; asymmetric input
/// is accepted with a warning.
pub fn parse_match_file(text: &str, unit: usize, alphabet: &Alphabet) -> Result<MatchTable> {
    if unit < 2 {
        return Err(Error::DistanceConfig(format!(
            "match tables need unit_distance > 1, got {unit}"
        )));
    }
    let mut table = MatchTable::empty(unit);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::MatchFile {
            line: lineno + 1,
            message,
        };
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `TUPLE = TUPLE*`, found {line:?}")))?;
        let tuple = |tok: &str| -> Result<Vec<u8>> {
            if tok.chars().count() != unit {
                return Err(err(format!("tuple {tok:?} does not have length {unit}")));
            }
            tok.chars()
                .map(|c| {
                    if alphabet.contains(c) {
                        Ok(c as u8)
                    } else {
                        Err(err(format!("symbol {c:?} in {tok:?} is not in the alphabet")))
                    }
                })
                .collect()
        };
        let mut left = lhs.split_whitespace();
        let key = match (left.next(), left.next()) {
            (Some(tok), None) => tuple(tok)?,
            _ => return Err(err(format!("left side must be exactly one tuple: {lhs:?}"))),
        };
        let set = table.entries.entry(key).or_default();
        for tok in rhs.split_whitespace() {
            set.insert(tuple(tok)?);
        }
    }
    let added = table.symmetrize();
    if !added.is_empty() {
        warn!(
            "match file is not symmetric; added {} missing reverse rule(s), e.g. {} = {}",
            added.len(),
            String::from_utf8_lossy(&added[0].0),
            String::from_utf8_lossy(&added[0].1)
        );
    }
    Ok(table)
}

/// Unit distance, edge threshold and optional match table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceConfig {
    pub unit_distance: usize,
    pub max_distance: usize,
    pub match_table: Option<Arc<MatchTable>>,
}

impl DistanceConfig {
    pub fn new(unit_distance: usize, max_distance: usize, match_table: Option<MatchTable>) -> Result<Self> {
        let cfg = Self {
            unit_distance,
            max_distance,
            match_table: match_table.map(Arc::new),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.unit_distance == 0 {
            return Err(Error::DistanceConfig("unit_distance must be at least 1".into()));
        }
        if let Some(table) = &self.match_table {
            if self.unit_distance == 1 {
                return Err(Error::DistanceConfig("a match table requires unit_distance > 1".into()));
            }
            if table.unit() != self.unit_distance {
                return Err(Error::DistanceConfig(format!(
                    "match table tuples have length {} but unit_distance is {}",
                    table.unit(),
                    self.unit_distance
                )));
            }
        }
        Ok(())
    }
}

fn sorted(g: &[u8]) -> Vec<u8> {
    let mut v = g.to_vec();
    v.sort_unstable();
    v
}

/// Group equality: same multiset of symbols, or declared equal by the table.
/// A `Replace` table drops the multiset rule.
pub fn groups_equal(g1: &[u8], g2: &[u8], table: Option<&MatchTable>) -> Result<bool> {
    if g1.len() != g2.len() {
        return Err(Error::GroupLengthMismatch {
            left: g1.len(),
            right: g2.len(),
        });
    }
    if g1 == g2 {
        return Ok(true);
    }
    Ok(match table {
        None => sorted(g1) == sorted(g2),
        Some(t) => match t.semantics() {
            MatchSemantics::Union => sorted(g1) == sorted(g2) || t.declares_equal(g1, g2),
            MatchSemantics::Replace => t.declares_equal(g1, g2),
        },
    })
}

/// Number of unequal groups over the common prefix of `s1` and `s2`.
pub fn structure_distance(s1: &Structure, s2: &Structure, cfg: &DistanceConfig) -> usize {
    let u = cfg.unit_distance;
    let table = cfg.match_table.as_deref();
    s1.as_bytes()
        .chunks_exact(u)
        .zip(s2.as_bytes().chunks_exact(u))
        .filter(|(g1, g2)| !groups_equal(g1, g2, table).expect("chunks have equal length"))
        .count()
}

pub fn within_max_distance(s1: &Structure, s2: &Structure, cfg: &DistanceConfig) -> bool {
    structure_distance(s1, s2, cfg) <= cfg.max_distance
}

/// A structure pre-split into interned group codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedStructure {
    raw: Vec<u32>,
    canonical: Vec<u32>,
}

impl EncodedStructure {
    pub fn group_count(&self) -> usize {
        self.raw.len()
    }
}

/// Interns groups so that distance evaluation in the growth loop reduces to
/// integer comparisons. Produces exactly the same distances as
/// [`structure_distance`].
#[derive(Debug, Clone)]
pub struct GroupCodec {
    cfg: DistanceConfig,
    ids: HashMap<Vec<u8>, u32>,
    declared: HashSet<(u32, u32)>,
    multiset: bool,
}

impl GroupCodec {
    pub fn new(cfg: &DistanceConfig) -> Self {
        let mut codec = Self {
            cfg: cfg.clone(),
            ids: HashMap::new(),
            declared: HashSet::new(),
            multiset: cfg
                .match_table
                .as_ref()
                .is_none_or(|t| t.semantics() == MatchSemantics::Union),
        };
        if let Some(table) = cfg.match_table.clone() {
            for (a, b) in table.pairs() {
                let ia = codec.intern(a);
                let ib = codec.intern(b);
                codec.declared.insert((ia, ib));
            }
        }
        codec
    }

    pub fn config(&self) -> &DistanceConfig {
        &self.cfg
    }

    fn intern(&mut self, g: &[u8]) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry(g.to_vec()).or_insert(next)
    }

    pub fn encode(&mut self, s: &Structure) -> EncodedStructure {
        let u = self.cfg.unit_distance;
        let groups = s.len() / u;
        let mut raw = Vec::with_capacity(groups);
        let mut canonical = Vec::with_capacity(groups);
        let mut buf = Vec::with_capacity(u);
        for g in s.as_bytes().chunks_exact(u) {
            let id = self.intern(g);
            raw.push(id);
            if !self.multiset {
                canonical.push(id);
                continue;
            }
            buf.clear();
            buf.extend_from_slice(g);
            buf.sort_unstable();
            canonical.push(self.intern(&buf));
        }
        EncodedStructure { raw, canonical }
    }

    /// Distance, except that counting stops once it exceeds `limit`.
    #[inline]
    pub fn distance_capped(&self, a: &EncodedStructure, b: &EncodedStructure, limit: usize) -> usize {
        let check_table = !self.declared.is_empty();
        let mut d = 0;
        let n = a.raw.len().min(b.raw.len());
        for i in 0..n {
            if a.canonical[i] != b.canonical[i] && !(check_table && self.declared.contains(&(a.raw[i], b.raw[i]))) {
                d += 1;
                if d > limit {
                    break;
                }
            }
        }
        d
    }

    pub fn distance(&self, a: &EncodedStructure, b: &EncodedStructure) -> usize {
        self.distance_capped(a, b, usize::MAX)
    }

    #[inline]
    pub fn within(&self, a: &EncodedStructure, b: &EncodedStructure) -> bool {
        self.distance_capped(a, b, self.cfg.max_distance) <= self.cfg.max_distance
    }
}
