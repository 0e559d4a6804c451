//! Enrichments (sequences of structures containing the full structure)
//! and the index/exponent notation `R^{a,..}_{b,..}` used to name them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::structure::{Structure, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnrichmentError {
    #[error("enrichment does not contain the full structure {{1..{0}}}")]
    MissingFullStructure(u32),
    #[error("structure {0} appears twice")]
    DuplicateStructure(String),
    #[error("ground set size must be at least 1")]
    EmptyGroundSet,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("bad enrichment notation `{input}`: {reason}")]
    Notation { input: String, reason: String },
    #[error("bad enrichment JSON: {0}")]
    Json(String),
}

/// A sequence of distinct structures over `{1..n}` containing `{1..n}`.
///
/// The order of the sequence is kept; [`Enrichment::set_equal`] compares
/// the underlying sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Enrichment {
    n: u32,
    structures: Vec<Structure>,
}

impl Enrichment {
    pub fn new(structures: Vec<Structure>, n: u32) -> Result<Self, EnrichmentError> {
        if n == 0 {
            return Err(EnrichmentError::EmptyGroundSet);
        }
        let full = full_structure(n);
        let mut seen = BTreeSet::new();
        for s in &structures {
            if let Some(&bad) = s.carrier().iter().find(|&&e| e > n) {
                return Err(StructureError::OutOfRange { value: bad as i64, n }.into());
            }
            if !seen.insert(s.clone()) {
                return Err(EnrichmentError::DuplicateStructure(s.compact()));
            }
        }
        if !seen.contains(&full) {
            return Err(EnrichmentError::MissingFullStructure(n));
        }
        Ok(Enrichment { n, structures })
    }

    /// Builds an enrichment from a set, listed in canonical order.
    pub fn from_set<I: IntoIterator<Item = Structure>>(set: I, n: u32) -> Result<Self, EnrichmentError> {
        let sorted: BTreeSet<Structure> = set.into_iter().collect();
        Enrichment::new(sorted.into_iter().collect(), n)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn structures(&self) -> &[Structure] {
        &self.structures
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    pub fn contains(&self, s: &Structure) -> bool {
        self.structures.contains(s)
    }

    pub fn level(&self) -> usize {
        self.structures.iter().map(Structure::level).max().unwrap_or(0)
    }

    pub fn as_set(&self) -> BTreeSet<Structure> {
        self.structures.iter().cloned().collect()
    }

    pub fn set_equal(&self, other: &Enrichment) -> bool {
        self.n == other.n && self.as_set() == other.as_set()
    }

    pub fn is_subset(&self, other: &Enrichment) -> bool {
        self.n == other.n && self.structures.iter().all(|s| other.contains(s))
    }

    /// The same set in canonical order.
    pub fn sorted(&self) -> Enrichment {
        Enrichment { n: self.n, structures: self.as_set().into_iter().collect() }
    }

    /// Appends a structure, returning `false` if it was already present.
    pub fn push(&mut self, s: Structure) -> bool {
        if self.contains(&s) {
            return false;
        }
        self.structures.push(s);
        true
    }

    pub fn with(&self, s: Structure) -> Enrichment {
        let mut out = self.clone();
        out.push(s);
        out
    }

    /// Structures of level at most `level`.
    pub fn truncate_level(&self, level: usize) -> Enrichment {
        Enrichment {
            n: self.n,
            structures: self.structures.iter().filter(|s| s.level() <= level).cloned().collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "structures": self.structures.iter().map(Structure::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, EnrichmentError> {
        let n = value
            .get("n")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| EnrichmentError::Json("missing integer field `n`".into()))?;
        let n = u32::try_from(n).map_err(|_| EnrichmentError::Json("`n` too large".into()))?;
        let items = value
            .get("structures")
            .and_then(|v| v.as_array())
            .ok_or_else(|| EnrichmentError::Json("missing array field `structures`".into()))?;
        let structures = items
            .iter()
            .map(|v| Structure::from_json(v, n))
            .collect::<Result<Vec<_>, _>>()?;
        Enrichment::new(structures, n)
    }

    /// Canonical byte encoding of the underlying set.
    pub fn canonical_encoding(&self) -> String {
        self.sorted().to_json().to_string()
    }

    /// The `R^.._..` notation, when every member is expressible in it.
    pub fn notation(&self) -> Option<String> {
        render_notation(self)
    }

    /// The name of the model enrichment this set equals, if any.
    pub fn model_name(&self) -> Option<ModelName> {
        crate::classify::models(self.n)
            .into_iter()
            .find(|m| m.enrichment.set_equal(self))
            .map(|m| m.name)
    }
}

impl fmt::Display for Enrichment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.notation() {
            Some(name) => write!(f, "{name}"),
            None => write!(f, "{}", self.to_json()),
        }
    }
}

impl Serialize for Enrichment {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Enrichment {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        Enrichment::from_json(&value).map_err(serde::de::Error::custom)
    }
}

/// `{1..n}` as a level-one structure.
pub fn full_structure(n: u32) -> Structure {
    Structure::leaf(1..=n, n).expect("n >= 1")
}

/// Named structures of the three-point notation: `σ_b` for a subset `b`
/// written as digits, `σ^k` for the doublets through `k`, `σ^{123}` for
/// all three doublets.
pub fn sub(digits: &str, n: u32) -> Result<Structure, EnrichmentError> {
    let elems = parse_digits(digits, n)?;
    Ok(Structure::leaf(elems, n)?)
}

pub fn sup(digits: &str, n: u32) -> Result<Structure, EnrichmentError> {
    let bad = |reason: &str| EnrichmentError::Notation { input: digits.into(), reason: reason.into() };
    if n != 3 {
        return Err(bad("superscripts are defined for n = 3 only"));
    }
    let elems = parse_digits(digits, n)?;
    let doublets: Vec<Structure> = match elems.as_slice() {
        [k] => (1..=3u32)
            .filter(|j| j != k)
            .map(|j| Structure::leaf([*k, j], 3).expect("valid doublet"))
            .collect(),
        [1, 2, 3] => [[1, 2], [1, 3], [2, 3]]
            .iter()
            .map(|d| Structure::leaf(*d, 3).expect("valid doublet"))
            .collect(),
        _ => return Err(bad("superscript must be a single index or 123")),
    };
    Ok(Structure::from_children(doublets)?)
}

fn parse_digits(digits: &str, n: u32) -> Result<Vec<u32>, EnrichmentError> {
    let bad = |reason: &str| EnrichmentError::Notation { input: digits.into(), reason: reason.into() };
    if digits.is_empty() {
        return Err(bad("empty index"));
    }
    let mut out = Vec::new();
    for ch in digits.chars() {
        let d = ch.to_digit(10).ok_or_else(|| bad("indices are digit strings"))?;
        if d == 0 || d > n {
            return Err(bad("index out of range"));
        }
        out.push(d);
    }
    Ok(out)
}

/// The display name of a model enrichment, e.g. `R^{3,123}_{3,12,123}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModelName(pub String);

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl ModelName {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Parses `R^{a,..}_{b,..}`, `R^1_123`, `R_max`, `max`, or the same with
/// an `eta` prefix.
pub fn parse_notation(input: &str, n: u32) -> Result<Enrichment, EnrichmentError> {
    let err = |reason: &str| EnrichmentError::Notation { input: input.into(), reason: reason.into() };
    let mut rest = input.trim();
    for prefix in ["R", "eta", "η"] {
        if let Some(r) = rest.strip_prefix(prefix) {
            rest = r;
            break;
        }
    }
    let trimmed = rest.trim_start_matches('_');
    if trimmed == "max" {
        if n != 3 {
            return Err(err("max is defined for n = 3 only"));
        }
        let all = crate::structure::enumerate_structures(3, 2)?;
        return Enrichment::from_set(all, 3);
    }
    let mut set = BTreeSet::new();
    while !rest.is_empty() {
        let (marker, tail) = rest.split_at(1);
        let (list, tail) = if let Some(body) = tail.strip_prefix('{') {
            let end = body.find('}').ok_or_else(|| err("unclosed brace"))?;
            (&body[..end], &body[end + 1..])
        } else {
            let end = tail.find(['^', '_']).unwrap_or(tail.len());
            (&tail[..end], &tail[end..])
        };
        for token in list.split(',').map(str::trim) {
            let s = match marker {
                "_" => sub(token, n)?,
                "^" => sup(token, n)?,
                _ => return Err(err("expected `^` or `_`")),
            };
            set.insert(s);
        }
        rest = tail;
    }
    if set.is_empty() {
        return Err(err("no structures"));
    }
    Enrichment::from_set(set, n)
}

fn render_notation(eta: &Enrichment) -> Option<String> {
    let n = eta.n();
    if n == 3 {
        let all = crate::structure::enumerate_structures(3, 2).ok()?;
        if eta.as_set() == all.iter().cloned().collect::<BTreeSet<_>>() {
            return Some("R_max".into());
        }
    }
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for s in eta.as_set() {
        match s.level() {
            1 => downs.push(s.carrier().iter().map(|d| d.to_string()).collect::<String>()),
            2 if n == 3 => {
                let token = ["1", "2", "3", "123"]
                    .into_iter()
                    .find(|t| sup(t, 3).ok().as_ref() == Some(&s))?;
                ups.push(token.to_string());
            }
            _ => return None,
        }
    }
    if n > 9 {
        return None;
    }
    let group = |items: &[String]| {
        if items.len() == 1 {
            items[0].clone()
        } else {
            format!("{{{}}}", items.join(","))
        }
    };
    let mut out = String::from("R");
    if !ups.is_empty() {
        out.push('^');
        out.push_str(&group(&ups));
    }
    out.push('_');
    out.push_str(&group(&downs));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn requires_full_structure() {
        let only12 = vec![sub("12", 3).unwrap()];
        assert_eq!(Enrichment::new(only12, 3), Err(EnrichmentError::MissingFullStructure(3)));
        let eta = Enrichment::new(vec![sub("123", 3).unwrap()], 3).unwrap();
        assert_eq!(eta.level(), 1);
        assert_eq!(eta.notation().as_deref(), Some("R_123"));
    }

    #[test]
    fn order_is_kept_but_sets_compare() {
        let a = Enrichment::new(vec![sub("1", 3).unwrap(), sub("123", 3).unwrap()], 3).unwrap();
        let b = Enrichment::new(vec![sub("123", 3).unwrap(), sub("1", 3).unwrap()], 3).unwrap();
        assert_ne!(a, b);
        assert!(a.set_equal(&b));
    }

    #[test]
    fn notation_round_trip() {
        for name in ["R^1_123", "R^{3,123}_{3,12,123}", "R_{1,2,3,12,123}", "R^123_{1,123}", "R_max"] {
            let eta = parse_notation(name, 3).unwrap();
            assert_eq!(eta.notation().as_deref(), Some(name), "{name}");
        }
        let max = parse_notation("max", 3).unwrap();
        assert_eq!(max.len(), 11);
        assert_eq!(max.level(), 2);
    }

    #[test]
    fn model_name_of_double_doublet() {
        let eta = Enrichment::from_set([sup("1", 3).unwrap(), sub("123", 3).unwrap()], 3).unwrap();
        assert_eq!(eta.model_name().map(|m| m.0), Some("R^1_123".into()));
        let non_model = parse_notation("R_{1,2,123}", 3).unwrap();
        assert_eq!(non_model.model_name(), None);
    }

    #[test]
    fn json_round_trip() {
        let eta = parse_notation("R^{3,123}_{1,2,3,12,123}", 3).unwrap();
        let back = Enrichment::from_json(&eta.to_json()).unwrap();
        assert_eq!(back, eta);
    }
}
