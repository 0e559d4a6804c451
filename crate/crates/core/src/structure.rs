//! Structures: recursively nested sets over the ground set `{1..n}`.
//!
//! A structure is stored only in canonical form. Levels of cardinality one
//! are collapsed (`{{1,2}}` is the same structure as `{1,2}`, and a set of
//! singletons `{{1},{2}}` is the leaf `{1,2}`), children are sorted and
//! deduplicated, and all children of a node share one signature.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest signature class that [`enumerate_structures`] will expand.
pub const MAX_ENUMERATION_CLASS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("empty set in structure literal")]
    EmptySet,
    #[error("element {value} is outside the ground set 1..={n}")]
    OutOfRange { value: i64, n: u32 },
    #[error("siblings have different signatures: {left} vs {right}")]
    MixedSignature { left: Signature, right: Signature },
    #[error("cannot parse structure literal: {0}")]
    Malformed(String),
    #[error("signature class of size {0} is too large to enumerate")]
    EnumerationTooLarge(usize),
}

/// Cardinalities of a structure's nesting levels, outermost first, with
/// every entry equal to 1 stripped. A single point has signature `(1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(Vec<usize>);

impl Signature {
    pub fn new(levels: Vec<usize>) -> Self {
        let stripped: Vec<usize> = levels.into_iter().filter(|&p| p != 1).collect();
        Self::from_stripped(stripped)
    }

    fn from_stripped(stripped: Vec<usize>) -> Self {
        if stripped.is_empty() {
            Signature(vec![1])
        } else {
            Signature(stripped)
        }
    }

    pub fn levels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The signature with the point signature `(1)` mapped to the empty
    /// sequence. Signature arithmetic (prefix/suffix matching) works on
    /// this form.
    pub fn stripped(&self) -> &[usize] {
        if self.0 == [1] {
            &[]
        } else {
            &self.0
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Raw nested-set literal prior to canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Int(i64),
    Set(Vec<Literal>),
}

impl Literal {
    pub fn set<I: IntoIterator<Item = Literal>>(items: I) -> Self {
        Literal::Set(items.into_iter().collect())
    }

    pub fn ints<I: IntoIterator<Item = i64>>(items: I) -> Self {
        Literal::Set(items.into_iter().map(Literal::Int).collect())
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, StructureError> {
        match value {
            serde_json::Value::Number(num) => num
                .as_i64()
                .map(Literal::Int)
                .ok_or_else(|| StructureError::Malformed(format!("non-integer {num}"))),
            serde_json::Value::Array(items) => items
                .iter()
                .map(Literal::from_json)
                .collect::<Result<Vec<_>, _>>()
                .map(Literal::Set),
            other => Err(StructureError::Malformed(format!("unexpected {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Shape {
    Leaf(Vec<u32>),
    Node(Vec<Structure>),
}

/// A canonical structure over `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    shape: Shape,
    signature: Signature,
}

/// Borrowed view of a structure's top level.
#[derive(Debug, Clone, Copy)]
pub enum View<'a> {
    Leaf(&'a [u32]),
    Node(&'a [Structure]),
}

impl Structure {
    /// Canonicalizes a nested literal over `{1..n}`.
    pub fn new(literal: &Literal, n: u32) -> Result<Self, StructureError> {
        match literal {
            Literal::Int(v) => {
                if *v < 1 || *v > n as i64 {
                    return Err(StructureError::OutOfRange { value: *v, n });
                }
                Ok(Structure::leaf_unchecked(vec![*v as u32]))
            }
            Literal::Set(items) => {
                if items.is_empty() {
                    return Err(StructureError::EmptySet);
                }
                let children = items
                    .iter()
                    .map(|item| Structure::new(item, n))
                    .collect::<Result<Vec<_>, _>>()?;
                Structure::from_children(children)
            }
        }
    }

    /// The level-one structure `{elements}`.
    pub fn leaf<I: IntoIterator<Item = u32>>(elements: I, n: u32) -> Result<Self, StructureError> {
        let mut elems: Vec<u32> = elements.into_iter().collect();
        if elems.is_empty() {
            return Err(StructureError::EmptySet);
        }
        if let Some(&bad) = elems.iter().find(|&&e| e < 1 || e > n) {
            return Err(StructureError::OutOfRange { value: bad as i64, n });
        }
        elems.sort_unstable();
        elems.dedup();
        Ok(Structure::leaf_unchecked(elems))
    }

    fn leaf_unchecked(elems: Vec<u32>) -> Self {
        let signature = Signature::new(vec![elems.len()]);
        Structure { shape: Shape::Leaf(elems), signature }
    }

    /// Builds the canonical structure whose elements are `children`.
    pub fn from_children(mut children: Vec<Structure>) -> Result<Self, StructureError> {
        if children.is_empty() {
            return Err(StructureError::EmptySet);
        }
        children.sort();
        children.dedup();
        if children.len() == 1 {
            return Ok(children.pop().expect("one child"));
        }
        let first = children[0].signature.clone();
        if let Some(other) = children.iter().find(|c| c.signature != first) {
            return Err(StructureError::MixedSignature {
                left: first,
                right: other.signature.clone(),
            });
        }
        if first.stripped().is_empty() {
            // a set of points is a subset of the ground set
            let elems = children
                .iter()
                .map(|c| match &c.shape {
                    Shape::Leaf(e) => e[0],
                    Shape::Node(_) => unreachable!("point signature on a node"),
                })
                .collect();
            return Ok(Structure::leaf_unchecked(elems));
        }
        let mut levels = vec![children.len()];
        levels.extend_from_slice(first.stripped());
        Ok(Structure {
            shape: Shape::Node(children),
            signature: Signature::from_stripped(levels),
        })
    }

    pub fn view(&self) -> View<'_> {
        match &self.shape {
            Shape::Leaf(e) => View::Leaf(e),
            Shape::Node(c) => View::Node(c),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn level(&self) -> usize {
        self.signature.len()
    }

    pub fn is_point(&self) -> bool {
        self.signature.stripped().is_empty()
    }

    /// Elements of the structure one level down: the points of a leaf (as
    /// singleton structures) or the children of a node.
    pub fn elements(&self) -> Vec<Structure> {
        match &self.shape {
            Shape::Leaf(e) if e.len() == 1 => vec![self.clone()],
            Shape::Leaf(e) => e.iter().map(|&i| Structure::leaf_unchecked(vec![i])).collect(),
            Shape::Node(c) => c.clone(),
        }
    }

    /// Union of all leaves.
    pub fn carrier(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_carrier(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_carrier(&self, out: &mut Vec<u32>) {
        match &self.shape {
            Shape::Leaf(e) => out.extend_from_slice(e),
            Shape::Node(c) => c.iter().for_each(|s| s.collect_carrier(out)),
        }
    }

    /// Relabels every leaf element through `map` (1-based images) and
    /// re-canonicalizes.
    pub fn relabel(&self, map: &dyn Fn(u32) -> u32) -> Structure {
        match &self.shape {
            Shape::Leaf(e) => {
                let mut elems: Vec<u32> = e.iter().map(|&i| map(i)).collect();
                elems.sort_unstable();
                elems.dedup();
                Structure::leaf_unchecked(elems)
            }
            Shape::Node(c) => {
                let children = c.iter().map(|s| s.relabel(map)).collect();
                Structure::from_children(children).expect("relabeling preserves signatures")
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.shape {
            Shape::Leaf(e) => serde_json::Value::from(e.clone()),
            Shape::Node(c) => serde_json::Value::Array(c.iter().map(|s| s.to_json()).collect()),
        }
    }

    /// Parses the nested-array JSON form over `{1..n}`.
    pub fn from_json(value: &serde_json::Value, n: u32) -> Result<Self, StructureError> {
        Structure::new(&Literal::from_json(value)?, n)
    }

    /// Compact text form, identical to the JSON encoding without spaces.
    pub fn compact(&self) -> String {
        self.to_json().to_string()
    }
}

impl Ord for Structure {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| self.signature.cmp(&other.signature))
            .then_with(|| match (&self.shape, &other.shape) {
                (Shape::Leaf(a), Shape::Leaf(b)) => a.cmp(b),
                (Shape::Node(a), Shape::Node(b)) => a.cmp(b),
                // equal signatures imply equal shape kinds
                (Shape::Leaf(_), Shape::Node(_)) => Ordering::Less,
                (Shape::Node(_), Shape::Leaf(_)) => Ordering::Greater,
            })
    }
}

impl PartialOrd for Structure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Leaf(e) => {
                let parts: Vec<String> = e.iter().map(|i| i.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Shape::Node(c) => {
                write!(f, "{{")?;
                for (i, s) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl Serialize for Structure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Structure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        Structure::from_json(&value, u32::MAX).map_err(D::Error::custom)
    }
}

/// All canonical structures over `{1..n}` of level at most `max_level`, in
/// the canonical order.
pub fn enumerate_structures(n: u32, max_level: usize) -> Result<Vec<Structure>, StructureError> {
    let mut all = Vec::new();
    if n == 0 || max_level == 0 {
        return Ok(all);
    }
    let mut current: Vec<Structure> = (1u32..(1 << n))
        .map(|mask| {
            let elems = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            Structure::leaf_unchecked(elems)
        })
        .collect();
    current.sort();
    for _ in 1..max_level {
        let mut classes: BTreeMap<Signature, Vec<Structure>> = BTreeMap::new();
        for s in current.iter().filter(|s| !s.is_point()) {
            classes.entry(s.signature.clone()).or_default().push(s.clone());
        }
        let mut next = Vec::new();
        for members in classes.values() {
            if members.len() > MAX_ENUMERATION_CLASS {
                return Err(StructureError::EnumerationTooLarge(members.len()));
            }
            for mask in 1u64..(1 << members.len()) {
                if mask.count_ones() < 2 {
                    continue;
                }
                let children = members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, s)| s.clone())
                    .collect();
                next.push(Structure::from_children(children)?);
            }
        }
        all.append(&mut current);
        next.sort();
        current = next;
    }
    all.append(&mut current);
    all.sort();
    Ok(all)
}
