//! Index sets of the natural stratification: shape labels on the triple- and
//! doublet-type structures, and coincidence subsets per signature class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::enrichment::Enrichment;
use crate::structure::{Signature, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("{0} is not contained in the larger enrichment")]
    NotASubEnrichment(String),
    #[error("configuration does not belong to the given enrichment")]
    ForeignConfig,
    #[error("malformed configuration near `{0}`")]
    Malformed(String),
}

/// Shape of the subscheme attached to a structure of type `(3,2,…,2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TripleShape {
    Three,
    Two,
    Curvilinear,
    Fat,
}

impl TripleShape {
    pub const ALL: [TripleShape; 4] = [TripleShape::Three, TripleShape::Two, TripleShape::Curvilinear, TripleShape::Fat];

    pub fn label(self) -> &'static str {
        match self {
            TripleShape::Three => "3",
            TripleShape::Two => "2",
            TripleShape::Curvilinear => "c",
            TripleShape::Fat => "g",
        }
    }
}

/// Shape of the subscheme attached to a structure of type `(2,…,2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairShape {
    Two,
    One,
}

impl PairShape {
    pub const ALL: [PairShape; 2] = [PairShape::Two, PairShape::One];

    pub fn label(self) -> &'static str {
        match self {
            PairShape::Two => "2",
            PairShape::One => "1",
        }
    }
}

/// One element of `Conf(η)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumConfig {
    pub f: BTreeMap<Structure, TripleShape>,
    pub g: BTreeMap<Structure, PairShape>,
    /// Coincidence subset for every occupied signature class; empty or of
    /// size at least two.
    pub p: BTreeMap<Signature, BTreeSet<Structure>>,
}

impl StratumConfig {
    pub fn to_json(&self) -> serde_json::Value {
        let f: serde_json::Map<String, serde_json::Value> =
            self.f.iter().map(|(s, v)| (s.compact(), v.label().into())).collect();
        let g: serde_json::Map<String, serde_json::Value> =
            self.g.iter().map(|(s, v)| (s.compact(), v.label().into())).collect();
        let p: serde_json::Map<String, serde_json::Value> = self
            .p
            .iter()
            .map(|(sig, set)| (sig.to_string(), set.iter().map(Structure::to_json).collect()))
            .collect();
        serde_json::json!({ "f": f, "g": g, "P": p })
    }

    /// Parses the form written by [`StratumConfig::to_json`] as a
    /// configuration of `eta`.
    pub fn from_json(value: &serde_json::Value, eta: &Enrichment) -> Result<Self, StrataError> {
        let bad = |what: &str| StrataError::Malformed(what.into());
        let structure = |key: &str| -> Result<Structure, StrataError> {
            let v: serde_json::Value = serde_json::from_str(key).map_err(|_| bad(key))?;
            Structure::from_json(&v, eta.n()).map_err(|_| bad(key))
        };
        let object = |name: &str| value.get(name).and_then(|v| v.as_object()).ok_or_else(|| bad(name));
        let mut f = BTreeMap::new();
        for (k, v) in object("f")? {
            let label = v.as_str().ok_or_else(|| bad(k))?;
            let shape = TripleShape::ALL.into_iter().find(|s| s.label() == label).ok_or_else(|| bad(label))?;
            f.insert(structure(k)?, shape);
        }
        let mut g = BTreeMap::new();
        for (k, v) in object("g")? {
            let label = v.as_str().ok_or_else(|| bad(k))?;
            let shape = PairShape::ALL.into_iter().find(|s| s.label() == label).ok_or_else(|| bad(label))?;
            g.insert(structure(k)?, shape);
        }
        let classes = signature_classes(eta);
        let mut p = BTreeMap::new();
        for (k, v) in object("P")? {
            let sig = classes.keys().find(|s| s.to_string() == *k).ok_or_else(|| bad(k))?;
            let items = v.as_array().ok_or_else(|| bad(k))?;
            let set = items
                .iter()
                .map(|s| Structure::from_json(s, eta.n()).map_err(|_| bad(k)))
                .collect::<Result<BTreeSet<_>, _>>()?;
            p.insert(sig.clone(), set);
        }
        let config = StratumConfig { f, g, p };
        if !belongs(eta, &config) {
            return Err(StrataError::ForeignConfig);
        }
        Ok(config)
    }
}

impl Serialize for StratumConfig {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl fmt::Display for StratumConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fs: Vec<String> = self.f.iter().map(|(s, v)| format!("{s}:{}", v.label())).collect();
        let gs: Vec<String> = self.g.iter().map(|(s, v)| format!("{s}:{}", v.label())).collect();
        let ps: Vec<String> = self
            .p
            .iter()
            .filter(|(_, set)| !set.is_empty())
            .map(|(sig, set)| format!("{sig}={}", set.iter().join("=")))
            .collect();
        write!(f, "f[{}] g[{}] P[{}]", fs.join(" "), gs.join(" "), ps.join(" "))
    }
}

fn is_triple_type(s: &Structure) -> bool {
    match s.signature().stripped() {
        [3, rest @ ..] => rest.iter().all(|&p| p == 2),
        _ => false,
    }
}

fn is_pair_type(s: &Structure) -> bool {
    let sig = s.signature().stripped();
    !sig.is_empty() && sig.iter().all(|&p| p == 2)
}

/// `E_3(η)`: members of signature `(3,2,…,2)`.
pub fn e3(eta: &Enrichment) -> Vec<Structure> {
    eta.as_set().into_iter().filter(is_triple_type).collect()
}

/// `E_2(η)`: members of signature `(2,…,2)`.
pub fn e2(eta: &Enrichment) -> Vec<Structure> {
    eta.as_set().into_iter().filter(is_pair_type).collect()
}

/// Members of `η` grouped by signature.
pub fn signature_classes(eta: &Enrichment) -> BTreeMap<Signature, Vec<Structure>> {
    let mut classes: BTreeMap<Signature, Vec<Structure>> = BTreeMap::new();
    for s in eta.as_set() {
        classes.entry(s.signature().clone()).or_default().push(s);
    }
    classes
}

fn canonical_subset(mut set: BTreeSet<Structure>) -> BTreeSet<Structure> {
    if set.len() < 2 {
        set.clear();
    }
    set
}

fn canonical_subsets(class: &[Structure]) -> Vec<BTreeSet<Structure>> {
    let mut out = vec![BTreeSet::new()];
    for k in 2..=class.len() {
        out.extend(class.iter().cloned().combinations(k).map(|c| c.into_iter().collect()));
    }
    out
}

/// `Conf(η)` in a fixed order.
pub fn conf_space(eta: &Enrichment) -> Vec<StratumConfig> {
    let triples = e3(eta);
    let pairs = e2(eta);
    let classes = signature_classes(eta);
    let f_choices: Vec<Vec<TripleShape>> = triples.iter().map(|_| TripleShape::ALL.to_vec()).collect();
    let g_choices: Vec<Vec<PairShape>> = pairs.iter().map(|_| PairShape::ALL.to_vec()).collect();
    let p_choices: Vec<Vec<BTreeSet<Structure>>> = classes.values().map(|c| canonical_subsets(c)).collect();
    let mut out = Vec::new();
    for fs in product(&f_choices) {
        for gs in product(&g_choices) {
            for ps in product(&p_choices) {
                out.push(StratumConfig {
                    f: triples.iter().cloned().zip(fs.iter().copied()).collect(),
                    g: pairs.iter().cloned().zip(gs.iter().copied()).collect(),
                    p: classes.keys().cloned().zip(ps.iter().cloned()).collect(),
                });
            }
        }
    }
    out
}

fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    if choices.is_empty() {
        return vec![Vec::new()];
    }
    choices.iter().map(|c| c.iter().cloned()).multi_cartesian_product().collect()
}

/// [`conf_space`] with configurations dropped when the full structure is
/// labelled as three distinct points while two points coincide.
pub fn conf_space_filtered(eta: &Enrichment) -> Vec<StratumConfig> {
    conf_space(eta).into_iter().filter(|c| is_consistent(eta, c)).collect()
}

pub fn is_consistent(eta: &Enrichment, config: &StratumConfig) -> bool {
    let full = crate::enrichment::full_structure(eta.n());
    if config.f.get(&full) != Some(&TripleShape::Three) {
        return true;
    }
    config.p.iter().all(|(sig, set)| !sig.stripped().is_empty() || set.is_empty())
}

fn belongs(eta: &Enrichment, config: &StratumConfig) -> bool {
    let classes = signature_classes(eta);
    config.f.keys().cloned().collect::<Vec<_>>() == e3(eta)
        && config.g.keys().cloned().collect::<Vec<_>>() == e2(eta)
        && config.p.keys().eq(classes.keys())
        && config.p.iter().all(|(sig, set)| set.iter().all(|s| classes[sig].contains(s)))
}

/// The restriction map `Conf(big) → Conf(small)` for a sub-enrichment
/// `small ⊆ big`.
#[derive(Debug, Clone)]
pub struct Restriction {
    big_triples: Vec<Structure>,
    big_pairs: Vec<Structure>,
    big_classes: BTreeMap<Signature, Vec<Structure>>,
    keep: BTreeSet<Structure>,
    small_signatures: Vec<Signature>,
}

impl Restriction {
    pub fn new(big: &Enrichment, small: &Enrichment) -> Result<Self, StrataError> {
        if !small.structures().iter().all(|s| big.contains(s)) {
            return Err(StrataError::NotASubEnrichment(small.to_string()));
        }
        Ok(Restriction {
            big_triples: e3(big),
            big_pairs: e2(big),
            big_classes: signature_classes(big),
            keep: small.as_set(),
            small_signatures: signature_classes(small).into_keys().collect(),
        })
    }

    fn accepts(&self, config: &StratumConfig) -> bool {
        config.f.keys().eq(self.big_triples.iter())
            && config.g.keys().eq(self.big_pairs.iter())
            && config.p.keys().eq(self.big_classes.keys())
            && config.p.iter().all(|(sig, set)| set.iter().all(|s| self.big_classes[sig].contains(s)))
    }

    pub fn apply(&self, config: &StratumConfig) -> Result<StratumConfig, StrataError> {
        if !self.accepts(config) {
            return Err(StrataError::ForeignConfig);
        }
        let keep = &self.keep;
        Ok(StratumConfig {
            f: config.f.iter().filter(|(s, _)| keep.contains(*s)).map(|(s, v)| (s.clone(), *v)).collect(),
            g: config.g.iter().filter(|(s, _)| keep.contains(*s)).map(|(s, v)| (s.clone(), *v)).collect(),
            p: self
                .small_signatures
                .iter()
                .map(|sig| {
                    let set = config.p[sig].iter().filter(|s| keep.contains(*s)).cloned().collect();
                    (sig.clone(), canonical_subset(set))
                })
                .collect(),
        })
    }
}

/// The image of `config` (a configuration of `big`) in `Conf(small)`.
pub fn restrict_config(
    config: &StratumConfig,
    big: &Enrichment,
    small: &Enrichment,
) -> Result<StratumConfig, StrataError> {
    Restriction::new(big, small)?.apply(config)
}

/// All configurations of `big` restricting to `config`.
pub fn preimage_strata(
    config: &StratumConfig,
    small: &Enrichment,
    big: &Enrichment,
) -> Result<Vec<StratumConfig>, StrataError> {
    if !belongs(small, config) {
        return Err(StrataError::ForeignConfig);
    }
    if !small.structures().iter().all(|s| big.contains(s)) {
        return Err(StrataError::NotASubEnrichment(small.to_string()));
    }
    let triples = e3(big);
    let pairs = e2(big);
    let classes = signature_classes(big);
    let f_choices: Vec<Vec<TripleShape>> = triples
        .iter()
        .map(|s| config.f.get(s).map_or(TripleShape::ALL.to_vec(), |v| vec![*v]))
        .collect();
    let g_choices: Vec<Vec<PairShape>> = pairs
        .iter()
        .map(|s| config.g.get(s).map_or(PairShape::ALL.to_vec(), |v| vec![*v]))
        .collect();
    let keep = small.as_set();
    let p_choices: Vec<Vec<BTreeSet<Structure>>> = classes
        .iter()
        .map(|(sig, class)| {
            canonical_subsets(class)
                .into_iter()
                .filter(|set| match config.p.get(sig) {
                    Some(target) => &canonical_subset(set.iter().filter(|s| keep.contains(*s)).cloned().collect()) == target,
                    None => true,
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for fs in product(&f_choices) {
        for gs in product(&g_choices) {
            for ps in product(&p_choices) {
                out.push(StratumConfig {
                    f: triples.iter().cloned().zip(fs.iter().copied()).collect(),
                    g: pairs.iter().cloned().zip(gs.iter().copied()).collect(),
                    p: classes.keys().cloned().zip(ps.iter().cloned()).collect(),
                });
            }
        }
    }
    Ok(out)
}

/// The open stratum: three distinct points everywhere, no coincidences.
pub fn general_stratum(eta: &Enrichment) -> StratumConfig {
    StratumConfig {
        f: e3(eta).into_iter().map(|s| (s, TripleShape::Three)).collect(),
        g: e2(eta).into_iter().map(|s| (s, PairShape::Two)).collect(),
        p: signature_classes(eta).into_keys().map(|sig| (sig, BTreeSet::new())).collect(),
    }
}

/// The closed stratum: a fat point, all pairs punctual, all coincidences.
pub fn special_stratum(eta: &Enrichment) -> StratumConfig {
    StratumConfig {
        f: e3(eta).into_iter().map(|s| (s, TripleShape::Fat)).collect(),
        g: e2(eta).into_iter().map(|s| (s, PairShape::One)).collect(),
        p: signature_classes(eta)
            .into_iter()
            .map(|(sig, class)| (sig, canonical_subset(class.into_iter().collect())))
            .collect(),
    }
}

/// DOT graph of the restriction map from `Conf(big)` to `Conf(small)`.
pub fn restriction_dot(small: &Enrichment, big: &Enrichment) -> Result<String, StrataError> {
    let lower = conf_space(small);
    let index: BTreeMap<&StratumConfig, usize> = lower.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut out = String::from("digraph strata {\n  rankdir=LR;\n");
    for (i, c) in lower.iter().enumerate() {
        out.push_str(&format!("  s{i} [label=\"{c}\"];\n"));
    }
    let restriction = Restriction::new(big, small)?;
    for (j, c) in conf_space(big).iter().enumerate() {
        let image = restriction.apply(c)?;
        out.push_str(&format!("  b{j} [label=\"{c}\"];\n  b{j} -> s{};\n", index[&image]));
    }
    out.push_str("}\n");
    Ok(out)
}
