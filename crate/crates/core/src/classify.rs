//! Identifiability rules, saturation, non-admissibility detectors and the
//! classification of enrichments of `{1,2,3}` (and `{1,2}`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::enrichment::{full_structure, parse_notation, sub, sup, Enrichment, EnrichmentError, ModelName};
use crate::incidence::incidence;
use crate::structure::{enumerate_structures, Structure};
use crate::symmetry::{
    acting_group, invariant_substructures, stabilizer_g, Act, GroupDescriptor, Permutation, SymmetryError,
};

/// Highest input level accepted by [`saturate`] and [`classify`].
pub const DEFAULT_LEVEL_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("no model and no detector matched {0}")]
    ClassificationIncomplete(String),
    #[error("enrichment level {level} exceeds the cap {cap}")]
    LevelCapExceeded { level: usize, cap: usize },
    #[error("classification is implemented for n = 2 and n = 3, not n = {0}")]
    UnsupportedGroundSet(u32),
    #[error("verification mismatch: {0}")]
    VerificationMismatch(String),
    #[error(transparent)]
    Enrichment(#[from] EnrichmentError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RuleTag {
    Residual,
    PairToDouble,
    DoubleFromTriple,
    TripleFromDouble,
    Level3Triple,
    Level3Residual,
}

/// One rule instance: `added` may be joined to any enrichment containing
/// `witnesses`. `conjugator` maps the rule's reference indices onto the
/// actual ones for the index-specific rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleApplication {
    pub rule: RuleTag,
    pub added: Structure,
    pub witnesses: Vec<Structure>,
    pub conjugator: Option<Permutation>,
}

impl fmt::Display for RuleApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witnesses.iter().map(|s| s.to_string()).collect();
        write!(f, "{:?}: +{} from {}", self.rule, self.added, w.join(", "))
    }
}

fn doublet(i: u32, j: u32) -> Structure {
    Structure::leaf([i, j], 3).expect("valid doublet")
}

fn double_doublet(k: u32) -> Structure {
    sup(&k.to_string(), 3).expect("valid double doublet")
}

fn triple_doublet() -> Structure {
    sup("123", 3).expect("valid triple doublet")
}

/// Structures of signature `(2,…,2)` with `level` entries over `{1,2,3}`.
fn twos(level: usize) -> Vec<Structure> {
    let mut current: Vec<Structure> = vec![doublet(1, 2), doublet(1, 3), doublet(2, 3)];
    for _ in 1..level {
        current = current
            .iter()
            .tuple_combinations()
            .map(|(a, b)| Structure::from_children(vec![a.clone(), b.clone()]).expect("same signature"))
            .collect();
    }
    current
}

/// The unique structure of signature `(3,2,…,2)` with `level` entries.
pub fn s_level(level: usize) -> Structure {
    if level <= 1 {
        return full_structure(3);
    }
    Structure::from_children(twos(level - 1)).expect("same signature")
}

fn third(i: u32, j: u32) -> u32 {
    6 - i - j
}

fn conj(i: u32, j: u32, k: u32) -> Permutation {
    Permutation::new(vec![i, j, k]).expect("distinct indices")
}

fn residuals(eta: &Enrichment, out: &mut Vec<RuleApplication>) {
    for big in eta.structures() {
        let elems = big.elements();
        if elems.len() < 2 {
            continue;
        }
        for (idx, c) in elems.iter().enumerate() {
            if eta.contains(c) {
                continue;
            }
            let rest: Vec<Structure> = elems
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != idx)
                .map(|(_, s)| s.clone())
                .collect();
            let small = Structure::from_children(rest).expect("children of one node");
            if eta.contains(&small) {
                out.push(RuleApplication {
                    rule: RuleTag::Residual,
                    added: c.clone(),
                    witnesses: vec![big.clone(), small],
                    conjugator: None,
                });
            }
        }
    }
}

fn doublet_rules(eta: &Enrichment, out: &mut Vec<RuleApplication>) {
    let triple = triple_doublet();
    for (i, j, k) in [(1, 2, 3), (2, 1, 3), (3, 1, 2)] {
        let (a, b) = (doublet(i.min(j), i.max(j)), doublet(i.min(k), i.max(k)));
        let target = double_doublet(i);
        if eta.contains(&a) && eta.contains(&b) && !eta.contains(&target) {
            out.push(RuleApplication {
                rule: RuleTag::PairToDouble,
                added: target,
                witnesses: vec![a, b],
                conjugator: Some(conj(i, j, k)),
            });
        }
    }
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let d = doublet(i, j);
        if !eta.contains(&d) {
            continue;
        }
        let k = third(i, j);
        let dk = double_doublet(k);
        if eta.contains(&triple) && !eta.contains(&dk) {
            out.push(RuleApplication {
                rule: RuleTag::DoubleFromTriple,
                added: dk.clone(),
                witnesses: vec![d.clone(), triple.clone()],
                conjugator: Some(conj(i, j, k)),
            });
        }
        if eta.contains(&dk) && !eta.contains(&triple) {
            out.push(RuleApplication {
                rule: RuleTag::TripleFromDouble,
                added: triple.clone(),
                witnesses: vec![d.clone(), dk],
                conjugator: Some(conj(i, j, k)),
            });
        }
    }
}

fn level_three_rules(eta: &Enrichment, cap: usize, out: &mut Vec<RuleApplication>) {
    let top = eta.level();
    if let Some(l0) = (2..=top).rev().find(|&l| eta.contains(&s_level(l))) {
        let next = s_level(l0 + 1);
        if l0 < cap && !eta.contains(&next) {
            out.push(RuleApplication {
                rule: RuleTag::Level3Triple,
                added: next,
                witnesses: vec![s_level(l0)],
                conjugator: None,
            });
        }
    }
    for l in 3..=top {
        let e = s_level(l);
        if !eta.contains(&e) {
            continue;
        }
        let elems = e.elements();
        for g in elems.iter().filter(|g| eta.contains(g)) {
            let rest: Vec<Structure> = elems.iter().filter(|x| *x != g).cloned().collect();
            let f = Structure::from_children(rest).expect("children of one node");
            if !eta.contains(&f) {
                out.push(RuleApplication {
                    rule: RuleTag::Level3Residual,
                    added: f,
                    witnesses: vec![e.clone(), g.clone()],
                    conjugator: None,
                });
            }
        }
    }
}

fn effective_cap(eta: &Enrichment) -> usize {
    eta.level().max(2)
}

/// Every single-rule addition available to `η`, without repeats of
/// structures already present.
pub fn extensions(eta: &Enrichment) -> Vec<RuleApplication> {
    extensions_capped(eta, effective_cap(eta))
}

fn extensions_capped(eta: &Enrichment, cap: usize) -> Vec<RuleApplication> {
    let mut out = Vec::new();
    residuals(eta, &mut out);
    if eta.n() == 3 {
        doublet_rules(eta, &mut out);
        level_three_rules(eta, cap, &mut out);
    }
    let mut seen = BTreeSet::new();
    out.retain(|a| seen.insert((a.rule, a.added.clone(), a.witnesses.clone())));
    out
}

/// Result of [`saturate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Saturation {
    pub closure: Enrichment,
    pub trace: Vec<RuleApplication>,
}

fn check_level(eta: &Enrichment, cap: usize) -> Result<(), ClassifyError> {
    let level = eta.level();
    if level > cap {
        return Err(ClassifyError::LevelCapExceeded { level, cap });
    }
    Ok(())
}

/// Least fixpoint of [`extensions`], applying the first available rule at
/// each step. The level of the result never exceeds `max(2, level(η))`.
pub fn saturate(eta: &Enrichment) -> Result<Saturation, ClassifyError> {
    saturate_by(eta, DEFAULT_LEVEL_CAP, |_| 0)
}

/// Saturation with an explicit bound on the input level.
pub fn saturate_capped(eta: &Enrichment, level_cap: usize) -> Result<Saturation, ClassifyError> {
    saturate_by(eta, level_cap, |_| 0)
}

/// Saturation choosing uniformly among the available rules at each step.
pub fn saturate_random<R: Rng>(eta: &Enrichment, rng: &mut R) -> Result<Saturation, ClassifyError> {
    saturate_by(eta, DEFAULT_LEVEL_CAP, |options| {
        let idx: Vec<usize> = (0..options).collect();
        *idx.choose(rng).expect("nonempty")
    })
}

fn saturate_by(
    eta: &Enrichment,
    level_cap: usize,
    mut pick: impl FnMut(usize) -> usize,
) -> Result<Saturation, ClassifyError> {
    check_level(eta, level_cap)?;
    let cap = effective_cap(eta);
    let mut current = eta.clone();
    let mut trace = Vec::new();
    loop {
        let options = extensions_capped(&current, cap);
        if options.is_empty() {
            break;
        }
        let step = options[pick(options.len())].clone();
        current.push(step.added.clone());
        trace.push(step);
    }
    Ok(Saturation { closure: current, trace })
}

/// Non-admissibility patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DetectorTag {
    ExactList,
    UniqueDoubleDoubleWithPoint,
    TwoDoubleDoublesNoDoublet,
    LevelThreeSmallBase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetectorHit {
    pub tag: DetectorTag,
    pub witness: String,
}

const EXACT_LISTS: [&str; 4] = ["R_{1,2,123}", "R_{1,2,3,123}", "R^123_{1,2,123}", "R^123_{1,2,3,123}"];

fn exact_lists() -> &'static [(String, BTreeSet<String>)] {
    static LISTS: OnceLock<Vec<(String, BTreeSet<String>)>> = OnceLock::new();
    LISTS.get_or_init(|| {
        EXACT_LISTS
            .iter()
            .map(|name| {
                let eta = parse_notation(name, 3).expect("valid list");
                let encodings = Permutation::all(3)
                    .iter()
                    .map(|g| eta.act(g).canonical_encoding())
                    .collect();
                (name.to_string(), encodings)
            })
            .collect()
    })
}

fn small_base_conjugates() -> &'static [BTreeSet<Structure>] {
    static SMALL: OnceLock<Vec<BTreeSet<Structure>>> = OnceLock::new();
    SMALL.get_or_init(|| {
        let base = parse_notation("R^1_{1,2,3,12,13,123}", 3).expect("valid base");
        Permutation::all(3).iter().map(|g| base.act(g).as_set()).collect()
    })
}

fn small_base(eta: &Enrichment) -> bool {
    let low: BTreeSet<Structure> = eta.structures().iter().filter(|s| s.level() <= 2).cloned().collect();
    small_base_conjugates().iter().any(|big| low.is_subset(big))
}

/// The first detector whose pattern matches `η` up to permutation. Only
/// defined for `n = 3`; the level-three detector is also tried on the
/// saturation of `η`.
pub fn detect_nonadmissible(eta: &Enrichment) -> Option<DetectorHit> {
    if eta.n() != 3 {
        return None;
    }
    if eta.level() >= 3 {
        if small_base(eta) {
            return Some(DetectorHit {
                tag: DetectorTag::LevelThreeSmallBase,
                witness: "structures of level at most two lie in a conjugate of R^1_{1,2,3,12,13,123}".into(),
            });
        }
        let closure = saturate_capped(eta, usize::MAX).ok()?.closure;
        return small_base(&closure).then(|| DetectorHit {
            tag: DetectorTag::LevelThreeSmallBase,
            witness: "the saturation's structures of level at most two lie in a conjugate of R^1_{1,2,3,12,13,123}"
                .into(),
        });
    }
    let key = eta.canonical_encoding();
    if let Some((name, _)) = exact_lists().iter().find(|(_, keys)| keys.contains(&key)) {
        return Some(DetectorHit { tag: DetectorTag::ExactList, witness: format!("conjugate of {name}") });
    }
    let set = eta.as_set();
    let doublets: Vec<&Structure> = set.iter().filter(|s| s.level() == 1 && s.carrier().len() == 2).collect();
    let doubles: Vec<u32> = (1..=3).filter(|&k| set.contains(&double_doublet(k))).collect();
    let has_triple = set.contains(&triple_doublet());
    let points: Vec<&Structure> = set.iter().filter(|s| s.is_point()).collect();
    if doublets.is_empty() && !has_triple && doubles.len() == 1 && !points.is_empty() {
        let k = doubles[0];
        let witness = format!("sigma^{k} is the only structure of level two, with point {}", points[0]);
        return Some(DetectorHit { tag: DetectorTag::UniqueDoubleDoubleWithPoint, witness });
    }
    if doublets.is_empty() && doubles.len() >= 2 {
        let names: Vec<String> = doubles.iter().map(|k| format!("sigma^{k}")).collect();
        let witness = format!("{} without any doublet", names.join(" and "));
        return Some(DetectorHit { tag: DetectorTag::TwoDoubleDoublesNoDoublet, witness });
    }
    None
}

/// A model enrichment together with its stated acting group and quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Model {
    pub name: ModelName,
    pub enrichment: Enrichment,
}

const MODELS_3: [&str; 11] = [
    "R_123",
    "R_{1,123}",
    "R_{1,2,3,12,123}",
    "R_{3,12,123}",
    "R^1_123",
    "R^1_{1,2,3,12,13,123}",
    "R^123_123",
    "R^123_{1,123}",
    "R^{3,123}_{3,12,123}",
    "R^{3,123}_{1,2,3,12,123}",
    "R_max",
];

const MODELS_2: [&str; 2] = ["R_12", "R_{1,12}"];

fn build_models(names: &[&str], n: u32) -> Vec<Model> {
    names
        .iter()
        .map(|name| Model {
            name: ModelName(name.to_string()),
            enrichment: parse_notation(name, n).expect("valid model").sorted(),
        })
        .collect()
}

/// The model enrichments for `n ∈ {2, 3}` in their reference order; empty
/// for other `n`.
pub fn models(n: u32) -> Vec<Model> {
    static M2: OnceLock<Vec<Model>> = OnceLock::new();
    static M3: OnceLock<Vec<Model>> = OnceLock::new();
    match n {
        2 => M2.get_or_init(|| build_models(&MODELS_2, 2)).clone(),
        3 => M3.get_or_init(|| build_models(&MODELS_3, 3)).clone(),
        _ => Vec::new(),
    }
}

fn model_closures(n: u32) -> &'static [(ModelName, BTreeSet<Structure>)] {
    static C2: OnceLock<Vec<(ModelName, BTreeSet<Structure>)>> = OnceLock::new();
    static C3: OnceLock<Vec<(ModelName, BTreeSet<Structure>)>> = OnceLock::new();
    let build = || {
        models(n)
            .into_iter()
            .map(|m| {
                let closure = saturate(&m.enrichment).expect("models have level two").closure;
                (m.name, closure.as_set())
            })
            .collect()
    };
    match n {
        2 => C2.get_or_init(build),
        _ => C3.get_or_init(build),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Status {
    Admissible {
        model: ModelName,
        g: Permutation,
        closure: Enrichment,
        trace: Vec<RuleApplication>,
        /// Set when the verdict was reached by stripping structures of level
        /// three and above.
        reduced: bool,
    },
    NonAdmissible(DetectorHit),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub input: Enrichment,
    pub status: Status,
}

impl ClassificationReport {
    pub fn is_admissible(&self) -> bool {
        matches!(self.status, Status::Admissible { .. })
    }

    pub fn model(&self) -> Option<&ModelName> {
        match &self.status {
            Status::Admissible { model, .. } => Some(model),
            Status::NonAdmissible(_) => None,
        }
    }

    pub fn detector(&self) -> Option<DetectorTag> {
        match &self.status {
            Status::Admissible { .. } => None,
            Status::NonAdmissible(hit) => Some(hit.tag),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.status {
            Status::Admissible { model, g, closure, trace, reduced } => serde_json::json!({
                "input": self.input.to_json(),
                "status": "admissible",
                "model": model.as_str(),
                "g": g,
                "closure": closure.to_json(),
                "trace": trace,
                "reduced": reduced,
                "detector": null,
            }),
            Status::NonAdmissible(hit) => serde_json::json!({
                "input": self.input.to_json(),
                "status": "non_admissible",
                "model": null,
                "g": null,
                "trace": [],
                "detector": hit.tag,
                "witness": hit.witness,
            }),
        }
    }
}

fn match_model(closure: &Enrichment) -> Option<(ModelName, Permutation)> {
    for g in Permutation::all(closure.n()) {
        let moved = closure.act(&g).as_set();
        if let Some((name, _)) = model_closures(closure.n()).iter().find(|(_, c)| *c == moved) {
            return Some((name.clone(), g));
        }
    }
    None
}

/// Classifies `η` against the model list.
///
/// Detectors take precedence over saturation. Enrichments of level three
/// or more are reduced to their structures of level at most two when the
/// reduction rules account for every higher structure of the saturation.
pub fn classify(eta: &Enrichment) -> Result<ClassificationReport, ClassifyError> {
    classify_capped(eta, DEFAULT_LEVEL_CAP)
}

pub fn classify_capped(eta: &Enrichment, level_cap: usize) -> Result<ClassificationReport, ClassifyError> {
    let n = eta.n();
    if n != 2 && n != 3 {
        return Err(ClassifyError::UnsupportedGroundSet(n));
    }
    check_level(eta, level_cap)?;
    if let Some(hit) = detect_nonadmissible(eta) {
        return Ok(ClassificationReport { input: eta.clone(), status: Status::NonAdmissible(hit) });
    }
    let Saturation { closure, trace } = saturate_capped(eta, level_cap)?;
    let (base, reduced) = if closure.level() >= 3 {
        if !reducible(&closure) {
            return Err(ClassifyError::ClassificationIncomplete(eta.to_string()));
        }
        (closure.truncate_level(2), true)
    } else {
        (closure.clone(), false)
    };
    let matched = if reduced {
        if let Some(hit) = detect_nonadmissible(&base) {
            return Ok(ClassificationReport { input: eta.clone(), status: Status::NonAdmissible(hit) });
        }
        match_model(&saturate(&base)?.closure)
    } else {
        match_model(&closure)
    };
    let (model, g) = matched.ok_or_else(|| ClassifyError::ClassificationIncomplete(eta.to_string()))?;
    Ok(ClassificationReport {
        input: eta.clone(),
        status: Status::Admissible { model, g, closure, trace, reduced },
    })
}

/// Whether every structure of level at least three in `closure` is
/// recovered from lower levels by the level-raising rules.
fn reducible(closure: &Enrichment) -> bool {
    let set = closure.as_set();
    for level in (3..=closure.level()).rev() {
        let e = s_level(level);
        let top_ok = set.contains(&s_level(level - 1));
        for s in set.iter().filter(|s| s.level() == level) {
            let ok = if *s == e {
                top_ok
            } else {
                top_ok && e.elements().iter().any(|g| {
                    set.contains(g) && {
                        let rest: Vec<Structure> = e.elements().into_iter().filter(|x| x != g).collect();
                        Structure::from_children(rest).ok().as_ref() == Some(s)
                    }
                })
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Canonical key: the smallest canonical encoding among the saturations of
/// the conjugates of `η`.
pub fn iso_key(eta: &Enrichment) -> Result<String, ClassifyError> {
    let closure = saturate(eta)?.closure;
    Ok(Permutation::all(eta.n())
        .iter()
        .map(|g| closure.act(g).canonical_encoding())
        .min()
        .expect("S_n is nonempty"))
}

/// Every enrichment of `{1..n}` whose members have level at most
/// `max_level`, in a fixed order.
pub fn all_enrichments(n: u32, max_level: usize) -> Result<Vec<Enrichment>, ClassifyError> {
    let full = full_structure(n);
    let optional: Vec<Structure> = enumerate_structures(n, max_level)
        .map_err(EnrichmentError::from)?
        .into_iter()
        .filter(|s| *s != full)
        .collect();
    let mut out = Vec::with_capacity(1 << optional.len());
    for mask in 0u64..(1 << optional.len()) {
        let mut members = vec![full.clone()];
        members.extend(optional.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, s)| s.clone()));
        out.push(Enrichment::from_set(members, n)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationSummary {
    pub n: u32,
    pub max_level: usize,
    pub total: usize,
    pub admissible: usize,
    pub non_admissible: usize,
    pub incomplete: usize,
    pub reduced: usize,
    /// Number of distinct iso keys among admissible enrichments.
    pub classes: usize,
    pub per_model: BTreeMap<String, usize>,
    pub per_detector: BTreeMap<String, usize>,
    /// For each model, the smallest admissible enrichment with that model.
    pub representatives: BTreeMap<String, Enrichment>,
    pub incomplete_examples: Vec<Enrichment>,
}

/// Classifies every enrichment of level at most `max_level`.
pub fn classify_all(n: u32, max_level: usize) -> Result<ClassificationSummary, ClassifyError> {
    if n != 2 && n != 3 {
        return Err(ClassifyError::UnsupportedGroundSet(n));
    }
    let all = all_enrichments(n, max_level)?;
    type Outcome = Result<(ClassificationReport, Option<String>), ClassifyError>;
    let results: Vec<(Enrichment, Outcome)> = all
        .into_par_iter()
        .map(|eta| {
            let outcome = classify_capped(&eta, max_level.max(DEFAULT_LEVEL_CAP)).and_then(|report| {
                let key = match report.status {
                    Status::Admissible { .. } => Some(iso_key_capped(&eta, max_level)?),
                    Status::NonAdmissible(_) => None,
                };
                Ok((report, key))
            });
            (eta, outcome)
        })
        .collect();
    let mut summary = ClassificationSummary {
        n,
        max_level,
        total: results.len(),
        admissible: 0,
        non_admissible: 0,
        incomplete: 0,
        reduced: 0,
        classes: 0,
        per_model: BTreeMap::new(),
        per_detector: BTreeMap::new(),
        representatives: BTreeMap::new(),
        incomplete_examples: Vec::new(),
    };
    let mut keys = BTreeSet::new();
    for (eta, outcome) in results {
        match outcome {
            Ok((report, key)) => match report.status {
                Status::Admissible { model, reduced, .. } => {
                    summary.admissible += 1;
                    summary.reduced += usize::from(reduced);
                    if !reduced {
                        keys.extend(key);
                    }
                    *summary.per_model.entry(model.0.clone()).or_default() += 1;
                    let rep = summary.representatives.entry(model.0).or_insert_with(|| eta.clone());
                    if (eta.len(), eta.canonical_encoding()) < (rep.len(), rep.canonical_encoding()) {
                        *rep = eta;
                    }
                }
                Status::NonAdmissible(hit) => {
                    summary.non_admissible += 1;
                    *summary.per_detector.entry(format!("{:?}", hit.tag)).or_default() += 1;
                }
            },
            Err(ClassifyError::ClassificationIncomplete(_)) => {
                summary.incomplete += 1;
                if summary.incomplete_examples.len() < 16 {
                    summary.incomplete_examples.push(eta);
                }
            }
            Err(other) => return Err(other),
        }
    }
    summary.classes = keys.len();
    Ok(summary)
}

fn iso_key_capped(eta: &Enrichment, level_cap: usize) -> Result<String, ClassifyError> {
    let closure = saturate_capped(eta, level_cap.max(DEFAULT_LEVEL_CAP))?.closure;
    Ok(Permutation::all(eta.n())
        .iter()
        .map(|g| closure.act(g).canonical_encoding())
        .min()
        .expect("S_n is nonempty"))
}

/// Forgetful-morphism diagram between models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagram {
    pub nodes: Vec<String>,
    /// Full relation: `(a, b)` when a conjugate of `b` lies in the saturation of `a`.
    pub relation: Vec<(usize, usize)>,
    /// Transitive reduction of `relation`.
    pub edges: Vec<(usize, usize)>,
}

impl Diagram {
    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges.iter().any(|&(a, b)| self.nodes[a] == from && self.nodes[b] == to)
    }

    pub fn relates(&self, from: &str, to: &str) -> bool {
        self.relation.iter().any(|&(a, b)| self.nodes[a] == from && self.nodes[b] == to)
    }

    pub fn is_acyclic(&self) -> bool {
        self.relation.iter().all(|&(a, b)| !self.relation.contains(&(b, a)))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph forgetful {\n  rankdir=TB;\n");
        for (i, name) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  m{i} [label=\"{name}\"];\n"));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  m{a} -> m{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

pub fn forgetful_diagram(models: &[Model]) -> Result<Diagram, ClassifyError> {
    let closures: Vec<BTreeSet<Structure>> = models
        .iter()
        .map(|m| saturate(&m.enrichment).map(|s| s.closure.as_set()))
        .collect::<Result<_, _>>()?;
    let mut relation = Vec::new();
    for (a, closure) in closures.iter().enumerate() {
        for (b, target) in models.iter().enumerate() {
            if a == b {
                continue;
            }
            let contained = Permutation::all(target.enrichment.n())
                .iter()
                .any(|g| target.enrichment.act(g).structures().iter().all(|s| closure.contains(s)));
            if contained {
                relation.push((a, b));
            }
        }
    }
    let edges = relation
        .iter()
        .copied()
        .filter(|&(a, b)| !(0..models.len()).any(|c| relation.contains(&(a, c)) && relation.contains(&(c, b))))
        .collect();
    Ok(Diagram { nodes: models.iter().map(|m| m.name.0.clone()).collect(), relation, edges })
}

/// How a quotient row was confirmed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum InvariantCheck {
    Verified,
    /// Equality holds after dropping the listed point structures, which a
    /// detector flags in the raw invariant set.
    Repaired { dropped: Vec<Structure>, detector: DetectorTag },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientRow {
    pub model: String,
    /// Group used for the invariant computation.
    pub group: GroupDescriptor,
    pub acting_label: String,
    pub quotient: String,
    pub group_verified: bool,
    pub invariant: InvariantCheck,
}

const QUOTIENTS: [(&str, &str, &str); 11] = [
    ("R_123", "S_1", "R_123"),
    ("R_{1,123}", "S_1", "R_{1,123}"),
    ("R_{1,2,3,12,123}", "S_2", "R_{3,12,123}"),
    ("R_{3,12,123}", "S_1", "R_{3,12,123}"),
    ("R^1_123", "S_1", "R^1_123"),
    ("R^1_{1,2,3,12,13,123}", "S_2", "R^1_123"),
    ("R^123_123", "S_1", "R^123_123"),
    ("R^123_{1,123}", "S_1", "R^123_{1,123}"),
    ("R^{3,123}_{3,12,123}", "S_1", "R^{3,123}_{3,12,123}"),
    ("R^{3,123}_{1,2,3,12,123}", "S_2", "R^{3,123}_{3,12,123}"),
    ("R_max", "S_3", "R^123_123"),
];

fn quotient_row(model: &str, label: &str, quotient: &str, group: GroupDescriptor) -> Result<QuotientRow, ClassifyError> {
    let eta = parse_notation(model, 3)?;
    let target = parse_notation(quotient, 3)?;
    let acting = acting_group(&eta);
    let group_verified = acting.label == label;
    if !group_verified && group.order() == stabilizer_g(&eta).order() {
        return Err(ClassifyError::VerificationMismatch(format!(
            "{model}: acting group {} but the table states {label}",
            acting.label
        )));
    }
    let fixed = invariant_substructures(&eta, &group)?;
    let invariant = if fixed.set_equal(&target) {
        InvariantCheck::Verified
    } else {
        let detector = detect_nonadmissible(&fixed).map(|hit| hit.tag);
        let dropped: Vec<Structure> = fixed.structures().iter().filter(|s| s.is_point()).cloned().collect();
        let kept: Vec<Structure> = fixed.structures().iter().filter(|s| !s.is_point()).cloned().collect();
        let repaired = Enrichment::new(kept, 3)?;
        match detector {
            Some(detector) if repaired.set_equal(&target) => InvariantCheck::Repaired { dropped, detector },
            _ => {
                return Err(ClassifyError::VerificationMismatch(format!(
                    "{model}: invariant structures {fixed} do not give {quotient}"
                )))
            }
        }
    };
    Ok(QuotientRow {
        model: model.into(),
        group,
        acting_label: acting.label,
        quotient: quotient.into(),
        group_verified,
        invariant,
    })
}

/// The quotient table for the eleven models, followed by the partial
/// quotient of `R_max` by the transposition `(1 2)`.
pub fn quotient_table() -> Result<Vec<QuotientRow>, ClassifyError> {
    let mut rows = Vec::new();
    for (model, label, quotient) in QUOTIENTS {
        let eta = parse_notation(model, 3)?;
        rows.push(quotient_row(model, label, quotient, stabilizer_g(&eta))?);
    }
    let partial = GroupDescriptor::from_elements(vec![Permutation::identity(3), Permutation::swap(3, 1, 2)]);
    let mut row = quotient_row("R_max", "S_3", "R^{3,123}_{3,12,123}", partial)?;
    row.group_verified = row.group.label == "S_2";
    rows.push(row);
    Ok(rows)
}

/// Justification for one step of a domination sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StepJustification {
    Rule(RuleApplication),
    /// A point incident to a present structure of level one.
    UniversalLevelOne { into: Structure },
    /// A doublet incident to a present structure of level two.
    UniversalLevelTwo { into: Structure },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub added: Structure,
    pub justification: Option<StepJustification>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCertificate {
    pub model: String,
    pub base: String,
    pub steps: Vec<ChainStep>,
    pub reaches_model: bool,
}

impl ChainCertificate {
    pub fn valid(&self) -> bool {
        self.reaches_model && self.steps.iter().all(|s| s.justification.is_some())
    }
}

/// Enrichments taken as admissible without a chain.
pub const AXIOMS: [&str; 4] = ["R_123", "R_{12,123}", "R^1_123", "R^123_123"];

const CHAINS: [(&str, &str, &[&str]); 11] = [
    ("R_123", "R_123", &[]),
    ("R_{1,123}", "R_123", &["1"]),
    ("R_{1,2,3,12,123}", "R_{12,123}", &["1", "2", "3"]),
    ("R_{3,12,123}", "R_{12,123}", &["3"]),
    ("R^1_123", "R^1_123", &[]),
    ("R^1_{1,2,3,12,13,123}", "R^1_123", &["12", "13", "2", "3", "1"]),
    ("R^123_123", "R^123_123", &[]),
    ("R^123_{1,123}", "R^123_123", &["1"]),
    ("R^{3,123}_{3,12,123}", "R^123_123", &["12", "3", "^3"]),
    ("R^{3,123}_{1,2,3,12,123}", "R^{3,123}_{3,12,123}", &["1", "2"]),
    ("R_max", "R^123_123", &["12", "^3", "13", "23", "1", "2", "3", "^1", "^2"]),
];

fn justify(current: &Enrichment, added: &Structure) -> Option<StepJustification> {
    if let Some(rule) = extensions(current).into_iter().find(|a| &a.added == added) {
        return Some(StepJustification::Rule(rule));
    }
    let level_one = added.is_point();
    let doublet = added.level() == 1 && added.carrier().len() == 2;
    current.structures().iter().find_map(|theta| {
        if !incidence(added, std::slice::from_ref(theta)) {
            return None;
        }
        match theta.level() {
            1 if level_one => Some(StepJustification::UniversalLevelOne { into: theta.clone() }),
            2 if doublet => Some(StepJustification::UniversalLevelTwo { into: theta.clone() }),
            _ => None,
        }
    })
}

/// Replays each model's domination sequence from its base.
pub fn certify_chains() -> Result<Vec<ChainCertificate>, ClassifyError> {
    let mut out = Vec::new();
    for (model, base, steps) in CHAINS {
        let mut current = parse_notation(base, 3)?;
        let mut checked = Vec::new();
        for token in steps {
            let added = match token.strip_prefix('^') {
                Some(k) => sup(k, 3)?,
                None => sub(token, 3)?,
            };
            let justification = justify(&current, &added);
            current.push(added.clone());
            checked.push(ChainStep { added, justification });
        }
        let reaches_model = current.set_equal(&parse_notation(model, 3)?);
        out.push(ChainCertificate { model: model.into(), base: base.into(), steps: checked, reaches_model });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eta(name: &str) -> Enrichment {
        parse_notation(name, 3).unwrap()
    }

    fn set(items: &[&str]) -> Enrichment {
        let structures = items
            .iter()
            .map(|t| match t.strip_prefix('^') {
                Some(k) => sup(k, 3).unwrap(),
                None => sub(t, 3).unwrap(),
            })
            .collect::<Vec<_>>();
        Enrichment::from_set(structures, 3).unwrap()
    }

    #[test]
    fn extension_examples() {
        let ext = extensions(&eta("R_{12,123}"));
        assert_eq!(ext.len(), 1);
        assert_eq!(ext[0].rule, RuleTag::Residual);
        assert_eq!(ext[0].added, sub("3", 3).unwrap());

        let ext = extensions(&set(&["12", "13", "123"]));
        assert!(ext.iter().any(|a| a.rule == RuleTag::PairToDouble && a.added == sup("1", 3).unwrap()));

        assert!(extensions(&eta("R_123")).is_empty());
    }

    #[test]
    fn saturation_examples() {
        let sat = saturate(&set(&["12", "^1", "123"])).unwrap();
        assert!(sat.closure.set_equal(&eta("R^1_{1,2,3,12,13,123}")));
        let sat = saturate(&set(&["12", "^3", "123"])).unwrap();
        assert!(sat.closure.set_equal(&eta("R^{3,123}_{3,12,123}")));
        let sat = saturate(&set(&["12", "13", "23", "123"])).unwrap();
        assert_eq!(sat.closure.len(), 11);
    }

    #[test]
    fn detector_examples() {
        assert_eq!(detect_nonadmissible(&eta("R_{1,2,123}")).unwrap().tag, DetectorTag::ExactList);
        assert_eq!(
            detect_nonadmissible(&set(&["^1", "^2", "123"])).unwrap().tag,
            DetectorTag::TwoDoubleDoublesNoDoublet
        );
        assert_eq!(
            detect_nonadmissible(&set(&["1", "^1", "123"])).unwrap().tag,
            DetectorTag::UniqueDoubleDoubleWithPoint
        );
        assert_eq!(detect_nonadmissible(&eta("R^1_123")), None);
    }

    #[test]
    fn classify_examples() {
        let report = classify(&eta("max")).unwrap();
        assert_eq!(report.model().unwrap().as_str(), "R_max");
        let report = classify(&set(&["12", "^1", "123"])).unwrap();
        match report.status {
            Status::Admissible { model, g, .. } => {
                assert_eq!(model.as_str(), "R^1_{1,2,3,12,13,123}");
                assert!(g.is_identity());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(!classify(&eta("R_{1,2,3,123}")).unwrap().is_admissible());
    }

    #[test]
    fn iso_keys() {
        assert_eq!(iso_key(&eta("R_{3,12,123}")).unwrap(), iso_key(&eta("R_{1,23,123}")).unwrap());
        assert_ne!(iso_key(&eta("R_{1,123}")).unwrap(), iso_key(&eta("R_{3,12,123}")).unwrap());
        let keys: BTreeSet<String> = models(3).iter().map(|m| iso_key(&m.enrichment).unwrap()).collect();
        assert_eq!(keys.len(), 11);
    }

    #[test]
    fn s_levels() {
        assert_eq!(s_level(2), sup("123", 3).unwrap());
        assert_eq!(s_level(3).signature().levels(), &[3, 2, 2]);
        assert_eq!(s_level(3).elements().len(), 3);
    }

    #[test]
    fn level_cap() {
        let deep = Enrichment::from_set([full_structure(3), s_level(4)], 3).unwrap();
        assert_eq!(saturate(&deep), Err(ClassifyError::LevelCapExceeded { level: 4, cap: 3 }));
    }

    #[test]
    fn diagram_examples() {
        let d = forgetful_diagram(&models(3)).unwrap();
        assert!(d.is_acyclic());
        assert!(d.relates("R_max", "R^{3,123}_{3,12,123}"));
        for m in models(3).iter().filter(|m| m.name.as_str() != "R_123") {
            assert!(d.relates(m.name.as_str(), "R_123"));
        }
        assert!(!d.relates("R^1_123", "R_{1,2,3,12,123}"));
    }

    #[test]
    fn chains_validate() {
        for cert in certify_chains().unwrap() {
            assert!(cert.valid(), "{cert:?}");
        }
    }
}
