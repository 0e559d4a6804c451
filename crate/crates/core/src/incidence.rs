//! The recursive incidence predicate on tuples of structures.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::enrichment::Enrichment;
use crate::structure::Structure;

/// Largest target count scanned by [`incidence_closure`] unless told otherwise.
pub const DEFAULT_MAX_ARITY: usize = 4;

/// One way of reading the signatures of `σ` and its targets as
/// `σ ∈ Σ_{q, p}` and `σ_i ∈ Σ_{n_i, p}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureSplit {
    /// Number of outer levels of `σ` above the shared tail.
    pub r: usize,
    /// Outer part of `σ`'s signature, `[1]` when it is empty.
    pub q: Vec<usize>,
    /// Shared tail, possibly empty.
    pub p: Vec<usize>,
    /// Top cardinality of each target, `1` when the target itself lies in `Σ_p`.
    pub n: Vec<usize>,
}

pub fn signature_splits(sigma: &Structure, targets: &[Structure]) -> Vec<SignatureSplit> {
    let a = sigma.signature().stripped();
    let mut out = Vec::new();
    for cut in 0..=a.len() {
        let (q, p) = a.split_at(cut);
        let n: Option<Vec<usize>> = targets
            .iter()
            .map(|t| {
                let b = t.signature().stripped();
                if b == p {
                    Some(1)
                } else if b.len() == p.len() + 1 && &b[1..] == p {
                    Some(b[0])
                } else {
                    None
                }
            })
            .collect();
        if let Some(n) = n {
            out.push(SignatureSplit {
                r: q.len().max(1),
                q: if q.is_empty() { vec![1] } else { q.to_vec() },
                p: p.to_vec(),
                n,
            });
        }
    }
    out
}

/// `I(σ, σ_1, …, σ_s)`: true when some signature split makes `σ` incident
/// to the union of its targets.
pub fn incidence(sigma: &Structure, targets: &[Structure]) -> bool {
    witness_split(sigma, targets).is_some()
}

/// The first split under which the incidence holds.
pub fn witness_split(sigma: &Structure, targets: &[Structure]) -> Option<SignatureSplit> {
    if targets.is_empty() {
        return None;
    }
    signature_splits(sigma, targets)
        .into_iter()
        .find(|split| holds(sigma, targets, split.p.len()))
}

fn holds(sigma: &Structure, targets: &[Structure], tail: usize) -> bool {
    let outer = sigma.signature().stripped().len() - tail;
    match outer {
        0 | 1 => {
            let pool: BTreeSet<Structure> = targets
                .iter()
                .flat_map(|t| {
                    if t.signature().stripped().len() == tail {
                        vec![t.clone()]
                    } else {
                        t.elements()
                    }
                })
                .collect();
            let own = if outer == 0 { vec![sigma.clone()] } else { sigma.elements() };
            own.iter().all(|s| pool.contains(s))
        }
        _ => sigma.elements().iter().all(|tau| holds(tau, targets, tail)),
    }
}

/// An incidence relation found inside an enrichment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Incidence {
    pub sigma: Structure,
    pub targets: Vec<Structure>,
    pub split: SignatureSplit,
}

/// Every `(σ, T)` with `σ ∈ η`, `T ⊆ η \ {σ}` of size at most `max_arity`
/// and `I(σ, T) = 1`. Targets are listed in canonical order.
pub fn incidence_closure(eta: &Enrichment, max_arity: usize) -> Vec<Incidence> {
    let members = eta.sorted();
    let members = members.structures();
    let mut out = Vec::new();
    for sigma in members {
        let rest: Vec<&Structure> = members.iter().filter(|s| *s != sigma).collect();
        for k in 1..=max_arity.min(rest.len()) {
            for combo in rest.iter().combinations(k) {
                let targets: Vec<Structure> = combo.into_iter().map(|s| (*s).clone()).collect();
                if let Some(split) = witness_split(sigma, &targets) {
                    out.push(Incidence { sigma: sigma.clone(), targets, split });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enrichment::{parse_notation, sub, sup};

    fn s(d: &str) -> Structure {
        sub(d, 3).unwrap()
    }

    fn d(d: &str) -> Structure {
        sup(d, 3).unwrap()
    }

    #[test]
    fn splits() {
        let one = signature_splits(&s("12"), &[s("123")]);
        assert_eq!(one, vec![SignatureSplit { r: 1, q: vec![2], p: vec![], n: vec![3] }]);
        let pair = signature_splits(&d("1"), &[s("12"), s("13")]);
        assert!(pair.contains(&SignatureSplit { r: 1, q: vec![2], p: vec![2], n: vec![1, 1] }));
        assert!(signature_splits(&s("1"), &[d("1")]).is_empty());
    }

    #[test]
    fn predicate() {
        assert!(incidence(&s("12"), &[s("123")]));
        assert!(incidence(&d("1"), &[s("123")]));
        assert!(incidence(&d("1"), &[s("12"), s("13")]));
        assert!(!incidence(&s("1"), &[d("1")]));
        assert!(incidence(&s("23"), &[s("12"), s("13")]));
        assert!(!incidence(&s("123"), &[s("1")]));
        assert!(incidence(&s("123"), &[s("12"), s("3")]));
        assert!(incidence(&s("123"), &[s("1"), s("2"), s("3")]));
        assert!(incidence(&d("1"), &[s("12"), s("23")]));
        assert!(!incidence(&d("1"), &[s("12"), s("2")]));
    }

    #[test]
    fn closure_examples() {
        let eta = parse_notation("R_{1,123}", 3).unwrap();
        let c = incidence_closure(&eta, DEFAULT_MAX_ARITY);
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].sigma.clone(), c[0].targets.clone()), (s("1"), vec![s("123")]));

        let eta = parse_notation("R^1_123", 3).unwrap();
        let c = incidence_closure(&eta, DEFAULT_MAX_ARITY);
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].sigma.clone(), c[0].targets.clone()), (d("1"), vec![s("123")]));

        let le_barz = parse_notation("R_{1,2,3,12,13,23,123}", 3).unwrap();
        let c = incidence_closure(&le_barz, DEFAULT_MAX_ARITY);
        let has = |sigma: Structure, t: Vec<Structure>| c.iter().any(|i| i.sigma == sigma && i.targets == t);
        assert!(has(s("1"), vec![s("12")]));
        assert!(has(s("12"), vec![s("123")]));
        assert!(has(s("123"), vec![s("3"), s("12")]));
    }
}
