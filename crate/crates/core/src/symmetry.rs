//! The symmetric group acting on structures and enrichments.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::enrichment::Enrichment;
use crate::structure::Structure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("permutation degree {0} does not match ground set size {1}")]
    DegreeMismatch(usize, u32),
    #[error("group is not contained in the stabilizer of the enrichment")]
    NotASubgroupOfStabilizer,
}

/// A permutation of `{1..n}` stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, SymmetryError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let slot = (i as usize).checked_sub(1).filter(|&k| k < n);
            match slot {
                Some(k) if !seen[k] => seen[k] = true,
                _ => return Err(SymmetryError::NotAPermutation(n)),
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: u32) -> Self {
        Permutation((1..=n).collect())
    }

    /// The transposition of `i` and `j`.
    pub fn swap(n: u32, i: u32, j: u32) -> Self {
        let mut images: Vec<u32> = (1..=n).collect();
        images.swap(i as usize - 1, j as usize - 1);
        Permutation(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize - 1]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.apply(i)).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (k, &i) in self.0.iter().enumerate() {
            inv[i as usize - 1] = k as u32 + 1;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &i)| i as usize == k + 1)
    }

    /// All permutations of `{1..n}` in lexicographic order of images.
    pub fn all(n: u32) -> Vec<Permutation> {
        (1..=n).permutations(n as usize).map(Permutation).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Things the symmetric group acts on.
pub trait Act: Sized {
    fn act(&self, g: &Permutation) -> Self;
}

impl Act for Structure {
    fn act(&self, g: &Permutation) -> Self {
        self.relabel(&|i| g.apply(i))
    }
}

impl Act for Enrichment {
    fn act(&self, g: &Permutation) -> Self {
        let moved = self.structures().iter().map(|s| s.act(g)).collect();
        Enrichment::new(moved, self.n()).expect("permutations preserve enrichments")
    }
}

pub fn act<T: Act>(g: &Permutation, x: &T) -> T {
    x.act(g)
}

fn check_degree(g: &Permutation, n: u32) -> Result<(), SymmetryError> {
    if g.degree() == n as usize {
        Ok(())
    } else {
        Err(SymmetryError::DegreeMismatch(g.degree(), n))
    }
}

/// `act` with a degree check.
pub fn act_checked(g: &Permutation, eta: &Enrichment) -> Result<Enrichment, SymmetryError> {
    check_degree(g, eta.n())?;
    Ok(eta.act(g))
}

/// The orbit of `η` as distinct sets, each in canonical order.
pub fn orbit(eta: &Enrichment) -> Vec<Enrichment> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in Permutation::all(eta.n()) {
        let image = eta.act(&g).sorted();
        if seen.insert(image.canonical_encoding()) {
            out.push(image);
        }
    }
    out
}

/// A finite permutation group given by its elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupDescriptor {
    pub elements: Vec<Permutation>,
    pub label: String,
}

impl GroupDescriptor {
    pub fn from_elements(mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        elements.dedup();
        let label = group_label(elements.len());
        GroupDescriptor { elements, label }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.contains(&a.inverse()) && self.elements.iter().all(|b| self.contains(&a.compose(b)))
        })
    }

    pub fn is_normal_in(&self, big: &GroupDescriptor) -> bool {
        big.elements.iter().all(|g| {
            self.elements.iter().all(|h| big.contains(h) && self.contains(&g.compose(h).compose(&g.inverse())))
        })
    }
}

fn group_label(order: usize) -> String {
    match order {
        3 => "C_3".into(),
        1 | 2 => format!("S_{order}"),
        6 => "S_3".into(),
        24 => "S_4".into(),
        k => format!("order {k}"),
    }
}

/// `G_η`: permutations mapping `η` to itself as a set.
pub fn stabilizer_g(eta: &Enrichment) -> GroupDescriptor {
    let set = eta.as_set();
    GroupDescriptor::from_elements(
        Permutation::all(eta.n())
            .into_iter()
            .filter(|g| eta.structures().iter().all(|s| set.contains(&s.act(g))))
            .collect(),
    )
}

/// `H_η`: permutations fixing every member of `η`.
pub fn pointwise_stabilizer_h(eta: &Enrichment) -> GroupDescriptor {
    GroupDescriptor::from_elements(
        Permutation::all(eta.n())
            .into_iter()
            .filter(|g| eta.structures().iter().all(|s| &s.act(g) == s))
            .collect(),
    )
}

/// `G_η / H_η`, represented by the smallest element of each coset.
pub fn acting_group(eta: &Enrichment) -> GroupDescriptor {
    let g = stabilizer_g(eta);
    let h = pointwise_stabilizer_h(eta);
    let mut reps: Vec<Permutation> = Vec::new();
    let mut covered = BTreeSet::new();
    for x in &g.elements {
        if covered.contains(x) {
            continue;
        }
        for y in &h.elements {
            covered.insert(x.compose(y));
        }
        reps.push(x.clone());
    }
    let label = group_label(reps.len());
    GroupDescriptor { elements: reps, label }
}

/// Members of `η` fixed by every element of `group`, in sequence order.
pub fn invariant_substructures(eta: &Enrichment, group: &GroupDescriptor) -> Result<Enrichment, SymmetryError> {
    let stab = stabilizer_g(eta);
    for g in &group.elements {
        check_degree(g, eta.n())?;
        if !stab.contains(g) {
            return Err(SymmetryError::NotASubgroupOfStabilizer);
        }
    }
    let fixed = eta
        .structures()
        .iter()
        .filter(|s| group.elements.iter().all(|g| &s.act(g) == *s))
        .cloned()
        .collect();
    Ok(Enrichment::new(fixed, eta.n()).expect("the full structure is fixed by every permutation"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enrichment::{parse_notation, sub, sup};

    fn eta(name: &str) -> Enrichment {
        parse_notation(name, 3).unwrap()
    }

    #[test]
    fn action_on_structures() {
        assert_eq!(sup("1", 3).unwrap().act(&Permutation::swap(3, 1, 2)), sup("2", 3).unwrap());
        assert_eq!(sub("12", 3).unwrap().act(&Permutation::swap(3, 2, 3)), sub("13", 3).unwrap());
        let max = eta("max");
        assert_eq!(max.act(&Permutation::identity(3)), max);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![2, 2, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        let g = Permutation::new(vec![2, 3, 1]).unwrap();
        assert!(g.compose(&g.inverse()).is_identity());
    }

    #[test]
    fn orbits() {
        assert_eq!(orbit(&eta("R_{3,12,123}")).len(), 3);
        assert_eq!(orbit(&eta("R_123")).len(), 1);
        assert_eq!(orbit(&eta("R_{1,123}")).len(), 3);
    }

    #[test]
    fn stabilizers() {
        let max = eta("max");
        assert_eq!(stabilizer_g(&max).order(), 6);
        assert_eq!(pointwise_stabilizer_h(&max).order(), 1);
        assert_eq!(acting_group(&max).label, "S_3");

        let e = eta("R_{3,12,123}");
        let swap = Permutation::swap(3, 1, 2);
        assert_eq!(stabilizer_g(&e).elements, vec![Permutation::identity(3), swap.clone()]);
        assert_eq!(pointwise_stabilizer_h(&e).elements, vec![Permutation::identity(3), swap]);
        assert_eq!(acting_group(&e).label, "S_1");

        let e = eta("R_{1,2,3,12,123}");
        assert_eq!(stabilizer_g(&e).order(), 2);
        assert_eq!(pointwise_stabilizer_h(&e).order(), 1);
        assert_eq!(acting_group(&e).label, "S_2");
    }

    #[test]
    fn invariant_sub_enrichments() {
        let max = eta("max");
        let s3 = stabilizer_g(&max);
        assert!(invariant_substructures(&max, &s3).unwrap().set_equal(&eta("R^123_123")));
        let s2 = GroupDescriptor::from_elements(vec![Permutation::identity(3), Permutation::swap(3, 1, 2)]);
        assert!(invariant_substructures(&max, &s2).unwrap().set_equal(&eta("R^{3,123}_{3,12,123}")));
        let six = eta("R^1_{1,2,3,12,13,123}");
        let s23 = GroupDescriptor::from_elements(vec![Permutation::identity(3), Permutation::swap(3, 2, 3)]);
        let fixed = invariant_substructures(&six, &s23).unwrap();
        let expected = Enrichment::from_set([sub("1", 3).unwrap(), sup("1", 3).unwrap(), sub("123", 3).unwrap()], 3).unwrap();
        assert!(fixed.set_equal(&expected));
        let bad = invariant_substructures(&eta("R_{1,123}"), &s23.clone());
        assert!(bad.is_ok());
        let bad = invariant_substructures(&eta("R_{1,123}"), &s2);
        assert_eq!(bad, Err(SymmetryError::NotASubgroupOfStabilizer));
    }
}
