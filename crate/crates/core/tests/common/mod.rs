#![allow(dead_code)]

use std::collections::BTreeSet;

use hilbconf::poly::{Poly, VarTable};
use hilbconf::structure::enumerate_structures;
use hilbconf::Structure;
use num_rational::BigRational;
use num_traits::One;
use serde_json::Value;

/// A structure rebuilt from its JSON, with no reference to the library's
/// canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Nest {
    Pt(u64),
    Set(BTreeSet<Nest>),
}

impl Nest {
    pub fn from_json(v: &Value) -> Nest {
        match v {
            Value::Number(k) => Nest::Pt(k.as_u64().unwrap()),
            Value::Array(items) => {
                let set: BTreeSet<Nest> = items.iter().map(Nest::from_json).collect();
                if set.len() == 1 {
                    set.into_iter().next().unwrap()
                } else {
                    Nest::Set(set)
                }
            }
            other => panic!("not a nest: {other}"),
        }
    }

    pub fn of(s: &Structure) -> Nest {
        Nest::from_json(&s.to_json())
    }

    pub fn sig(&self) -> Vec<usize> {
        match self {
            Nest::Pt(_) => vec![],
            Nest::Set(c) => {
                let sigs: BTreeSet<Vec<usize>> = c.iter().map(Nest::sig).collect();
                assert_eq!(sigs.len(), 1, "mixed signatures");
                let mut out = vec![c.len()];
                out.extend(sigs.into_iter().next().unwrap());
                out
            }
        }
    }

    pub fn children(&self) -> Vec<Nest> {
        match self {
            Nest::Pt(_) => vec![self.clone()],
            Nest::Set(c) => c.iter().cloned().collect(),
        }
    }

    pub fn points(&self) -> BTreeSet<u64> {
        match self {
            Nest::Pt(k) => BTreeSet::from([*k]),
            Nest::Set(c) => c.iter().flat_map(Nest::points).collect(),
        }
    }
}

/// Brute-force incidence: try every way of cutting σ's signature into an
/// outer part and a shared tail, then check the set inclusions level by
/// level.
pub fn incidence_oracle(sigma: &Structure, targets: &[Structure]) -> bool {
    if targets.is_empty() {
        return false;
    }
    let s = Nest::of(sigma);
    let ts: Vec<Nest> = targets.iter().map(Nest::of).collect();
    let a = s.sig();
    (0..=a.len()).any(|cut| {
        let tail = &a[cut..];
        let fits = ts.iter().all(|t| {
            let b = t.sig();
            b == tail || (b.len() == tail.len() + 1 && &b[1..] == tail)
        });
        if !fits {
            return false;
        }
        let mut pool = BTreeSet::new();
        for t in &ts {
            if t.sig().len() == tail.len() {
                pool.insert(t.clone());
            } else {
                pool.extend(t.children());
            }
        }
        covered(&s, &pool, tail.len())
    })
}

fn covered(s: &Nest, pool: &BTreeSet<Nest>, depth: usize) -> bool {
    let d = s.sig().len();
    if d == depth {
        pool.contains(s)
    } else if d == depth + 1 {
        s.children().iter().all(|c| pool.contains(c))
    } else {
        s.children().iter().all(|c| covered(c, pool, depth))
    }
}

pub fn level_two_structures() -> Vec<Structure> {
    enumerate_structures(3, 2).unwrap()
}

/// A monomial ideal in `x, y` given by its staircase: `heights[i]` is the
/// number of standard monomials `x^i y^j`.
pub type Staircase = Vec<u32>;

/// All staircases (partitions) with `1..=max` boxes.
pub fn staircases(max: u32) -> Vec<Staircase> {
    fn go(rest: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Staircase>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for h in 1..=rest.min(cap) {
            prefix.push(h);
            go(rest - h, h, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(max, max, &mut Vec::new(), &mut out);
    out
}

pub fn in_staircase(st: &Staircase, i: u32, j: u32) -> bool {
    (i as usize) < st.len() && j < st[i as usize]
}

/// Minimal monomial generators `(i, j)` of the ideal with this staircase.
pub fn staircase_gens(st: &Staircase) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 0..=st.len() as u32 {
        let j = st.get(i as usize).copied().unwrap_or(0);
        let below = if i == 0 { u32::MAX } else { st[i as usize - 1] };
        if j < below {
            out.push((i, j));
        }
    }
    out
}

pub fn monomial_poly(i: u32, j: u32) -> Poly {
    Poly::term(2, vec![i, j], BigRational::one())
}

pub fn xy_vars() -> VarTable {
    VarTable::new("oracle", &["x", "y"]).unwrap()
}

/// `(I : J)` for monomial ideals: standard monomials of `I` that `J`'s
/// generators push into `I`, together with `I`'s generators. Multiplication
/// by a monomial permutes monomials, so the kernel of `f ↦ (f·g mod I)_g`
/// on the finite quotient is spanned by monomials.
pub fn colon_oracle(i: &Staircase, j: &[(u32, u32)]) -> Vec<Poly> {
    let mut gens: Vec<Poly> = staircase_gens(i).into_iter().map(|(a, b)| monomial_poly(a, b)).collect();
    for a in 0..i.len() as u32 {
        for b in 0..i[a as usize] {
            if j.iter().all(|&(c, d)| !in_staircase(i, a + c, b + d)) {
                gens.push(monomial_poly(a, b));
            }
        }
    }
    gens
}

/// Number of standard monomials of the oracle colon ideal.
pub fn colon_oracle_colength(i: &Staircase, j: &[(u32, u32)]) -> usize {
    let mut n = 0;
    for a in 0..i.len() as u32 {
        for b in 0..i[a as usize] {
            if !j.iter().all(|&(c, d)| !in_staircase(i, a + c, b + d)) {
                n += 1;
            }
        }
    }
    n
}
