use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::order::MonomialOrder;
use super::polynomial::{divides, monomial_lcm, monomial_quotient, Monomial, Poly};
use super::reduce::normal_form;
use super::{Budget, PolyError};

fn require_total(polys: &[Poly], order: &MonomialOrder) -> Result<(), PolyError> {
    for p in polys {
        for v in 0..p.nvars() {
            if p.involves(v) && !order.covers(v) {
                return Err(PolyError::OrderNotTotal(v));
            }
        }
    }
    Ok(())
}

fn lead(p: &Poly, order: &MonomialOrder) -> (Monomial, BigRational) {
    let (m, c) = p.leading_term(order).expect("nonzero polynomial");
    (m.clone(), c.clone())
}

/// Full reduction with a basis whose leading terms are known.
fn reduce_full(f: &Poly, basis: &[(Poly, Monomial)], order: &MonomialOrder, budget: &Budget) -> Result<Poly, PolyError> {
    let mut p = f.clone();
    let mut rem = Poly::zero(f.nvars());
    while let Some((m, c)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        match basis.iter().find(|(_, lm)| divides(lm, &m)) {
            Some((g, lm)) => {
                let shift = monomial_quotient(&m, lm);
                p = &p - &g.mul_term(&shift, &c);
                budget.check(&p)?;
            }
            None => {
                rem.add_term(m.clone(), c.clone());
                p.add_term(m, -c);
            }
        }
    }
    Ok(rem)
}

pub fn s_polynomial(f: &Poly, g: &Poly, order: &MonomialOrder) -> Poly {
    let (mf, cf) = lead(f, order);
    let (mg, cg) = lead(g, order);
    let l = monomial_lcm(&mf, &mg);
    let a = f.mul_term(&monomial_quotient(&l, &mf), &cf.recip());
    let b = g.mul_term(&monomial_quotient(&l, &mg), &cg.recip());
    &a - &b
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// increasing leading monomial. The order must cover every variable used.
pub fn buchberger(gens: &[Poly], order: &MonomialOrder, budget: &Budget) -> Result<Vec<Poly>, PolyError> {
    require_total(gens, order)?;
    let mut basis: Vec<(Poly, Monomial)> = Vec::new();
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        budget.check(g)?;
        let r = reduce_full(g, &basis, order, budget)?;
        if r.is_zero() {
            continue;
        }
        let r = r.monic(order);
        let lm = lead(&r, order).0;
        let k = basis.len();
        for i in 0..k {
            pairs.insert((i, k));
        }
        basis.push((r, lm));
    }
    let mut processed = 0usize;
    while !pairs.is_empty() {
        processed += 1;
        if processed > budget.max_pairs {
            return Err(PolyError::ResourceBudgetExceeded(format!("{processed} critical pairs")));
        }
        // Normal selection strategy: smallest lcm first.
        let &(i, j) = pairs
            .iter()
            .min_by(|a, b| {
                let la = monomial_lcm(&basis[a.0].1, &basis[a.1].1);
                let lb = monomial_lcm(&basis[b.0].1, &basis[b.1].1);
                order.cmp(&la, &lb).then(a.cmp(b))
            })
            .expect("nonempty");
        pairs.remove(&(i, j));
        let (li, lj) = (&basis[i].1, &basis[j].1);
        if coprime(li, lj) {
            continue;
        }
        let l = monomial_lcm(li, lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(&basis[k].1, &l)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i].0, &basis[j].0, order);
        let r = reduce_full(&s, &basis, order, budget)?;
        if r.is_zero() {
            continue;
        }
        let r = r.monic(order);
        budget.check(&r)?;
        let lm = lead(&r, order).0;
        let k = basis.len();
        for i in 0..k {
            pairs.insert((i, k));
        }
        basis.push((r, lm));
    }
    reduce_basis(basis.into_iter().map(|(p, _)| p).collect(), order, budget)
}

/// Minimalizes and inter-reduces a Gröbner basis.
pub fn reduce_basis(basis: Vec<Poly>, order: &MonomialOrder, budget: &Budget) -> Result<Vec<Poly>, PolyError> {
    let mut items: Vec<(Poly, Monomial)> =
        basis.into_iter().filter(|p| !p.is_zero()).map(|p| {
            let m = lead(&p, order).0;
            (p.monic(order), m)
        }).collect();
    items.sort_by(|a, b| order.cmp(&a.1, &b.1));
    let mut minimal: Vec<(Poly, Monomial)> = Vec::new();
    for (k, (p, m)) in items.iter().enumerate() {
        let redundant = items
            .iter()
            .enumerate()
            .any(|(j, (_, other))| j != k && divides(other, m) && (other != m || j < k));
        if !redundant {
            minimal.push((p.clone(), m.clone()));
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let (p, m) = &minimal[k];
        let others: Vec<(Poly, Monomial)> =
            minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, x)| x.clone()).collect();
        let (_, c) = lead(p, order);
        let mut tail = p.clone();
        tail.add_term(m.clone(), -c.clone());
        let tail = reduce_full(&tail, &others, order, budget)?;
        let mut reduced = tail;
        reduced.add_term(m.clone(), c);
        out.push(reduced.monic(order));
    }
    out.sort_by(|a, b| order.cmp(lead(a, order).0.as_slice(), lead(b, order).0.as_slice()));
    Ok(out)
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner(basis: &[Poly], order: &MonomialOrder) -> Result<bool, PolyError> {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j], order);
            if !normal_form(&s, basis, order)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn ideal_member(f: &Poly, gens: &[Poly], order: &MonomialOrder, budget: &Budget) -> Result<bool, PolyError> {
    let gb = buchberger(gens, order, budget)?;
    Ok(normal_form(f, &gb, order)?.is_zero())
}

/// Equality by mutual membership of generators.
pub fn ideal_equal(a: &[Poly], b: &[Poly], order: &MonomialOrder, budget: &Budget) -> Result<bool, PolyError> {
    let ga = buchberger(a, order, budget)?;
    let gb = buchberger(b, order, budget)?;
    for f in b {
        if !normal_form(f, &ga, order)?.is_zero() {
            return Ok(false);
        }
    }
    for f in a {
        if !normal_form(f, &gb, order)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Vector-space dimension of the quotient by a Gröbner basis, counted on
/// the staircase of leading monomials in the variables of `order`.
pub fn colength(gb: &[Poly], order: &MonomialOrder) -> Result<usize, PolyError> {
    if gb.iter().any(|g| g.as_constant().is_some_and(|c| !c.is_zero())) {
        return Ok(0);
    }
    let leads: Vec<Monomial> = gb.iter().map(|g| lead(g, order).0).collect();
    let vars = &order.precedence;
    let mut bounds = Vec::with_capacity(vars.len());
    for &v in vars {
        let pure = leads
            .iter()
            .filter(|m| m.iter().enumerate().all(|(i, e)| i == v || *e == 0))
            .map(|m| m[v])
            .min()
            .ok_or(PolyError::NotZeroDimensional)?;
        bounds.push(pure);
    }
    let nvars = gb.first().map_or(0, |g| g.nvars());
    let mut count = 0usize;
    let mut current = vec![0u32; vars.len()];
    loop {
        let mut m = vec![0; nvars];
        for (k, &v) in vars.iter().enumerate() {
            m[v] = current[k];
        }
        if !leads.iter().any(|l| divides(l, &m)) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == vars.len() {
                return Ok(count);
            }
            current[k] += 1;
            if current[k] < bounds[k] {
                break;
            }
            current[k] = 0;
            k += 1;
        }
    }
}

#[allow(dead_code)]
fn is_unit_ideal(gb: &[Poly]) -> bool {
    gb.len() == 1 && gb[0].as_constant().is_some_and(|c| c.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, VarTable};

    fn polys(vars: &VarTable, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|t| parse_poly(t, vars).unwrap()).collect()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let vars = VarTable::new("t", &["x", "y"]).unwrap();
        let order = MonomialOrder::graded_lex(vec![0, 1]);
        let gens = polys(&vars, &["x^2", "x*y", "y^2"]);
        let gb = buchberger(&gens, &order, &Budget::default()).unwrap();
        assert!(ideal_equal(&gb, &gens, &order, &Budget::default()).unwrap());
        assert_eq!(gb.len(), 3);
        assert_eq!(colength(&gb, &order).unwrap(), 3);
    }

    #[test]
    fn textbook_basis() {
        let vars = VarTable::new("t", &["x", "y"]).unwrap();
        let order = MonomialOrder::graded_lex(vec![0, 1]);
        let gens = polys(&vars, &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"]);
        let gb = buchberger(&gens, &order, &Budget::default()).unwrap();
        assert!(is_groebner(&gb, &order).unwrap());
        let expected = polys(&vars, &["x^2", "x*y", "y^2 - x/2"]);
        assert_eq!(gb, buchberger(&expected, &order, &Budget::default()).unwrap());
        assert!(ideal_equal(&polys(&vars, &["x", "y"]), &polys(&vars, &["y", "x"]), &order, &Budget::default()).unwrap());
    }

    #[test]
    fn unit_and_dimension() {
        let vars = VarTable::new("t", &["x", "y"]).unwrap();
        let order = MonomialOrder::lex(vec![0, 1]);
        let gb = buchberger(&polys(&vars, &["x", "x - 1"]), &order, &Budget::default()).unwrap();
        assert!(is_unit_ideal(&gb));
        assert_eq!(colength(&gb, &order).unwrap(), 0);
        let gb = buchberger(&polys(&vars, &["x^2"]), &order, &Budget::default()).unwrap();
        assert_eq!(colength(&gb, &order), Err(PolyError::NotZeroDimensional));
    }

    #[test]
    fn budget_and_total_order() {
        let vars = VarTable::new("t", &["x", "y"]).unwrap();
        let tight = Budget { max_degree: 2, ..Budget::default() };
        let order = MonomialOrder::graded_lex(vec![0, 1]);
        let gens = polys(&vars, &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"]);
        assert!(matches!(buchberger(&gens, &order, &tight), Err(PolyError::ResourceBudgetExceeded(_))));
        let partial = MonomialOrder::graded_lex(vec![0]);
        assert_eq!(buchberger(&gens, &partial, &Budget::default()), Err(PolyError::OrderNotTotal(1)));
    }
}
