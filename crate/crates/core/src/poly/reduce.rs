use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;

use super::order::MonomialOrder;
use super::polynomial::{divides, monomial_quotient, Monomial, Poly};
use super::vars::VarTable;
use super::PolyError;

fn inner_part(m: &[u32], order: &MonomialOrder) -> Monomial {
    let mut out = vec![0; m.len()];
    for &i in &order.precedence {
        out[i] = m[i];
    }
    out
}

fn outer_part(m: &[u32], order: &MonomialOrder) -> Monomial {
    let mut out = m.to_vec();
    for &i in &order.precedence {
        out[i] = 0;
    }
    out
}

/// Groups the terms of `f` by their inner monomial; each group is a
/// polynomial in the outer variables.
fn group_inner(f: &Poly, order: &MonomialOrder) -> BTreeMap<Monomial, Poly> {
    let mut groups: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in f.terms() {
        groups
            .entry(inner_part(m, order))
            .or_insert_with(|| Poly::zero(f.nvars()))
            .add_term(outer_part(m, order), c.clone());
    }
    groups
}

/// Leading inner monomial and its coefficient, which must be a nonzero
/// constant.
pub fn leading_inner(g: &Poly, order: &MonomialOrder) -> Result<Option<(Monomial, num_rational::BigRational)>, PolyError> {
    let groups = group_inner(g, order);
    let Some((m, coeff)) = groups.into_iter().max_by(|a, b| order.cmp(&a.0, &b.0)) else {
        return Ok(None);
    };
    match coeff.as_constant() {
        Some(c) if !c.is_zero() => Ok(Some((m, c))),
        _ => Err(PolyError::NonUnitLeadingCoefficient(format!("{g:?}"))),
    }
}

/// A remainder together with cofactors: `f = Σ cofactors[i]·basis[i] + remainder`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub remainder: Poly,
    pub cofactors: Vec<Poly>,
}

/// Full reduction of `f` by `basis`. Only the variables listed in `order`
/// are reduced; the others behave as scalars.
pub fn normal_form_with_cofactors(f: &Poly, basis: &[Poly], order: &MonomialOrder) -> Result<Reduction, PolyError> {
    let nvars = f.nvars();
    let mut leads = Vec::with_capacity(basis.len());
    for g in basis {
        leads.push(leading_inner(g, order)?);
    }
    let mut cofactors = vec![Poly::zero(nvars); basis.len()];
    let mut p = f.clone();
    loop {
        let groups = group_inner(&p, order);
        let mut keys: Vec<&Monomial> = groups.keys().collect();
        keys.sort_by(|a, b| order.cmp(b, a));
        let mut step = None;
        'search: for m in keys {
            for (i, lead) in leads.iter().enumerate() {
                if let Some((lm, lc)) = lead {
                    if divides(lm, m) {
                        step = Some((i, monomial_quotient(m, lm), groups[m].scale(&lc.recip())));
                        break 'search;
                    }
                }
            }
        }
        let Some((i, shift, coeff)) = step else {
            return Ok(Reduction { remainder: p, cofactors });
        };
        let q = coeff.mul_term(&shift, &num_rational::BigRational::from_integer(1.into()));
        p = &p - &(&q * &basis[i]);
        cofactors[i] = &cofactors[i] + &q;
    }
}

pub fn normal_form(f: &Poly, basis: &[Poly], order: &MonomialOrder) -> Result<Poly, PolyError> {
    Ok(normal_form_with_cofactors(f, basis, order)?.remainder)
}

/// Coefficients of `f` as a polynomial in `inner`, highest inner monomial
/// first (graded order on `inner`).
pub fn coeff_conditions(f: &Poly, inner: &[usize]) -> Vec<Poly> {
    let order = MonomialOrder::graded_lex(inner.to_vec());
    let mut groups: Vec<(Monomial, Poly)> = group_inner(f, &order).into_iter().collect();
    groups.sort_by(|a, b| match order.cmp(&b.0, &a.0) {
        Ordering::Equal => a.0.cmp(&b.0),
        other => other,
    });
    groups.into_iter().map(|(_, c)| c).filter(|c| !c.is_zero()).collect()
}

/// Convenience for tests and the CLI: reduces text input.
pub fn normal_form_text(f: &str, basis: &[&str], inner: &[&str], vars: &VarTable, grlex: bool) -> Result<Poly, PolyError> {
    let f = super::parse_poly(f, vars)?;
    let basis: Vec<Poly> = basis.iter().map(|b| super::parse_poly(b, vars)).collect::<Result<_, _>>()?;
    let inner = vars.indices(inner)?;
    let order = if grlex { MonomialOrder::graded_lex(inner) } else { MonomialOrder::lex(inner) };
    normal_form(&f, &basis, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn table() -> VarTable {
        VarTable::new("t", &["x", "y", "a", "b", "c", "d", "u", "v", "w"]).unwrap()
    }

    #[test]
    fn first_division_of_the_twelve_chart() {
        let vars = table();
        let r = normal_form_text("x^2+u*x+v*y+w", &["x^2+a*x+b", "y-c*x-d"], &["y", "x"], &vars, true).unwrap();
        let expected = parse_poly("(u-a+c*v)*x + v*d + w - b", &vars).unwrap();
        assert_eq!(r, expected);
        let x = vars.require("x").unwrap();
        let y = vars.require("y").unwrap();
        let conds = coeff_conditions(&r, &[x, y]);
        assert_eq!(conds, vec![parse_poly("u-a+c*v", &vars).unwrap(), parse_poly("v*d+w-b", &vars).unwrap()]);
    }

    #[test]
    fn i1_division() {
        let vars = VarTable::new("r1", &["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "l", "m", "u", "v"]).unwrap();
        let basis = ["a-e*c-f", "b-g*c-h", "c^2-i*c-j", "d-l*c-m"];
        let r = normal_form_text("c*v+u-a", &basis, &["a", "b", "d", "c"], &vars, true).unwrap();
        assert_eq!(r, parse_poly("(u-f)+c*(v-e)", &vars).unwrap());
        let c = vars.require("c").unwrap();
        assert_eq!(coeff_conditions(&r, &[c]), vec![parse_poly("v-e", &vars).unwrap(), parse_poly("u-f", &vars).unwrap()]);
    }

    #[test]
    fn cofactors_reconstruct() {
        let vars = table();
        let basis: Vec<Poly> = ["x^2+a*x+b", "y-c*x-d"].iter().map(|s| parse_poly(s, &vars).unwrap()).collect();
        let f = parse_poly("x^3*y + u*y^2 - w", &vars).unwrap();
        let order = MonomialOrder::graded_lex(vec![1, 0]);
        let red = normal_form_with_cofactors(&f, &basis, &order).unwrap();
        let mut sum = red.remainder.clone();
        for (q, g) in red.cofactors.iter().zip(&basis) {
            sum = &sum + &(q * g);
        }
        assert_eq!(sum, f);
    }

    #[test]
    fn non_unit_lead_is_rejected() {
        let vars = table();
        let r = normal_form_text("x", &["a*x+b"], &["x"], &vars, true);
        assert!(matches!(r, Err(PolyError::NonUnitLeadingCoefficient(_))));
        assert!(coeff_conditions(&Poly::zero(9), &[0]).is_empty());
    }
}
