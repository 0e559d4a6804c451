use super::groebner::buchberger;
use super::order::MonomialOrder;
use super::polynomial::{divides, monomial_quotient, Poly};
use super::reduce::normal_form;
use super::{Budget, PolyError};

/// `f / g` when `g` divides `f` exactly.
pub fn exact_division(f: &Poly, g: &Poly, order: &MonomialOrder) -> Result<Poly, PolyError> {
    let (lm, lc) = {
        let (m, c) = g.leading_term(order).ok_or_else(|| PolyError::InexactDivision(format!("{f:?}"), "0".into()))?;
        (m.clone(), c.clone())
    };
    let mut p = f.clone();
    let mut q = Poly::zero(f.nvars());
    while let Some((m, c)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        if !divides(&lm, &m) {
            return Err(PolyError::InexactDivision(format!("{f:?}"), format!("{g:?}")));
        }
        let t = Poly::term(f.nvars(), monomial_quotient(&m, &lm), c / &lc);
        p = &p - &(&t * g);
        q = &q + &t;
    }
    Ok(q)
}

fn with_extra_variable(polys: &[Poly]) -> Vec<Poly> {
    polys
        .iter()
        .map(|p| {
            let n = p.nvars();
            let map: Vec<usize> = (0..n).collect();
            p.embed(n + 1, &map)
        })
        .collect()
}

fn drop_last_variable(p: &Poly) -> Poly {
    let n = p.nvars() - 1;
    Poly::from_terms(n, p.terms().map(|(m, c)| (m[..n].to_vec(), c.clone())))
}

/// Generators of `a ∩ b`, by eliminating an auxiliary variable `t` from
/// `t·a + (1 − t)·b`.
pub fn intersect(a: &[Poly], b: &[Poly], order: &MonomialOrder, budget: &Budget) -> Result<Vec<Poly>, PolyError> {
    let Some(n) = a.first().or(b.first()).map(Poly::nvars) else {
        return Ok(Vec::new());
    };
    let t = Poly::var(n + 1, n);
    let one_minus_t = &Poly::one(n + 1) - &t;
    let mut gens: Vec<Poly> = with_extra_variable(a).iter().map(|p| &t * p).collect();
    gens.extend(with_extra_variable(b).iter().map(|p| &one_minus_t * p));
    let mut precedence = vec![n];
    precedence.extend(order.precedence.iter().copied());
    let elimination = MonomialOrder::lex(precedence);
    let gb = buchberger(&gens, &elimination, budget)?;
    let kept: Vec<Poly> = gb.iter().filter(|g| !g.involves(n)).map(drop_last_variable).collect();
    buchberger(&kept, order, budget)
}

/// The ideal quotient `(i : j)`, as a reduced Gröbner basis for `order`.
pub fn colon_ideal(i: &[Poly], j: &[Poly], order: &MonomialOrder, budget: &Budget) -> Result<Vec<Poly>, PolyError> {
    let nvars = i.first().or(j.first()).map_or(0, Poly::nvars);
    let gi = buchberger(i, order, budget)?;
    let mut acc: Option<Vec<Poly>> = None;
    for f in j {
        if f.is_zero() {
            continue;
        }
        let part = if normal_form(f, &gi, order)?.is_zero() {
            vec![Poly::one(nvars)]
        } else {
            let meet = intersect(&gi, std::slice::from_ref(f), order, budget)?;
            let quotients: Vec<Poly> =
                meet.iter().map(|g| exact_division(g, f, order)).collect::<Result<_, _>>()?;
            buchberger(&quotients, order, budget)?
        };
        acc = Some(match acc {
            None => part,
            Some(prev) => intersect(&prev, &part, order, budget)?,
        });
    }
    Ok(acc.unwrap_or_else(|| vec![Poly::one(nvars)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::groebner::ideal_equal;
    use crate::poly::{parse_poly, VarTable};

    fn polys(s: &[&str]) -> Vec<Poly> {
        let vars = VarTable::new("t", &["x", "y"]).unwrap();
        s.iter().map(|t| parse_poly(t, &vars).unwrap()).collect()
    }

    fn order() -> MonomialOrder {
        MonomialOrder::graded_lex(vec![0, 1])
    }

    #[test]
    fn residual_of_point_in_fat_point() {
        let c = colon_ideal(&polys(&["x^2", "x*y", "y^2"]), &polys(&["x", "y"]), &order(), &Budget::default()).unwrap();
        assert!(ideal_equal(&c, &polys(&["x", "y"]), &order(), &Budget::default()).unwrap());
        let c = colon_ideal(&polys(&["x^2", "y"]), &polys(&["x", "y"]), &order(), &Budget::default()).unwrap();
        assert!(ideal_equal(&c, &polys(&["x", "y"]), &order(), &Budget::default()).unwrap());
    }

    #[test]
    fn colon_by_unit_and_by_member() {
        let i = polys(&["x^2 - y", "x*y"]);
        let c = colon_ideal(&i, &polys(&["1"]), &order(), &Budget::default()).unwrap();
        assert!(ideal_equal(&c, &i, &order(), &Budget::default()).unwrap());
        let c = colon_ideal(&i, &polys(&["x*y"]), &order(), &Budget::default()).unwrap();
        assert_eq!(c, polys(&["1"]));
    }

    #[test]
    fn intersection_of_coordinate_lines() {
        let meet = intersect(&polys(&["x"]), &polys(&["y"]), &order(), &Budget::default()).unwrap();
        assert_eq!(meet, polys(&["x*y"]));
        let q = exact_division(&polys(&["x^2 - y^2"])[0], &polys(&["x + y"])[0], &order()).unwrap();
        assert_eq!(q, polys(&["x - y"])[0]);
        assert!(exact_division(&polys(&["x^2 + 1"])[0], &polys(&["x + y"])[0], &order()).is_err());
    }
}
