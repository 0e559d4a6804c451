//! Exact polynomial algebra over the rationals.

mod colon;
mod groebner;
mod jacobian;
mod order;
mod parse;
mod polynomial;
mod reduce;
mod vars;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use colon::{colon_ideal, exact_division, intersect};
pub use groebner::{buchberger, colength, ideal_equal, ideal_member, is_groebner, reduce_basis, s_polynomial};
pub use jacobian::{invertible_on, jacobian_rank_at_origin, JacobianRank};
pub use order::{MonomialOrder, OrderKind};
pub use parse::{identifiers, parse_poly};
pub use polynomial::{cmp_polys, divides, monomial_degree, monomial_lcm, monomial_quotient, rat, Monomial, Poly};
pub use reduce::{coeff_conditions, leading_inner, normal_form, normal_form_text, normal_form_with_cofactors, Reduction};
pub use vars::{normalize_primes, VarTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("leading coefficient of `{0}` is not a unit")]
    NonUnitLeadingCoefficient(String),
    #[error("resource budget exceeded: {0}")]
    ResourceBudgetExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("monomial order does not cover variable {0}")]
    OrderNotTotal(usize),
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("`{0}` is not divisible by `{1}`")]
    InexactDivision(String, String),
    #[error("variable tables differ")]
    RingMismatch,
}

/// Caps on the size of intermediate results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_degree: u32,
    pub max_terms: usize,
    pub max_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_degree: 12, max_terms: 5000, max_pairs: 20_000 }
    }
}

impl Budget {
    pub(crate) fn check(&self, p: &Poly) -> Result<(), PolyError> {
        if p.len() > self.max_terms {
            return Err(PolyError::ResourceBudgetExceeded(format!("{} terms", p.len())));
        }
        let d = p.total_degree();
        if d > self.max_degree {
            return Err(PolyError::ResourceBudgetExceeded(format!("total degree {d}")));
        }
        Ok(())
    }
}

/// Generators over a named ring, with an optional cached Gröbner basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Ideal {
    pub vars: VarTable,
    pub gens: Vec<Poly>,
    basis: Option<(MonomialOrder, Vec<Poly>)>,
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    vars: Vec<String>,
    gens: Vec<String>,
}

impl Ideal {
    pub fn new(vars: VarTable, gens: Vec<Poly>) -> Self {
        Ideal { vars, gens, basis: None }
    }

    pub fn parse<S: AsRef<str>>(vars: VarTable, gens: &[S]) -> Result<Self, PolyError> {
        let gens = gens.iter().map(|g| parse_poly(g.as_ref(), &vars)).collect::<Result<_, _>>()?;
        Ok(Ideal::new(vars, gens))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Computes and caches a reduced Gröbner basis for `order`.
    pub fn groebner(&mut self, order: &MonomialOrder, budget: &Budget) -> Result<&[Poly], PolyError> {
        let stale = !matches!(&self.basis, Some((o, _)) if o == order);
        if stale {
            let gb = buchberger(&self.gens, order, budget)?;
            self.basis = Some((order.clone(), gb));
        }
        Ok(&self.basis.as_ref().expect("basis cached").1)
    }

    pub fn cached_basis(&self) -> Option<(&MonomialOrder, &[Poly])> {
        self.basis.as_ref().map(|(o, b)| (o, b.as_slice()))
    }

    pub fn contains(&mut self, f: &Poly, order: &MonomialOrder, budget: &Budget) -> Result<bool, PolyError> {
        let gb = self.groebner(order, budget)?;
        Ok(normal_form(f, gb, order)?.is_zero())
    }

    pub fn display_gens(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.display(&self.vars)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(IdealJson { vars: self.vars.names().to_vec(), gens: self.display_gens() })
            .expect("ideal serializes")
    }

    pub fn from_json(namespace: &str, value: &serde_json::Value) -> Result<Self, PolyError> {
        let raw: IdealJson = serde_json::from_value(value.clone()).map_err(|e| PolyError::Parse(e.to_string()))?;
        let vars = VarTable::new(namespace, &raw.vars)?;
        Ideal::parse(vars, &raw.gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let vars = VarTable::new("t", &["x", "y", "u'"]).unwrap();
        let ideal = Ideal::parse(vars, &["x^2 + u'*y", "x*y - 1/3"]).unwrap();
        let back = Ideal::from_json("t", &ideal.to_json()).unwrap();
        assert_eq!(back.gens, ideal.gens);
    }

    #[test]
    fn cached_membership() {
        let vars = VarTable::new("t", &["x", "y"]).unwrap();
        let mut ideal = Ideal::parse(vars.clone(), &["x^2", "y"]).unwrap();
        let order = MonomialOrder::graded_lex(vec![0, 1]);
        let f = parse_poly("x^3 + x*y", &vars).unwrap();
        assert!(ideal.contains(&f, &order, &Budget::default()).unwrap());
        assert!(ideal.cached_basis().is_some());
        assert!(!ideal.contains(&Poly::var(2, 0), &order, &Budget::default()).unwrap());
    }
}
