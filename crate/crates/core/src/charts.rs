//! Universal ideals of the punctual Hilbert scheme charts and the incidence
//! loci between them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::poly::{
    buchberger, coeff_conditions, colength, invertible_on, jacobian_rank_at_origin, normal_form, parse_poly, Budget,
    MonomialOrder, Poly, PolyError, VarTable,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("syzygy conditions are inconsistent: {0}")]
    InconsistentSyzygy(String),
    #[error("{target}: {check} fails for `{generator}`")]
    VerificationMismatch { target: String, check: String, generator: String },
    #[error("{target} is only implemented for dim 2, got {dim}")]
    UnsupportedDimension { target: String, dim: usize },
    #[error("unknown chart target `{0}`")]
    UnknownTarget(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChartTarget {
    #[serde(rename = "R_12_123")]
    R12With123,
    #[serde(rename = "R1_123")]
    R1Over123,
    #[serde(rename = "R123_123")]
    R123Over123,
}

impl ChartTarget {
    pub const ALL: [ChartTarget; 3] = [ChartTarget::R12With123, ChartTarget::R1Over123, ChartTarget::R123Over123];

    pub fn name(self) -> &'static str {
        match self {
            ChartTarget::R12With123 => "R_12_123",
            ChartTarget::R1Over123 => "R1_123",
            ChartTarget::R123Over123 => "R123_123",
        }
    }
}

impl fmt::Display for ChartTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChartTarget {
    type Err = ChartError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let indices: Vec<&str> = s
            .strip_prefix('R')
            .unwrap_or("")
            .split(|c: char| !c.is_ascii_digit())
            .filter(|t| !t.is_empty())
            .collect();
        match indices.as_slice() {
            ["12", "123"] => Ok(ChartTarget::R12With123),
            ["1", "123"] => Ok(ChartTarget::R1Over123),
            ["123", "123"] => Ok(ChartTarget::R123Over123),
            _ => Err(ChartError::UnknownTarget(s.into())),
        }
    }
}

/// How `w, w′, w″` enter the computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WMode {
    /// Replaced by the polynomials of [`solve_w`].
    Substituted,
    /// Kept as independent variables.
    SymbolicW,
}

impl FromStr for WMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "substituted" => Ok(WMode::Substituted),
            "symbolic-w" | "symbolic" => Ok(WMode::SymbolicW),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

const W_NAMES: [&str; 3] = ["w", "w'", "w''"];
const HILB3_PARAMS: [&str; 6] = ["u", "u'", "u''", "v", "v'", "v''"];

/// Rewrites `p` from the ring of `from` into the ring of `to`, matching
/// variables by name.
fn transfer(p: &Poly, from: &VarTable, to: &VarTable) -> Result<Poly, PolyError> {
    let map = from
        .names()
        .iter()
        .enumerate()
        .map(|(i, n)| if p.involves(i) { to.require(n) } else { Ok(to.index(n).unwrap_or(0)) })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(p.embed(to.len(), &map))
}

/// The polynomials `w, w′, w″` in `u, u′, u″, v, v′, v″`.
#[derive(Debug, Clone, PartialEq)]
pub struct WSolution {
    pub vars: VarTable,
    pub w: [Poly; 3],
}

impl WSolution {
    pub fn display(&self) -> [String; 3] {
        [self.w[0].display(&self.vars), self.w[1].display(&self.vars), self.w[2].display(&self.vars)]
    }

    /// Substitutes the solution into `p`, a polynomial over `vars`.
    pub fn substitute_into(&self, p: &Poly, vars: &VarTable) -> Result<Poly, PolyError> {
        let mut out = p.clone();
        for (k, name) in W_NAMES.iter().enumerate() {
            if let Some(i) = vars.index(name) {
                out = out.substitute(i, &transfer(&self.w[k], &self.vars, vars)?);
            }
        }
        Ok(out)
    }
}

fn hilb3_ring() -> VarTable {
    let mut names = vec!["x", "y"];
    names.extend(HILB3_PARAMS);
    names.extend(W_NAMES);
    VarTable::new("H3", &names).expect("distinct names")
}

fn hilb3_generators(vars: &VarTable) -> Vec<Poly> {
    ["x^2 + u*x + v*y + w", "x*y + u'*x + v'*y + w'", "y^2 + u''*x + v''*y + w''"]
        .iter()
        .map(|s| parse_poly(s, vars).expect("fixed generator"))
        .collect()
}

/// The two syzygy remainders `y·F1 − x·F2` and `y·F2 − x·F3` modulo
/// `(F1, F2, F3)`, over the ring of [`hilb3_ring`].
fn syzygy_remainders(vars: &VarTable, gens: &[Poly]) -> Result<Vec<Poly>, PolyError> {
    let x = Poly::var(vars.len(), 0);
    let y = Poly::var(vars.len(), 1);
    let order = MonomialOrder::graded_lex(vec![0, 1]);
    let s1 = &(&y * &gens[0]) - &(&x * &gens[1]);
    let s2 = &(&y * &gens[1]) - &(&x * &gens[2]);
    Ok(vec![normal_form(&s1, gens, &order)?, normal_form(&s2, gens, &order)?])
}

/// Derives `w, w′, w″` by forcing both syzygies to reduce to zero.
pub fn solve_w() -> Result<WSolution, ChartError> {
    let vars = hilb3_ring();
    let gens = hilb3_generators(&vars);
    let mut conditions: Vec<Poly> = Vec::new();
    for r in syzygy_remainders(&vars, &gens)? {
        conditions.extend(coeff_conditions(&r, &[0, 1]));
    }
    let w_index: Vec<usize> = W_NAMES.iter().map(|n| vars.require(n)).collect::<Result<_, _>>()?;
    let mut solved: [Option<Poly>; 3] = [None, None, None];
    loop {
        let pick = conditions.iter().enumerate().find_map(|(ci, c)| {
            w_index.iter().enumerate().find_map(|(k, &wi)| {
                if c.degree_in(wi) != 1 {
                    return None;
                }
                let mut unit = vec![0; vars.len()];
                unit[wi] = 1;
                let coeff = c.coefficient(&unit);
                let rest = c - &Poly::term(vars.len(), unit, coeff.clone());
                (!coeff.is_zero() && !rest.involves(wi)).then(|| (ci, k, rest.scale(&(-coeff.recip()))))
            })
        });
        let Some((ci, k, value)) = pick else { break };
        conditions.remove(ci);
        let wi = w_index[k];
        conditions = conditions.iter().map(|c| c.substitute(wi, &value)).filter(|c| !c.is_zero()).collect();
        for s in solved.iter_mut().flatten() {
            *s = s.substitute(wi, &value);
        }
        solved[k] = Some(value);
    }
    if let Some(c) = conditions.first() {
        return Err(ChartError::InconsistentSyzygy(c.display(&vars)));
    }
    let [Some(w), Some(w1), Some(w2)] = solved else {
        return Err(ChartError::InconsistentSyzygy("underdetermined".into()));
    };
    let solution = WSolution { vars, w: [w, w1, w2] };
    for w in &solution.w {
        if w.total_degree() > 2 || !w.constant_term().is_zero() || w.linear_part().iter().any(|c| !c.is_zero()) {
            return Err(ChartError::InconsistentSyzygy(w.display(&solution.vars)));
        }
    }
    Ok(solution)
}

/// Whether both syzygy remainders vanish identically once `solution` is
/// substituted.
pub fn syzygies_vanish(solution: &WSolution) -> Result<bool, ChartError> {
    let vars = &solution.vars;
    let gens: Vec<Poly> =
        hilb3_generators(vars).iter().map(|g| solution.substitute_into(g, vars)).collect::<Result<_, _>>()?;
    Ok(syzygy_remainders(vars, &gens)?.iter().all(Poly::is_zero))
}

/// Coefficient conditions of the normal forms of `outer` modulo the marked
/// basis `inner_basis`, taken in the variables of `order`.
pub fn incidence_locus(outer: &[Poly], inner_basis: &[Poly], order: &MonomialOrder) -> Result<Vec<Poly>, PolyError> {
    let mut out: Vec<Poly> = Vec::new();
    for f in outer {
        let r = normal_form(f, inner_basis, order)?;
        for c in coeff_conditions(&r, &order.precedence) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// One incidence computation: a ring, the containing family, the marked
/// basis, and the expected ideal.
#[derive(Debug, Clone)]
pub struct Chart {
    pub target: ChartTarget,
    pub dim: usize,
    pub vars: VarTable,
    pub inner_order: MonomialOrder,
    pub outer: Vec<Poly>,
    pub basis: Vec<Poly>,
    pub stated: Vec<Poly>,
    pub stated_free: Vec<usize>,
    /// Lex precedence on the parameters: pivots first, then `w`s, then the
    /// free variables.
    pub elimination: Vec<usize>,
}

fn indexed(prefix: &str, dim: usize) -> Vec<String> {
    (1..=dim.saturating_sub(2)).map(|k| format!("{prefix}_{k}")).collect()
}

fn family(templates: &[&str], dim: usize) -> Vec<String> {
    (1..=dim.saturating_sub(2)).flat_map(|k| templates.iter().map(move |t| t.replace("{k}", &k.to_string()))).collect()
}

impl Chart {
    pub fn new(target: ChartTarget, dim: usize) -> Result<Chart, ChartError> {
        if dim < 2 || (target != ChartTarget::R12With123 && dim != 2) {
            return Err(ChartError::UnsupportedDimension { target: target.name().into(), dim });
        }
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<String>>();
        let (inner, inner_lex, pivots, free, outer, basis, stated) = match target {
            ChartTarget::R12With123 => {
                let mut inner = indexed("z", dim);
                inner.extend(s(&["y", "x"]));
                let mut pivots = s(&["b", "u", "u'", "u''"]);
                pivots.extend(indexed("e", dim));
                pivots.extend(indexed("f", dim));
                let mut free = s(&["a", "c", "d", "v", "v'", "v''"]);
                for p in ["rho", "sigma", "theta"] {
                    free.extend(indexed(p, dim));
                }
                let mut outer = s(&["x^2 + u*x + v*y + w", "x*y + u'*x + v'*y + w'", "y^2 + u''*x + v''*y + w''"]);
                outer.extend(family(&["z_{k} + rho_{k}*x + sigma_{k}*y + theta_{k}"], dim));
                let mut basis = s(&["x^2 + a*x + b", "y - c*x - d"]);
                basis.extend(family(&["z_{k} - e_{k}*x - f_{k}"], dim));
                let mut stated = s(&["u - a + c*v", "b - d*v - w", "u' - a*c + c*v' + d", "2*c*d + c*v'' + u'' - a*c^2"]);
                stated.extend(family(&["e_{k} + sigma_{k}*c + rho_{k}", "f_{k} + theta_{k} + sigma_{k}*d"], dim));
                (inner, false, pivots, free, outer, basis, stated)
            }
            ChartTarget::R1Over123 => (
                s(&["a", "b", "d", "c"]),
                false,
                s(&["h", "g", "v''", "u''", "u", "v", "l", "m"]),
                s(&["u'", "v'", "e", "f", "i", "j"]),
                s(&["u - a + c*v", "b - d*v - w", "u' - a*c + c*v' + d", "2*c*d + c*v'' + u'' - a*c^2"]),
                s(&["a - e*c - f", "b - g*c - h", "c^2 - i*c - j", "d - l*c - m"]),
                s(&[
                    "e - v",
                    "u - f",
                    "g - l*v",
                    "h - w - v*m",
                    "l + v' - f - e*i",
                    "m + u' - e*j",
                    "i*(l - v') + 2*m + v'' - e*j",
                    "j*(l - v') + u''",
                ]),
            ),
            ChartTarget::R123Over123 => (
                s(&["a", "b", "d", "c"]),
                true,
                s(&["h", "i", "j", "u", "v", "v'", "u'", "u''", "v''", "g", "f", "e"]),
                s(&["l", "m", "n", "o", "p", "q"]),
                s(&["u - a + c*v", "b - d*v - w", "u' - a*c + c*v' + d", "2*c*d + c*v'' + u'' - a*c^2"]),
                s(&["a - e*c^2 - f*c - g", "b - h*c^2 - i*c - j", "c^3 - l*c^2 - m*c - n", "d - o*c^2 - p*c - q"]),
                s(&[
                    "e",
                    "g - u",
                    "f - v",
                    "v*o - h",
                    "v*p - i",
                    "v*q + w - j",
                    "o - f",
                    "p + v' - g",
                    "q + u'",
                    "(2*o - f)*l + 2*p - g",
                    "(2*o - f)*m + 2*q + v''",
                    "(2*o - f)*n + u''",
                ]),
            ),
        };
        let mut names = inner.clone();
        names.extend(pivots.iter().cloned());
        names.extend(W_NAMES.iter().map(|w| w.to_string()));
        names.extend(free.iter().cloned());
        let vars = VarTable::new(target.name(), &names)?;
        let parse_all =
            |list: &[String]| list.iter().map(|g| parse_poly(g, &vars)).collect::<Result<Vec<Poly>, PolyError>>();
        let inner_idx = vars.indices(&inner)?;
        let inner_order =
            if inner_lex { MonomialOrder::lex(inner_idx) } else { MonomialOrder::graded_lex(inner_idx) };
        let mut elimination = vars.indices(&pivots)?;
        elimination.extend(vars.indices(&W_NAMES)?);
        elimination.extend(vars.indices(&free)?);
        Ok(Chart {
            target,
            dim,
            outer: parse_all(&outer)?,
            basis: parse_all(&basis)?,
            stated: parse_all(&stated)?,
            stated_free: vars.indices(&free)?,
            inner_order,
            elimination,
            vars,
        })
    }

    /// Parameters of the incidence locus: every non-inner variable, minus
    /// the `w`s once they are substituted.
    pub fn parameters(&self, mode: WMode) -> Vec<usize> {
        self.elimination
            .iter()
            .copied()
            .filter(|&i| mode == WMode::SymbolicW || !W_NAMES.contains(&self.vars.name(i)))
            .collect()
    }

    pub fn display(&self, polys: &[Poly]) -> Vec<String> {
        polys.iter().map(|p| p.display(&self.vars)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub target: ChartTarget,
    pub dim: usize,
    pub mode: WMode,
    #[serde(rename = "variables")]
    pub nvars: usize,
    pub computed: Vec<String>,
    pub stated: Vec<String>,
    #[serde(rename = "stated_contained")]
    pub stated_generators_contained: bool,
    #[serde(rename = "extra_absorbed")]
    pub extra_generators_absorbed: bool,
    /// Computed generators that do not lie in the ideal of the listed ones.
    pub unabsorbed: Vec<String>,
    #[serde(rename = "rank")]
    pub jacobian_rank: usize,
    #[serde(rename = "dimension")]
    pub smooth_dimension: usize,
    pub expected_dimension: usize,
    pub free_variables: Vec<String>,
    pub stated_free_variables: Vec<String>,
    pub free_variable_check: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn passed(&self) -> bool {
        self.stated_generators_contained
            && self.extra_generators_absorbed
            && self.smooth_dimension == self.expected_dimension
            && self.free_variable_check
    }
}

fn members_outside(polys: &[Poly], gb: &[Poly], order: &MonomialOrder) -> Result<Vec<Poly>, PolyError> {
    let mut out = Vec::new();
    for p in polys {
        if !normal_form(p, gb, order)?.is_zero() {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// Computes the incidence locus of `target` and compares it with the
/// listed ideal. In substituted mode every check must hold; in symbolic
/// mode only the containment of the listed generators is enforced.
pub fn verify_chart(target: ChartTarget, dim: usize, mode: WMode) -> Result<VerificationReport, ChartError> {
    let chart = Chart::new(target, dim)?;
    let budget = Budget::default();
    let w = solve_w()?;
    let prepare = |polys: &[Poly]| -> Result<Vec<Poly>, PolyError> {
        match mode {
            WMode::SymbolicW => Ok(polys.to_vec()),
            WMode::Substituted => polys.iter().map(|p| w.substitute_into(p, &chart.vars)).collect(),
        }
    };
    let outer = prepare(&chart.outer)?;
    let computed = incidence_locus(&outer, &chart.basis, &chart.inner_order)?;
    let stated = prepare(&chart.stated)?;

    let order = MonomialOrder::lex(chart.parameters(WMode::SymbolicW));
    let computed_gb = buchberger(&computed, &order, &budget)?;
    let stated_gb = buchberger(&stated, &order, &budget)?;
    let missing = members_outside(&stated, &computed_gb, &order)?;
    let unabsorbed = members_outside(&computed, &stated_gb, &order)?;

    let params = chart.parameters(mode);
    let jac = jacobian_rank_at_origin(&computed, &params, &chart.stated_free);
    let complement: Vec<usize> = params.iter().copied().filter(|v| !chart.stated_free.contains(v)).collect();
    let report = VerificationReport {
        target,
        dim,
        mode,
        nvars: params.len(),
        computed: chart.display(&computed),
        stated: chart.display(&stated),
        stated_generators_contained: missing.is_empty(),
        extra_generators_absorbed: unabsorbed.is_empty(),
        unabsorbed: chart.display(&unabsorbed),
        jacobian_rank: jac.rank,
        smooth_dimension: params.len() - jac.rank,
        expected_dimension: 3 * dim,
        free_variables: jac.free.iter().map(|&i| chart.vars.name(i).to_string()).collect(),
        stated_free_variables: chart.stated_free.iter().map(|&i| chart.vars.name(i).to_string()).collect(),
        free_variable_check: invertible_on(&computed, &complement),
    };
    let mismatch = |check: &str, generator: String| ChartError::VerificationMismatch {
        target: target.name().into(),
        check: check.into(),
        generator,
    };
    if let Some(p) = missing.first() {
        return Err(mismatch("containment of listed generators", p.display(&chart.vars)));
    }
    if mode == WMode::Substituted {
        if let Some(p) = unabsorbed.first() {
            return Err(mismatch("absorption of computed generators", p.display(&chart.vars)));
        }
        if report.smooth_dimension != report.expected_dimension || !report.free_variable_check {
            return Err(mismatch("jacobian", format!("rank {} over {}", report.jacobian_rank, report.nvars)));
        }
    }
    Ok(report)
}

/// The three verifications, run in parallel.
pub fn verify_all(dim: usize, mode: WMode) -> Vec<(ChartTarget, Result<VerificationReport, ChartError>)> {
    ChartTarget::ALL.par_iter().map(|&t| (t, verify_chart(t, dim, mode))).collect()
}

/// Colength of the specialization of `gens` at `values`, computed on the
/// staircase of a Gröbner basis in the variables of `inner`.
pub fn colength_probe(gens: &[Poly], inner: &MonomialOrder, values: &[(usize, BigRational)]) -> Result<usize, PolyError> {
    let specialized: Vec<Poly> = gens.iter().map(|g| g.partial_eval(values)).collect();
    let order = MonomialOrder::graded_lex(inner.precedence.clone());
    let gb = buchberger(&specialized, &order, &Budget::default())?;
    colength(&gb, &order)
}

/// A small random rational, never with a zero denominator.
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=5);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Colengths of `I_123` (with derived `w`s) at `count` random parameter
/// points drawn from a seeded generator.
pub fn hilb3_colength_samples(seed: u64, count: usize) -> Result<Vec<usize>, ChartError> {
    let w = solve_w()?;
    let vars = &w.vars;
    let gens: Vec<Poly> =
        hilb3_generators(vars).iter().map(|g| w.substitute_into(g, vars)).collect::<Result<_, _>>()?;
    let params = vars.indices(&HILB3_PARAMS)?;
    let inner = MonomialOrder::graded_lex(vec![0, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let values: Vec<(usize, BigRational)> = params.iter().map(|&p| (p, random_rational(&mut rng))).collect();
        out.push(colength_probe(&gens, &inner, &values)?);
    }
    Ok(out)
}

/// `I_123` over `x, y` and the six parameters, `w`s substituted.
pub fn hilb3_ideal() -> Result<(VarTable, Vec<Poly>), ChartError> {
    let w = solve_w()?;
    let gens = hilb3_generators(&w.vars).iter().map(|g| w.substitute_into(g, &w.vars)).collect::<Result<_, _>>()?;
    Ok((w.vars.clone(), gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn target_names_round_trip() {
        for t in ChartTarget::ALL {
            assert_eq!(t.name().parse::<ChartTarget>().unwrap(), t);
        }
        assert_eq!("R^1_{123}".parse::<ChartTarget>().unwrap(), ChartTarget::R1Over123);
        assert!("R_9".parse::<ChartTarget>().is_err());
    }

    #[test]
    fn replay_of_the_second_division() {
        let chart = Chart::new(ChartTarget::R1Over123, 2).unwrap();
        let v = &chart.vars;
        let lhs = parse_poly("d*v + w - b", v).unwrap();
        let d = parse_poly("l*c + m", v).unwrap();
        let b = parse_poly("g*c + h", v).unwrap();
        let replayed = lhs.substitute(v.require("d").unwrap(), &d).substitute(v.require("b").unwrap(), &b);
        assert_eq!(replayed, parse_poly("l*c*v + m*v + w - g*c - h", v).unwrap());
    }

    #[test]
    fn zero_parameters_give_the_fat_point() {
        let (vars, gens) = hilb3_ideal().unwrap();
        let values: Vec<(usize, BigRational)> = (2..8).map(|i| (i, rat(0))).collect();
        let order = MonomialOrder::graded_lex(vec![0, 1]);
        assert_eq!(colength_probe(&gens, &order, &values).unwrap(), 3);
        assert_eq!(vars.len(), 11);
    }

    #[test]
    fn twelve_chart_at_origin_is_a_double_point() {
        let chart = Chart::new(ChartTarget::R12With123, 2).unwrap();
        let values: Vec<(usize, BigRational)> = chart.elimination.iter().map(|&i| (i, rat(0))).collect();
        assert_eq!(colength_probe(&chart.basis, &chart.inner_order, &values).unwrap(), 2);
    }

    #[test]
    fn higher_dimension_only_for_the_first_target() {
        assert!(Chart::new(ChartTarget::R12With123, 3).is_ok());
        assert!(matches!(Chart::new(ChartTarget::R1Over123, 3), Err(ChartError::UnsupportedDimension { .. })));
    }
}
