mod common;

use std::collections::BTreeSet;

use hilbconf::classify::{
    all_enrichments, classify, detect_nonadmissible, extensions, iso_key, models, saturate, DetectorTag, Status,
};
use hilbconf::incidence::{incidence, signature_splits, witness_split};
use hilbconf::poly::{
    buchberger, colon_ideal, ideal_member, is_groebner, normal_form, normal_form_with_cofactors, rat, s_polynomial,
    Budget, MonomialOrder, Poly, PolyError,
};
use hilbconf::structure::enumerate_structures;
use hilbconf::symmetry::{pointwise_stabilizer_h, stabilizer_g};
use hilbconf::{Act, Enrichment, Permutation, Structure};
use itertools::Itertools;
use proptest::prelude::*;
use serde_json::{json, Value};

use common::*;

fn perms() -> Vec<Permutation> {
    Permutation::all(3)
}

fn enrichments() -> &'static [Enrichment] {
    static ALL: std::sync::OnceLock<Vec<Enrichment>> = std::sync::OnceLock::new();
    ALL.get_or_init(|| all_enrichments(3, 2).unwrap())
}

// --- structures -----------------------------------------------------------

/// A JSON nest of the given depth over `{1,2,3}`, with shuffled,
/// duplicated and singleton-wrapped entries.
fn messy_nest(depth: u32) -> BoxedStrategy<Value> {
    let leaf = (1usize..=3)
        .prop_flat_map(|k| proptest::sample::subsequence(vec![1, 2, 3], k))
        .prop_flat_map(|set| {
            let n = set.len();
            (Just(set), proptest::collection::vec(0..n, 0..2))
        })
        .prop_map(|(set, dups)| {
            let mut items: Vec<Value> = set.iter().map(|&i| json!(i)).collect();
            items.extend(dups.into_iter().map(|d| json!(set[d])));
            items.reverse();
            Value::Array(items)
        });
    if depth == 0 {
        return leaf.boxed();
    }
    // Children of a set must share a signature, so draw them from one size.
    (1usize..=3)
        .prop_flat_map(move |k| {
            let child = (Just(k), proptest::sample::subsequence(vec![1, 2, 3], k));
            proptest::collection::vec(child, 1..4)
        })
        .prop_map(|children| {
            let items: Vec<Value> = children.into_iter().map(|(_, s)| json!(s)).collect();
            Value::Array(items)
        })
        .prop_flat_map(|v| (Just(v), any::<bool>()))
        .prop_map(|(v, wrap)| if wrap { Value::Array(vec![v]) } else { v })
        .boxed()
}

fn json_points(v: &Value) -> BTreeSet<u32> {
    match v {
        Value::Number(n) => BTreeSet::from([n.as_u64().unwrap() as u32]),
        Value::Array(items) => items.iter().flat_map(json_points).collect(),
        _ => BTreeSet::new(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonicalization_idempotent_and_carrier_preserving(v in (0u32..2).prop_flat_map(messy_nest)) {
        let s = Structure::from_json(&v, 3).unwrap();
        let again = Structure::from_json(&s.to_json(), 3).unwrap();
        prop_assert_eq!(&again, &s);
        let carrier: BTreeSet<u32> = s.carrier().into_iter().collect();
        prop_assert_eq!(carrier, json_points(&v));
        prop_assert_eq!(Nest::from_json(&v).sig(), s.signature().stripped().to_vec());
    }
}

#[test]
fn structure_counts_by_level() {
    assert_eq!(enumerate_structures(3, 2).unwrap().len(), 11);
    let counts: Vec<usize> = (2..=5).map(|l| enumerate_structures(3, l).unwrap().len()).collect();
    assert!(counts.windows(2).all(|w| w[1] == w[0] + 4), "{counts:?}");
}

#[test]
fn enrichment_json_round_trip() {
    for eta in enrichments() {
        let back = Enrichment::from_json(&eta.to_json()).unwrap();
        assert_eq!(&back, eta);
    }
}

// --- incidence ------------------------------------------------------------

fn target_tuples() -> Vec<(Structure, Vec<Structure>)> {
    let all = level_two_structures();
    let mut out = Vec::new();
    for sigma in &all {
        for k in 1..=3 {
            for t in std::iter::repeat_n(all.iter().cloned(), k).multi_cartesian_product() {
                out.push((sigma.clone(), t));
            }
        }
    }
    out
}

#[test]
fn incidence_covers_carriers() {
    for (sigma, targets) in target_tuples() {
        if incidence(&sigma, &targets) {
            let union: BTreeSet<u32> = targets.iter().flat_map(|t| t.carrier()).collect();
            assert!(sigma.carrier().iter().all(|p| union.contains(p)), "{sigma} {targets:?}");
        }
    }
}

#[test]
fn incidence_is_equivariant() {
    for (sigma, targets) in target_tuples() {
        let base = incidence(&sigma, &targets);
        for g in perms() {
            let moved: Vec<Structure> = targets.iter().map(|t| t.act(&g)).collect();
            assert_eq!(incidence(&sigma.act(&g), &moved), base);
        }
    }
}

#[test]
fn incidence_monotone_in_targets() {
    let all = level_two_structures();
    for (sigma, targets) in target_tuples() {
        if targets.len() == 3 {
            continue;
        }
        let Some(witness) = witness_split(&sigma, &targets) else { continue };
        for extra in &all {
            let mut bigger = targets.clone();
            bigger.push(extra.clone());
            if signature_splits(&sigma, &bigger).iter().any(|b| b.p == witness.p) {
                assert!(incidence(&sigma, &bigger), "{sigma} {targets:?} + {extra}");
            }
        }
    }
}

// --- symmetry -------------------------------------------------------------

#[test]
fn action_laws() {
    let ps = perms();
    for s in level_two_structures() {
        assert_eq!(s.act(&Permutation::identity(3)), s);
        for g in &ps {
            for h in &ps {
                assert_eq!(s.act(&g.compose(h)), s.act(h).act(g));
            }
        }
    }
}

#[test]
fn stabilizers_match_definitions_and_h_is_normal() {
    for eta in enrichments() {
        let g_eta = stabilizer_g(eta);
        let h_eta = pointwise_stabilizer_h(eta);
        for g in perms() {
            assert_eq!(g_eta.contains(&g), eta.act(&g).set_equal(eta));
            let fixes_each = eta.structures().iter().all(|s| s.act(&g) == *s);
            assert_eq!(h_eta.contains(&g), fixes_each);
        }
        assert!(g_eta.is_closed() && h_eta.is_closed());
        assert!(h_eta.is_normal_in(&g_eta), "{eta}");
    }
}

// --- classification -------------------------------------------------------

#[test]
fn iso_key_is_invariant() {
    for eta in enrichments() {
        let key = iso_key(eta).unwrap();
        for g in perms() {
            assert_eq!(iso_key(&eta.act(&g)).unwrap(), key, "{eta}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn saturation_idempotent_and_monotone(k in 0usize..1024, extra in proptest::collection::vec(0usize..11, 0..5)) {
        let small = &enrichments()[k];
        let optional = level_two_structures();
        let mut big = small.as_set();
        big.extend(extra.iter().map(|&i| optional[i].clone()));
        let big = Enrichment::from_set(big, 3).unwrap();
        let c_small = saturate(small).unwrap().closure;
        let c_big = saturate(&big).unwrap().closure;
        prop_assert!(c_small.is_subset(&c_big));
        prop_assert!(saturate(&c_small).unwrap().closure.set_equal(&c_small));
    }
}

#[test]
fn rule_extensions_preserve_the_class() {
    for eta in enrichments() {
        let before = classify(eta).unwrap();
        let Status::Admissible { model, .. } = &before.status else { continue };
        for app in extensions(eta) {
            let after = classify(&eta.with(app.added.clone())).unwrap();
            assert_eq!(after.model(), Some(model), "{eta} + {}", app.added);
            assert!(app.witnesses.iter().all(|w| eta.contains(w)));
        }
    }
}

#[test]
fn detector_and_model_conflicts_are_exactly_the_known_32() {
    let model_keys: BTreeSet<String> = models(3).iter().map(|m| iso_key(&m.enrichment).unwrap()).collect();
    let conflicts: Vec<(&Enrichment, DetectorTag)> = enrichments()
        .iter()
        .filter_map(|eta| {
            let hit = detect_nonadmissible(eta)?;
            model_keys.contains(&iso_key(eta).unwrap()).then_some((eta, hit.tag))
        })
        .collect();
    assert_eq!(conflicts.len(), 32);
    let top = hilbconf::enrichment::sup("123", 3).unwrap();
    for (eta, tag) in conflicts {
        assert_eq!(tag, DetectorTag::TwoDoubleDoublesNoDoublet, "{eta}");
        assert!(eta.contains(&top), "{eta}");
    }
}

#[test]
fn verdicts_are_exhaustive() {
    for eta in enrichments() {
        let report = classify(eta).unwrap();
        match &report.status {
            Status::Admissible { model, .. } => {
                let m = models(3).into_iter().find(|m| &m.name == model).unwrap();
                assert_eq!(iso_key(eta).unwrap(), iso_key(&m.enrichment).unwrap(), "{eta}");
            }
            Status::NonAdmissible(_) => assert!(detect_nonadmissible(eta).is_some()),
        }
    }
}

// --- polynomial algebra ---------------------------------------------------

fn poly_strategy(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(
        (proptest::collection::vec(0..=max_deg, nvars), -4i64..=4),
        1..=max_terms,
    )
    .prop_map(move |terms| Poly::from_terms(nvars, terms.into_iter().map(|(m, c)| (m, rat(c)))))
}

fn grlex3() -> MonomialOrder {
    MonomialOrder::graded_lex(vec![0, 1, 2])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normal_form_is_sound(
        f in poly_strategy(3, 3, 6),
        basis in proptest::collection::vec(poly_strategy(3, 2, 3), 1..4),
    ) {
        let basis: Vec<Poly> = basis.into_iter().filter(|b| !b.is_zero()).collect();
        prop_assume!(!basis.is_empty());
        let order = grlex3();
        let red = normal_form_with_cofactors(&f, &basis, &order).unwrap();
        let mut rebuilt = red.remainder.clone();
        for (q, b) in red.cofactors.iter().zip(&basis) {
            rebuilt = rebuilt + q * b;
        }
        prop_assert_eq!(&rebuilt, &f);
        let lms: Vec<_> = basis.iter().map(|b| b.leading_monomial(&order).unwrap().clone()).collect();
        for (m, _) in red.remainder.terms() {
            prop_assert!(lms.iter().all(|lm| !hilbconf::poly::divides(lm, m)));
        }
    }

    #[test]
    fn ring_axioms(a in poly_strategy(3, 2, 4), b in poly_strategy(3, 2, 4), c in poly_strategy(3, 2, 4),
                   x in proptest::collection::vec(-5i64..=5, 3)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a - &a, Poly::zero(3));
        let point: Vec<_> = x.into_iter().map(rat).collect();
        prop_assert_eq!((&a * &b).eval(&point), a.eval(&point) * b.eval(&point));
    }

    #[test]
    fn orders_are_multiplicative(
        a in proptest::collection::vec(0u32..4, 3),
        b in proptest::collection::vec(0u32..4, 3),
        c in proptest::collection::vec(0u32..4, 3),
    ) {
        for order in [grlex3(), MonomialOrder::lex(vec![2, 0, 1])] {
            let ac: Vec<u32> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
            let bc: Vec<u32> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
            prop_assert_eq!(order.cmp(&a, &b), order.cmp(&ac, &bc));
            prop_assert!(order.cmp(&[0, 0, 0], &a) != std::cmp::Ordering::Greater);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn buchberger_output_satisfies_the_criterion(gens in proptest::collection::vec(poly_strategy(3, 2, 3), 1..4)) {
        let order = grlex3();
        let gb = match buchberger(&gens, &order, &Budget::default()) {
            Err(PolyError::ResourceBudgetExceeded(_)) => return Ok(()),
            other => other.unwrap(),
        };
        prop_assert!(is_groebner(&gb, &order).unwrap());
        for (f, g) in gb.iter().tuple_combinations() {
            prop_assert!(normal_form(&s_polynomial(f, g, &order), &gb, &order).unwrap().is_zero());
        }
        for g in &gens {
            prop_assert!(normal_form(g, &gb, &order).unwrap().is_zero());
        }
    }

    #[test]
    fn colon_times_divisor_lies_in_ideal(
        i in proptest::collection::vec(poly_strategy(2, 2, 3), 1..3),
        j in proptest::collection::vec(poly_strategy(2, 1, 2), 1..3),
    ) {
        let order = MonomialOrder::graded_lex(vec![0, 1]);
        let budget = Budget::default();
        let colon = match colon_ideal(&i, &j, &order, &budget) {
            Err(PolyError::ResourceBudgetExceeded(_)) => return Ok(()),
            other => other.unwrap(),
        };
        for f in &colon {
            for g in &j {
                prop_assert!(ideal_member(&(f * g), &i, &order, &budget).unwrap());
            }
        }
        for f in &i {
            prop_assert!(ideal_member(f, &colon, &order, &budget).unwrap());
        }
    }
}
