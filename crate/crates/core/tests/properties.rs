use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qgadget::analysis::analyze;
use qgadget::exact::{
    complete_context, inner, is_decomposable, normalize_projective, probability_exact, tensor, Field, Scalar, Vector,
};
use qgadget::hypergraph::{AtomId, Hypergraph};
use qgadget::mmp::{emit_json, emit_mmp, parse_json, parse_mmp};
use qgadget::reproduce::brute_force_states;
use qgadget::search::{candidate_pool, ComponentAlphabet};
use qgadget::states::{enumerate_states_with, is_admissible};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn scalar_in(field: Field) -> impl Strategy<Value = Scalar> {
    (-12i64..=12, 1i64..=6, -12i64..=12, 1i64..=6).prop_map(move |(a, b, c, d)| {
        let omega = if field == Field::Rational { q(0, 1) } else { q(c, d) };
        Scalar::new(q(a, b), omega, field)
    })
}

fn any_field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::quadratic(2).unwrap()), Just(Field::quadratic(3).unwrap()), Just(Field::Gaussian)]
}

fn int_vector(dim: usize) -> impl Strategy<Value = Vector> {
    proptest::collection::vec(-4i64..=4, dim).prop_map(|xs| Vector::from_ints(&xs))
}

fn hypergraph(max_atoms: usize) -> impl Strategy<Value = Hypergraph> {
    (2usize..=4, 1usize..=7)
        .prop_flat_map(move |(rank, m)| {
            let atoms = (rank + 1).max(max_atoms);
            proptest::collection::vec(proptest::sample::subsequence((0..atoms).collect::<Vec<_>>(), rank), m)
        })
        .prop_filter_map("valid hypergraph", |cs| {
            let mut seen = BTreeSet::new();
            let contexts: Vec<Vec<String>> = cs
                .into_iter()
                .filter(|c| seen.insert(c.clone()))
                .map(|c| c.iter().map(|k| format!("x{k}")).collect())
                .collect();
            Hypergraph::from_contexts(&contexts).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms((x, y, z) in any_field().prop_flat_map(|f| (scalar_in(f), scalar_in(f), scalar_in(f)))) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, Scalar::zero());
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inverse().unwrap(), Scalar::one());
        }
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
    }

    #[test]
    fn scalar_text_round_trip(x in any_field().prop_flat_map(scalar_in)) {
        let back: Scalar = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn mmp_and_json_round_trip(h in hypergraph(14)) {
        let text = emit_mmp(&h).unwrap();
        let doc = parse_mmp(&text).unwrap();
        let back = doc.first().unwrap();
        prop_assert_eq!(back.context_count(), h.context_count());
        prop_assert_eq!(back.atom_count(), h.atom_count());
        prop_assert_eq!(emit_mmp(back).unwrap(), text);
        let j = parse_json(&emit_json(&h)).unwrap();
        prop_assert_eq!(j.context_labels(), h.context_labels());
    }

    #[test]
    fn greechie_pairs_are_exactly_heavy_overlaps(h in hypergraph(10)) {
        let reported: BTreeSet<(usize, usize)> = h.check_greechie().into_iter().collect();
        let cs = h.contexts();
        for i in 0..cs.len() {
            for j in 0..cs.len() {
                if i == j { continue; }
                let shared = cs[i].atoms().iter().filter(|a| cs[j].contains(**a)).count();
                prop_assert_eq!(shared > 1, reported.contains(&(i.min(j), i.max(j))));
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force(h in hypergraph(14), workers in 1usize..=3) {
        let s = enumerate_states_with(&h, workers);
        prop_assert_eq!(&s, &brute_force_states(&h));
        prop_assert!(s.states().iter().all(|st| is_admissible(&h, st)));
        prop_assert!(s.is_empty() || s.partition_logic().partitions_every_context(&h));
    }

    #[test]
    fn relations_agree_with_states(h in hypergraph(10)) {
        let s = enumerate_states_with(&h, 1);
        let r = analyze(&h, &s).unwrap();
        for &(a, b) in &r.tifs {
            prop_assert!(a != b && !h.adjacent(a, b));
            prop_assert!(s.states().iter().any(|st| st.value(a)));
            prop_assert!(s.states().iter().all(|st| !(st.value(a) && st.value(b))));
        }
        for &(a, b) in &r.tits {
            prop_assert!(s.states().iter().all(|st| !st.value(a) || st.value(b)));
        }
        for &(a, b) in &r.indistinguishable {
            prop_assert!(s.states().iter().all(|st| st.value(a) == st.value(b)));
        }
        prop_assert_eq!(r.embeddable, !s.is_empty() && s.is_separating().0);
    }

    #[test]
    fn normalization_is_idempotent_and_scale_invariant(v in int_vector(4), k in 1i64..=7, neg in any::<bool>()) {
        prop_assume!(!v.is_zero());
        let n = normalize_projective(&v).unwrap();
        prop_assert_eq!(normalize_projective(&n).unwrap(), n.clone());
        let factor = Scalar::int(if neg { -k } else { k });
        prop_assert_eq!(normalize_projective(&v.scale(&factor).unwrap()).unwrap(), n.clone());
        let r2 = v.scale(&Scalar::sqrt(2)).unwrap();
        prop_assert_eq!(normalize_projective(&r2).unwrap(), n);
    }

    #[test]
    fn completion_is_orthogonal(vs in proptest::collection::vec(int_vector(4), 1..=3)) {
        let vs: Vec<Vector> = vs.into_iter().filter(|v| !v.is_zero()).collect();
        prop_assume!(!vs.is_empty());
        let basis = match qgadget::exact::gram_schmidt(&vs) { Ok(b) => b, Err(_) => return Ok(()) };
        let rest = complete_context(&basis, 4).unwrap();
        prop_assert_eq!(basis.len() + rest.len(), 4);
        let all: Vec<&Vector> = basis.iter().chain(&rest).collect();
        for i in 0..all.len() {
            prop_assert!(!all[i].is_zero());
            for j in (i + 1)..all.len() {
                prop_assert!(inner(all[i], all[j]).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn decomposability_matches_factorization(v in int_vector(4)) {
        prop_assume!(!v.is_zero());
        let c = v.components();
        let factors = if !(c[0].is_zero() && c[1].is_zero()) {
            // v = (1, t) ⊗ (v1, v2) with t from the second row
            let t = if !c[0].is_zero() { c[2].try_div(&c[0]).unwrap() } else { c[3].try_div(&c[1]).unwrap() };
            (Vector::new(vec![Scalar::one(), t]), Vector::new(vec![c[0].clone(), c[1].clone()]))
        } else {
            (Vector::from_ints(&[0, 1]), Vector::new(vec![c[2].clone(), c[3].clone()]))
        };
        let factorizes = tensor(&factors.0, &factors.1).unwrap() == v;
        prop_assert_eq!(is_decomposable(&v).unwrap(), factorizes);
    }

    #[test]
    fn tensor_products_are_decomposable(a in int_vector(2), b in int_vector(2)) {
        prop_assert!(is_decomposable(&tensor(&a, &b).unwrap()).unwrap());
    }

    #[test]
    fn probability_is_symmetric_and_bounded(a in int_vector(4), b in int_vector(4)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let p = probability_exact(&a, &b).unwrap();
        prop_assert_eq!(&p, &probability_exact(&b, &a).unwrap());
        let x = p.as_rational().unwrap().clone();
        prop_assert!(x >= q(0, 1) && x <= q(1, 1));
    }
}

#[test]
fn larger_alphabets_cover_smaller_pools() {
    let small = ComponentAlphabet::parse("0,1,-1").unwrap();
    let large = ComponentAlphabet::parse("0,1,-1,2,-2,3").unwrap();
    for dim in 2..=4 {
        let norm = |pool: Vec<Vector>| -> BTreeSet<String> {
            pool.iter().map(|v| normalize_projective(v).unwrap().to_string()).collect()
        };
        let a = norm(candidate_pool(&small, dim).unwrap());
        let b = norm(candidate_pool(&large, dim).unwrap());
        assert!(a.is_subset(&b) && a.len() < b.len());
    }
}

#[test]
fn brute_force_agrees_with_hand_counts() {
    let chain = Hypergraph::from_contexts(&[["a", "b", "c"], ["c", "d", "e"]]).unwrap();
    // c true: 1 state; c false: 2 × 2
    assert_eq!(brute_force_states(&chain).len(), 5);
    let s = brute_force_states(&chain);
    assert!(s.states().iter().all(|st| st.ones().count() == 1 || st.ones().count() == 2));
    assert!(s.states().iter().any(|st| st.value(AtomId(2))));
}
