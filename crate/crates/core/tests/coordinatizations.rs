use qgadget::catalog::{fixture, list};
use qgadget::exact::{probability_exact, Coordinatization, Representation, Scalar, Vector};
use qgadget::search::{decomposability_profile, verify_for, DecompositionKind, VerifyMode};
use qgadget::states::enumerate_states;

fn mode(c: &Coordinatization) -> VerifyMode {
    match c {
        Coordinatization::Exact(_) => VerifyMode::Exact,
        Coordinatization::Float(_) => VerifyMode::Approx(1e-12),
    }
}

#[test]
fn every_stored_row_verifies() {
    for name in list() {
        let f = fixture(name).unwrap();
        for (row, c) in &f.coordinatizations {
            let r = verify_for(&f.hypergraph, c, mode(c)).unwrap();
            assert!(r.passes(), "{name}/{row}: {r:?}");
        }
    }
}

#[test]
fn fixture_counts_match_enumeration() {
    for name in list() {
        let f = fixture(name).unwrap();
        let s = enumerate_states(&f.hypergraph);
        assert_eq!(s.len().to_string(), f.expected["states"], "{name}");
    }
}

#[test]
fn tabulated_rational_assignment_is_not_orthogonal() {
    let f = fixture("hardy").unwrap();
    let rows: [(&str, [&str; 4]); 9] = [
        ("Ψ", ["-1", "3", "3", "5"]),
        ("dv", ["1", "-1", "1/2", "1/2"]),
        ("vd", ["1", "1", "1", "-1"]),
        ("uu", ["1", "-1", "1", "1"]),
        ("uv", ["-1", "2", "1", "2"]),
        ("vu", ["1", "-1", "-1", "2"]),
        ("cv", ["-1", "1", "2", "2"]),
        ("vc", ["1", "1", "-1", "1"]),
        ("dd", ["1", "1/2", "-1", "1/2"]),
    ];
    let rep = Representation::from_labeled(&f.hypergraph, rows.iter().map(|(l, v)| (*l, Vector::parse(v).unwrap()))).unwrap();
    let r = verify_for(&f.hypergraph, &Coordinatization::Exact(rep), VerifyMode::Exact).unwrap();
    assert!(!r.passes());
    assert!(!r.non_orthogonal.is_empty());
}

#[test]
fn quantum_constants_are_exact() {
    let t = fixture("hardy-tits").unwrap();
    let Some(Coordinatization::Exact(r)) = t.coordinatization("explicit, exact part") else { panic!() };
    let p = |a: &str, b: &str| probability_exact(r.get(t.atom(a)).unwrap(), r.get(t.atom(b)).unwrap()).unwrap();
    assert_eq!(p("Ψ", "N"), Scalar::frac(8, 9));
    assert_eq!(p("Ψ", "dd"), Scalar::frac(1, 9));
    assert_eq!(p("Ψ", "N").to_string(), t.expected["P(Ψ,N)"]);
}

#[test]
fn complex_row_is_fully_indecomposable() {
    let f = fixture("hardy").unwrap();
    let Some(Coordinatization::Exact(r)) = f.coordinatization("VECFIND complex") else { panic!() };
    let profile = decomposability_profile(&f.hypergraph, r).unwrap();
    assert_eq!(profile.kind, DecompositionKind::FullyIndecomposable);
    assert_eq!(profile.indecomposable.len(), 9);
}
