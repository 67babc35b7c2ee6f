//! Built-in gadget hypergraphs and their known coordinatizations.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, SQRT_2};

use thiserror::Error;

use crate::exact::{Coordinatization, FloatRepresentation, Representation, Vector};
use crate::hypergraph::{AtomId, Hypergraph};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("θ = {0} is a multiple of π/4; atoms 18 and 19 would duplicate others")]
    DegenerateTheta(f64),
}

/// A named hypergraph with its terminal atoms, stored coordinatizations and
/// the quantities it is known to produce.
#[derive(Debug, Clone)]
pub struct GadgetFixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub hypergraph: Hypergraph,
    pub terminals: Option<(AtomId, AtomId)>,
    /// Atom pairs whose quantum overlap is of interest.
    pub quantum_pairs: Vec<(AtomId, AtomId)>,
    pub coordinatizations: Vec<(String, Coordinatization)>,
    pub expected: BTreeMap<&'static str, String>,
}

impl GadgetFixture {
    pub fn coordinatization(&self, name: &str) -> Option<&Coordinatization> {
        self.coordinatizations.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn atom(&self, label: &str) -> AtomId {
        self.hypergraph
            .atom(label)
            .unwrap_or_else(|| panic!("fixture {} has no atom {label}", self.name))
    }
}

const NAMES: [&str; 9] = [
    "hardy",
    "specker-bug",
    "hardy-tits",
    "bug-tits",
    "hardy-indist-a",
    "hardy-indist-b",
    "bug-indist",
    "triangle-3d",
    "triangle-4d",
];

pub fn list() -> &'static [&'static str] {
    &NAMES
}

pub fn fixture(name: &str) -> Result<GadgetFixture, CatalogError> {
    match name {
        "hardy" => Ok(hardy()),
        "specker-bug" => Ok(specker_bug()),
        "hardy-tits" => Ok(hardy_tits()),
        "bug-tits" => Ok(bug_tits()),
        "hardy-indist-a" => Ok(hardy_indist_a()),
        "hardy-indist-b" => Ok(hardy_indist_b()),
        "bug-indist" => Ok(bug_indist()),
        "triangle-3d" => Ok(triangle_3d()),
        "triangle-4d" => Ok(triangle_4d()),
        other => Err(CatalogError::UnknownFixture(other.to_owned())),
    }
}

type Contexts = Vec<Vec<String>>;

fn ctxs(raw: &[&[&str]]) -> Contexts {
    raw.iter().map(|c| c.iter().map(|s| s.to_string()).collect()).collect()
}

fn primed(c: &Contexts) -> Contexts {
    c.iter().map(|ctx| ctx.iter().map(|a| format!("{a}'")).collect()).collect()
}

fn build(c: &Contexts) -> Hypergraph {
    Hypergraph::from_contexts(c).expect("catalog hypergraph is valid")
}

fn exact(h: &Hypergraph, rows: &[(&str, &[&str])]) -> Coordinatization {
    let pairs = rows.iter().map(|(l, v)| (*l, Vector::parse(v).expect("catalog scalar")));
    Coordinatization::Exact(Representation::from_labeled(h, pairs).expect("catalog representation"))
}

fn float(h: &Hypergraph, rows: Vec<(&str, Vec<f64>)>) -> Coordinatization {
    Coordinatization::Float(FloatRepresentation::from_labeled(h, rows).expect("catalog representation"))
}

fn expected(pairs: &[(&'static str, &str)]) -> BTreeMap<&'static str, String> {
    pairs.iter().map(|&(k, v)| (k, v.to_owned())).collect()
}

fn pair(h: &Hypergraph, a: &str, b: &str) -> (AtomId, AtomId) {
    (h.atom(a).expect("catalog label"), h.atom(b).expect("catalog label"))
}

/// The eight Hardy contexts, auxiliary atoms named by number.
pub fn hardy_contexts() -> Contexts {
    ctxs(&[
        &["dd", "8", "9", "cv"],
        &["dd", "11", "12", "vc"],
        &["cv", "vu", "uu", "dv"],
        &["vc", "uv", "uu", "vd"],
        &["vu", "18", "19", "uv"],
        &["vd", "2", "3", "Ψ"],
        &["uu", "20", "21", "Ψ"],
        &["dv", "16", "17", "Ψ"],
    ])
}

fn specker_contexts() -> Contexts {
    ctxs(&[
        &["a8", "x1", "a6"],
        &["a8", "x2", "a7"],
        &["a6", "a4", "a3"],
        &["a7", "a5", "a2"],
        &["a4", "x3", "a5"],
        &["a2", "x4", "a1"],
        &["a3", "x5", "a1"],
    ])
}

/// Hardy with the context `{uu,20,21,Ψ}` removed.
fn hardy_reduced() -> Contexts {
    hardy_contexts().into_iter().filter(|c| !c.contains(&"20".to_string())).collect()
}

fn hardy() -> GadgetFixture {
    let h = build(&hardy_contexts());
    let s2 = SQRT_2;
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let coordinatizations = vec![
        (
            "CEG-A 1996".to_owned(),
            exact(&h, &[
                ("Ψ", &["1", "-1", "-1", "0"]),
                ("dv", &["1", "0", "1", "0"]),
                ("vd", &["1", "1", "0", "0"]),
                ("uu", &["0", "0", "0", "1"]),
                ("uv", &["0", "0", "1", "0"]),
                ("vu", &["0", "1", "0", "0"]),
                ("cv", &["1", "0", "-1", "0"]),
                ("vc", &["1", "-1", "0", "0"]),
                ("dd", &["1", "1", "1", "1"]),
            ]),
        ),
        (
            "Cabello 1997".to_owned(),
            // needs √2, √3 and √6 at once, so it is kept in floating point
            float(&h, vec![
                ("Ψ", vec![1.0, 0.0, 0.0, 0.0]),
                ("dv", vec![0.0, 0.5, -s3 / 2.0, 0.0]),
                ("vd", vec![0.0, 0.5, s3 / 2.0, 0.0]),
                ("uu", vec![0.0, 0.0, 0.0, 1.0]),
                ("uv", vec![1.0 / s3, 1.0 / s2, -1.0 / s6, 0.0]),
                ("vu", vec![-1.0 / s3, 1.0 / s2, 1.0 / s6, 0.0]),
                ("cv", vec![(2.0f64 / 3.0).sqrt(), 0.5, 1.0 / (2.0 * s3), 0.0]),
                ("vc", vec![(2.0f64 / 3.0).sqrt(), -0.5, 1.0 / (2.0 * s3), 0.0]),
                ("dd", vec![1.0 / 3.0, 0.0, -2.0 * s2 / 3.0, 0.0]),
            ]),
        ),
        (
            "BBCGL 2011 c=(1,1)".to_owned(),
            exact(&h, &[
                ("Ψ", &["0", "-1", "-1", "-1"]),
                ("dv", &["0", "1", "0", "-1"]),
                ("vd", &["0", "0", "1", "-1"]),
                ("uu", &["1", "0", "0", "0"]),
                ("uv", &["0", "1", "0", "0"]),
                ("vu", &["0", "0", "1", "0"]),
                ("cv", &["0", "1", "0", "1"]),
                ("vc", &["0", "0", "1", "1"]),
                ("dd", &["1", "-1", "-1", "1"]),
            ]),
        ),
        (
            "BBCGL 2011 c=(2,3)".to_owned(),
            exact(&h, &[
                ("Ψ", &["0", "-2", "-2", "-3"]),
                ("dv", &["0", "3", "0", "-2"]),
                ("vd", &["0", "0", "3", "-2"]),
                ("uu", &["1", "0", "0", "0"]),
                ("uv", &["0", "1", "0", "0"]),
                ("vu", &["0", "0", "1", "0"]),
                ("cv", &["0", "2", "0", "3"]),
                ("vc", &["0", "0", "2", "3"]),
                ("dd", &["9", "-6", "-6", "4"]),
            ]),
        ),
        (
            "VECFIND r2".to_owned(),
            exact(&h, &[
                ("Ψ", &["1", "-2", "r2", "0"]),
                ("dv", &["-2", "0", "r2", "0"]),
                ("vd", &["0", "1", "r2", "0"]),
                ("uu", &["0", "0", "0", "1"]),
                ("uv", &["1", "0", "0", "0"]),
                ("vu", &["0", "1", "0", "0"]),
                ("cv", &["1", "0", "r2", "0"]),
                ("vc", &["0", "-2", "r2", "0"]),
                ("dd", &["-2", "1", "r2", "0"]),
            ]),
        ),
        (
            "VECFIND complex".to_owned(),
            exact(&h, &[
                ("Ψ", &["i", "3", "3", "5"]),
                ("dv", &["i", "-1/2", "1", "-1/2"]),
                ("vd", &["i", "1", "-1/2", "-1/2"]),
                ("uu", &["1", "i", "i", "-i"]),
                ("uv", &["1", "i", "-i", "i"]),
                ("vu", &["1", "-i", "i", "i"]),
                ("cv", &["i", "2", "1", "2"]),
                ("vc", &["i", "1", "2", "2"]),
                ("dd", &["5", "i", "i", "i"]),
            ]),
        ),
        (
            // the usual tabulated column assignment is not orthogonal; this is the
            // unique relabeling of the same nine vectors that is
            "VECFIND rational".to_owned(),
            exact(&h, &[
                ("Ψ", &["-1", "3", "3", "5"]),
                ("dv", &["1", "-1", "1/2", "1/2"]),
                ("vd", &["1", "1/2", "-1", "1/2"]),
                ("uu", &["1", "1", "1", "-1"]),
                ("uv", &["1", "-1", "1", "1"]),
                ("vu", &["1", "1", "-1", "1"]),
                ("cv", &["-1", "1", "2", "2"]),
                ("vc", &["-1", "2", "1", "2"]),
                ("dd", &["1", "-1", "-1", "2"]),
            ]),
        ),
    ];
    GadgetFixture {
        name: "hardy",
        summary: "Hardy gadget: 8 contexts, 21 atoms; Ψ and dd are never both true",
        terminals: Some(pair(&h, "Ψ", "dd")),
        quantum_pairs: vec![pair(&h, "Ψ", "dd")],
        coordinatizations,
        expected: expected(&[
            ("contexts", "8"),
            ("atoms", "21"),
            ("states", "186"),
            ("states with Ψ", "6"),
            ("states with dd", "20"),
        ]),
        hypergraph: h,
    }
}

fn specker_bug() -> GadgetFixture {
    let h = build(&specker_contexts());
    GadgetFixture {
        name: "specker-bug",
        summary: "Specker bug: 7 contexts, 13 atoms in three dimensions; a1 and a8 are never both true",
        terminals: Some(pair(&h, "a1", "a8")),
        quantum_pairs: vec![],
        coordinatizations: vec![],
        expected: expected(&[("contexts", "7"), ("atoms", "13"), ("states", "14")]),
        hypergraph: h,
    }
}

/// Vectors of the true-implies-true extension of Hardy, except 18 and 19.
const HARDY_TITS_EXACT: [(&str, [i64; 4]); 23] = [
    ("Ψ", [0, 1, 1, -1]),
    ("2", [2, 2, -1, 1]),
    ("3", [3, -2, 1, -1]),
    ("vd", [0, 0, 1, 1]),
    ("uu", [1, 0, 0, 0]),
    ("vu", [0, 0, 0, 1]),
    ("cv", [0, 1, 1, 0]),
    ("8", [3, 1, -1, 2]),
    ("9", [-2, 1, -1, 2]),
    ("dd", [0, -1, 1, 1]),
    ("11", [3, -2, -1, -1]),
    ("12", [2, 2, 1, 1]),
    ("vc", [0, 0, 1, -1]),
    ("uv", [0, 1, 0, 0]),
    ("dv", [0, 1, -1, 0]),
    ("16", [-2, 1, 1, 2]),
    ("17", [3, 1, 1, 2]),
    ("20", [0, 4, -3, 1]),
    ("21", [0, 2, 5, 7]),
    ("M", [0, 1, 0, 1]),
    ("N", [0, 1, 2, -1]),
    ("O", [2, -1, 2, 1]),
    ("P", [3, 1, -2, -1]),
];

/// The full 25-vector coordinatization with atoms 18 and 19 rotated by `theta`
/// in the plane orthogonal to vu and uv.
pub fn hardy_tits_float(h: &Hypergraph, theta: f64) -> Result<FloatRepresentation, CatalogError> {
    let k = theta / FRAC_PI_4;
    if (k - k.round()).abs() < 1e-9 {
        return Err(CatalogError::DegenerateTheta(theta));
    }
    let mut rows: Vec<(&str, Vec<f64>)> = HARDY_TITS_EXACT
        .iter()
        .map(|(l, v)| (*l, v.iter().map(|&x| x as f64).collect()))
        .collect();
    rows.push(("18", vec![theta.cos(), 0.0, theta.sin(), 0.0]));
    rows.push(("19", vec![-theta.sin(), 0.0, theta.cos(), 0.0]));
    Ok(FloatRepresentation::from_labeled(h, rows).expect("catalog representation"))
}

fn hardy_tits() -> GadgetFixture {
    let mut c = hardy_contexts();
    c.extend(ctxs(&[&["uu", "dd", "M", "N"], &["Ψ", "O", "P", "M"]]));
    let h = build(&c);
    let exact_rep = Representation::from_labeled(
        &h,
        HARDY_TITS_EXACT.iter().map(|(l, v)| (*l, Vector::from_ints(v))),
    )
    .expect("catalog representation");
    let float_rep = hardy_tits_float(&h, 1.0).expect("θ = 1 is admissible");
    GadgetFixture {
        name: "hardy-tits",
        summary: "Hardy extended by {uu,dd,M,N} and {Ψ,O,P,M}: Ψ true forces N true",
        terminals: Some(pair(&h, "Ψ", "N")),
        quantum_pairs: vec![pair(&h, "Ψ", "N"), pair(&h, "Ψ", "dd")],
        coordinatizations: vec![
            ("explicit, θ=1".to_owned(), Coordinatization::Float(float_rep)),
            ("explicit, exact part".to_owned(), Coordinatization::Exact(exact_rep)),
        ],
        expected: expected(&[
            ("contexts", "10"),
            ("atoms", "25"),
            ("states", "478"),
            ("P(Ψ,N)", "8/9"),
            ("P(Ψ,dd)", "1/9"),
        ]),
        hypergraph: h,
    }
}

fn bug_tits() -> GadgetFixture {
    let mut c = specker_contexts();
    c.extend(ctxs(&[&["a8", "M", "N"], &["a1", "O", "M"]]));
    let h = build(&c);
    GadgetFixture {
        name: "bug-tits",
        summary: "Specker bug extended by {a8,M,N} and {a1,O,M}: a1 true forces N true",
        terminals: Some(pair(&h, "a1", "N")),
        quantum_pairs: vec![],
        coordinatizations: vec![],
        expected: expected(&[("contexts", "9"), ("atoms", "16"), ("states", "22")]),
        hypergraph: h,
    }
}

fn hardy_indist_a() -> GadgetFixture {
    let base = hardy_contexts();
    let mut c = base.clone();
    c.extend(primed(&base));
    c.extend(ctxs(&[&["uu", "dd", "M", "Ψ'"], &["uu'", "dd'", "M", "Ψ"]]));
    let h = build(&c);
    GadgetFixture {
        name: "hardy-indist-a",
        summary: "Two Hardy gadgets joined by {uu,dd,M,Ψ'} and {uu',dd',M,Ψ}",
        terminals: Some(pair(&h, "Ψ", "Ψ'")),
        quantum_pairs: vec![],
        coordinatizations: vec![],
        expected: expected(&[("contexts", "18"), ("atoms", "43"), ("states", "18356")]),
        hypergraph: h,
    }
}

fn hardy_indist_b() -> GadgetFixture {
    let base = hardy_reduced();
    let mut c = base.clone();
    c.extend(primed(&base));
    c.extend(ctxs(&[&["uu", "dd", "M", "Ψ'"], &["uu'", "dd'", "M", "Ψ"]]));
    let h = build(&c);
    let rep = exact(&h, &[
        ("Ψ", &["1", "0", "0", "0"]),
        ("vd", &["0", "2", "-1", "1"]),
        ("uu", &["0", "0", "1", "1"]),
        ("vu", &["1", "-1", "1", "-1"]),
        ("cv", &["-3", "-1", "1", "-1"]),
        ("dd", &["1", "-3", "0", "0"]),
        ("vc", &["-3", "-1", "-1", "1"]),
        ("uv", &["1", "-1", "-1", "1"]),
        ("dv", &["0", "2", "1", "-1"]),
        ("Ψ'", &["-3", "-1", "0", "0"]),
        ("vd'", &["1", "-3", "4", "-1"]),
        ("uu'", &["0", "1", "1", "1"]),
        ("vu'", &["-3", "-1", "2", "-1"]),
        ("cv'", &["1", "0", "1", "-1"]),
        ("dd'", &["0", "2", "-1", "-1"]),
        ("vc'", &["5", "0", "-1", "1"]),
        ("uv'", &["-1", "-3", "-1", "4"]),
        ("dv'", &["1", "-3", "1", "2"]),
        ("M", &["0", "0", "1", "-1"]),
    ]);
    GadgetFixture {
        name: "hardy-indist-b",
        summary: "Two reduced Hardy gadgets (without {uu,20,21,Ψ}) joined by {uu,dd,M,Ψ'} and {uu',dd',M,Ψ}",
        terminals: Some(pair(&h, "Ψ", "Ψ'")),
        quantum_pairs: vec![pair(&h, "Ψ", "Ψ'")],
        coordinatizations: vec![("intertwine vectors".to_owned(), rep)],
        expected: expected(&[
            ("contexts", "16"),
            ("atoms", "39"),
            ("states", "6600"),
            ("P(Ψ,Ψ')", "9/10"),
        ]),
        hypergraph: h,
    }
}

fn bug_indist() -> GadgetFixture {
    let base = specker_contexts();
    let mut c = base.clone();
    c.extend(primed(&base));
    c.extend(ctxs(&[&["a1", "M", "a8'"], &["a8", "M", "a1'"]]));
    let h = build(&c);
    GadgetFixture {
        name: "bug-indist",
        summary: "Two Specker bugs joined by {a1,M,a8'} and {a8,M,a1'}",
        terminals: Some(pair(&h, "a1", "a1'")),
        quantum_pairs: vec![],
        coordinatizations: vec![],
        expected: expected(&[("contexts", "16"), ("atoms", "27"), ("states", "82")]),
        hypergraph: h,
    }
}

fn triangle_3d() -> GadgetFixture {
    let h = build(&ctxs(&[&["1", "2", "3"], &["3", "4", "5"], &["5", "6", "1"]]));
    let rep = exact(&h, &[("1", &["0", "0", "1"]), ("3", &["0", "1", "0"]), ("5", &["1", "0", "0"])]);
    GadgetFixture {
        name: "triangle-3d",
        summary: "Three cyclically pasted contexts in three dimensions; no faithful representation",
        terminals: None,
        quantum_pairs: vec![],
        coordinatizations: vec![("corners".to_owned(), rep)],
        expected: expected(&[("contexts", "3"), ("atoms", "6"), ("states", "4")]),
        hypergraph: h,
    }
}

fn triangle_4d() -> GadgetFixture {
    let h = build(&ctxs(&[&["1", "2", "3", "4"], &["4", "5", "6", "7"], &["7", "8", "9", "1"]]));
    GadgetFixture {
        name: "triangle-4d",
        summary: "Three cyclically pasted contexts in four dimensions",
        terminals: None,
        quantum_pairs: vec![],
        coordinatizations: vec![],
        expected: expected(&[("contexts", "3"), ("atoms", "9"), ("states", "14")]),
        hypergraph: h,
    }
}
