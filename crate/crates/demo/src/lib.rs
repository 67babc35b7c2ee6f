//! WebAssembly bindings for the browser demo. Every function returns a JSON
//! string; failures come back as `{"error": ...}` rather than exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qgadget::analysis::{analyze, prove_not_both_with, ProofOptions};
use qgadget::catalog;
use qgadget::hardy::{maximize_hardy, sweep};
use qgadget::hypergraph::Hypergraph;
use qgadget::mmp::{emit_json, emit_mmp, parse_auto};
use qgadget::states::enumerate_states_with;

fn error(message: impl ToString) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn parse(text: &str) -> Result<Hypergraph, String> {
    match text.trim().strip_prefix("catalog:") {
        Some(name) => catalog::fixture(name).map(|f| f.hypergraph).map_err(|e| e.to_string()),
        None => parse_auto(text).map_err(|e| e.to_string()),
    }
}

/// `P(dd)` on an `n`-point grid plus both maximizers.
#[wasm_bindgen]
pub fn hardy_curve(n: usize) -> String {
    let m = maximize_hardy();
    let points: Vec<[f64; 2]> = sweep(n.clamp(1, 2000)).into_iter().map(|(a, p)| [a, p]).collect();
    json!({
        "points": points,
        "p_star": m.p_star,
        "alpha_minus": m.alpha_minus,
        "alpha_plus": m.alpha_plus,
    })
    .to_string()
}

/// State count and classical relations for a hypergraph in MMP or JSON form.
#[wasm_bindgen]
pub fn analyze_mmp(text: &str) -> String {
    let h = match parse(text) {
        Ok(h) => h,
        Err(e) => return error(e),
    };
    let states = enumerate_states_with(&h, 1);
    match analyze(&h, &states) {
        Ok(report) => {
            let mut v: Value = report.to_json(&h);
            v["atoms"] = json!(h.atom_count());
            v["contexts"] = json!(h.context_count());
            v["greechie_violations"] = json!(h.check_greechie().len());
            v
        }
        .to_string(),
        Err(e) => error(e),
    }
}

/// Propagation proof that atoms `a` and `b` cannot both be true.
#[wasm_bindgen]
pub fn prove_pair(text: &str, a: &str, b: &str) -> String {
    let h = match parse(text) {
        Ok(h) => h,
        Err(e) => return error(e),
    };
    let (Some(x), Some(y)) = (h.atom(a), h.atom(b)) else {
        return error(format!("unknown atom in {a:?}, {b:?}"));
    };
    let trace = prove_not_both_with(&h, x, y, ProofOptions { exhaustive: true, full: false });
    let mut v = trace.to_json(&h);
    v["text"] = Value::String(trace.render(&h));
    v.to_string()
}

/// A built-in fixture as JSON (original labels) and MMP (relabeled), for the
/// example picker.
#[wasm_bindgen]
pub fn fixture_text(name: &str) -> String {
    match catalog::fixture(name) {
        Ok(f) => match emit_mmp(&f.hypergraph) {
            Ok(mmp) => json!({ "name": name, "json": emit_json(&f.hypergraph), "mmp": mmp, "summary": f.summary }).to_string(),
            Err(e) => error(e),
        },
        Err(e) => error(e),
    }
}
