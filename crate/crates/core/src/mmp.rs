//! Text formats for hypergraphs: MMP lines, a JSON object form, and Graphviz DOT.
//!
//! MMP line grammar: contexts are runs of single-character atoms separated by
//! `,`, the line ends with `.`, and anything after the `.` is a comment. Lines
//! starting with `#` are comments. Blank characters before the `.` are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{AtomId, Hypergraph, HypergraphError};

/// Atom characters in index order: `1-9`, `A-Z`, `a-z`, then ASCII punctuation
/// other than the separators `,` `.` and the comment marker `#`.
pub const MMP_ALPHABET: &str =
    "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz!\"$%&'()*+-/:;<=>?@[\\]^_`{|}~";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: missing terminating '.'")]
    UnterminatedLine { line: usize },
    #[error("line {line}: illegal character {ch:?}")]
    IllegalCharacter { line: usize, ch: char },
    #[error("line {line}: empty context")]
    EmptyContext { line: usize },
    #[error("line {line}: {source}")]
    Build {
        line: usize,
        #[source]
        source: HypergraphError,
    },
    #[error("hypergraph has {0} atoms, more than the MMP alphabet holds")]
    TooManyAtoms(usize),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Invalid(#[from] HypergraphError),
}

fn alphabet_index(c: char) -> Option<usize> {
    MMP_ALPHABET.chars().position(|a| a == c)
}

/// One hypergraph per MMP line, with the trailing comment if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpDocument {
    pub lines: Vec<(Hypergraph, Option<String>)>,
}

impl MmpDocument {
    pub fn first(&self) -> Option<&Hypergraph> {
        self.lines.first().map(|(h, _)| h)
    }
}

pub fn parse_mmp(text: &str) -> Result<MmpDocument, FormatError> {
    let mut lines = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(dot) = trimmed.find('.') else {
            return Err(FormatError::UnterminatedLine { line: line_no });
        };
        let (body, rest) = trimmed.split_at(dot);
        let comment = rest[1..].trim();
        let comment = (!comment.is_empty()).then(|| comment.to_owned());

        let mut contexts: Vec<Vec<char>> = vec![Vec::new()];
        for ch in body.chars() {
            match ch {
                ',' => contexts.push(Vec::new()),
                c if c.is_whitespace() => {}
                c if alphabet_index(c).is_some() => contexts.last_mut().unwrap().push(c),
                c => return Err(FormatError::IllegalCharacter { line: line_no, ch: c }),
            }
        }
        if contexts.iter().any(Vec::is_empty) {
            return Err(FormatError::EmptyContext { line: line_no });
        }
        let used: BTreeSet<usize> = contexts
            .iter()
            .flatten()
            .map(|&c| alphabet_index(c).unwrap())
            .collect();
        let alphabet: Vec<char> = MMP_ALPHABET.chars().collect();
        let labels: Vec<String> = used.iter().map(|&i| alphabet[i].to_string()).collect();
        let ctx_labels: Vec<Vec<String>> = contexts
            .iter()
            .map(|c| c.iter().map(char::to_string).collect())
            .collect();
        let h = Hypergraph::build(&labels, &ctx_labels)
            .map_err(|source| FormatError::Build { line: line_no, source })?;
        lines.push((h, comment));
    }
    Ok(MmpDocument { lines })
}

/// Writes `h` as one MMP line; atom `i` becomes the `i`-th alphabet character.
pub fn emit_mmp(h: &Hypergraph) -> Result<String, FormatError> {
    let alphabet: Vec<char> = MMP_ALPHABET.chars().collect();
    if h.atom_count() > alphabet.len() {
        return Err(FormatError::TooManyAtoms(h.atom_count()));
    }
    let blocks: Vec<String> = h
        .contexts()
        .iter()
        .map(|c| c.atoms().iter().map(|a| alphabet[a.index()]).collect())
        .collect();
    Ok(format!("{}.", blocks.join(",")))
}

pub fn emit_mmp_document(doc: &MmpDocument) -> Result<String, FormatError> {
    let mut out = String::new();
    for (h, comment) in &doc.lines {
        out.push_str(&emit_mmp(h)?);
        if let Some(c) = comment {
            out.push(' ');
            out.push_str(c);
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphJson {
    atoms: Vec<String>,
    contexts: Vec<Vec<String>>,
}

pub fn parse_json(text: &str) -> Result<Hypergraph, FormatError> {
    let doc: HypergraphJson =
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    Ok(Hypergraph::build(&doc.atoms, &doc.contexts)?)
}

pub fn emit_json(h: &Hypergraph) -> String {
    let doc = HypergraphJson {
        atoms: h.labels().to_vec(),
        contexts: h.context_labels(),
    };
    serde_json::to_string(&doc).expect("hypergraph JSON serialization")
}

/// Parses either format: a leading `{` selects JSON, anything else MMP (first line).
pub fn parse_auto(text: &str) -> Result<Hypergraph, FormatError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_mmp(text)?
            .lines
            .into_iter()
            .next()
            .map(|(h, _)| h)
            .ok_or(FormatError::UnterminatedLine { line: 1 })
    }
}

const CONTEXT_COLORS: [&str; 12] = [
    "orange", "blue", "red", "green", "gray", "magenta", "cyan", "olive", "forestgreen",
    "violetred", "brown", "purple",
];

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Greechie-style DOT rendering: each context is a colored chain through its
/// atoms; intertwining atoms are drawn larger. `highlight` fills atoms by label.
pub fn export_dot(h: &Hypergraph, highlight: &BTreeMap<String, String>) -> String {
    let mut out = String::from("graph hypergraph {\n  node [shape=circle, fontsize=10];\n");
    for a in h.atoms() {
        let label = dot_escape(h.label(a));
        let size = if h.degree(a) >= 2 { "0.45" } else { "0.25" };
        let _ = write!(out, "  \"{label}\" [width={size}");
        if let Some(color) = highlight.get(h.label(a)) {
            let _ = write!(out, ", style=filled, fillcolor=\"{}\"", dot_escape(color));
        }
        out.push_str("];\n");
    }
    for (ci, ctx) in h.contexts().iter().enumerate() {
        let color = CONTEXT_COLORS[ci % CONTEXT_COLORS.len()];
        let chain: Vec<String> = ctx
            .atoms()
            .iter()
            .map(|&a| format!("\"{}\"", dot_escape(h.label(a))))
            .collect();
        let _ = writeln!(
            out,
            "  {} [color=\"{color}\", penwidth=2, context={ci}];",
            chain.join(" -- ")
        );
    }
    out.push_str("}\n");
    out
}

/// Convenience for callers that highlight by atom id.
pub fn highlight_atoms(h: &Hypergraph, atoms: &[AtomId], color: &str) -> BTreeMap<String, String> {
    atoms
        .iter()
        .map(|&a| (h.label(a).to_owned(), color.to_owned()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_has_no_separators() {
        assert!(!MMP_ALPHABET.contains([',', '.', '#', ' ']));
        let unique: BTreeSet<char> = MMP_ALPHABET.chars().collect();
        assert_eq!(unique.len(), MMP_ALPHABET.chars().count());
        assert_eq!(MMP_ALPHABET.len(), 90);
    }

    #[test]
    fn triangle_lines() {
        let doc = parse_mmp("123,345,561.").unwrap();
        let h = doc.first().unwrap();
        assert_eq!((h.atom_count(), h.context_count(), h.rank()), (6, 3, 3));

        let h4 = parse_auto("1234,4567,7891.").unwrap();
        assert_eq!((h4.atom_count(), h4.context_count(), h4.rank()), (9, 3, 4));

        let h2 = parse_auto("12.").unwrap();
        assert_eq!((h2.atom_count(), h2.context_count()), (2, 1));
    }

    #[test]
    fn comments_and_blank_lines() {
        let doc = parse_mmp("# header\n\n123,345,561. triangle\n  12 , 23 , 31 .\n").unwrap();
        assert_eq!(doc.lines.len(), 2);
        assert_eq!(doc.lines[0].1.as_deref(), Some("triangle"));
        assert_eq!(doc.lines[1].1, None);
        let again = parse_mmp(&emit_mmp_document(&doc).unwrap()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_mmp("123,345"), Err(FormatError::UnterminatedLine { line: 1 }));
        assert_eq!(
            parse_mmp("12\n120."),
            Err(FormatError::UnterminatedLine { line: 1 })
        );
        assert_eq!(
            parse_mmp("1#3,345."),
            Err(FormatError::IllegalCharacter { line: 1, ch: '#' })
        );
        assert_eq!(parse_mmp("123,,345."), Err(FormatError::EmptyContext { line: 1 }));
        assert!(matches!(
            parse_mmp("123,34."),
            Err(FormatError::Build { line: 1, source: HypergraphError::NonUniformRank { .. } })
        ));
        assert!(matches!(
            parse_mmp("1."),
            Err(FormatError::Build { source: HypergraphError::TrivialContext { .. }, .. })
        ));
    }

    #[test]
    fn emit_simple() {
        let h = Hypergraph::build(&["a", "b", "c", "d"], &[["a", "b", "c", "d"]]).unwrap();
        assert_eq!(emit_mmp(&h).unwrap(), "1234.");
        let t = parse_auto("123,345,561.").unwrap();
        assert_eq!(emit_mmp(&t).unwrap(), "123,345,561.");
    }

    #[test]
    fn too_many_atoms() {
        let n = MMP_ALPHABET.len() + 2;
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let contexts: Vec<Vec<String>> = labels.chunks(2).map(|c| c.to_vec()).collect();
        let h = Hypergraph::build(&labels, &contexts).unwrap();
        assert_eq!(emit_mmp(&h), Err(FormatError::TooManyAtoms(n)));
        // JSON has no such limit
        assert_eq!(parse_json(&emit_json(&h)).unwrap(), h);
    }

    #[test]
    fn json_forms() {
        let h = parse_json(r#"{"atoms":["a","b"],"contexts":[["a","b"]]}"#).unwrap();
        assert_eq!(h.context_count(), 1);
        assert!(matches!(
            parse_json(r#"{"atoms":["a","b"]}"#),
            Err(FormatError::Json(_))
        ));
        assert!(matches!(parse_json("{not json"), Err(FormatError::Json(_))));
        assert!(matches!(
            parse_json(r#"{"atoms":["a","b"],"contexts":[["a","c"]]}"#),
            Err(FormatError::Invalid(HypergraphError::UnknownLabel { .. }))
        ));
    }

    #[test]
    fn dot_single_context() {
        let h = Hypergraph::build(&["a", "b", "c"], &[["a", "b", "c"]]).unwrap();
        let dot = export_dot(&h, &BTreeMap::new());
        assert_eq!(dot.matches("[width=").count(), 3);
        assert_eq!(dot.matches(" -- ").count(), 2);
        assert_eq!(dot.matches("color=\"orange\"").count(), 1);
        let hl = BTreeMap::from([("a".to_owned(), "red".to_owned())]);
        let dot = export_dot(&h, &hl);
        assert!(dot.contains("\"a\" [width=0.25, style=filled, fillcolor=\"red\"]"));
        assert_eq!(dot, export_dot(&h, &hl));
    }
}
