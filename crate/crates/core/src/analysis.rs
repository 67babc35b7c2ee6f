//! Relational properties between atoms (true-implies-false, true-implies-true,
//! indistinguishability) and propagation proofs that two atoms exclude each other.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog::GadgetFixture;
use crate::exact::{probability_exact, probability_float, Coordinatization, ExactError};
use crate::hypergraph::{AtomId, Hypergraph};
use crate::states::{enumerate_states, is_admissible, StateSet, TwoValuedState};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("state set was not enumerated from this hypergraph")]
    StateSetMismatch,
    #[error("no vector for atom {0:?}")]
    MissingVector(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Relations over all atom pairs, read off a complete state set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub state_count: usize,
    /// Ordered pairs `(a,b)` of atoms in no common context such that every
    /// state with `a` true has `b` false. Atoms never true are excluded as
    /// antecedents (see `never_true`).
    pub tifs: Vec<(AtomId, AtomId)>,
    /// Ordered pairs `(a,b)`, `a ≠ b`, such that every state with `a` true has `b` true.
    pub tits: Vec<(AtomId, AtomId)>,
    /// Unordered pairs `a < b` valued alike by every state. Empty when `vacuous`.
    pub indistinguishable: Vec<(AtomId, AtomId)>,
    /// No states at all, so every pair is trivially indistinguishable.
    pub vacuous: bool,
    pub never_true: Vec<AtomId>,
    /// Whether the state set separates all atoms, so that the logic embeds in
    /// a Boolean algebra.
    pub embeddable: bool,
}

impl RelationReport {
    pub fn is_tifs(&self, a: AtomId, b: AtomId) -> bool {
        self.tifs.binary_search(&(a, b)).is_ok()
    }

    pub fn is_tits(&self, a: AtomId, b: AtomId) -> bool {
        self.tits.binary_search(&(a, b)).is_ok()
    }

    pub fn is_indistinguishable(&self, a: AtomId, b: AtomId) -> bool {
        self.indistinguishable.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn to_json(&self, h: &Hypergraph) -> Value {
        let pairs = |ps: &[(AtomId, AtomId)]| -> Vec<[&str; 2]> {
            ps.iter().map(|&(a, b)| [h.label(a), h.label(b)]).collect()
        };
        json!({
            "states": self.state_count,
            "embeddable": self.embeddable,
            "vacuous": self.vacuous,
            "never_true": self.never_true.iter().map(|&a| h.label(a)).collect::<Vec<_>>(),
            "indistinguishable": pairs(&self.indistinguishable),
            "true_implies_false": pairs(&self.tifs),
            "true_implies_true": pairs(&self.tits),
        })
    }
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

fn classify_row(h: &Hypergraph, cols: &[Vec<u64>], a: usize) -> (Vec<(AtomId, AtomId)>, Vec<(AtomId, AtomId)>) {
    let (mut tifs, mut tits) = (Vec::new(), Vec::new());
    if cols[a].iter().all(|&w| w == 0) {
        return (tifs, tits);
    }
    for b in 0..cols.len() {
        if a == b {
            continue;
        }
        let (ia, ib) = (AtomId(a), AtomId(b));
        if !h.adjacent(ia, ib) && disjoint(&cols[a], &cols[b]) {
            tifs.push((ia, ib));
        }
        if subset(&cols[a], &cols[b]) {
            tits.push((ia, ib));
        }
    }
    (tifs, tits)
}

/// Whether some state values `a` and `b` differently, by direct scan.
fn separated(states: &[TwoValuedState], a: AtomId, b: AtomId) -> bool {
    states.iter().any(|s| s.value(a) != s.value(b))
}

/// Classifies every atom pair against the full state set of `h`.
pub fn analyze(h: &Hypergraph, s: &StateSet) -> Result<RelationReport, AnalysisError> {
    if !s.belongs_to(h) {
        return Err(AnalysisError::StateSetMismatch);
    }
    let n = h.atom_count();
    let cols: Vec<Vec<u64>> = h.atoms().map(|a| s.column(a)).collect();

    #[cfg(feature = "parallel")]
    let rows: Vec<_> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(|a| classify_row(h, &cols, a)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<_> = (0..n).map(|a| classify_row(h, &cols, a)).collect();

    let (mut tifs, mut tits) = (Vec::new(), Vec::new());
    for (f, t) in rows {
        tifs.extend(f);
        tits.extend(t);
    }
    let vacuous = s.is_empty();
    let indistinguishable = if vacuous {
        Vec::new()
    } else {
        (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (AtomId(a), AtomId(b))))
            .filter(|&(a, b)| cols[a.0] == cols[b.0])
            .collect()
    };
    // separability by its own route: a scan over states rather than columns
    let embeddable = !s.is_empty()
        && (0..n).all(|a| ((a + 1)..n).all(|b| separated(s.states(), AtomId(a), AtomId(b))));
    Ok(RelationReport {
        state_count: s.len(),
        tifs,
        tits,
        indistinguishable,
        vacuous,
        never_true: s.is_unital().1,
        embeddable,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Assumption,
    Exclusivity,
    Completeness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub round: usize,
    pub atom: AtomId,
    pub value: bool,
    pub rule: Rule,
    pub context: Option<usize>,
    /// Atoms whose values justify this step.
    pub premises: Vec<AtomId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Context `context` ended with two or more true atoms, or with none.
    Contradiction { context: usize },
    /// Propagation reached a fixpoint with atoms still open.
    Stalled,
    /// Exhaustive search over the open atoms found no admissible completion.
    Refuted { nodes: usize },
    /// An admissible state with both atoms true exists.
    Consistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub steps: Vec<ProofStep>,
    pub outcome: Outcome,
    pub witness: Option<TwoValuedState>,
}

impl ProofTrace {
    pub fn is_contradiction(&self) -> bool {
        matches!(self.outcome, Outcome::Contradiction { .. } | Outcome::Refuted { .. })
    }

    /// Steps that are not assumptions, as `(zeros, ones)`.
    pub fn forced(&self) -> (Vec<AtomId>, Vec<AtomId>) {
        let forced = self.steps.iter().filter(|s| s.rule != Rule::Assumption);
        let (ones, zeros): (Vec<_>, Vec<_>) = forced.partition(|s| s.value);
        (zeros.iter().map(|s| s.atom).collect(), ones.iter().map(|s| s.atom).collect())
    }

    /// Keeps only the steps the final contradiction depends on.
    pub fn pruned(&self, h: &Hypergraph) -> ProofTrace {
        let Outcome::Contradiction { context } = self.outcome else {
            return self.clone();
        };
        let value_of = |a: AtomId| self.steps.iter().find(|s| s.atom == a).map(|s| s.value);
        let ctx = h.contexts()[context].atoms();
        let ones: Vec<AtomId> = ctx.iter().copied().filter(|&a| value_of(a) == Some(true)).collect();
        let mut needed: BTreeSet<AtomId> = if ones.len() >= 2 { ones.into_iter().collect() } else { ctx.iter().copied().collect() };
        for step in self.steps.iter().rev() {
            if needed.contains(&step.atom) {
                needed.extend(step.premises.iter().copied());
            }
        }
        ProofTrace {
            steps: self.steps.iter().filter(|s| needed.contains(&s.atom)).cloned().collect(),
            outcome: self.outcome.clone(),
            witness: None,
        }
    }

    pub fn to_json(&self, h: &Hypergraph) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "round": s.round,
                    "atom": h.label(s.atom),
                    "value": u8::from(s.value),
                    "rule": s.rule,
                    "context": s.context.map(|c| h.context_labels()[c].clone()),
                    "premises": s.premises.iter().map(|&p| h.label(p)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let outcome = match &self.outcome {
            Outcome::Contradiction { context } => json!({
                "kind": "contradiction",
                "context": h.context_labels()[*context],
            }),
            Outcome::Stalled => json!({ "kind": "stalled" }),
            Outcome::Refuted { nodes } => json!({ "kind": "refuted", "nodes": nodes }),
            Outcome::Consistent => json!({ "kind": "consistent" }),
        };
        let witness = self
            .witness
            .as_ref()
            .map(|w| w.ones().map(|a| h.label(a).to_owned()).collect::<Vec<_>>());
        json!({ "steps": steps, "outcome": outcome, "witness": witness })
    }

    /// One line per step, for terminals.
    pub fn render(&self, h: &Hypergraph) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let why = match s.rule {
                Rule::Assumption => "assumption".to_owned(),
                rule => {
                    let ctx = s.context.map(|c| h.context_labels()[c].join(",")).unwrap_or_default();
                    let rule = if rule == Rule::Exclusivity { "exclusivity" } else { "completeness" };
                    format!("{rule} in {{{ctx}}}")
                }
            };
            out.push_str(&format!("[{}] {} = {}  ({why})\n", s.round, h.label(s.atom), u8::from(s.value)));
        }
        match &self.outcome {
            Outcome::Contradiction { context } => {
                out.push_str(&format!("contradiction in {{{}}}\n", h.context_labels()[*context].join(",")))
            }
            Outcome::Stalled => out.push_str("propagation stalled\n"),
            Outcome::Refuted { nodes } => out.push_str(&format!("no completion exists ({nodes} nodes searched)\n")),
            Outcome::Consistent => out.push_str("consistent\n"),
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProofOptions {
    /// Fall back to exhaustive search when propagation stalls.
    pub exhaustive: bool,
    /// Keep every propagated step instead of the contradiction's backward slice.
    pub full: bool,
}

type Assignment = Vec<Option<bool>>;

fn violated(h: &Hypergraph, v: &Assignment) -> Option<usize> {
    h.contexts().iter().position(|c| {
        let ones = c.atoms().iter().filter(|a| v[a.0] == Some(true)).count();
        let zeros = c.atoms().iter().filter(|a| v[a.0] == Some(false)).count();
        ones >= 2 || zeros == c.len()
    })
}

/// Assumes `a = b = 1` and propagates in rounds: exclusivity over all
/// contexts, a contradiction check, completeness against a snapshot, another
/// check. Returns the backward slice of the contradiction unless `opts.full`.
pub fn prove_not_both_with(h: &Hypergraph, a: AtomId, b: AtomId, opts: ProofOptions) -> ProofTrace {
    let mut v: Assignment = vec![None; h.atom_count()];
    let mut steps = Vec::new();
    for x in [a, b] {
        if v[x.0].is_none() {
            v[x.0] = Some(true);
            steps.push(ProofStep { round: 0, atom: x, value: true, rule: Rule::Assumption, context: None, premises: vec![] });
        }
    }
    let finish = |steps: Vec<ProofStep>, outcome: Outcome, witness: Option<TwoValuedState>| {
        let t = ProofTrace { steps, outcome, witness };
        if opts.full { t } else { t.pruned(h) }
    };

    let mut round = 1;
    loop {
        let mut changed = false;
        for (ci, c) in h.contexts().iter().enumerate() {
            let ones: Vec<AtomId> = c.atoms().iter().copied().filter(|x| v[x.0] == Some(true)).collect();
            if ones.len() != 1 {
                continue;
            }
            for &x in c.atoms() {
                if v[x.0].is_none() {
                    v[x.0] = Some(false);
                    steps.push(ProofStep { round, atom: x, value: false, rule: Rule::Exclusivity, context: Some(ci), premises: ones.clone() });
                    changed = true;
                }
            }
        }
        if let Some(ci) = violated(h, &v) {
            return finish(steps, Outcome::Contradiction { context: ci }, None);
        }

        let snapshot = v.clone();
        for (ci, c) in h.contexts().iter().enumerate() {
            let atoms = c.atoms();
            if atoms.iter().any(|x| snapshot[x.0] == Some(true)) {
                continue;
            }
            let open: Vec<AtomId> = atoms.iter().copied().filter(|x| snapshot[x.0].is_none()).collect();
            if let [x] = open[..] {
                if v[x.0].is_none() {
                    v[x.0] = Some(true);
                    let premises = atoms.iter().copied().filter(|&y| y != x).collect();
                    steps.push(ProofStep { round, atom: x, value: true, rule: Rule::Completeness, context: Some(ci), premises });
                    changed = true;
                }
            }
        }
        if let Some(ci) = violated(h, &v) {
            return finish(steps, Outcome::Contradiction { context: ci }, None);
        }
        if !changed {
            break;
        }
        round += 1;
    }

    if v.iter().all(Option::is_some) {
        let w = TwoValuedState::from_ones(h.atom_count(), h.atoms().filter(|x| v[x.0] == Some(true)));
        return finish(steps, Outcome::Consistent, Some(w));
    }
    if !opts.exhaustive {
        return finish(steps, Outcome::Stalled, None);
    }
    let mut nodes = 0;
    match search_completion(h, v, &mut nodes) {
        Some(w) => finish(steps, Outcome::Consistent, Some(w)),
        None => finish(steps, Outcome::Refuted { nodes }, None),
    }
}

/// Propagation trace for the hypothesis that `a` and `b` are both true.
pub fn prove_not_both(h: &Hypergraph, a: AtomId, b: AtomId) -> ProofTrace {
    prove_not_both_with(h, a, b, ProofOptions::default())
}

// Silent propagation for the exhaustive fallback. False on conflict.
fn settle(h: &Hypergraph, v: &mut Assignment) -> bool {
    loop {
        let mut changed = false;
        for c in h.contexts() {
            let ones = c.atoms().iter().filter(|x| v[x.0] == Some(true)).count();
            let open: Vec<AtomId> = c.atoms().iter().copied().filter(|x| v[x.0].is_none()).collect();
            match ones {
                0 if open.is_empty() => return false,
                0 if open.len() == 1 => {
                    v[open[0].0] = Some(true);
                    changed = true;
                }
                1 if !open.is_empty() => {
                    open.iter().for_each(|x| v[x.0] = Some(false));
                    changed = true;
                }
                n if n >= 2 => return false,
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search_completion(h: &Hypergraph, mut v: Assignment, nodes: &mut usize) -> Option<TwoValuedState> {
    *nodes += 1;
    if !settle(h, &mut v) {
        return None;
    }
    let Some(open) = v.iter().position(Option::is_none) else {
        return Some(TwoValuedState::from_ones(h.atom_count(), h.atoms().filter(|x| v[x.0] == Some(true))));
    };
    for value in [true, false] {
        let mut child = v.clone();
        child[open] = Some(value);
        if let Some(w) = search_completion(h, child, nodes) {
            return Some(w);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {0}: atom already valued")]
    AlreadyValued(usize),
    #[error("step {0}: rule not justified by the current assignment")]
    Unjustified(usize),
    #[error("final context is not violated")]
    NoContradiction,
    #[error("witness is not an admissible state extending the trace")]
    BadWitness,
}

/// Re-checks every step of `trace` against a fresh assignment.
pub fn replay(h: &Hypergraph, trace: &ProofTrace) -> Result<(), ReplayError> {
    let mut v: Assignment = vec![None; h.atom_count()];
    for (i, s) in trace.steps.iter().enumerate() {
        if v[s.atom.0].is_some() {
            return Err(ReplayError::AlreadyValued(i));
        }
        let ok = match (s.rule, s.context) {
            (Rule::Assumption, None) => true,
            (Rule::Exclusivity, Some(c)) => {
                let atoms = h.contexts()[c].atoms();
                !s.value
                    && atoms.contains(&s.atom)
                    && s.premises.len() == 1
                    && atoms.contains(&s.premises[0])
                    && v[s.premises[0].0] == Some(true)
            }
            (Rule::Completeness, Some(c)) => {
                let atoms = h.contexts()[c].atoms();
                s.value
                    && atoms.contains(&s.atom)
                    && atoms.iter().filter(|&&x| x != s.atom).all(|x| v[x.0] == Some(false))
            }
            _ => false,
        };
        if !ok {
            return Err(ReplayError::Unjustified(i));
        }
        v[s.atom.0] = Some(s.value);
    }
    match &trace.outcome {
        Outcome::Contradiction { context } => {
            let c = h.contexts()[*context].atoms();
            let ones = c.iter().filter(|x| v[x.0] == Some(true)).count();
            let zeros = c.iter().filter(|x| v[x.0] == Some(false)).count();
            if ones < 2 && zeros < c.len() {
                return Err(ReplayError::NoContradiction);
            }
        }
        Outcome::Consistent => {
            let w = trace.witness.as_ref().ok_or(ReplayError::BadWitness)?;
            let agrees = h.atoms().all(|a| v[a.0].is_none_or(|x| x == w.value(a)));
            if !is_admissible(h, w) || !agrees {
                return Err(ReplayError::BadWitness);
            }
        }
        Outcome::Stalled | Outcome::Refuted { .. } => {}
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalRelation {
    TrueImpliesFalse,
    TrueImpliesTrue,
    Indistinguishable,
    Unconstrained,
}

impl ClassicalRelation {
    /// Classical value of `P(b | a)` implied by the relation.
    pub fn classical_probability(self) -> Option<u8> {
        match self {
            ClassicalRelation::TrueImpliesFalse => Some(0),
            ClassicalRelation::TrueImpliesTrue | ClassicalRelation::Indistinguishable => Some(1),
            ClassicalRelation::Unconstrained => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub a: AtomId,
    pub b: AtomId,
    pub relation: ClassicalRelation,
    /// Exact `|⟨a|b⟩|²/(‖a‖²‖b‖²)` when both vectors are exact.
    pub exact: Option<String>,
    pub quantum: f64,
}

/// Classical relation and quantum overlap for each of the fixture's terminal pairs.
pub fn quantum_violation_summary(f: &GadgetFixture, rep: &Coordinatization) -> Result<Vec<Violation>, AnalysisError> {
    let h = &f.hypergraph;
    let report = analyze(h, &enumerate_states(h))?;
    let mut out = Vec::new();
    for &(a, b) in &f.quantum_pairs {
        let relation = if report.is_indistinguishable(a, b) {
            ClassicalRelation::Indistinguishable
        } else if report.is_tits(a, b) {
            ClassicalRelation::TrueImpliesTrue
        } else if report.is_tifs(a, b) {
            ClassicalRelation::TrueImpliesFalse
        } else {
            ClassicalRelation::Unconstrained
        };
        let missing = |x: AtomId| AnalysisError::MissingVector(h.label(x).to_owned());
        let (exact, quantum) = match rep {
            Coordinatization::Exact(r) => {
                let (va, vb) = (r.get(a).ok_or_else(|| missing(a))?, r.get(b).ok_or_else(|| missing(b))?);
                let p = probability_exact(va, vb)?;
                (Some(p.to_string()), p.to_complex().re)
            }
            Coordinatization::Float(r) => {
                let va = r.vectors.get(&a).ok_or_else(|| missing(a))?;
                let vb = r.vectors.get(&b).ok_or_else(|| missing(b))?;
                (None, probability_float(va, vb)?)
            }
        };
        out.push(Violation { a, b, relation, exact, quantum });
    }
    Ok(out)
}
