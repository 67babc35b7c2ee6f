//! Orthogonality hypergraphs: atoms pasted together in uniform-rank contexts.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Dense 0-based index of an atom inside its [`Hypergraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AtomId(pub usize);

impl AtomId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A maximal set of mutually exclusive atoms (one block of the pasting).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    atoms: Vec<AtomId>,
}

impl Context {
    pub fn atoms(&self) -> &[AtomId] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        self.atoms.contains(&atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("duplicate atom label {0:?}")]
    DuplicateLabel(String),
    #[error("context {context} references unknown label {label:?}")]
    UnknownLabel { context: usize, label: String },
    #[error("context {context} has {found} atoms, expected rank {rank}")]
    NonUniformRank { context: usize, rank: usize, found: usize },
    #[error("contexts {first} and {second} have identical atom sets")]
    DuplicateContext { first: usize, second: usize },
    #[error("context {context} has fewer than two atoms")]
    TrivialContext { context: usize },
    #[error("context {context} repeats atom {label:?}")]
    RepeatedAtom { context: usize, label: String },
    #[error("atom {0:?} does not appear in any context")]
    IsolatedAtom(String),
    #[error("hypergraph has no contexts")]
    Empty,
}

/// Atoms plus uniform-rank contexts. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    labels: Vec<String>,
    contexts: Vec<Context>,
    rank: usize,
    by_label: HashMap<String, AtomId>,
    // contexts containing each atom, in context order
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Validates labels and contexts and builds the hypergraph. The rank is taken
    /// from the first context; every other context must match it.
    pub fn build<S, C, L>(atom_labels: &[S], contexts: &[C]) -> Result<Self, HypergraphError>
    where
        S: AsRef<str>,
        C: AsRef<[L]>,
        L: AsRef<str>,
    {
        let labels: Vec<String> = atom_labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut by_label = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if by_label.insert(label.clone(), AtomId(i)).is_some() {
                return Err(HypergraphError::DuplicateLabel(label.clone()));
            }
        }
        if contexts.is_empty() {
            return Err(HypergraphError::Empty);
        }

        let mut built = Vec::with_capacity(contexts.len());
        let mut rank = 0;
        for (ci, ctx) in contexts.iter().enumerate() {
            let ctx = ctx.as_ref();
            let mut atoms = Vec::with_capacity(ctx.len());
            for label in ctx {
                let label = label.as_ref();
                let id = *by_label.get(label).ok_or_else(|| HypergraphError::UnknownLabel {
                    context: ci,
                    label: label.to_owned(),
                })?;
                if atoms.contains(&id) {
                    return Err(HypergraphError::RepeatedAtom {
                        context: ci,
                        label: label.to_owned(),
                    });
                }
                atoms.push(id);
            }
            if atoms.len() < 2 {
                return Err(HypergraphError::TrivialContext { context: ci });
            }
            if ci == 0 {
                rank = atoms.len();
            } else if atoms.len() != rank {
                return Err(HypergraphError::NonUniformRank {
                    context: ci,
                    rank,
                    found: atoms.len(),
                });
            }
            built.push(Context { atoms });
        }

        let mut seen: HashMap<BTreeSet<AtomId>, usize> = HashMap::new();
        for (ci, ctx) in built.iter().enumerate() {
            let key: BTreeSet<AtomId> = ctx.atoms.iter().copied().collect();
            if let Some(&first) = seen.get(&key) {
                return Err(HypergraphError::DuplicateContext { first, second: ci });
            }
            seen.insert(key, ci);
        }

        let mut incidence = vec![Vec::new(); labels.len()];
        for (ci, ctx) in built.iter().enumerate() {
            for a in &ctx.atoms {
                incidence[a.0].push(ci);
            }
        }
        if let Some(i) = incidence.iter().position(Vec::is_empty) {
            return Err(HypergraphError::IsolatedAtom(labels[i].clone()));
        }

        Ok(Self {
            labels,
            contexts: built,
            rank,
            by_label,
            incidence,
        })
    }

    /// Builds from contexts alone; atoms are numbered in order of first appearance.
    pub fn from_contexts<C, L>(contexts: &[C]) -> Result<Self, HypergraphError>
    where
        C: AsRef<[L]>,
        L: AsRef<str>,
    {
        let mut labels: Vec<String> = Vec::new();
        let mut seen = HashSet::new();
        for ctx in contexts {
            for l in ctx.as_ref() {
                if seen.insert(l.as_ref().to_owned()) {
                    labels.push(l.as_ref().to_owned());
                }
            }
        }
        Self::build(&labels, contexts)
    }

    pub fn atom_count(&self) -> usize {
        self.labels.len()
    }

    pub fn context_count(&self) -> usize {
        self.contexts.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.labels.len()).map(AtomId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, atom: AtomId) -> &str {
        &self.labels[atom.0]
    }

    /// Looks an atom up by label. `Psi` is accepted as an ASCII spelling of `Ψ`.
    pub fn atom(&self, label: &str) -> Option<AtomId> {
        if let Some(&id) = self.by_label.get(label) {
            return Some(id);
        }
        let alt = label.replace("Psi", "Ψ").replace("psi", "Ψ");
        self.by_label.get(&alt).copied()
    }

    /// Indices of the contexts that contain `atom`.
    pub fn contexts_of(&self, atom: AtomId) -> &[usize] {
        &self.incidence[atom.0]
    }

    pub fn degree(&self, atom: AtomId) -> usize {
        self.incidence[atom.0].len()
    }

    /// Whether two distinct atoms share a context.
    pub fn adjacent(&self, a: AtomId, b: AtomId) -> bool {
        a != b
            && self.incidence[a.0]
                .iter()
                .any(|&c| self.contexts[c].contains(b))
    }

    /// Pairs of distinct contexts sharing more than one atom. Empty iff the
    /// Greechie (loop-free pasting) condition holds.
    pub fn check_greechie(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.contexts.len() {
            for j in (i + 1)..self.contexts.len() {
                let shared = self.contexts[i]
                    .atoms
                    .iter()
                    .filter(|a| self.contexts[j].contains(**a))
                    .count();
                if shared > 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Atoms that appear in two or more contexts.
    pub fn intertwining_atoms(&self) -> BTreeSet<AtomId> {
        self.atoms().filter(|&a| self.degree(a) >= 2).collect()
    }

    /// Context labels, for serialization.
    pub fn context_labels(&self) -> Vec<Vec<String>> {
        self.contexts
            .iter()
            .map(|c| c.atoms.iter().map(|a| self.labels[a.0].clone()).collect())
            .collect()
    }
}
