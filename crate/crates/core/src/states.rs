//! Two-valued states (exactly one true atom per context), their enumeration,
//! and the classical structures derived from them.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::hypergraph::{AtomId, Hypergraph};

/// An admissible {0,1} assignment, stored as a little-endian bitset over atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoValuedState {
    words: Vec<u64>,
}

impl TwoValuedState {
    pub fn from_ones(atom_count: usize, ones: impl IntoIterator<Item = AtomId>) -> Self {
        let mut words = vec![0u64; atom_count.div_ceil(64).max(1)];
        for a in ones {
            words[a.0 / 64] |= 1 << (a.0 % 64);
        }
        TwoValuedState { words }
    }

    pub fn value(&self, atom: AtomId) -> bool {
        self.words[atom.0 / 64] >> (atom.0 % 64) & 1 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| AtomId(w * 64 + b))
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// Lexicographic in atom index order, with 0 < 1.
impl Ord for TwoValuedState {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |s: &Self| s.words.iter().map(|w| w.reverse_bits()).collect::<Vec<_>>();
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for TwoValuedState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Independent admissibility check: counts the true atoms of every context.
pub fn is_admissible(h: &Hypergraph, s: &TwoValuedState) -> bool {
    h.contexts()
        .iter()
        .all(|c| c.atoms().iter().filter(|&&a| s.value(a)).count() == 1)
}

pub(crate) fn signature(h: &Hypergraph) -> u64 {
    let mut hasher = DefaultHasher::new();
    h.atom_count().hash(&mut hasher);
    for c in h.contexts() {
        c.atoms().hash(&mut hasher);
    }
    hasher.finish()
}

/// All states of one hypergraph, canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSet {
    atom_count: usize,
    signature: u64,
    states: Vec<TwoValuedState>,
}

impl StateSet {
    /// Sorts and deduplicates `states` into canonical order.
    pub fn new(h: &Hypergraph, mut states: Vec<TwoValuedState>) -> Self {
        states.sort();
        states.dedup();
        StateSet { atom_count: h.atom_count(), signature: signature(h), states }
    }

    pub fn belongs_to(&self, h: &Hypergraph) -> bool {
        self.atom_count == h.atom_count() && self.signature == signature(h)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn states(&self) -> &[TwoValuedState] {
        &self.states
    }

    /// Bitset over state indices of the states in which `atom` is true.
    pub fn column(&self, atom: AtomId) -> Vec<u64> {
        let mut col = vec![0u64; self.states.len().div_ceil(64)];
        for (i, s) in self.states.iter().enumerate() {
            if s.value(atom) {
                col[i / 64] |= 1 << (i % 64);
            }
        }
        col
    }

    fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.atom_count).map(|a| self.column(AtomId(a))).collect()
    }

    /// Whether every pair of distinct atoms is valued differently by some state,
    /// together with the pairs that are not.
    pub fn is_separating(&self) -> (bool, Vec<(AtomId, AtomId)>) {
        let cols = self.columns();
        let mut unseparated = Vec::new();
        for a in 0..self.atom_count {
            for b in (a + 1)..self.atom_count {
                if cols[a] == cols[b] {
                    unseparated.push((AtomId(a), AtomId(b)));
                }
            }
        }
        (unseparated.is_empty(), unseparated)
    }

    /// Whether every atom is true in some state, with the atoms that never are.
    pub fn is_unital(&self) -> (bool, Vec<AtomId>) {
        let never: Vec<AtomId> = (0..self.atom_count)
            .map(AtomId)
            .filter(|&a| !self.states.iter().any(|s| s.value(a)))
            .collect();
        (never.is_empty(), never)
    }

    pub fn partition_logic(&self) -> PartitionLogic {
        let mut sets = vec![Vec::new(); self.atom_count];
        for (i, s) in self.states.iter().enumerate() {
            for a in s.ones() {
                sets[a.0].push(i);
            }
        }
        PartitionLogic { state_count: self.states.len(), sets }
    }

    /// The states assigning `value` to `atom`, in canonical order.
    pub fn states_with(&self, atom: AtomId, value: bool) -> StateSet {
        StateSet {
            atom_count: self.atom_count,
            signature: self.signature,
            states: self.states.iter().filter(|s| s.value(atom) == value).cloned().collect(),
        }
    }

    /// 0/1 matrix with a header of atom labels: the vertices of the classical
    /// correlation polytope.
    pub fn vertices_csv(&self, h: &Hypergraph) -> String {
        let mut out = h
            .labels()
            .iter()
            .map(|l| if l.contains([',', '"']) { format!("\"{}\"", l.replace('"', "\"\"")) } else { l.clone() })
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for s in &self.states {
            let row: Vec<&str> = h.atoms().map(|a| if s.value(a) { "1" } else { "0" }).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Atom ↦ indices of the states in which it is true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionLogic {
    state_count: usize,
    sets: Vec<Vec<usize>>,
}

impl PartitionLogic {
    pub fn set(&self, atom: AtomId) -> &[usize] {
        &self.sets[atom.0]
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    /// Whether every context's atom sets partition all state indices.
    pub fn partitions_every_context(&self, h: &Hypergraph) -> bool {
        h.contexts().iter().all(|c| {
            let mut seen = vec![false; self.state_count];
            for a in c.atoms() {
                for &i in &self.sets[a.0] {
                    if std::mem::replace(&mut seen[i], true) {
                        return false;
                    }
                }
            }
            seen.into_iter().all(|x| x)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbabilityError {
    #[error("{weights} weights for {states} states")]
    WeightLengthMismatch { weights: usize, states: usize },
    #[error("weight {0} is negative")]
    NegativeWeight(usize),
    #[error("weights sum to {0}, not 1")]
    NotNormalized(BigRational),
}

/// `P(a) = Σ_{i ∈ set(a)} λ_i` for a convex combination of the states.
pub fn classical_probabilities(
    p: &PartitionLogic,
    weights: &[BigRational],
) -> Result<Vec<BigRational>, ProbabilityError> {
    if weights.len() != p.state_count {
        return Err(ProbabilityError::WeightLengthMismatch { weights: weights.len(), states: p.state_count });
    }
    if let Some(i) = weights.iter().position(|w| w.is_negative()) {
        return Err(ProbabilityError::NegativeWeight(i));
    }
    let total: BigRational = weights.iter().cloned().sum();
    if !total.is_one() {
        return Err(ProbabilityError::NotNormalized(total));
    }
    Ok(p.sets
        .iter()
        .map(|set| set.iter().fold(BigRational::zero(), |acc, &i| acc + &weights[i]))
        .collect())
}

/// λ_i = 1/n for each of `n` states.
pub fn uniform_weights(n: usize) -> Vec<BigRational> {
    let w = BigRational::new(1.into(), (n as i64).into());
    vec![w; n]
}

// ---- enumeration -------------------------------------------------------------

trait Bits: Clone + Send + Sync {
    fn empty(n: usize) -> Self;
    fn set(&mut self, i: usize);
    fn union(&mut self, other: &Self);
    /// `self & !other`
    fn minus(&self, other: &Self) -> Self;
    fn and_count(&self, other: &Self) -> u32;
    fn count(&self) -> u32;
    fn is_empty(&self) -> bool;
    fn ones(&self) -> Vec<usize>;
    fn into_state(self, n: usize) -> TwoValuedState;
}

impl Bits for u64 {
    fn empty(_: usize) -> Self {
        0
    }
    fn set(&mut self, i: usize) {
        *self |= 1 << i;
    }
    fn union(&mut self, other: &Self) {
        *self |= other;
    }
    fn minus(&self, other: &Self) -> Self {
        self & !other
    }
    fn and_count(&self, other: &Self) -> u32 {
        (self & other).count_ones()
    }
    fn count(&self) -> u32 {
        self.count_ones()
    }
    fn is_empty(&self) -> bool {
        *self == 0
    }
    fn ones(&self) -> Vec<usize> {
        (0..64).filter(|b| self >> b & 1 == 1).collect()
    }
    fn into_state(self, _: usize) -> TwoValuedState {
        TwoValuedState { words: vec![self] }
    }
}

#[derive(Clone)]
struct Wide(Vec<u64>);

impl Bits for Wide {
    fn empty(n: usize) -> Self {
        Wide(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn union(&mut self, other: &Self) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a |= b);
    }
    fn minus(&self, other: &Self) -> Self {
        Wide(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
    fn and_count(&self, other: &Self) -> u32 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones()).sum()
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn ones(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b))
            .collect()
    }
    fn into_state(self, _: usize) -> TwoValuedState {
        TwoValuedState { words: self.0 }
    }
}

#[derive(Clone)]
struct Node<B> {
    ones: B,
    zeros: B,
}

/// Unit propagation to a fixpoint. Returns false on a conflict.
fn propagate<B: Bits>(masks: &[B], node: &mut Node<B>) -> bool {
    loop {
        let mut changed = false;
        for m in masks {
            match node.ones.and_count(m) {
                0 => {
                    let eligible = m.minus(&node.zeros);
                    match eligible.count() {
                        0 => return false,
                        1 => {
                            node.ones.union(&eligible);
                            changed = true;
                        }
                        _ => {}
                    }
                }
                1 => {
                    let rest = m.minus(&node.ones).minus(&node.zeros);
                    if !rest.is_empty() {
                        node.zeros.union(&rest);
                        changed = true;
                    }
                }
                _ => return false,
            }
        }
        if !changed {
            return true;
        }
    }
}

enum Expansion<B> {
    Solution(B),
    Children(Vec<Node<B>>),
}

/// Branches on the undecided context with the fewest eligible atoms.
fn expand<B: Bits>(masks: &[B], node: Node<B>) -> Expansion<B> {
    let best = masks
        .iter()
        .filter(|m| node.ones.and_count(m) == 0)
        .map(|m| m.minus(&node.zeros))
        .min_by_key(Bits::count);
    let Some(eligible) = best else {
        return Expansion::Solution(node.ones);
    };
    let children = eligible
        .ones()
        .into_iter()
        .filter_map(|a| {
            let mut child = node.clone();
            child.ones.set(a);
            propagate(masks, &mut child).then_some(child)
        })
        .collect();
    Expansion::Children(children)
}

fn dfs<B: Bits>(masks: &[B], node: Node<B>, out: &mut Vec<B>) {
    match expand(masks, node) {
        Expansion::Solution(ones) => out.push(ones),
        Expansion::Children(children) => {
            for child in children {
                dfs(masks, child, out);
            }
        }
    }
}

fn enumerate_bits<B: Bits>(h: &Hypergraph, workers: usize) -> Vec<TwoValuedState> {
    let n = h.atom_count();
    let masks: Vec<B> = h
        .contexts()
        .iter()
        .map(|c| {
            let mut m = B::empty(n);
            c.atoms().iter().for_each(|a| m.set(a.0));
            m
        })
        .collect();
    let mut root = Node { ones: B::empty(n), zeros: B::empty(n) };
    if !propagate(&masks, &mut root) {
        return Vec::new();
    }

    let mut found = Vec::new();
    let mut frontier = vec![root];
    if workers > 1 {
        // split the top of the tree into enough independent subtrees
        while !frontier.is_empty() && frontier.len() < 8 * workers {
            let mut next = Vec::new();
            for node in frontier {
                match expand(&masks, node) {
                    Expansion::Solution(ones) => found.push(ones),
                    Expansion::Children(c) => next.extend(c),
                }
            }
            frontier = next;
        }
    }
    found.extend(run_subtrees(&masks, frontier, workers));
    found.into_iter().map(|b| b.into_state(n)).collect()
}

#[cfg(feature = "parallel")]
fn run_subtrees<B: Bits>(masks: &[B], frontier: Vec<Node<B>>, workers: usize) -> Vec<B> {
    use rayon::prelude::*;
    if workers <= 1 {
        let mut out = Vec::new();
        frontier.into_iter().for_each(|n| dfs(masks, n, &mut out));
        return out;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| {
        frontier
            .into_par_iter()
            .map(|n| {
                let mut out = Vec::new();
                dfs(masks, n, &mut out);
                out
            })
            .reduce(Vec::new, |mut a, b| {
                a.extend(b);
                a
            })
    })
}

#[cfg(not(feature = "parallel"))]
fn run_subtrees<B: Bits>(masks: &[B], frontier: Vec<Node<B>>, _workers: usize) -> Vec<B> {
    let mut out = Vec::new();
    frontier.into_iter().for_each(|n| dfs(masks, n, &mut out));
    out
}

/// Worker count used when none is given: the available parallelism.
pub fn default_workers() -> usize {
    if cfg!(feature = "parallel") {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        1
    }
}

/// Every admissible two-valued state, in canonical order.
pub fn enumerate_states(h: &Hypergraph) -> StateSet {
    enumerate_states_with(h, default_workers())
}

/// As [`enumerate_states`] with an explicit worker count. The result does not
/// depend on `workers`.
pub fn enumerate_states_with(h: &Hypergraph, workers: usize) -> StateSet {
    let states = if h.atom_count() <= 64 {
        enumerate_bits::<u64>(h, workers)
    } else {
        enumerate_bits::<Wide>(h, workers)
    };
    StateSet::new(h, states)
}

#[cfg(test)]
pub(crate) fn enumerate_wide(h: &Hypergraph, workers: usize) -> StateSet {
    StateSet::new(h, enumerate_bits::<Wide>(h, workers))
}
